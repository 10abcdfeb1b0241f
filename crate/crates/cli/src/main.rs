//! `lcm-ident`: structural identifiability reports for linear compartmental
//! models.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use lcm_ident::ident::{fiber_sample, Analysis, FiberConfig, IdentConfig, IdentError};
use lcm_ident::ioeq::{coefficient_map, cross_validate, CrossValidation, IoError, Method};
use lcm_ident::mammillary::{
    analyze_family, classification_table, Family, FamilyId, MammillaryError, MammillaryRegistry,
};
use lcm_ident::{parse_model, Model};

#[derive(Parser)]
#[command(name = "lcm-ident", version, about = "Structural identifiability of linear compartmental models")]
#[command(after_help = "Environment:\n  LCM_IDENT_THREADS  worker threads (0 or unset = one per core)")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Serialize)]
struct RunConfig {
    /// Base seed for every random draw
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Random points for exact rank tests
    #[arg(long, global = true, default_value_t = 5)]
    points: usize,
    /// Newton starts per fiber
    #[arg(long, global = true, default_value_t = 200)]
    starts: usize,
    /// Coefficient engine
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Forest,
    Det,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every parameter of a model file
    Analyze { model: PathBuf },
    /// Analyze the star model with the given input and output compartments
    Mammillary {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        input: usize,
        #[arg(long = "output-comp")]
        output_comp: usize,
    },
    /// Classification of all five star families up to n-max
    Table {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Compare the forest and determinant engines at random exact points
    Verify {
        model: Option<PathBuf>,
        /// `all`, or a family such as `1,2`
        #[arg(long, conflicts_with = "model")]
        family: Option<String>,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Sample the fiber of the coefficient map through a random point
    Fiber { model: PathBuf },
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<IdentError> for Failure {
    fn from(e: IdentError) -> Self {
        match e {
            IdentError::Io(io) => io.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<MammillaryError> for Failure {
    fn from(e: MammillaryError) -> Self {
        match e {
            MammillaryError::Invariant(_) => Failure::Invariant(e.to_string()),
            MammillaryError::Io(io) => io.into(),
            MammillaryError::Ident(i) => i.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// A rendered report plus an optional invariant failure to signal after
/// the report has been written.
struct Outcome {
    json: serde_json::Value,
    markdown: String,
    violation: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("LCM_IDENT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            return ExitCode::from(3);
        }
    };
    let text = match cli.run.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Md => outcome.markdown,
    };
    match &cli.run.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Some(v) = outcome.violation {
        eprintln!("invariant violated: {v}");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}

fn envelope(cfg: &RunConfig, command: &str, result: serde_json::Value) -> serde_json::Value {
    json!({
        "tool": "lcm-ident",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg,
        "result": result,
    })
}

fn ident_config(cfg: &RunConfig) -> IdentConfig {
    IdentConfig {
        seed: cfg.seed,
        points: cfg.points,
        starts: cfg.starts,
        ..IdentConfig::default()
    }
}

fn method(m: &Model, arg: MethodArg) -> Method {
    match arg {
        MethodArg::Forest => Method::Forest,
        MethodArg::Det => Method::Determinant,
        MethodArg::Both if m.validate().forest_formula_applicable => Method::Forest,
        MethodArg::Both => Method::Determinant,
    }
}

fn load(path: &Path) -> Result<Model, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let cfg = &cli.run;
    match &cli.command {
        Command::Analyze { model } => analyze(cfg, &load(model)?),
        Command::Mammillary { n, input, output_comp } => {
            let report = analyze_family(*n, *input, *output_comp, &ident_config(cfg))?;
            let violation = (!report.all_identities_hold()).then(|| {
                let failed: Vec<&str> = report
                    .identities
                    .iter()
                    .filter(|i| !i.holds)
                    .map(|i| i.name.as_str())
                    .collect();
                format!("identities failed for {}: {failed:?}", report.family)
            });
            Ok(Outcome {
                markdown: render::family(&report),
                json: envelope(cfg, "mammillary", serde_json::to_value(&report).expect("serializes")),
                violation,
            })
        }
        Command::Table { n_max } => {
            if *n_max < 5 {
                return Err(Failure::Input(format!("--n-max must be at least 5, got {n_max}")));
            }
            let table = classification_table(*n_max, &ident_config(cfg))?;
            Ok(Outcome {
                markdown: table.to_markdown(),
                json: envelope(cfg, "table", serde_json::to_value(&table).expect("serializes")),
                violation: None,
            })
        }
        Command::Verify {
            model,
            family,
            n_max,
            trials,
        } => {
            let models: Vec<(String, Model)> = match (model, family) {
                (Some(path), _) => vec![(path.display().to_string(), load(path)?)],
                (None, Some(f)) => family_models(f, *n_max)?,
                (None, None) => return Err(Failure::Input("verify needs a model file or --family".into())),
            };
            let mut results: Vec<(String, CrossValidation)> = Vec::new();
            for (name, m) in models {
                results.push((name, cross_validate(&m, *trials, cfg.seed)?));
            }
            let failed: Vec<&str> = results.iter().filter(|r| !r.1.pass).map(|r| r.0.as_str()).collect();
            let violation = (!failed.is_empty()).then(|| format!("engines disagree on {failed:?}"));
            let json_results: Vec<serde_json::Value> = results
                .iter()
                .map(|(name, r)| json!({ "name": name, "report": r }))
                .collect();
            Ok(Outcome {
                markdown: render::verify(&results),
                json: envelope(cfg, "verify", json!({ "pass": violation.is_none(), "models": json_results })),
                violation,
            })
        }
        Command::Fiber { model } => {
            let m = load(model)?;
            let cm = coefficient_map(&m, method(&m, cfg.method))?;
            let fcfg = FiberConfig {
                starts: cfg.starts,
                seed: cfg.seed,
                ..FiberConfig::default()
            };
            let report = fiber_sample(&cm, None, &fcfg);
            Ok(Outcome {
                markdown: render::fiber(&report),
                json: envelope(cfg, "fiber", serde_json::to_value(&report).expect("serializes")),
                violation: None,
            })
        }
    }
}

fn family_models(spec: &str, n_max: usize) -> Result<Vec<(String, Model)>, Failure> {
    let families: Vec<Family> = if spec == "all" {
        Family::ALL.to_vec()
    } else {
        let parsed = spec
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
            .and_then(|(i, j)| Family::from_io(i, j));
        vec![parsed.ok_or_else(|| Failure::Input(format!("unknown family `{spec}`")))?]
    };
    let mut out = Vec::new();
    for f in families {
        for n in f.min_n()..=n_max {
            let id = FamilyId::new(n, f)?;
            out.push((id.to_string(), id.model()));
        }
    }
    Ok(out)
}

fn analyze(cfg: &RunConfig, m: &Model) -> Result<Outcome, Failure> {
    let method = method(m, cfg.method);
    let analysis = Analysis::new(m, method, ident_config(cfg), Some(&MammillaryRegistry))?;
    let verdicts = analysis.classify_all()?;
    let cross = if cfg.method == MethodArg::Both && m.validate().forest_formula_applicable {
        Some(cross_validate(m, 20, cfg.seed)?)
    } else {
        None
    };
    let violation = cross
        .as_ref()
        .filter(|c| !c.pass)
        .map(|c| format!("engines disagree: {:?}", c.first_failure));
    let cm = analysis.coefficient_map();
    let coefficients: Vec<serde_json::Value> = cm
        .entries()
        .iter()
        .map(|e| json!({ "name": e.name, "poly": e.poly.to_string() }))
        .collect();
    let result = json!({
        "model": m,
        "validation": m.validate(),
        "method": method,
        "coefficients": coefficients,
        "dropped": cm.dropped(),
        "rank": analysis.rank(),
        "cross_check": cross,
        "verdicts": verdicts,
    });
    Ok(Outcome {
        markdown: render::analysis(m, cm, analysis.rank(), &verdicts, cross.as_ref()),
        json: envelope(cfg, "analyze", result),
        violation,
    })
}
