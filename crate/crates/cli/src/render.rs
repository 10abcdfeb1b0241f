//! Markdown renderings of the reports.

use std::fmt::Write;

use lcm_ident::ident::{FiberReport, RankSummary, Verdict};
use lcm_ident::ioeq::{CoefficientMap, CrossValidation};
use lcm_ident::mammillary::FamilyReport;
use lcm_ident::Model;

fn verdict_table(s: &mut String, verdicts: &[Verdict]) {
    let _ = writeln!(s, "| parameter | class | evidence |");
    let _ = writeln!(s, "|---|---|---|");
    for v in verdicts {
        let ev: Vec<String> = v
            .evidence
            .iter()
            .map(|e| {
                let kind = serde_json::to_value(e.kind)
                    .ok()
                    .and_then(|k| k.as_str().map(String::from))
                    .unwrap_or_default();
                if e.tags.is_empty() {
                    format!("{kind}: {}", e.detail)
                } else {
                    format!("{kind} [{}]: {}", e.tags.join(", "), e.detail)
                }
            })
            .collect();
        let _ = writeln!(s, "| {} | {} | {} |", v.parameter, v.class, ev.join("; "));
    }
}

pub fn analysis(
    m: &Model,
    cm: &CoefficientMap,
    rank: &RankSummary,
    verdicts: &[Verdict],
    cross: Option<&CrossValidation>,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Identifiability report\n");
    let _ = writeln!(s, "Model: `{}`\n", m.to_json());
    let _ = writeln!(s, "## Coefficients\n");
    for e in cm.entries() {
        let _ = writeln!(s, "- {} = {}", e.name, e.poly);
    }
    if !cm.dropped().is_empty() {
        let _ = writeln!(s, "\nConstant coefficients dropped: {}", cm.dropped().join(", "));
    }
    let _ = writeln!(
        s,
        "\nJacobian rank {} of {} ({}).\n",
        rank.generic_rank,
        rank.dimension,
        if rank.identifiable {
            "locally identifiable"
        } else {
            "not locally identifiable"
        }
    );
    if let Some(c) = cross {
        let _ = writeln!(
            s,
            "Forest and determinant engines {} at {} random points.\n",
            if c.pass { "agree" } else { "DISAGREE" },
            c.trials
        );
    }
    let _ = writeln!(s, "## Verdicts\n");
    verdict_table(&mut s, verdicts);
    s
}

pub fn family(r: &FamilyReport) -> String {
    let mut s = String::new();
    let (n, i, j) = r.requested;
    let _ = writeln!(s, "# Star model n = {n}, input {i}, output {j}\n");
    let _ = writeln!(s, "Family {} (relabeling {}).\n", r.family, r.relabeling);
    let _ = writeln!(s, "## Identities\n");
    for id in &r.identities {
        let _ = writeln!(s, "- [{}] {}", if id.holds { "x" } else { " " }, id.name);
    }
    let _ = writeln!(s, "\n## Recovery at a random point\n");
    for v in &r.recovered {
        let _ = writeln!(
            s,
            "- {} = {} (true value {}{})",
            v.parameter,
            v.value,
            v.truth,
            if v.exact { "" } else { ", MISMATCH" }
        );
    }
    for (name, v) in &r.combinations {
        let _ = writeln!(s, "- {name} = {v}");
    }
    for (name, v) in &r.sets {
        let vals: Vec<String> = v.iter().map(|x| format!("{x:.10}")).collect();
        let _ = writeln!(s, "- {name} in {{{}}}", vals.join(", "));
    }
    if let Some(a) = &r.alternate {
        let _ = writeln!(
            s,
            "\nAlternate point: k12 moves by {:.6}, coefficients agree to relative error {:.1e}.",
            a.k12_gap, a.coefficient_error
        );
    }
    let _ = writeln!(s, "\n## Verdicts\n");
    verdict_table(&mut s, &r.verdicts);
    s
}

pub fn verify(results: &[(String, CrossValidation)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Engine cross-check\n");
    let _ = writeln!(s, "| model | trials | result |");
    let _ = writeln!(s, "|---|---|---|");
    for (name, r) in results {
        let result = match &r.first_failure {
            None => "pass".to_string(),
            Some(f) => format!(
                "FAIL at trial {} on {}: forest {} vs determinant {}",
                f.trial, f.coefficient_name, f.forest_value, f.det_value
            ),
        };
        let _ = writeln!(s, "| {name} | {} | {result} |", r.trials);
    }
    s
}

pub fn fiber(r: &FiberReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Fiber sample (seed {}, {} starts)\n", r.seed, r.starts);
    let _ = writeln!(
        s,
        "{} starts converged, {} discarded; {} distinct solutions; largest residual {:.1e}.\n",
        r.residuals.converged,
        r.residuals.discarded,
        r.solutions.len(),
        r.residuals.max_residual
    );
    let _ = writeln!(s, "| parameter | base value | distinct values |");
    let _ = writeln!(s, "|---|---|---|");
    for (name, v) in &r.base_point {
        let _ = writeln!(s, "| {name} | {v:.6} | {} |", r.distinct(name));
    }
    if r.sign_crossing {
        let _ = writeln!(s, "\nSome solutions have negative coordinates.");
    }
    s
}
