//! The per-parameter classification of all five families, the rank probe
//! of `M_n(2,3)`, and single-family reports.

use std::collections::BTreeMap;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::alternate::{alternate_point_m12, proof_regime_point, AlternatePoint, RootChoice};
use super::recover::recover;
use super::registry::MammillaryRegistry;
use super::structure::{family_identities, lhs_structure, Identity};
use super::{representative, Family, FamilyId, MammillaryError};
use crate::ident::{parameter_local_identifiability, Analysis, EvidenceKind, IdentClass, IdentConfig, Verdict};
use crate::ioeq::{coefficient_map, coeffs_forest, Method};
use crate::model::Model;
use crate::poly::Symbol;
use crate::sample;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub class: IdentClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// The class the family results assert for `p` (in representative labels),
/// or `None` where they say nothing.
pub fn expected_class(id: FamilyId, p: &Symbol) -> Option<Expectation> {
    let (to, from) = p.as_rate()?;
    let plain = |class| Some(Expectation { class, label: None });
    let k12 = (to, from) == (1, 2);
    let k21 = (to, from) == (2, 1);
    use IdentClass::*;
    match id.family {
        Family::F11 => plain(Sling),
        Family::F12 if k21 => plain(GloballyIdentifiable),
        Family::F12 => plain(Sling),
        Family::F21 | Family::F22 if k12 => plain(GloballyIdentifiable),
        Family::F21 | Family::F22 if k21 => plain(GenericallyGloballyIdentifiable),
        Family::F21 | Family::F22 => plain(Sling),
        Family::F23 if id.n == 4 => ((to, from) == (1, 4)).then_some(Expectation {
            class: GenericallyGloballyIdentifiable,
            label: None,
        }),
        Family::F23 if to == 1 && from >= 4 => plain(Sling),
        Family::F23 => Some(Expectation {
            class: Unidentifiable,
            label: Some("conjecture-supported".into()),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub parameter: Symbol,
    pub class: IdentClass,
    pub expected: Option<Expectation>,
    /// `None` when there is no expectation to compare with.
    pub matches: Option<bool>,
    pub evidence: Vec<EvidenceKind>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub model: FamilyId,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub n_max: usize,
    pub config: IdentConfig,
    pub cells: Vec<TableCell>,
    pub checked: usize,
    pub mismatches: usize,
}

fn classify_cell(id: FamilyId, cfg: &IdentConfig) -> Result<TableCell, MammillaryError> {
    let m = id.model();
    let analysis = Analysis::new(&m, Method::Forest, cfg.clone(), Some(&MammillaryRegistry))?;
    let rows = analysis
        .classify_all()?
        .into_iter()
        .map(|v| row(id, v))
        .collect();
    Ok(TableCell { model: id, rows })
}

fn row(id: FamilyId, v: Verdict) -> TableRow {
    let expected = expected_class(id, &v.parameter);
    let matches = expected.as_ref().map(|e| e.class == v.class);
    let mut tags: Vec<String> = v.evidence.iter().flat_map(|e| e.tags.iter().cloned()).collect();
    if let Some(label) = expected.as_ref().and_then(|e| e.label.clone()) {
        tags.push(label);
    }
    TableRow {
        parameter: v.parameter,
        class: v.class,
        expected,
        matches,
        evidence: v.evidence.iter().map(|e| e.kind).collect(),
        tags,
    }
}

/// Classifies every parameter of every family for `n` up to `n_max`.
/// Cells run in parallel and are collected in a fixed order.
pub fn classification_table(n_max: usize, cfg: &IdentConfig) -> Result<ClassificationTable, MammillaryError> {
    let ids: Vec<FamilyId> = Family::ALL
        .into_iter()
        .flat_map(|f| (f.min_n()..=n_max).map(move |n| FamilyId { n, family: f }))
        .collect();
    let cells = ids
        .par_iter()
        .map(|&id| classify_cell(id, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = cells.iter().flat_map(|c| &c.rows);
    let checked = rows.clone().filter(|r| r.matches.is_some()).count();
    let mismatches = rows.filter(|r| r.matches == Some(false)).count();
    Ok(ClassificationTable {
        n_max,
        config: cfg.clone(),
        cells,
        checked,
        mismatches,
    })
}

fn evidence_name(k: EvidenceKind) -> &'static str {
    match k {
        EvidenceKind::ClosedForm => "closed-form",
        EvidenceKind::RankTest => "rank-test",
        EvidenceKind::SymmetryWitness => "symmetry-witness",
        EvidenceKind::ConstructiveWitness => "constructive-witness",
        EvidenceKind::FiberSample => "fiber-sample",
        EvidenceKind::Theorem => "theorem",
    }
}

impl ClassificationTable {
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# Mammillary classification (n <= {}, seed {})\n",
            self.n_max, self.config.seed
        );
        for cell in &self.cells {
            let _ = writeln!(s, "## {}\n", cell.model);
            let _ = writeln!(s, "| parameter | class | expected | evidence |");
            let _ = writeln!(s, "|---|---|---|---|");
            for r in &cell.rows {
                let expected = match &r.expected {
                    Some(Expectation { class, label: Some(l) }) => format!("{class} ({l})"),
                    Some(Expectation { class, label: None }) => class.to_string(),
                    None => "-".into(),
                };
                let mark = match r.matches {
                    Some(false) => " **MISMATCH**",
                    _ => "",
                };
                let mut ev: Vec<&str> = r.evidence.iter().map(|k| evidence_name(*k)).collect();
                ev.extend(r.tags.iter().map(String::as_str).filter(|t| *t != "conjecture-supported"));
                let _ = writeln!(
                    s,
                    "| {} | {}{} | {} | {} |",
                    r.parameter,
                    r.class,
                    mark,
                    expected,
                    ev.join(", ")
                );
            }
            s.push('\n');
        }
        let _ = writeln!(s, "Mismatches: {} of {} checked.", self.mismatches, self.checked);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureProbe {
    pub n: usize,
    pub points: usize,
    pub seed: u64,
    /// Parameters whose differential is outside the Jacobian row space.
    pub unidentifiable: Vec<Symbol>,
    pub predicted: Vec<Symbol>,
    pub agrees: bool,
    /// `d_{n-3} = k12 k31` as polynomials.
    pub pairing_holds: bool,
}

/// Exact local identifiability of every parameter of `M_n(2,3)`, compared
/// with the predicted unidentifiable set `{k12, k21, k13, k31, .., kn1}`.
pub fn conjecture_probe_m23(n: usize, points: usize, seed: u64) -> Result<ConjectureProbe, MammillaryError> {
    let id = FamilyId::new(n, Family::F23)?;
    if n < 5 {
        return Err(MammillaryError::FamilyTooSmall {
            family: Family::F23,
            n,
            min: 5,
        });
    }
    let m = id.model();
    let cm = coefficient_map(&m, Method::Forest)?;
    let unidentifiable: Vec<Symbol> = cm
        .params()
        .iter()
        .filter(|p| parameter_local_identifiability(&cm, p, points, seed) == Some(false))
        .cloned()
        .collect();
    let mut predicted: Vec<Symbol> = vec![Symbol::rate(1, 2), Symbol::rate(2, 1), Symbol::rate(1, 3)];
    predicted.extend((3..=n).map(|j| Symbol::rate(j, 1)));
    predicted.sort();
    let eq = coeffs_forest(&m)?;
    let k = crate::MultiPoly::var(Symbol::rate(1, 2)) * crate::MultiPoly::var(Symbol::rate(3, 1));
    let pairing_holds = eq.d(2, n - 3).is_some_and(|d| *d == k);
    Ok(ConjectureProbe {
        n,
        points,
        seed,
        agrees: unidentifiable == predicted,
        unidentifiable,
        predicted,
        pairing_holds,
    })
}

/// Generic local identifiability of a star model with one input and one
/// output, by the known characterization: at most one leak, and the input
/// and output coincide or one of them is the center. `None` for other
/// models.
pub fn predicted_identifiable(m: &Model) -> Option<bool> {
    let n = m.n();
    if n < 3 || m.inputs().len() != 1 || m.outputs().len() != 1 || m.edges().len() != 2 * (n - 1) {
        return None;
    }
    let center = (1..=n).find(|&c| (1..=n).filter(|&v| v != c).all(|v| m.has_edge(c, v) && m.has_edge(v, c)))?;
    let i = *m.inputs().iter().next()?;
    let j = *m.outputs().iter().next()?;
    Some(m.leaks().len() <= 1 && (i == j || i == center || j == center))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveredValue {
    pub parameter: Symbol,
    pub value: String,
    pub truth: String,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub requested: (usize, usize, usize),
    pub family: FamilyId,
    /// Relabeling from the requested labels onto the representative.
    pub relabeling: String,
    pub relabeling_images: Vec<usize>,
    pub identities: Vec<Identity>,
    pub point: BTreeMap<String, String>,
    pub recovered: Vec<RecoveredValue>,
    pub combinations: Vec<(String, String)>,
    pub sets: Vec<(String, Vec<f64>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate: Option<AlternatePoint>,
    pub verdicts: Vec<Verdict>,
}

impl FamilyReport {
    pub fn all_identities_hold(&self) -> bool {
        self.identities.iter().all(|i| i.holds) && self.recovered.iter().all(|r| r.exact)
    }
}

/// Identities, a seeded recovery demonstration and per-parameter verdicts
/// for `make(n, i, j)`, worked in the family representative's labels.
pub fn analyze_family(n: usize, i: usize, j: usize, cfg: &IdentConfig) -> Result<FamilyReport, MammillaryError> {
    let (id, sigma) = representative(n, i, j)?;
    let rep = id.model();
    let mut identities = family_identities(id)?;
    identities.extend(lhs_structure(n)?.identities()?);
    let x = sample::rational_point(&rep.parameters(), &mut sample::rng(cfg.seed, 0));
    let eq = coeffs_forest(&rep)?.evaluate(&x)?;
    let r = recover(id, &eq)?;
    let recovered = r
        .values
        .iter()
        .map(|(p, v)| {
            let truth = x.get(p).cloned().unwrap_or_default();
            RecoveredValue {
                parameter: p.clone(),
                value: v.to_string(),
                truth: truth.to_string(),
                exact: *v == truth,
            }
        })
        .collect();
    let alternate = (id.family == Family::F12)
        .then(|| alternate_point_m12(n, &proof_regime_point(n, cfg.seed, 0), RootChoice::Largest).ok())
        .flatten();
    let analysis = Analysis::new(&rep, Method::Forest, cfg.clone(), Some(&MammillaryRegistry))?;
    Ok(FamilyReport {
        requested: (n, i, j),
        family: id,
        relabeling: sigma.to_string(),
        relabeling_images: sigma.images().to_vec(),
        identities,
        point: x.iter().map(|(s, v)| (s.to_string(), v.to_string())).collect(),
        recovered,
        combinations: r.combinations.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        sets: r.sets.clone(),
        alternate,
        verdicts: analysis.classify_all()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> IdentConfig {
        IdentConfig {
            starts: 40,
            ..IdentConfig::default()
        }
    }

    #[test]
    fn small_table_matches() {
        let t = classification_table(5, &quick()).unwrap();
        let bad: Vec<String> = t
            .cells
            .iter()
            .flat_map(|c| c.rows.iter().filter(|r| r.matches == Some(false)).map(move |r| format!("{} {} {}", c.model, r.parameter, r.class)))
            .collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(t.checked > 0);
        assert!(t.to_markdown().contains("Mismatches: 0"));
    }

    #[test]
    fn probe_five() {
        let p = conjecture_probe_m23(5, 3, 42).unwrap();
        assert!(p.agrees, "{:?}", p.unidentifiable);
        assert!(p.pairing_holds);
    }

    #[test]
    fn characterization() {
        use crate::mammillary::make;
        assert_eq!(predicted_identifiable(&make(5, 2, 3).unwrap()), Some(false));
        assert_eq!(predicted_identifiable(&make(5, 1, 2).unwrap()), Some(true));
        let leaky = make(4, 1, 2).unwrap().with_leaks([1, 2]).unwrap();
        assert_eq!(predicted_identifiable(&leaky), Some(false));
    }

    #[test]
    fn family_report() {
        let r = analyze_family(6, 2, 3, &quick()).unwrap();
        assert!(r.all_identities_hold());
        assert!(r.identities.iter().any(|i| i.name == "d_4 = 0"));
        assert!(r.identities.iter().any(|i| i.name == "d_3 = k12 k31"));
        let r = analyze_family(4, 3, 1, &quick()).unwrap();
        assert_eq!(r.family.family, Family::F21);
    }
}
