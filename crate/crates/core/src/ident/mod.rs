//! Per-parameter identifiability classification.
//!
//! Evidence is gathered in a fixed order: registered closed forms, the
//! exact Jacobian rank test, automorphism witnesses (or a family-specific
//! construction), and finally multi-start fiber sampling.

mod closed;
mod fiber;
mod rank;
mod witness;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ioeq::{coefficient_map, CoefficientMap, IoError, Method};
use crate::model::Model;
use crate::poly::Symbol;

pub use closed::{linear_closed_form, ClosedFormRegistry};
pub use fiber::{fiber_sample, FiberConfig, FiberReport, ResidualStats};
pub use rank::{jacobian, model_identifiability, parameter_local_identifiability, rank_summary, RankSummary};
pub use witness::{symmetry_sling_witness, SymmetryWitness};

#[derive(Debug, Error)]
pub enum IdentError {
    #[error("identifiability needs {0}")]
    Precondition(String),
    #[error("unknown parameter {0}")]
    UnknownParameter(Symbol),
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentClass {
    GloballyIdentifiable,
    GenericallyGloballyIdentifiable,
    #[serde(rename = "SLING")]
    Sling,
    Unidentifiable,
    LocallyIdentifiableUnresolved,
    Unknown,
}

impl fmt::Display for IdentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentClass::GloballyIdentifiable => "GloballyIdentifiable",
            IdentClass::GenericallyGloballyIdentifiable => "GenericallyGloballyIdentifiable",
            IdentClass::Sling => "SLING",
            IdentClass::Unidentifiable => "Unidentifiable",
            IdentClass::LocallyIdentifiableUnresolved => "LocallyIdentifiableUnresolved",
            IdentClass::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceKind {
    ClosedForm,
    RankTest,
    SymmetryWitness,
    ConstructiveWitness,
    FiberSample,
    Theorem,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub kind: EvidenceKind,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

impl Evidence {
    pub fn new(kind: EvidenceKind, detail: impl Into<String>) -> Self {
        Evidence {
            kind,
            detail: detail.into(),
            tags: Vec::new(),
        }
    }

    pub fn tagged(mut self, tag: &str) -> Self {
        self.tags.push(tag.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub class: IdentClass,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentConfig {
    pub seed: u64,
    pub points: usize,
    pub starts: usize,
    pub fiber_base_points: usize,
}

impl Default for IdentConfig {
    fn default() -> Self {
        IdentConfig {
            seed: 42,
            points: 5,
            starts: 200,
            fiber_base_points: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub rank: u64,
    pub witness: u64,
    pub fiber: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub parameter: Symbol,
    pub class: IdentClass,
    pub evidence: Vec<Evidence>,
    pub seeds: Seeds,
    pub config: IdentConfig,
}

/// Everything shared between the parameters of one model: the coefficient
/// map, the rank data and (computed on first use) the fiber samples.
pub struct Analysis<'a> {
    model: Model,
    cm: CoefficientMap,
    config: IdentConfig,
    registry: Option<&'a dyn ClosedFormRegistry>,
    rank: RankSummary,
    fibers: OnceLock<Vec<FiberReport>>,
}

impl<'a> Analysis<'a> {
    pub fn new(
        m: &Model,
        method: Method,
        config: IdentConfig,
        registry: Option<&'a dyn ClosedFormRegistry>,
    ) -> Result<Self, IdentError> {
        let report = m.validate();
        if !report.strongly_connected {
            return Err(IdentError::Precondition("a strongly connected model".into()));
        }
        if report.inputs == 0 {
            return Err(IdentError::Precondition("at least one input".into()));
        }
        let cm = coefficient_map(m, method)?;
        let rank = rank_summary(&cm, config.points, config.seed);
        Ok(Analysis {
            model: m.clone(),
            cm,
            config,
            registry,
            rank,
            fibers: OnceLock::new(),
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn coefficient_map(&self) -> &CoefficientMap {
        &self.cm
    }

    pub fn rank(&self) -> &RankSummary {
        &self.rank
    }

    pub fn config(&self) -> &IdentConfig {
        &self.config
    }

    fn fiber_seeds(&self) -> Vec<u64> {
        (0..self.config.fiber_base_points.max(1) as u64)
            .map(|b| self.config.seed.wrapping_add(b + 1))
            .collect()
    }

    /// Fiber samples at `fiber_base_points` random base points.
    pub fn fibers(&self) -> &[FiberReport] {
        self.fibers.get_or_init(|| {
            self.fiber_seeds()
                .into_iter()
                .map(|seed| {
                    let cfg = FiberConfig {
                        starts: self.config.starts,
                        seed,
                        ..FiberConfig::default()
                    };
                    fiber_sample(&self.cm, None, &cfg)
                })
                .collect()
        })
    }

    pub fn locally_identifiable(&self, p: &Symbol) -> Option<bool> {
        self.cm.param_index(p).map(|i| self.rank.locally_identifiable(i).0)
    }

    pub fn classify(&self, p: &Symbol) -> Result<Verdict, IdentError> {
        let idx = self
            .cm
            .param_index(p)
            .ok_or_else(|| IdentError::UnknownParameter(p.clone()))?;
        let seed = self.config.seed;
        let mut evidence = Vec::new();
        let mut used_fiber = false;
        let verdict = |class, evidence, used_fiber: bool| Verdict {
            parameter: p.clone(),
            class,
            evidence,
            seeds: Seeds {
                rank: seed,
                witness: seed,
                fiber: if used_fiber { self.fiber_seeds() } else { Vec::new() },
            },
            config: self.config.clone(),
        };

        // 1. Closed forms.
        let closed = self
            .registry
            .and_then(|r| r.closed_form(&self.model, &self.cm, p, seed))
            .or_else(|| linear_closed_form(&self.cm, p));
        if let Some(cf) = closed {
            evidence.push(Evidence::new(EvidenceKind::ClosedForm, cf.formula));
            return Ok(verdict(cf.class, evidence, false));
        }

        // 2. Rank test.
        let (local, disagree) = self.rank.locally_identifiable(idx);
        let mut rank_ev = Evidence::new(
            EvidenceKind::RankTest,
            format!(
                "generic Jacobian rank {} of {}; {} locally {}identifiable{}",
                self.rank.generic_rank,
                self.rank.dimension,
                p,
                if local { "" } else { "un" },
                if disagree > 0 {
                    format!(" ({disagree} sampled points disagree)")
                } else {
                    String::new()
                }
            ),
        );
        if self.rank.resampled > 0 {
            rank_ev = rank_ev.tagged("resampled");
        }
        evidence.push(rank_ev);
        if !local {
            return Ok(verdict(IdentClass::Unidentifiable, evidence, false));
        }

        // 3. Witnesses.
        if let Some(w) = symmetry_sling_witness(&self.model, &self.cm, p, seed) {
            if w.verified {
                evidence.push(Evidence::new(
                    EvidenceKind::SymmetryWitness,
                    format!(
                        "automorphism {} maps {} to {}; coefficients agree exactly",
                        w.permutation, w.parameter, w.image
                    ),
                ));
                return Ok(verdict(IdentClass::Sling, evidence, false));
            }
        }
        if let Some(ev) = self
            .registry
            .and_then(|r| r.sling_witness(&self.model, &self.cm, p, seed))
        {
            evidence.push(ev);
            return Ok(verdict(IdentClass::Sling, evidence, false));
        }

        // 4-6. Fiber sampling.
        if self.config.starts > 0 {
            used_fiber = true;
            let name = p.to_string();
            let counts: Vec<usize> = self.fibers().iter().map(|f| f.distinct(&name)).collect();
            let detail = format!("distinct values of {name} per base point: {counts:?}");
            if counts.iter().any(|&c| c >= 2) {
                evidence.push(Evidence::new(EvidenceKind::FiberSample, detail));
                return Ok(verdict(IdentClass::Sling, evidence, used_fiber));
            }
            if !counts.is_empty() && counts.iter().all(|&c| c == 1) {
                evidence.push(Evidence::new(EvidenceKind::FiberSample, detail).tagged("empirical"));
                return Ok(verdict(
                    IdentClass::GenericallyGloballyIdentifiable,
                    evidence,
                    used_fiber,
                ));
            }
            evidence.push(Evidence::new(EvidenceKind::FiberSample, detail));
        }
        Ok(verdict(
            IdentClass::LocallyIdentifiableUnresolved,
            evidence,
            used_fiber,
        ))
    }

    pub fn classify_all(&self) -> Result<Vec<Verdict>, IdentError> {
        self.cm.params().iter().map(|p| self.classify(p)).collect()
    }
}

/// One-shot classification of a single parameter.
pub fn classify_parameter(
    m: &Model,
    p: &Symbol,
    config: &IdentConfig,
    registry: Option<&dyn ClosedFormRegistry>,
) -> Result<Verdict, IdentError> {
    Analysis::new(m, Method::Auto, config.clone(), registry)?.classify(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mammillary::make;

    fn cfg() -> IdentConfig {
        IdentConfig {
            starts: 60,
            ..IdentConfig::default()
        }
    }

    #[test]
    fn star_one_two() {
        let m = make(4, 1, 2).unwrap();
        let a = Analysis::new(&m, Method::Forest, cfg(), None).unwrap();
        let class = |s: Symbol| a.classify(&s).unwrap().class;
        assert_eq!(class(Symbol::rate(2, 1)), IdentClass::GloballyIdentifiable);
        assert_eq!(class(Symbol::rate(1, 3)), IdentClass::Sling);
        assert_eq!(class(Symbol::rate(4, 1)), IdentClass::Sling);
        // Without the family construction, the fibers still show two values.
        let v = a.classify(&Symbol::rate(1, 2)).unwrap();
        assert_eq!(v.class, IdentClass::Sling);
        assert!(v.evidence.iter().any(|e| e.kind == EvidenceKind::FiberSample));
    }

    #[test]
    fn rank_deficient_parameter() {
        let m = make(5, 2, 3).unwrap();
        let v = classify_parameter(&m, &Symbol::rate(3, 1), &cfg(), None).unwrap();
        assert_eq!(v.class, IdentClass::Unidentifiable);
        assert_eq!(v.evidence[0].kind, EvidenceKind::RankTest);
    }

    #[test]
    fn unknown_parameter() {
        let m = make(4, 1, 2).unwrap();
        let r = classify_parameter(&m, &Symbol::rate(3, 4), &cfg(), None);
        assert!(matches!(r, Err(IdentError::UnknownParameter(_))));
    }

    #[test]
    fn preconditions() {
        let m = Model::new(3, [(1, 2), (2, 3)], [1], [3], []).unwrap();
        assert!(matches!(
            Analysis::new(&m, Method::Auto, cfg(), None),
            Err(IdentError::Precondition(_))
        ));
    }

    #[test]
    fn verdicts_record_seeds() {
        let m = make(3, 1, 1).unwrap();
        let a = Analysis::new(&m, Method::Auto, cfg(), None).unwrap();
        let all = a.classify_all().unwrap();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|v| v.seeds.rank == 42 && v.config == cfg()));
    }
}
