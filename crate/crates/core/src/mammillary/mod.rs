//! Mammillary (star) models: one central compartment `1` exchanging with
//! peripheral compartments `2..n`. With a single input and output and no
//! leaks every such model is a relabeling of one of five families,
//! `M_n(1,1)`, `M_n(1,2)`, `M_n(2,1)`, `M_n(2,2)` and `M_n(2,3)`.

mod alternate;
mod recover;
mod registry;
mod structure;
mod table;

pub use table::RecoveredValue;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ident::IdentError;
use crate::ioeq::IoError;
use crate::model::{Model, ModelError, Permutation};
use crate::poly::{PolyError, Symbol};

pub use alternate::{
    alternate_point_m12, alternate_points_m12, h_polynomial, proof_regime_point, AlternatePoint,
    RootChoice,
};
pub use recover::{recover, Recovery};
pub use registry::MammillaryRegistry;
pub use structure::{
    big_sum_check, big_sum_residual, family_identities, lhs_structure, vandermonde_check,
    Identity, LhsStructure, VandermondeCheck,
};
pub use table::{
    analyze_family, classification_table, conjecture_probe_m23, expected_class, predicted_identifiable,
    ClassificationTable, ConjectureProbe, Expectation, FamilyReport, TableCell, TableRow,
};

#[derive(Debug, Error)]
pub enum MammillaryError {
    #[error("mammillary models need n >= 3, got {0}")]
    TooSmall(usize),
    #[error("family {family} needs n >= {min}, got {n}")]
    FamilyTooSmall { family: Family, n: usize, min: usize },
    #[error("compartment {index} out of range 1..{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("division by zero: {0}")]
    ZeroDenominator(String),
    #[error("singular M̃ (incoming parameters not distinct)")]
    SingularMTilde,
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("identity failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ident(#[from] IdentError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "1,1")]
    F11,
    #[serde(rename = "1,2")]
    F12,
    #[serde(rename = "2,1")]
    F21,
    #[serde(rename = "2,2")]
    F22,
    #[serde(rename = "2,3")]
    F23,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::F11, Family::F12, Family::F21, Family::F22, Family::F23];

    /// `(input, output)` of the representative.
    pub fn io(self) -> (usize, usize) {
        match self {
            Family::F11 => (1, 1),
            Family::F12 => (1, 2),
            Family::F21 => (2, 1),
            Family::F22 => (2, 2),
            Family::F23 => (2, 3),
        }
    }

    pub fn from_io(i: usize, j: usize) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.io() == (i, j))
    }

    /// Smallest n the family statements cover.
    pub fn min_n(self) -> usize {
        match self {
            Family::F11 => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.io();
        write!(f, "({i},{j})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyId {
    pub n: usize,
    pub family: Family,
}

impl FamilyId {
    pub fn new(n: usize, family: Family) -> Result<Self, MammillaryError> {
        if n < family.min_n() {
            return Err(MammillaryError::FamilyTooSmall {
                family,
                n,
                min: family.min_n(),
            });
        }
        Ok(FamilyId { n, family })
    }

    pub fn model(&self) -> Model {
        let (i, j) = self.family.io();
        make(self.n, i, j).expect("valid family")
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.family.io();
        write!(f, "M{}({i},{j})", self.n)
    }
}

/// The bidirected `n`-star with center `1`, input `i` and output `j`.
pub fn make(n: usize, i: usize, j: usize) -> Result<Model, MammillaryError> {
    if n < 3 {
        return Err(MammillaryError::TooSmall(n));
    }
    for v in [i, j] {
        if v == 0 || v > n {
            return Err(MammillaryError::IndexOutOfRange { index: v, n });
        }
    }
    let edges = (2..=n).flat_map(|k| [(1, k), (k, 1)]);
    Ok(Model::new(n, edges, [i], [j], [])?)
}

/// Family of `make(n, i, j)` and a relabeling `σ` fixing the center with
/// `make(n, i, j).relabel(σ)` equal to the family representative.
pub fn representative(n: usize, i: usize, j: usize) -> Result<(FamilyId, Permutation), MammillaryError> {
    make(n, i, j)?;
    let swap = |a: usize, b: usize| Permutation::transposition(n, a, b);
    let (family, sigma) = match (i, j) {
        (1, 1) => (Family::F11, Permutation::identity(n)),
        (1, j) => (Family::F12, swap(j, 2)),
        (i, 1) => (Family::F21, swap(i, 2)),
        (i, j) if i == j => (Family::F22, swap(i, 2)),
        (i, j) => {
            // i -> 2 first, then wherever j ended up -> 3.
            let first = swap(i, 2);
            let second = swap(first.apply(j), 3);
            (Family::F23, second.compose(&first))
        }
    };
    Ok((FamilyId::new(n, family)?, sigma))
}

/// Recognizes a single-input, single-output, leak-free star model (with any
/// center) and returns its family with a relabeling onto the representative.
pub fn identify(m: &Model) -> Option<(FamilyId, Permutation)> {
    let n = m.n();
    if n < 3 || !m.leaks().is_empty() || m.inputs().len() != 1 || m.outputs().len() != 1 {
        return None;
    }
    if m.edges().len() != 2 * (n - 1) {
        return None;
    }
    let center = (1..=n).find(|&c| (1..=n).filter(|&v| v != c).all(|v| m.has_edge(c, v) && m.has_edge(v, c)))?;
    let to_center = Permutation::transposition(n, center, 1);
    let i = to_center.apply(*m.inputs().iter().next()?);
    let j = to_center.apply(*m.outputs().iter().next()?);
    let (id, sigma) = representative(n, i, j).ok()?;
    Some((id, sigma.compose(&to_center)))
}

/// Parameters of the star in canonical order: `k12, k13, .., k1n` then
/// `k21, .., kn1`.
pub(crate) fn incoming(n: usize, from: usize) -> Vec<Symbol> {
    (from..=n).map(|j| Symbol::rate(1, j)).collect()
}

pub(crate) fn outgoing(n: usize, from: usize) -> Vec<Symbol> {
    (from..=n).map(|j| Symbol::rate(j, 1)).collect()
}
