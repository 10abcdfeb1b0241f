//! Input-output equation coefficients.
//!
//! For output `i` the equation reads
//! `y_i^(n) + c_{n-1} y_i^(n-1) + ... + c_0 y_i = sum_j (d^j_{n-1} u_j^(n-1) + ... + d^j_0 u_j)`.
//! Two independent engines compute the coefficients: enumeration of
//! spanning incoming forests (symbolic, strongly connected single-in/out
//! models without leaks) and determinants of `sI - A` and its minors
//! (exact numeric values at rational points, or symbolic for small n).

mod cross;
mod determinant;
mod forest;
mod map;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::model::{Model, ModelError};
use crate::poly::{MultiPoly, ParamPoint, PolyError};
use crate::scalar::Scalar;

pub use cross::{cross_validate, cross_validate_with, CoefficientMismatch, CrossValidation, Fault};
pub use determinant::{coeffs_determinant, coeffs_determinant_with, coeffs_symbolic, SYMBOLIC_LIMIT};
pub use forest::{for_each_forest, forest_monomial, spanning_incoming_forests, Forest};
pub use map::{coefficient_map, CoefficientEntry, CoefficientMap, CompiledMap, Method};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("forest method inapplicable: {0}")]
    ForestInapplicable(String),
    #[error("model has no inputs")]
    NoInputs,
    #[error("model has no outputs")]
    NoOutputs,
    #[error("no non-constant coefficients")]
    NoCoefficients,
    #[error("symbolic determinant limited to n <= {limit}, model has n = {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Coefficients of one input-output equation. `lhs[k]` is `c_k` and each
/// `rhs` entry pairs an input `j` with `[d_0, .., d_{n-1}]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IoEquation<C> {
    pub n: usize,
    pub output: usize,
    pub lhs: Vec<C>,
    pub rhs: Vec<(usize, Vec<C>)>,
}

impl<C> IoEquation<C> {
    pub fn c(&self, k: usize) -> &C {
        &self.lhs[k]
    }

    /// `d_k` for the given input.
    pub fn d(&self, input: usize, k: usize) -> Option<&C> {
        self.rhs
            .iter()
            .find(|(j, _)| *j == input)
            .map(|(_, d)| &d[k])
    }

    /// Entries in map order: `c_{n-1} .. c_0`, then for each input
    /// `d_{n-1} .. d_0`. With `qualified`, names carry the output and input.
    pub fn named(&self, qualified: bool) -> Vec<(String, &C)> {
        let i = self.output;
        let mut out = Vec::new();
        for k in (0..self.n).rev() {
            let name = if qualified { format!("c{k}[y{i}]") } else { format!("c{k}") };
            out.push((name, &self.lhs[k]));
        }
        for (j, d) in &self.rhs {
            for k in (0..self.n).rev() {
                let name = if qualified {
                    format!("d{k}[u{j},y{i}]")
                } else {
                    format!("d{k}")
                };
                out.push((name, &d[k]));
            }
        }
        out
    }

    pub fn map<D>(&self, mut f: impl FnMut(&C) -> D) -> IoEquation<D> {
        IoEquation {
            n: self.n,
            output: self.output,
            lhs: self.lhs.iter().map(&mut f).collect(),
            rhs: self
                .rhs
                .iter()
                .map(|(j, d)| (*j, d.iter().map(&mut f).collect()))
                .collect(),
        }
    }
}

impl IoEquation<MultiPoly> {
    pub fn evaluate<T: Scalar>(&self, point: &ParamPoint<T>) -> Result<IoEquation<T>, PolyError> {
        let mut err = None;
        let out = self.map(|p| match p.evaluate(point) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                T::zero()
            }
        });
        err.map_or(Ok(out), Err)
    }
}

fn single_io(m: &Model) -> Result<(usize, usize), IoError> {
    let report = m.validate();
    let why = if !report.strongly_connected {
        Some("model is not strongly connected")
    } else if report.inputs != 1 || report.outputs != 1 {
        Some("needs exactly one input and one output")
    } else if report.leaks != 0 {
        Some("model has leaks")
    } else {
        None
    };
    if let Some(why) = why {
        return Err(IoError::ForestInapplicable(why.into()));
    }
    let j = *m.inputs().iter().next().expect("one input");
    let i = *m.outputs().iter().next().expect("one output");
    Ok((j, i))
}

/// Coefficients by spanning incoming forests:
/// `c_k` sums `π_F` over forests of `G` with `n - k` edges, and `d_k` sums
/// over forests of `G*_i` (edges out of the output removed) with
/// `n - k - 1` edges in which the input and output share a component.
pub fn coeffs_forest(m: &Model) -> Result<IoEquation<MultiPoly>, IoError> {
    let (j, i) = single_io(m)?;
    let n = m.n();
    let mut lhs = vec![MultiPoly::zero(); n];
    forest::for_each_forest(&m.graph(), n, &mut |edges, _| {
        let l = edges.len();
        if l >= 1 {
            lhs[n - l].add_monomial(forest::forest_monomial(edges));
        }
    });
    let reduced = m.reduced_graph(i)?;
    let mut d = vec![MultiPoly::zero(); n];
    forest::for_each_forest(&reduced, n - 1, &mut |edges, same| {
        if same(j, i) {
            d[n - 1 - edges.len()].add_monomial(forest::forest_monomial(edges));
        }
    });
    Ok(IoEquation {
        n,
        output: i,
        lhs,
        rhs: vec![(j, d)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize, i: usize, j: usize) -> Model {
        let edges = (2..=n).flat_map(|k| [(1, k), (k, 1)]);
        Model::new(n, edges, [i], [j], []).unwrap()
    }

    #[test]
    fn four_star_one_two() {
        let eq = coeffs_forest(&star(4, 1, 2)).unwrap();
        let s: Vec<String> = eq.named(false).iter().map(|(k, p)| format!("{k}={p}")).collect();
        assert_eq!(s[0], "c3=1*k12 + 1*k13 + 1*k14 + 1*k21 + 1*k31 + 1*k41");
        assert_eq!(s[3], "c0=0");
        assert_eq!(s[4], "d3=0");
        assert_eq!(s[5], "d2=1*k21");
        assert_eq!(s[7], "d0=1*k13*k14*k21");
    }

    #[test]
    fn two_three_family_rhs() {
        let eq = coeffs_forest(&star(5, 2, 3)).unwrap();
        assert!(eq.d(2, 3).unwrap().is_zero());
        assert_eq!(eq.d(2, 2).unwrap().to_string(), "1*k12*k31");
    }

    #[test]
    fn same_input_and_output_has_unit_top_coefficient() {
        // The empty forest joins the input to itself.
        let eq = coeffs_forest(&star(4, 2, 2)).unwrap();
        assert_eq!(eq.d(2, 3).unwrap().to_string(), "1");
    }

    #[test]
    fn forest_rejects_leaks() {
        let m = star(4, 1, 2).with_leaks([3]).unwrap();
        let err = coeffs_forest(&m).unwrap_err();
        assert!(err.to_string().starts_with("forest method inapplicable"), "{err}");
    }
}
