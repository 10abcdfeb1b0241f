//! Exact Jacobian rank tests at random integer points.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ioeq::CoefficientMap;
use crate::linalg::Matrix;
use crate::poly::{ParamPoint, PolyError, Symbol};
use crate::sample;
use crate::scalar::Scalar;
use crate::Rational;

/// Jacobian of the coefficient map at `x`: rows are coefficients, columns
/// are parameters in `cm.params()` order.
pub fn jacobian<T: Scalar>(cm: &CoefficientMap, x: &ParamPoint<T>) -> Result<Matrix<T>, PolyError> {
    let rows = cm
        .jacobian_polys()
        .iter()
        .map(|row| row.iter().map(|p| p.evaluate(x)).collect())
        .collect::<Result<Vec<Vec<T>>, _>>()?;
    Ok(Matrix::from_vec(
        rows.len(),
        cm.params().len(),
        rows.into_iter().flatten().collect(),
    ))
}

fn integer_jacobian(cm: &CoefficientMap, x: &ParamPoint<BigInt>) -> Matrix<Rational> {
    let rows: Vec<Vec<Rational>> = cm
        .jacobian_polys()
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| Rational::from_integer(p.evaluate_integer(x).expect("all parameters assigned")))
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

/// Rank data at one sampled point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRank {
    pub stream: u64,
    pub rank: usize,
    /// Per parameter: does every kernel vector vanish in that coordinate.
    #[serde(skip)]
    pub determined: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankSummary {
    pub dimension: usize,
    pub generic_rank: usize,
    pub ranks: Vec<usize>,
    /// Points whose rank fell below the maximum; each triggered one extra
    /// sample.
    pub resampled: usize,
    pub identifiable: bool,
    #[serde(skip)]
    samples: Vec<PointRank>,
}

fn rank_at(cm: &CoefficientMap, seed: u64, stream: u64) -> PointRank {
    let x = sample::integer_point(
        cm.params(),
        &mut sample::rng(seed, stream),
        sample::INTEGER_RANGE.0,
        sample::INTEGER_RANGE.1,
    );
    let j = integer_jacobian(cm, &x);
    let kernel = j.kernel_basis();
    let rank = cm.params().len() - kernel.len();
    let determined = (0..cm.params().len())
        .map(|p| kernel.iter().all(|v| v[p].is_zero()))
        .collect();
    PointRank {
        stream,
        rank,
        determined,
    }
}

/// Exact ranks at `points` random points. A point whose rank is below the
/// running maximum is not outvoted: another point is drawn in its place, up
/// to `points` extra draws.
pub fn rank_summary(cm: &CoefficientMap, points: usize, seed: u64) -> RankSummary {
    let points = points.max(1);
    let mut samples: Vec<PointRank> = {
        use rayon::prelude::*;
        (0..points as u64)
            .into_par_iter()
            .map(|s| rank_at(cm, seed, s))
            .collect()
    };
    let mut resampled = 0;
    let mut next = points as u64;
    loop {
        let max = samples.iter().map(|s| s.rank).max().unwrap_or(0);
        let low = samples.iter().filter(|s| s.rank < max).count();
        if low <= resampled || resampled >= points {
            break;
        }
        samples.push(rank_at(cm, seed, next));
        next += 1;
        resampled += 1;
    }
    let generic_rank = samples.iter().map(|s| s.rank).max().unwrap_or(0);
    RankSummary {
        dimension: cm.params().len(),
        generic_rank,
        ranks: samples.iter().map(|s| s.rank).collect(),
        resampled,
        identifiable: generic_rank == cm.params().len(),
        samples,
    }
}

impl RankSummary {
    /// Local identifiability of the parameter at index `p`, read from the
    /// kernels at the points of full generic rank, with the number of such
    /// points that disagree with the majority.
    pub fn locally_identifiable(&self, p: usize) -> (bool, usize) {
        let votes: Vec<bool> = self
            .samples
            .iter()
            .filter(|s| s.rank == self.generic_rank)
            .map(|s| s.determined[p])
            .collect();
        let yes = votes.iter().filter(|&&v| v).count();
        let verdict = 2 * yes >= votes.len() && yes > 0;
        let disagree = if verdict { votes.len() - yes } else { yes };
        (verdict, disagree)
    }
}

/// Row-space test: `e_p` lies in the row space of `J` at a random point iff
/// appending it leaves the rank unchanged. Majority over the points where
/// `J` has the largest rank seen.
pub fn parameter_local_identifiability(
    cm: &CoefficientMap,
    p: &Symbol,
    points: usize,
    seed: u64,
) -> Option<bool> {
    let idx = cm.param_index(p)?;
    let dim = cm.params().len();
    let results: Vec<(usize, bool)> = (0..points.max(1) as u64)
        .map(|s| {
            let x = sample::integer_point(
                cm.params(),
                &mut sample::rng(seed, s),
                sample::INTEGER_RANGE.0,
                sample::INTEGER_RANGE.1,
            );
            let j = integer_jacobian(cm, &x);
            let r = j.rank();
            let mut rows = j.to_rows();
            let mut e = vec![Rational::zero(); dim];
            e[idx] = Rational::from_i64(1);
            rows.push(e);
            (r, Matrix::from_rows(rows).rank() == r)
        })
        .collect();
    let max = results.iter().map(|r| r.0).max()?;
    let top: Vec<bool> = results.iter().filter(|r| r.0 == max).map(|r| r.1).collect();
    let yes = top.iter().filter(|&&v| v).count();
    Some(2 * yes >= top.len() && yes > 0)
}

pub fn model_identifiability(cm: &CoefficientMap, points: usize, seed: u64) -> RankSummary {
    rank_summary(cm, points, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioeq::{coefficient_map, Method};
    use crate::mammillary::make;

    #[test]
    fn kernel_and_row_space_tests_agree() {
        for (n, i, j) in [(4, 1, 2), (5, 2, 3), (4, 2, 2)] {
            let cm = coefficient_map(&make(n, i, j).unwrap(), Method::Forest).unwrap();
            let r = rank_summary(&cm, 5, 42);
            for (k, p) in cm.params().iter().enumerate() {
                assert_eq!(
                    Some(r.locally_identifiable(k).0),
                    parameter_local_identifiability(&cm, p, 5, 42),
                    "M{n}({i},{j}) {p}"
                );
            }
        }
    }

    #[test]
    fn ranks() {
        let cm = coefficient_map(&make(4, 1, 2).unwrap(), Method::Forest).unwrap();
        let r = model_identifiability(&cm, 5, 1);
        assert_eq!((r.dimension, r.generic_rank, r.identifiable), (6, 6, true));
        let cm = coefficient_map(&make(5, 2, 3).unwrap(), Method::Forest).unwrap();
        let r = model_identifiability(&cm, 5, 1);
        assert_eq!((r.dimension, r.generic_rank, r.identifiable), (8, 7, false));
    }

    #[test]
    fn jacobian_entries_are_derivatives() {
        let cm = coefficient_map(&make(3, 1, 1).unwrap(), Method::Forest).unwrap();
        let x: ParamPoint<Rational> = cm
            .params()
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), Rational::from_i64(k as i64 + 2)))
            .collect();
        let j = jacobian(&cm, &x).unwrap();
        for (r, row) in cm.jacobian_polys().iter().enumerate() {
            for (c, d) in row.iter().enumerate() {
                assert_eq!(j[(r, c)], d.evaluate(&x).unwrap());
            }
        }
    }
}
