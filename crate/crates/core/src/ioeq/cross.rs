//! Forest engine against determinant engine at random integer points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{coeffs_determinant_with, coeffs_forest, IoError};
use crate::model::Model;
use crate::sample;
use crate::Rational;

/// Deliberate defects for exercising the comparison itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Drop the `(-1)^(i+j)` factor's effect by negating every minor.
    FlipMinorSign,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientMismatch {
    pub trial: usize,
    pub point: BTreeMap<String, String>,
    pub coefficient_name: String,
    pub forest_value: String,
    pub det_value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub model: serde_json::Value,
    pub trials: usize,
    pub seed: u64,
    pub pass: bool,
    pub first_failure: Option<CoefficientMismatch>,
}

pub fn cross_validate(m: &Model, trials: usize, seed: u64) -> Result<CrossValidation, IoError> {
    cross_validate_with(m, trials, seed, None)
}

/// Compares every coefficient (constant ones included) of the two engines
/// at `trials` random points; trial `t` draws from stream `t` of `seed`.
pub fn cross_validate_with(
    m: &Model,
    trials: usize,
    seed: u64,
    fault: Option<Fault>,
) -> Result<CrossValidation, IoError> {
    let forest = coeffs_forest(m)?;
    let params = m.parameters();
    let flip = fault == Some(Fault::FlipMinorSign);
    let outcomes: Vec<Result<Option<CoefficientMismatch>, IoError>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sample::rng(seed, t as u64);
            let ipt = sample::integer_point(
                &params,
                &mut rng,
                sample::INTEGER_RANGE.0,
                sample::INTEGER_RANGE.1,
            );
            let qpt = ipt.map(|v: &BigInt| Rational::from_integer(v.clone()));
            let mut err = None;
            let by_forest = forest.map(|p| match p.evaluate_integer(&ipt) {
                Ok(v) => Rational::from_integer(v),
                Err(e) => {
                    err.get_or_insert(e);
                    Rational::default()
                }
            });
            if let Some(e) = err {
                return Err(e.into());
            }
            let by_det = coeffs_determinant_with(m, &qpt, flip)?;
            let by_det = &by_det[0];
            for ((name, f), (_, d)) in by_forest.named(false).into_iter().zip(by_det.named(false)) {
                if f != d {
                    return Ok(Some(CoefficientMismatch {
                        trial: t,
                        point: ipt.iter().map(|(s, v)| (s.to_string(), v.to_string())).collect(),
                        coefficient_name: name,
                        forest_value: f.to_string(),
                        det_value: d.to_string(),
                    }));
                }
            }
            Ok(None)
        })
        .collect();
    let mut first_failure = None;
    for o in outcomes {
        if let Some(f) = o? {
            first_failure = Some(f);
            break;
        }
    }
    Ok(CrossValidation {
        model: serde_json::to_value(m).expect("model serializes"),
        trials,
        seed,
        pass: first_failure.is_none(),
        first_failure,
    })
}
