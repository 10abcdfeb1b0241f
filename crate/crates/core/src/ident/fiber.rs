//! Multi-start damped Gauss-Newton sampling of a coefficient-map fiber
//! `{k : C(k) = C(k*)}`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ioeq::{CoefficientMap, CompiledMap};
use crate::poly::ParamPoint;
use crate::sample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    pub residual_tol: f64,
    pub cluster_tol: f64,
    pub start_range: (f64, f64),
    pub base_range: (f64, f64),
}

impl Default for FiberConfig {
    fn default() -> Self {
        FiberConfig {
            starts: 200,
            seed: 42,
            max_iterations: 200,
            max_halvings: 30,
            residual_tol: 1e-10,
            cluster_tol: 1e-6,
            start_range: (0.1, 10.0),
            base_range: (0.5, 5.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub converged: usize,
    pub discarded: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub base_point: BTreeMap<String, f64>,
    pub target: Vec<f64>,
    /// Cluster representatives, in order of the first start that reached them.
    pub solutions: Vec<Vec<f64>>,
    pub distinct_counts: BTreeMap<String, usize>,
    pub residuals: ResidualStats,
    /// Some solution has a negative coordinate.
    pub sign_crossing: bool,
    pub starts: usize,
    pub seed: u64,
}

impl FiberReport {
    pub fn distinct(&self, name: &str) -> usize {
        self.distinct_counts.get(name).copied().unwrap_or(0)
    }
}

fn scaled_residual(cmap: &CompiledMap, x: &[f64], target: &[f64], w: &[f64]) -> DVector<f64> {
    let v = cmap.eval(x);
    DVector::from_iterator(
        v.len(),
        v.iter().zip(target).zip(w).map(|((a, t), w)| (a - t) / w),
    )
}

fn solve_from(
    cmap: &CompiledMap,
    start: Vec<f64>,
    target: &[f64],
    w: &[f64],
    cfg: &FiberConfig,
) -> Option<(Vec<f64>, f64)> {
    let mut x = start;
    let mut r = scaled_residual(cmap, &x, target, w);
    let mut norm = r.norm();
    let mut polish = 0;
    for _ in 0..cfg.max_iterations {
        if norm <= cfg.residual_tol {
            polish += 1;
            if polish > 2 {
                break;
            }
        }
        let jrows = cmap.jacobian(&x);
        let (m, p) = (jrows.len(), x.len());
        let j = DMatrix::from_fn(m, p, |i, k| jrows[i][k] / w[i]);
        let svd = j.svd(true, true);
        let eps = 1e-14 * svd.singular_values.max();
        let Ok(step) = svd.solve(&(-&r), eps) else {
            return None;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=cfg.max_halvings {
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + lambda * d).collect();
            let rc = scaled_residual(cmap, &cand, target, w);
            let nc = rc.norm();
            if nc.is_finite() && nc < norm {
                x = cand;
                r = rc;
                norm = nc;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted || x.iter().any(|v| !v.is_finite() || v.abs() > 1e8) {
            break;
        }
    }
    (norm <= cfg.residual_tol).then_some((x, norm))
}

fn same(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Samples the fiber through `base` (drawn uniformly from
/// `cfg.base_range` when absent). Start 0 is the base point itself; start
/// `s` draws from stream `s + 1` of the seed, so the report does not depend
/// on the thread count.
pub fn fiber_sample(cm: &CoefficientMap, base: Option<&ParamPoint<f64>>, cfg: &FiberConfig) -> FiberReport {
    let params = cm.params();
    let base = match base {
        Some(b) => b.clone(),
        None => sample::uniform_point(
            params,
            &mut sample::rng(cfg.seed, 0),
            cfg.base_range.0,
            cfg.base_range.1,
        ),
    };
    let x0 = base.values_for(params).expect("base point assigns every parameter");
    let cmap = cm.compile();
    let target = cmap.eval(&x0);
    let w: Vec<f64> = target.iter().map(|t| if *t == 0.0 { 1.0 } else { t.abs() }).collect();

    let results: Vec<Option<(Vec<f64>, f64)>> = (0..cfg.starts.max(1))
        .into_par_iter()
        .map(|s| {
            let start = if s == 0 {
                x0.clone()
            } else {
                let mut rng = sample::rng(cfg.seed, s as u64 + 1);
                (0..params.len())
                    .map(|_| rng.gen_range(cfg.start_range.0..cfg.start_range.1))
                    .collect()
            };
            solve_from(&cmap, start, &target, &w, cfg)
        })
        .collect();

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    let mut converged = 0;
    let mut max_residual: f64 = 0.0;
    for (x, res) in results.iter().flatten() {
        converged += 1;
        max_residual = max_residual.max(*res);
        let known = clusters
            .iter()
            .any(|c| c.iter().zip(x).all(|(a, b)| same(*a, *b, cfg.cluster_tol)));
        if !known {
            clusters.push(x.clone());
        }
    }
    let distinct_counts = params
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut v: Vec<f64> = clusters.iter().map(|c| c[i]).collect();
            v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let mut count = usize::from(!v.is_empty());
            for k in 1..v.len() {
                if !same(v[k - 1], v[k], cfg.cluster_tol) {
                    count += 1;
                }
            }
            (p.to_string(), count)
        })
        .collect();
    FiberReport {
        base_point: base.iter().map(|(s, v)| (s.to_string(), *v)).collect(),
        sign_crossing: clusters.iter().any(|c| c.iter().any(|v| *v < 0.0)),
        target,
        solutions: clusters,
        distinct_counts,
        residuals: ResidualStats {
            converged,
            discarded: cfg.starts.max(1) - converged,
            max_residual,
        },
        starts: cfg.starts.max(1),
        seed: cfg.seed,
    }
}
