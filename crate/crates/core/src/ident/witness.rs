//! Automorphism witnesses: if an automorphism fixing every input and output
//! maps the edge of `p` to another edge, then relabeling a generic point
//! keeps every coefficient and moves `p`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::ioeq::CoefficientMap;
use crate::model::{Model, Permutation};
use crate::poly::{ParamPoint, Symbol};
use crate::sample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryWitness {
    pub parameter: Symbol,
    /// The parameter whose value `p` takes at the relabeled point.
    pub image: Symbol,
    pub permutation: String,
    pub images: Vec<usize>,
    pub point: BTreeMap<String, String>,
    /// Exact check that the coefficients agree at the two points.
    pub verified: bool,
}

fn constraints_for(m: &Model, p: &Symbol, q: &Symbol) -> Option<Vec<(usize, usize)>> {
    let (pt, pf) = p.as_rate()?;
    let (qt, qf) = q.as_rate()?;
    if (pt == 0) != (qt == 0) {
        return None;
    }
    let mut c = vec![(pf, qf)];
    if pt != 0 {
        c.push((pt, qt));
    }
    for &v in m.inputs().iter().chain(m.outputs()) {
        c.push((v, v));
    }
    Some(c)
}

/// The first witness moving `p` to another parameter, checked exactly at a
/// random integer point.
pub fn symmetry_sling_witness(
    m: &Model,
    cm: &CoefficientMap,
    p: &Symbol,
    seed: u64,
) -> Option<SymmetryWitness> {
    let params = m.parameters();
    for q in params.iter().filter(|q| *q != p) {
        let Some(c) = constraints_for(m, p, q) else {
            continue;
        };
        let Some(sigma) = m.find_automorphism(&c) else {
            continue;
        };
        return Some(verify(cm, p, q, &sigma, seed));
    }
    None
}

fn verify(cm: &CoefficientMap, p: &Symbol, q: &Symbol, sigma: &Permutation, seed: u64) -> SymmetryWitness {
    let mut stream = 0;
    let base: ParamPoint<BigInt> = loop {
        let x = sample::integer_point(
            cm.params(),
            &mut sample::rng(seed, stream),
            sample::INTEGER_RANGE.0,
            sample::INTEGER_RANGE.1,
        );
        if x.get(p) != x.get(q) {
            break x;
        }
        stream += 1;
    };
    let moved = sigma.pull_back(&base);
    let eval = |x: &ParamPoint<BigInt>| -> Vec<BigInt> {
        cm.entries()
            .iter()
            .map(|e| e.poly.evaluate_integer(x).expect("all parameters assigned"))
            .collect()
    };
    let verified = eval(&base) == eval(&moved) && moved.get(p) != base.get(p);
    SymmetryWitness {
        parameter: p.clone(),
        image: q.clone(),
        permutation: sigma.to_string(),
        images: sigma.images().to_vec(),
        point: base.iter().map(|(s, v)| (s.to_string(), v.to_string())).collect(),
        verified,
    }
}
