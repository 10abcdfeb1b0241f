//! A second parameter point with the same coefficients for `M_n(1,2)`,
//! demonstrating that `k12` is not globally identifiable.
//!
//! With `S = {k13..k1n}` and `e_t = e_t(S)`, `k12` is a root of
//! `h(z) = z^{n-1} + sum_{i=2}^{n} (-1)^i (k21 e_{i-2} - c_{n-i+1}) z^{n-i}`,
//! whose coefficients the map determines. Replacing `k12` by another real
//! root `r`, keeping `k21` and `S`, and solving
//! `(M + r Shift(M)) (k31..kn1) = rhs` for the outgoing rates reproduces
//! every coefficient.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{incoming, make, outgoing, Family, MammillaryError};
use crate::ioeq::coeffs_forest;
use crate::linalg::{LinalgError, Matrix};
use crate::poly::{elementary_symmetric_values, real_roots, ParamPoint, PolyError, Symbol, UniPoly};
use crate::sample;
use crate::scalar::Scalar;

/// `h` with ascending coefficients. `c = [c_0..c_{n-1}]`,
/// `e = [e_0..e_{n-2}]`.
pub fn h_polynomial<T: Scalar>(n: usize, c: &[T], k21: &T, e: &[T]) -> UniPoly<T> {
    let mut coeffs = vec![T::zero(); n];
    coeffs[n - 1] = T::one();
    for i in 2..=n {
        let v = k21.clone() * e[i - 2].clone() - c[n - i + 1].clone();
        coeffs[n - i] = if i % 2 == 0 { v } else { T::zero() - v };
    }
    UniPoly::new(coeffs)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootChoice {
    /// The largest root other than the one matching `k12`.
    #[default]
    Largest,
    /// Position among the other roots, sorted descending.
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlternatePoint {
    pub point: ParamPoint<f64>,
    pub root: f64,
    /// `|k12** - k12*|`.
    pub k12_gap: f64,
    /// `max |C(k**) - C(k*)| / max |C(k*)|` over all coefficients.
    pub coefficient_error: f64,
}

struct Prepared {
    n: usize,
    kstar: ParamPoint<f64>,
    k12: f64,
    k21: f64,
    sigma: Vec<f64>,
    c: Vec<f64>,
    coeffs: Vec<f64>,
    e: Vec<f64>,
    /// Roots of `h` other than `k12*`, descending.
    others: Vec<f64>,
}

fn get(x: &ParamPoint<f64>, s: Symbol) -> Result<f64, MammillaryError> {
    x.get(&s).copied().ok_or(MammillaryError::Poly(PolyError::MissingSymbol(s)))
}

fn all_coefficients(n: usize, x: &ParamPoint<f64>) -> Result<(Vec<f64>, Vec<f64>), MammillaryError> {
    let eq = coeffs_forest(&make(n, 1, 2)?)?.evaluate(x)?;
    let mut all = eq.lhs.clone();
    for (_, d) in &eq.rhs {
        all.extend(d.iter().copied());
    }
    Ok((eq.lhs, all))
}

fn distinct(v: &[f64], rel: f64) -> bool {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).all(|w| (w[1] - w[0]).abs() > rel * w[0].abs().max(w[1].abs()).max(1.0))
}

fn prepare(n: usize, kstar: &ParamPoint<f64>) -> Result<Prepared, MammillaryError> {
    if n < 4 {
        return Err(MammillaryError::FamilyTooSmall {
            family: Family::F12,
            n,
            min: 4,
        });
    }
    let k12 = get(kstar, Symbol::rate(1, 2))?;
    let k21 = get(kstar, Symbol::rate(2, 1))?;
    let sigma: Vec<f64> = incoming(n, 3)
        .into_iter()
        .map(|s| get(kstar, s))
        .collect::<Result<_, _>>()?;
    for s in outgoing(n, 3) {
        get(kstar, s)?;
    }
    if !distinct(&sigma, 1e-12) {
        return Err(MammillaryError::SingularMTilde);
    }
    let (c, coeffs) = all_coefficients(n, kstar)?;
    let e = elementary_symmetric_values(&sigma);
    let h = h_polynomial(n, &c, &k21, &e);
    let roots = real_roots(&h)?;
    if roots.len() != n - 1 || !distinct(&roots, 1e-7) {
        return Err(MammillaryError::Degenerate(format!(
            "h has {} real roots, need {} distinct",
            roots.len(),
            n - 1
        )));
    }
    let closest = roots
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - k12).abs().total_cmp(&(b.1 - k12).abs()))
        .map(|(i, _)| i)
        .expect("n - 1 >= 3 roots");
    let mut others: Vec<f64> = roots
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != closest)
        .map(|(_, r)| *r)
        .collect();
    others.sort_by(|a, b| b.total_cmp(a));
    Ok(Prepared {
        n,
        kstar: kstar.clone(),
        k12,
        k21,
        sigma,
        c,
        coeffs,
        e,
        others,
    })
}

fn build(p: &Prepared, r: f64) -> Result<AlternatePoint, MammillaryError> {
    let n = p.n;
    let size = n - 2;
    let m = Matrix::from_fn(size, size, |row, col| {
        let rest: Vec<f64> = p
            .sigma
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != col)
            .map(|(_, v)| *v)
            .collect();
        elementary_symmetric_values(&rest)[row]
    });
    let tilde = Matrix::from_fn(size, size, |row, col| {
        m[(row, col)] + if row > 0 { r * m[(row - 1, col)] } else { 0.0 }
    });
    let rhs: Vec<f64> = (0..size)
        .map(|t| p.c[n - 1 - t] - p.k21 * p.e[t] - r * p.e[t] - p.e[t + 1])
        .collect();
    let x = tilde.solve(&rhs).map_err(|e| match e {
        LinalgError::Singular => MammillaryError::SingularMTilde,
        other => MammillaryError::Degenerate(other.to_string()),
    })?;
    let mut point = p.kstar.clone();
    point.insert(Symbol::rate(1, 2), r);
    for (s, v) in outgoing(n, 3).into_iter().zip(x) {
        point.insert(s, v);
    }
    let (_, coeffs) = all_coefficients(n, &point)?;
    let scale = p.coeffs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let err = coeffs
        .iter()
        .zip(&p.coeffs)
        .fold(0.0f64, |a, (u, v)| a.max((u - v).abs()));
    Ok(AlternatePoint {
        point,
        root: r,
        k12_gap: (r - p.k12).abs(),
        coefficient_error: err / scale,
    })
}

/// One alternate point for `M_n(1,2)` at `kstar`.
pub fn alternate_point_m12(
    n: usize,
    kstar: &ParamPoint<f64>,
    choice: RootChoice,
) -> Result<AlternatePoint, MammillaryError> {
    let p = prepare(n, kstar)?;
    let i = match choice {
        RootChoice::Largest => 0,
        RootChoice::Index(i) => i,
    };
    let r = *p.others.get(i).ok_or_else(|| {
        MammillaryError::Degenerate(format!("root index {i} out of range ({} roots)", p.others.len()))
    })?;
    build(&p, r)
}

/// All `n - 2` alternate points, one per other root of `h`, in descending
/// root order.
pub fn alternate_points_m12(n: usize, kstar: &ParamPoint<f64>) -> Result<Vec<AlternatePoint>, MammillaryError> {
    let p = prepare(n, kstar)?;
    p.others.iter().map(|&r| build(&p, r)).collect()
}

/// A point near the regime where `h` visibly has `n - 1` distinct real
/// roots: the outgoing rates `k31..kn1` are small and the incoming rates
/// `k12..k1n` are well separated.
pub fn proof_regime_point(n: usize, seed: u64, stream: u64) -> ParamPoint<f64> {
    let mut rng = sample::rng(seed, stream);
    let mut point = ParamPoint::new();
    point.insert(Symbol::rate(2, 1), rng.gen_range(0.5..5.0));
    let mut taken: Vec<f64> = Vec::new();
    for s in incoming(n, 2) {
        let v = loop {
            let v: f64 = rng.gen_range(0.5..10.0);
            if taken.iter().all(|t| (t - v).abs() >= 0.5) {
                break v;
            }
        };
        taken.push(v);
        point.insert(s, v);
    }
    for s in outgoing(n, 3) {
        point.insert(s, rng.gen_range(0.001..0.01));
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_at_zero_outgoing() {
        let mut x = proof_regime_point(4, 5, 0);
        for s in outgoing(4, 3) {
            x.insert(s, 0.0);
        }
        let (c, _) = all_coefficients(4, &x).unwrap();
        let sigma: Vec<f64> = incoming(4, 3).iter().map(|s| *x.get(s).unwrap()).collect();
        let e = elementary_symmetric_values(&sigma);
        let h = h_polynomial(4, &c, x.get(&Symbol::rate(2, 1)).unwrap(), &e);
        let roots = real_roots(&h.map(|v| *v)).unwrap();
        let mut want: Vec<f64> = incoming(4, 2).iter().map(|s| *x.get(s).unwrap()).collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in roots.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "{roots:?} vs {want:?}");
        }
    }

    #[test]
    fn alternates_match_coefficients() {
        for n in 4..=6 {
            let x = proof_regime_point(n, 11, n as u64);
            let alts = alternate_points_m12(n, &x).unwrap();
            assert_eq!(alts.len(), n - 2);
            for a in &alts {
                assert!(a.coefficient_error <= 1e-9, "n={n}: {}", a.coefficient_error);
                assert!(a.k12_gap >= 1e-6);
            }
            let first = alternate_point_m12(n, &x, RootChoice::default()).unwrap();
            assert_eq!(first.root, alts[0].root);
        }
    }

    #[test]
    fn equal_incoming_is_singular() {
        let mut x = proof_regime_point(4, 1, 0);
        let v = *x.get(&Symbol::rate(1, 3)).unwrap();
        x.insert(Symbol::rate(1, 4), v);
        assert!(matches!(
            alternate_point_m12(4, &x, RootChoice::Largest),
            Err(MammillaryError::SingularMTilde)
        ));
    }
}
