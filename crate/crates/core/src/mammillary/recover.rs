//! Parameter recovery from coefficient values, one recipe per family.
//!
//! Uniquely determined parameters come back as values; parameters known
//! only up to a finite set come back as candidate sets (real roots, sorted
//! ascending).

use serde::{Deserialize, Serialize};

use super::alternate::h_polynomial;
use super::{Family, FamilyId, MammillaryError};
use crate::ioeq::IoEquation;
use crate::poly::{real_roots, recover_multiset, Symbol};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recovery<T> {
    pub family: FamilyId,
    pub values: Vec<(Symbol, T)>,
    /// Identifiable combinations such as `k12*k31`.
    pub combinations: Vec<(String, T)>,
    /// Candidate sets (for one parameter) or recovered multisets (for a set
    /// of parameters that the coefficients cannot tell apart).
    pub sets: Vec<(String, Vec<f64>)>,
}

impl<T> Recovery<T> {
    pub fn value(&self, s: &Symbol) -> Option<&T> {
        self.values.iter().find(|(p, _)| p == s).map(|(_, v)| v)
    }

    pub fn set(&self, name: &str) -> Option<&[f64]> {
        self.sets.iter().find(|(p, _)| p == name).map(|(_, v)| v.as_slice())
    }
}

fn nonzero<T: Scalar>(v: T, what: &str) -> Result<T, MammillaryError> {
    if v.is_zero() {
        Err(MammillaryError::ZeroDenominator(what.into()))
    } else {
        Ok(v)
    }
}

fn pow<T: Scalar>(x: &T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, _| acc * x.clone())
}

/// `[1, d_{top-1}/d_top, .., d_0/d_top]`: the elementary symmetric values
/// encoded by a run of right-hand coefficients.
fn ratios<T: Scalar>(d: &[T], top: usize) -> Vec<T> {
    (0..=top).map(|t| d[top - t].clone() / d[top].clone()).collect()
}

fn multiset<T: Scalar>(e: &[T]) -> Result<Vec<f64>, MammillaryError> {
    let vals: Vec<f64> = e[1..].iter().map(Scalar::to_f64).collect();
    Ok(recover_multiset(&vals)?)
}

fn set_name(from: usize, n: usize) -> String {
    format!("{{k1{from}..k1{n}}}")
}

/// Recovers what the coefficients determine for the family representative.
/// `eq` holds `c_0..c_{n-1}` and the right-hand side for the family input.
pub fn recover<T: Scalar>(id: FamilyId, eq: &IoEquation<T>) -> Result<Recovery<T>, MammillaryError> {
    let n = id.n;
    if eq.n != n || eq.lhs.len() != n {
        return Err(MammillaryError::Degenerate(format!(
            "coefficient vector has length {} for n = {n}",
            eq.lhs.len()
        )));
    }
    let (input, _) = id.family.io();
    let d: Vec<T> = (0..n)
        .map(|k| eq.d(input, k).cloned())
        .collect::<Option<_>>()
        .ok_or_else(|| MammillaryError::Degenerate(format!("no right-hand side for input {input}")))?;
    let c = &eq.lhs;
    let mut out = Recovery {
        family: id,
        values: Vec::new(),
        combinations: Vec::new(),
        sets: Vec::new(),
    };
    let k12 = Symbol::rate(1, 2);
    let k21 = Symbol::rate(2, 1);
    match id.family {
        Family::F11 => {
            let e: Vec<T> = (0..n).map(|t| d[n - 1 - t].clone()).collect();
            out.sets.push((set_name(2, n), multiset(&e)?));
            out.combinations.push((
                format!("k21+..+k{n}1"),
                c[n - 1].clone() - d[n - 2].clone(),
            ));
        }
        Family::F12 => {
            let top = nonzero(d[n - 2].clone(), "d_{n-2} = 0")?;
            let e = ratios(&d, n - 2);
            let h = h_polynomial(n, c, &top, &e).map(Scalar::to_f64);
            out.values.push((k21, top));
            out.sets.push((k12.to_string(), real_roots(&h)?));
            out.sets.push((set_name(3, n), multiset(&e)?));
        }
        Family::F21 => {
            let a = nonzero(d[n - 2].clone(), "d_{n-2} = 0")?;
            let e = ratios(&d, n - 2);
            let mut l = T::zero();
            let mut p = T::zero();
            for t in 0..=n - 2 {
                let w = pow(&a, n - 2 - t);
                let (tc, te) = (w.clone() * c[n - 1 - t].clone(), w * e[t].clone());
                if t % 2 == 0 {
                    l = l + tc;
                    p = p + te;
                } else {
                    l = l - tc;
                    p = p - te;
                }
            }
            let p = nonzero(p, "coefficient of k21 vanishes")?;
            let b = (l - pow(&a, n - 1)) / p;
            out.values.push((k12, a));
            out.values.push((k21, b));
            out.sets.push((set_name(3, n), multiset(&e)?));
        }
        Family::F22 => {
            let a = nonzero(c[n - 1].clone() - d[n - 2].clone(), "c_{n-1} = d_{n-2}")?;
            let b = d[n - 2].clone() - (c[n - 2].clone() - d[n - 3].clone()) / a.clone();
            out.values.push((k12, a));
            out.values.push((k21, b));
        }
        Family::F23 => {
            let p = nonzero(d[n - 3].clone(), "d_{n-3} = 0")?;
            out.combinations.push(("k12*k31".into(), p.clone()));
            if n == 4 {
                out.values.push((Symbol::rate(1, 4), d[0].clone() / p));
            } else {
                let e = ratios(&d, n - 3);
                out.sets.push((set_name(4, n), multiset(&e)?));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioeq::coeffs_forest;
    use crate::poly::ParamPoint;
    use crate::sample;
    use crate::Rational;

    fn exact_case(f: Family, n: usize, seed: u64) -> (ParamPoint<Rational>, Recovery<Rational>) {
        let id = FamilyId::new(n, f).unwrap();
        let m = id.model();
        let x = sample::rational_point(&m.parameters(), &mut sample::rng(seed, 0));
        let eq = coeffs_forest(&m).unwrap().evaluate(&x).unwrap();
        (x.clone(), recover(id, &eq).unwrap())
    }

    #[test]
    fn exact_closed_forms() {
        for (f, n) in [(Family::F12, 5), (Family::F21, 5), (Family::F22, 4), (Family::F22, 6), (Family::F23, 4)] {
            let (x, r) = exact_case(f, n, 9);
            assert!(!r.values.is_empty());
            for (s, v) in &r.values {
                assert_eq!(x.get(s), Some(v), "{f} n={n} {s}");
            }
        }
    }

    #[test]
    fn two_three_multiset() {
        let (x, r) = exact_case(Family::F23, 5, 2);
        let mut want: Vec<f64> = [4, 5].iter().map(|j| x.get(&Symbol::rate(1, *j)).unwrap().to_f64()).collect();
        want.sort_by(f64::total_cmp);
        let got = r.set("{k14..k15}").unwrap();
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-9 * b.abs());
        }
        let p = x.get(&Symbol::rate(1, 2)).unwrap() * x.get(&Symbol::rate(3, 1)).unwrap();
        assert_eq!(r.combinations[0].1, p);
    }

    #[test]
    fn zero_denominator() {
        let id = FamilyId::new(4, Family::F22).unwrap();
        let m = id.model();
        let mut x = sample::rational_point(&m.parameters(), &mut sample::rng(1, 0));
        x.insert(Symbol::rate(1, 2), Rational::from_i64(0));
        let eq = coeffs_forest(&m).unwrap().evaluate(&x).unwrap();
        assert!(matches!(recover(id, &eq), Err(MammillaryError::ZeroDenominator(_))));
    }
}
