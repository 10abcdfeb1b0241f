//! Structural identities of the star's coefficients.
//!
//! Write `S = {k13, .., k1n}` for the incoming rates of the peripheral
//! compartments other than 2, and `G~` for the star with both edges between
//! 1 and 2 removed. With `g_t` the sum of `π_F` over `t`-edge spanning
//! incoming forests of `G~`, the left-hand coefficients are
//! `c_{n-1-t} = k21 e_t(S) + k12 g_t + g_{t+1}`, and
//! `(g_1..g_{n-2}) = (e_1(S)..e_{n-2}(S)) + M (k31..kn1)` where
//! `M[r][c] = e_r(S \ {k1,c+3})`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{incoming, make, outgoing, Family, FamilyId, MammillaryError};
use crate::ioeq::{coeffs_forest, for_each_forest, forest_monomial};
use crate::linalg::{det_by_minors, Matrix};
use crate::model::{Digraph, Edge};
use crate::poly::{elementary_symmetric, MultiPoly, ParamPoint, Symbol};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub holds: bool,
}

impl Identity {
    fn new(name: impl Into<String>, holds: bool) -> Self {
        Identity {
            name: name.into(),
            holds,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LhsStructure {
    pub n: usize,
    pub sigma: Vec<Symbol>,
    /// `g_0 .. g_{n-1}`.
    pub g: Vec<MultiPoly>,
    pub m: Matrix<MultiPoly>,
}

fn e(t: usize, s: &[Symbol]) -> MultiPoly {
    elementary_symmetric(t, s).unwrap_or_else(|_| MultiPoly::zero())
}

fn var(to: usize, from: usize) -> MultiPoly {
    MultiPoly::var(Symbol::rate(to, from))
}

pub fn lhs_structure(n: usize) -> Result<LhsStructure, MammillaryError> {
    if n < 3 {
        return Err(MammillaryError::TooSmall(n));
    }
    let sigma = incoming(n, 3);
    let tilde = Digraph {
        n,
        edges: {
            let mut edges: Vec<Edge> = (3..=n)
                .flat_map(|k| [Edge::new(1, k), Edge::new(k, 1)])
                .collect();
            edges.sort();
            edges
        },
    };
    let mut g = vec![MultiPoly::zero(); n];
    for_each_forest(&tilde, n, &mut |edges, _| {
        g[edges.len()].add_monomial(forest_monomial(edges));
    });
    let size = n - 2;
    let m = Matrix::from_fn(size, size, |r, c| {
        let rest: Vec<Symbol> = sigma.iter().enumerate().filter(|(i, _)| *i != c).map(|(_, s)| s.clone()).collect();
        e(r, &rest)
    });
    Ok(LhsStructure { n, sigma, g, m })
}

impl LhsStructure {
    /// Exact checks of the boundary values, the matrix formula for `g` and
    /// the left-hand coefficient formula against forest enumeration.
    pub fn identities(&self) -> Result<Vec<Identity>, MammillaryError> {
        let n = self.n;
        let mut out = vec![
            Identity::new("g_0 = 1", self.g[0].is_one()),
            Identity::new(format!("g_{} = 0", n - 1), self.g[n - 1].is_zero()),
        ];
        let x: Vec<MultiPoly> = outgoing(n, 3).into_iter().map(MultiPoly::var).collect();
        let formula = (1..=n - 2).all(|s| {
            let mx: MultiPoly = (0..n - 2).map(|c| &self.m[(s - 1, c)] * &x[c]).sum();
            self.g[s] == &e(s, &self.sigma) + &mx
        });
        out.push(Identity::new("g_s = e_s(S) + (M x)_s for s = 1..n-2", formula));
        let eq = coeffs_forest(&make(n, 1, 2)?)?;
        let (k12, k21) = (var(1, 2), var(2, 1));
        let lhs = (0..=n - 2).all(|t| {
            let rhs = &(&(&k21 * &e(t, &self.sigma)) + &(&k12 * &self.g[t])) + &self.g[t + 1];
            *eq.c(n - 1 - t) == rhs
        });
        out.push(Identity::new(
            "c_{n-1-t} = k21 e_t(S) + k12 g_t + g_{t+1} for t = 0..n-2",
            lhs,
        ));
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VandermondeCheck {
    pub n: usize,
    pub holds: bool,
    /// `+1` or `-1` when `det M = sign * prod_{3<=j<l<=n} (k1j - k1l)`.
    pub sign: i32,
    pub det: MultiPoly,
}

pub fn vandermonde_check(n: usize) -> Result<VandermondeCheck, MammillaryError> {
    let s = lhs_structure(n)?;
    let det = det_by_minors(&s.m);
    let mut v = MultiPoly::one();
    for j in 3..=n {
        for l in j + 1..=n {
            v = &v * &(&var(1, j) - &var(1, l));
        }
    }
    let sign = if det == v {
        1
    } else if det == -&v {
        -1
    } else {
        0
    };
    Ok(VandermondeCheck {
        n,
        holds: sign != 0,
        sign,
        det,
    })
}

/// `sum_t (-1)^t k12^{n-2-t} c_{n-1-t} - (sum_t (-1)^t k12^{n-2-t} e_t) k21
/// - k12^{n-1}` for `t = 0..n-2`, given `c = [c_0..c_{n-1}]` and
/// `e = [e_0..e_{n-2}]` of `S`.
pub fn big_sum_residual<T: Scalar>(n: usize, c: &[T], e: &[T], k12: &T, k21: &T) -> T {
    let mut lhs = T::zero();
    let mut poly = T::zero();
    for t in 0..=n - 2 {
        let mut p = T::one();
        for _ in 0..n - 2 - t {
            p = p * k12.clone();
        }
        let term_c = p.clone() * c[n - 1 - t].clone();
        let term_e = p * e[t].clone();
        if t % 2 == 0 {
            lhs = lhs + term_c;
            poly = poly + term_e;
        } else {
            lhs = lhs - term_c;
            poly = poly - term_e;
        }
    }
    let mut top = T::one();
    for _ in 0..n - 1 {
        top = top * k12.clone();
    }
    lhs - poly * k21.clone() - top
}

/// Exact residual of the alternating-sum identity at `x`, using the
/// forest-engine coefficients of `M_n(1,2)`.
pub fn big_sum_check(n: usize, x: &ParamPoint<Rational>) -> Result<Rational, MammillaryError> {
    let eq = coeffs_forest(&make(n, 1, 2)?)?.evaluate(x)?;
    let sigma: Vec<Rational> = incoming(n, 3)
        .iter()
        .map(|s| x.get(s).cloned().ok_or_else(|| crate::PolyError::MissingSymbol(s.clone())))
        .collect::<Result<_, _>>()?;
    let e = crate::poly::elementary_symmetric_values(&sigma);
    let get = |s: Symbol| x.get(&s).cloned().ok_or(crate::PolyError::MissingSymbol(s));
    let (k12, k21) = (get(Symbol::rate(1, 2))?, get(Symbol::rate(2, 1))?);
    Ok(big_sum_residual(n, &eq.lhs, &e, &k12, &k21))
}

/// The coefficient identities that hold for one family, each checked as an
/// exact polynomial equality against forest enumeration.
pub fn family_identities(id: FamilyId) -> Result<Vec<Identity>, MammillaryError> {
    let n = id.n;
    let eq = coeffs_forest(&id.model())?;
    let (i, _) = id.family.io();
    let d = |k: usize| eq.d(i, k).expect("input present");
    let (k12, k21, k31) = (var(1, 2), var(2, 1), var(3, 1));
    let sigma = incoming(n, 3);
    let mut out = vec![Identity::new("c_0 = 0", eq.c(0).is_zero())];
    if matches!(id.family, Family::F11 | Family::F22) {
        out.push(Identity::new(format!("d_{} = 1", n - 1), d(n - 1).is_one()));
    } else {
        out.push(Identity::new(format!("d_{} = 0", n - 1), d(n - 1).is_zero()));
    }
    match id.family {
        Family::F11 => {
            let all = incoming(n, 2);
            let ok = (0..n).all(|t| *d(n - 1 - t) == e(t, &all));
            out.push(Identity::new("d_{n-1-t} = e_t(k12..k1n)", ok));
        }
        Family::F12 => {
            let ok = (0..=n - 2).all(|t| *d(n - 2 - t) == &k21 * &e(t, &sigma));
            out.push(Identity::new("d_{n-2-t} = k21 e_t(S)", ok));
        }
        Family::F21 => {
            let ok = (0..=n - 2).all(|t| *d(n - 2 - t) == &k12 * &e(t, &sigma));
            out.push(Identity::new("d_{n-2-t} = k12 e_t(S)", ok));
        }
        Family::F22 => {
            let lhs = eq.c(n - 2) - d(n - 3);
            let rhs = &k12 * &(d(n - 2) - &k21);
            out.push(Identity::new("c_{n-2} - d_{n-3} = k12 (d_{n-2} - k21)", lhs == rhs));
            out.push(Identity::new(
                "c_{n-1} - d_{n-2} = k12",
                eq.c(n - 1) - d(n - 2) == k12,
            ));
        }
        Family::F23 => {
            out.push(Identity::new(format!("d_{} = 0", n - 2), d(n - 2).is_zero()));
            let rest = incoming(n, 4);
            let p = &k12 * &k31;
            let ok = (0..=n - 3).all(|t| *d(n - 3 - t) == &p * &e(t, &rest));
            out.push(Identity::new("d_{n-3-t} = k12 k31 e_t(k14..k1n)", ok));
            out.push(Identity::new(format!("d_{} = k12 k31", n - 3), *d(n - 3) == p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn four_compartment_structure() {
        let s = lhs_structure(4).unwrap();
        assert_eq!(s.g[1].to_string(), "1*k13 + 1*k14 + 1*k31 + 1*k41");
        assert_eq!(s.g[2].to_string(), "1*k13*k14 + 1*k13*k41 + 1*k14*k31");
        assert_eq!(s.m[(0, 0)].to_string(), "1");
        assert_eq!(s.m[(0, 1)].to_string(), "1");
        assert_eq!(s.m[(1, 0)].to_string(), "1*k14");
        assert_eq!(s.m[(1, 1)].to_string(), "1*k13");
        assert!(s.identities().unwrap().iter().all(|i| i.holds));
    }

    #[test]
    fn identities_small_n() {
        for n in 3..=6 {
            let s = lhs_structure(n).unwrap();
            for id in s.identities().unwrap() {
                assert!(id.holds, "n={n}: {}", id.name);
            }
        }
    }

    #[test]
    fn vandermonde() {
        let v = vandermonde_check(4).unwrap();
        assert!(v.holds);
        assert_eq!(v.sign, 1);
        for n in 5..=6 {
            assert!(vandermonde_check(n).unwrap().holds);
        }
    }

    #[test]
    fn big_sum_vanishes() {
        for n in [4, 5, 7] {
            let params = make(n, 1, 2).unwrap().parameters();
            let x = sample::rational_point(&params, &mut sample::rng(3, n as u64));
            assert!(big_sum_check(n, &x).unwrap().is_zero());
        }
        // With k12 = 0 the identity collapses to c_1 = e_{n-2}(S) k21.
        let n = 5;
        let params = make(n, 1, 2).unwrap().parameters();
        let mut x = sample::rational_point(&params, &mut sample::rng(4, 0));
        x.insert(Symbol::rate(1, 2), Rational::zero());
        assert!(big_sum_check(n, &x).unwrap().is_zero());
    }

    #[test]
    fn family_identities_hold() {
        for f in Family::ALL {
            for n in f.min_n()..=6 {
                for id in family_identities(FamilyId::new(n, f).unwrap()).unwrap() {
                    assert!(id.holds, "{f} n={n}: {}", id.name);
                }
            }
        }
    }
}
