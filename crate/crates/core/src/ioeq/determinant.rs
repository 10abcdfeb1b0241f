//! Coefficients from `det(sI - A)` and the signed minors
//! `(-1)^(i+j) det[(sI - A)^{j,i}]` (row `j` and column `i` removed).
//!
//! The numeric route evaluates both at `s = 0..=n` with exact elimination
//! and interpolates in `s`. The symbolic route expands the determinants
//! over polynomial entries with an auxiliary indeterminate for `s`.

use num_traits::{One, Zero};

use super::{IoEquation, IoError};
use crate::linalg::{det_by_minors, Matrix};
use crate::model::Model;
use crate::poly::{interpolate, MultiPoly, ParamPoint, Symbol};
use crate::Rational;

/// Largest n accepted by the symbolic determinant route.
pub const SYMBOLIC_LIMIT: usize = 8;

fn check_io(m: &Model) -> Result<(), IoError> {
    if m.inputs().is_empty() {
        return Err(IoError::NoInputs);
    }
    if m.outputs().is_empty() {
        return Err(IoError::NoOutputs);
    }
    Ok(())
}

fn minor_sign(i: usize, j: usize, flip: bool) -> bool {
    ((i + j) % 2 == 1) != flip
}

/// One equation per output, with exact values at `point`.
pub fn coeffs_determinant(
    m: &Model,
    point: &ParamPoint<Rational>,
) -> Result<Vec<IoEquation<Rational>>, IoError> {
    coeffs_determinant_with(m, point, false)
}

/// As [`coeffs_determinant`]; `flip_minor_sign` negates every right-hand
/// side, which is only useful for exercising the cross-check.
pub fn coeffs_determinant_with(
    m: &Model,
    point: &ParamPoint<Rational>,
    flip_minor_sign: bool,
) -> Result<Vec<IoEquation<Rational>>, IoError> {
    check_io(m)?;
    let n = m.n();
    let a = m.compartmental_matrix_at(point)?;
    let samples: Vec<Matrix<Rational>> = (0..=n)
        .map(|s| {
            let s = Rational::from_integer((s as i64).into());
            Matrix::from_fn(n, n, |r, c| {
                let diag = if r == c { s.clone() } else { Rational::zero() };
                diag - a[(r, c)].clone()
            })
        })
        .collect();
    let xs: Vec<Rational> = (0..=n)
        .map(|s| Rational::from_integer((s as i64).into()))
        .collect();

    let char_values: Vec<Rational> = samples.iter().map(|b| b.det()).collect::<Result<_, _>>()?;
    let char_poly = interpolate(&xs.iter().cloned().zip(char_values).collect::<Vec<_>>())?;
    if char_poly.degree() != Some(n) || !char_poly.coeff(n).is_one() {
        return Err(IoError::Invariant(
            "characteristic polynomial is not monic of degree n".into(),
        ));
    }
    let lhs: Vec<Rational> = (0..n).map(|k| char_poly.coeff(k)).collect();

    let mut out = Vec::new();
    for &i in m.outputs() {
        let mut rhs = Vec::new();
        for &j in m.inputs() {
            let negate = minor_sign(i, j, flip_minor_sign);
            let values: Vec<(Rational, Rational)> = samples
                .iter()
                .zip(&xs)
                .map(|(b, x)| {
                    let d = b.minor(j - 1, i - 1).det()?;
                    Ok((x.clone(), if negate { -d } else { d }))
                })
                .collect::<Result<_, IoError>>()?;
            let p = interpolate(&values)?;
            if p.degree().is_some_and(|d| d >= n) {
                return Err(IoError::Invariant("minor has degree >= n in s".into()));
            }
            rhs.push((j, (0..n).map(|k| p.coeff(k)).collect()));
        }
        out.push(IoEquation {
            n,
            output: i,
            lhs: lhs.clone(),
            rhs,
        });
    }
    Ok(out)
}

/// One symbolic equation per output, by cofactor expansion of `sI - A`.
pub fn coeffs_symbolic(m: &Model) -> Result<Vec<IoEquation<MultiPoly>>, IoError> {
    check_io(m)?;
    let n = m.n();
    if n > SYMBOLIC_LIMIT {
        return Err(IoError::TooLarge {
            n,
            limit: SYMBOLIC_LIMIT,
        });
    }
    let s = Symbol::named("s");
    let sv = MultiPoly::var(s.clone());
    let a = m.compartmental_matrix();
    let b = Matrix::from_fn(n, n, |r, c| {
        if r == c {
            &sv - &a[(r, c)]
        } else {
            -&a[(r, c)]
        }
    });
    let pad = |mut v: Vec<MultiPoly>| {
        v.resize(n + 1, MultiPoly::zero());
        v
    };
    let char_poly = pad(det_by_minors(&b).coefficients_in(&s));
    if !char_poly[n].is_one() {
        return Err(IoError::Invariant("characteristic polynomial is not monic".into()));
    }
    let lhs: Vec<MultiPoly> = char_poly[..n].to_vec();
    let mut out = Vec::new();
    for &i in m.outputs() {
        let mut rhs = Vec::new();
        for &j in m.inputs() {
            let mut minor = det_by_minors(&b.minor(j - 1, i - 1));
            if minor_sign(i, j, false) {
                minor = -minor;
            }
            let d = pad(minor.coefficients_in(&s));
            if !d[n].is_zero() {
                return Err(IoError::Invariant("minor has degree >= n in s".into()));
            }
            rhs.push((j, d[..n].to_vec()));
        }
        out.push(IoEquation {
            n,
            output: i,
            lhs: lhs.clone(),
            rhs,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioeq::coeffs_forest;
    use crate::sample;
    use crate::Scalar;

    fn star(n: usize, i: usize, j: usize) -> Model {
        let edges = (2..=n).flat_map(|k| [(1, k), (k, 1)]);
        Model::new(n, edges, [i], [j], []).unwrap()
    }

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn matches_forest_on_four_star() {
        let m = star(4, 1, 2);
        let forest = coeffs_forest(&m).unwrap();
        for t in 0..30 {
            let pt = sample::rational_point(&m.parameters(), &mut sample::rng(3, t));
            let det = coeffs_determinant(&m, &pt).unwrap();
            assert_eq!(forest.evaluate(&pt).unwrap(), det[0]);
        }
    }

    #[test]
    fn minor_sign_for_input_one_output_two() {
        // With the sign flipped the right-hand side changes sign.
        let m = star(4, 1, 2);
        let pt = sample::rational_point(&m.parameters(), &mut sample::rng(1, 0));
        let good = coeffs_determinant(&m, &pt).unwrap();
        let bad = coeffs_determinant_with(&m, &pt, true).unwrap();
        assert_eq!(good[0].rhs[0].1[2], -bad[0].rhs[0].1[2].clone());
        assert_eq!(good[0].rhs[0].1[2], pt.get(&Symbol::rate(2, 1)).unwrap().clone());
    }

    #[test]
    fn leaky_three_star_by_cofactors() {
        // A = [[-k01-k21-k31, k12, k13], [k21, -k12, 0], [k31, 0, -k13]]
        let m = Model::new(3, [(1, 2), (2, 1), (1, 3), (3, 1)], [1], [1], [1]).unwrap();
        let vals = [(0, 1, 2), (1, 2, 3), (1, 3, 5), (2, 1, 7), (3, 1, 11)];
        let pt: ParamPoint<Rational> = vals
            .iter()
            .map(|&(t, f, v)| (Symbol::rate(t, f), q(v)))
            .collect();
        let eq = &coeffs_determinant(&m, &pt).unwrap()[0];
        // c_0 = det(-A) = k01 k12 k13 by direct expansion.
        let (k01, k12, k13, k21, k31) = (2, 3, 5, 7, 11);
        let a = [
            [-k01 - k21 - k31, k12, k13],
            [k21, -k12, 0],
            [k31, 0, -k13],
        ];
        let det3 = |m: [[i64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let neg = a.map(|r| r.map(|x| -x));
        assert_eq!(eq.lhs[0], q(det3(neg)));
        assert_eq!(eq.lhs[0], q(k01 * k12 * k13));
        assert!(!eq.lhs[0].is_zero());
        let sym = &coeffs_symbolic(&m).unwrap()[0];
        assert_eq!(sym.evaluate(&pt).unwrap(), *eq);
    }

    #[test]
    fn symbolic_matches_forest() {
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3)] {
            let m = star(5, i, j);
            assert_eq!(coeffs_symbolic(&m).unwrap()[0], coeffs_forest(&m).unwrap());
        }
    }

    #[test]
    fn requires_inputs() {
        let m = Model::new(2, [(1, 2), (2, 1)], [], [1], []).unwrap();
        let pt = sample::rational_point(&m.parameters(), &mut sample::rng(0, 0));
        assert!(matches!(coeffs_determinant(&m, &pt), Err(IoError::NoInputs)));
    }
}
