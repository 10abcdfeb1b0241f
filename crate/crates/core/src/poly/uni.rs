use serde::{Deserialize, Serialize};

use super::PolyError;
use crate::scalar::Scalar;

/// Dense univariate polynomial; `coeffs[i]` multiplies `z^i`.
/// The leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Builds from coefficients listed from the leading term down.
    pub fn from_leading(coeffs_desc: Vec<T>) -> Self {
        let mut c = coeffs_desc;
        c.reverse();
        Self::new(c)
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, z: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_i64(i as i64))
            .collect();
        Self::new(coeffs)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> UniPoly<U> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

/// The unique polynomial of minimal degree through `points`, computed with
/// Newton divided differences. Exact when `T` is exact.
pub fn interpolate<T: Scalar>(points: &[(T, T)]) -> Result<UniPoly<T>, PolyError> {
    for i in 0..points.len() {
        for j in 0..i {
            if points[i].0 == points[j].0 {
                return Err(PolyError::DuplicateAbscissa(format!("{:?}", points[i].0)));
            }
        }
    }
    let n = points.len();
    let xs: Vec<T> = points.iter().map(|p| p.0.clone()).collect();
    let mut dd: Vec<T> = points.iter().map(|p| p.1.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
        }
    }
    if n == 0 {
        return Ok(UniPoly::zero());
    }
    // Expand the Newton form from the innermost factor outward:
    // coeffs <- coeffs * (z - xs[i]) + dd[i].
    let mut coeffs = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        let mut next = vec![T::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone();
            next[k] = next[k].clone() - c.clone() * xs[i].clone();
        }
        next[0] = next[0].clone() + dd[i].clone();
        coeffs = next;
    }
    Ok(UniPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn interpolates_quadratic() {
        let p = interpolate(&[(r(0), r(1)), (r(1), r(2)), (r(2), r(5))]).unwrap();
        assert_eq!(p, UniPoly::new(vec![r(1), r(0), r(1)]));
    }

    #[test]
    fn constant_data_gives_constant() {
        let p = interpolate(&[(r(0), r(4)), (r(3), r(4)), (r(7), r(4))]).unwrap();
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.coeff(0), r(4));
    }

    #[test]
    fn duplicate_abscissa_rejected() {
        let err = interpolate(&[(r(1), r(1)), (r(1), r(2))]).unwrap_err();
        assert!(matches!(err, PolyError::DuplicateAbscissa(_)));
    }

    #[test]
    fn recovers_cubic_exactly() {
        let truth = UniPoly::new(vec![r(-6), r(11), r(-6), r(1)]);
        let pts: Vec<_> = (0..6).map(|x| (r(x), truth.eval(&r(x)))).collect();
        assert_eq!(interpolate(&pts).unwrap(), truth);
    }

    #[test]
    fn derivative_and_trim() {
        let p = UniPoly::new(vec![1.0, 2.0, 3.0, 0.0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.derivative(), UniPoly::new(vec![2.0, 6.0]));
        assert_eq!(p.eval(&2.0), 17.0);
    }
}
