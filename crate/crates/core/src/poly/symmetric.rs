use num_traits::{One, Zero};

use super::{MultiPoly, PolyError, Symbol};
use crate::scalar::Scalar;

/// `e_k(S)`, the sum of all `k`-fold products of distinct members of `S`.
/// `e_0 = 1`.
pub fn elementary_symmetric(k: usize, symbols: &[Symbol]) -> Result<MultiPoly, PolyError> {
    if k > symbols.len() {
        return Err(PolyError::DegreeOutOfRange {
            k,
            len: symbols.len(),
        });
    }
    let vars: Vec<MultiPoly> = symbols.iter().cloned().map(MultiPoly::var).collect();
    Ok(elementary_symmetric_all(&vars).swap_remove(k))
}

/// `[e_0, e_1, ..., e_m]` of arbitrary polynomials, by the usual
/// one-element-at-a-time recurrence.
pub fn elementary_symmetric_all(items: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut e = vec![MultiPoly::zero(); items.len() + 1];
    e[0] = MultiPoly::one();
    for (i, x) in items.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let add = &e[k - 1] * x;
            e[k] += &add;
        }
    }
    e
}

/// `[e_0, e_1, ..., e_m]` of numeric values.
pub fn elementary_symmetric_values<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut e = vec![T::zero(); values.len() + 1];
    e[0] = T::one();
    for (i, x) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let add = e[k - 1].clone() * x.clone();
            e[k] = e[k].clone() + add;
        }
    }
    e
}
