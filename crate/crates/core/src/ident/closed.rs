//! Closed-form identifiability: a parameter that is a fixed rational
//! function of the coefficients takes one value on every fiber.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{ClosedForm, IdentClass};
use crate::ioeq::CoefficientMap;
use crate::linalg::Matrix;
use crate::model::Model;
use crate::poly::{Monomial, Symbol};
use crate::Rational;

use super::Evidence;

/// Recovery formulas known for particular model families. Consulted before
/// any sampling.
pub trait ClosedFormRegistry: Send + Sync {
    fn closed_form(&self, m: &Model, cm: &CoefficientMap, p: &Symbol, seed: u64) -> Option<ClosedForm>;

    /// A second parameter point with the same coefficients and a different
    /// value of `p`, if the family has a construction for it.
    fn sling_witness(&self, m: &Model, cm: &CoefficientMap, p: &Symbol, seed: u64) -> Option<Evidence>;
}

/// If `p = a_0 + sum_r a_r C_r` with rational `a`, the formula. Such a
/// relation holds at every parameter point, so `p` is globally
/// identifiable.
pub fn linear_closed_form(cm: &CoefficientMap, p: &Symbol) -> Option<ClosedForm> {
    let target = Monomial::var(p.clone());
    if !cm
        .entries()
        .iter()
        .any(|e| e.poly.terms().any(|(m, _)| *m == target))
    {
        return None;
    }
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for e in cm.entries() {
        for (m, _) in e.poly.terms() {
            if m.degree() > 0 {
                let next = index.len();
                index.entry(m.clone()).or_insert(next);
            }
        }
    }
    let rows = index.len();
    let cols = cm.len();
    let mut a = Matrix::from_fn(rows, cols + 1, |_, _| Rational::zero());
    for (c, e) in cm.entries().iter().enumerate() {
        for (m, coef) in e.poly.terms() {
            if let Some(&r) = index.get(m) {
                a[(r, c)] = Rational::from_integer(coef.clone());
            }
        }
    }
    a[(index[&target], cols)] = Rational::one();
    let (r, pivots) = a.rref();
    if pivots.contains(&cols) {
        return None;
    }
    let mut weights: Vec<(usize, Rational)> = Vec::new();
    for (row, &pc) in pivots.iter().enumerate() {
        let w = r[(row, cols)].clone();
        if !w.is_zero() {
            weights.push((pc, w));
        }
    }
    // Constant offset, from the constant terms of the entries.
    let mut offset = Rational::zero();
    for (c, w) in &weights {
        let k = cm.entries()[*c]
            .poly
            .terms()
            .find(|(m, _)| m.degree() == 0)
            .map(|(_, k)| Rational::from_integer(k.clone()))
            .unwrap_or_default();
        offset -= w.clone() * k;
    }
    let mut formula = String::new();
    for (c, w) in &weights {
        push_term(&mut formula, w, &cm.entries()[*c].name);
    }
    if !offset.is_zero() {
        push_term(&mut formula, &offset, "");
    }
    Some(ClosedForm {
        class: IdentClass::GloballyIdentifiable,
        formula: format!("{p} = {formula}"),
    })
}

fn push_term(out: &mut String, w: &Rational, name: &str) {
    let neg = w.is_negative();
    let mag = w.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if name.is_empty() {
        out.push_str(&mag.to_string());
    } else if mag.is_one() {
        out.push_str(name);
    } else {
        out.push_str(&format!("{mag}*{name}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioeq::{coefficient_map, Method};
    use crate::mammillary::make;

    fn map(i: usize, j: usize) -> CoefficientMap {
        coefficient_map(&make(4, i, j).unwrap(), Method::Forest).unwrap()
    }

    #[test]
    fn coefficient_that_is_a_parameter() {
        let f = linear_closed_form(&map(1, 2), &Symbol::rate(2, 1)).unwrap();
        assert_eq!(f.formula, "k21 = d2");
    }

    #[test]
    fn difference_of_coefficients() {
        let f = linear_closed_form(&map(2, 2), &Symbol::rate(1, 2)).unwrap();
        assert_eq!(f.formula, "k12 = c3 - d2");
    }

    #[test]
    fn nonlinear_parameters_have_none() {
        let cm = map(1, 2);
        assert!(linear_closed_form(&cm, &Symbol::rate(1, 2)).is_none());
        assert!(linear_closed_form(&cm, &Symbol::rate(3, 1)).is_none());
    }
}
