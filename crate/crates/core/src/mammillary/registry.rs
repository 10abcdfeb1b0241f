//! Closed forms and constructive witnesses for the five families, offered
//! to the classifier before any sampling. Every formula is re-checked
//! exactly at a random point before it is reported.

use super::alternate::{alternate_point_m12, proof_regime_point, RootChoice};
use super::recover::recover;
use super::{identify, Family};
use crate::ident::{ClosedForm, ClosedFormRegistry, Evidence, EvidenceKind, IdentClass};
use crate::ioeq::{coeffs_forest, CoefficientMap};
use crate::model::Model;
use crate::poly::Symbol;
use crate::sample;

#[derive(Clone, Copy, Debug, Default)]
pub struct MammillaryRegistry;

impl ClosedFormRegistry for MammillaryRegistry {
    fn closed_form(&self, m: &Model, _cm: &CoefficientMap, p: &Symbol, seed: u64) -> Option<ClosedForm> {
        let (id, sigma) = identify(m)?;
        let q = sigma.rename(p);
        let n = id.n;
        let k12 = Symbol::rate(1, 2);
        let k21 = Symbol::rate(2, 1);
        use IdentClass::*;
        let (class, rhs) = match id.family {
            Family::F12 if q == k21 => (GloballyIdentifiable, format!("d{}", n - 2)),
            Family::F21 if q == k12 => (GloballyIdentifiable, format!("d{}", n - 2)),
            Family::F21 if q == k21 => (
                GenericallyGloballyIdentifiable,
                format!(
                    "(L - a^{e}) / P where a = d{b}, L = sum_t (-1)^t a^({b}-t) c{{{e}-t}}, \
                     P = sum_t (-1)^t a^({b}-t) d{{{b}-t}} / a, t = 0..{b}",
                    e = n - 1,
                    b = n - 2
                ),
            ),
            Family::F22 if q == k12 => (GloballyIdentifiable, format!("c{} - d{}", n - 1, n - 2)),
            Family::F22 if q == k21 => (
                GenericallyGloballyIdentifiable,
                format!(
                    "d{b} - (c{b} - d{c}) / (c{a} - d{b})",
                    a = n - 1,
                    b = n - 2,
                    c = n - 3
                ),
            ),
            Family::F23 if n == 4 && q == Symbol::rate(1, 4) => {
                (GenericallyGloballyIdentifiable, "d0 / d1".to_string())
            }
            _ => return None,
        };
        // Exact check on the representative.
        let rep = id.model();
        let x = sample::rational_point(&rep.parameters(), &mut sample::rng(seed, 0));
        let eq = coeffs_forest(&rep).ok()?.evaluate(&x).ok()?;
        let r = recover(id, &eq).ok()?;
        if r.value(&q) != x.get(&q) {
            return None;
        }
        let relabeled = if sigma.is_identity() {
            String::new()
        } else {
            format!(" (family {id} after relabeling {sigma})")
        };
        Some(ClosedForm {
            class,
            formula: format!("{p} = {rhs}{relabeled}"),
        })
    }

    fn sling_witness(&self, m: &Model, _cm: &CoefficientMap, p: &Symbol, seed: u64) -> Option<Evidence> {
        let (id, sigma) = identify(m)?;
        if id.family != Family::F12 || sigma.rename(p) != Symbol::rate(1, 2) {
            return None;
        }
        (0..16u64).find_map(|stream| {
            let x = proof_regime_point(id.n, seed, stream);
            let a = alternate_point_m12(id.n, &x, RootChoice::Largest).ok()?;
            (a.coefficient_error <= 1e-9 && a.k12_gap >= 1e-6).then(|| {
                Evidence::new(
                    EvidenceKind::ConstructiveWitness,
                    format!(
                        "alternate point moves k12 from {:.6} to {:.6}; coefficients agree to relative error {:.1e}",
                        x.get(&Symbol::rate(1, 2)).copied().unwrap_or(f64::NAN),
                        a.root,
                        a.coefficient_error
                    ),
                )
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioeq::{coefficient_map, Method};
    use crate::mammillary::make;

    #[test]
    fn registered_forms() {
        let m = make(5, 2, 2).unwrap();
        let cm = coefficient_map(&m, Method::Forest).unwrap();
        let cf = MammillaryRegistry.closed_form(&m, &cm, &Symbol::rate(1, 2), 1).unwrap();
        assert_eq!(cf.formula, "k12 = c4 - d3");
        assert_eq!(cf.class, IdentClass::GloballyIdentifiable);
        assert!(MammillaryRegistry.closed_form(&m, &cm, &Symbol::rate(1, 3), 1).is_none());
    }

    #[test]
    fn relabeled_model() {
        // Input 1, output 4: family (1,2) with 4 playing the role of 2.
        let m = make(4, 1, 4).unwrap();
        let cm = coefficient_map(&m, Method::Forest).unwrap();
        let cf = MammillaryRegistry.closed_form(&m, &cm, &Symbol::rate(4, 1), 1).unwrap();
        assert!(cf.formula.starts_with("k41 = d2"), "{}", cf.formula);
        assert!(MammillaryRegistry.sling_witness(&m, &cm, &Symbol::rate(1, 4), 1).is_some());
    }
}
