use lcm_ident::poly::{elementary_symmetric_values, real_roots, recover_multiset, Monomial};
use lcm_ident::{det_by_minors, ExactMatrix, MultiPoly, ParamPoint, Rational, Scalar, Symbol, UniPoly};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn syms() -> [Symbol; 3] {
    [Symbol::rate(1, 2), Symbol::rate(2, 1), Symbol::rate(1, 3)]
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..3], -5i64..=5), 0..6).prop_map(|terms| {
        let s = syms();
        MultiPoly::from_terms(terms.into_iter().map(|(e, c)| {
            let m = Monomial::from_factors(s.iter().cloned().zip(e).filter(|(_, k)| *k > 0));
            (m, BigInt::from(c))
        }))
    })
}

fn point() -> impl Strategy<Value = ParamPoint<Rational>> {
    [(-20i64..=20, 1i64..=7), (-20i64..=20, 1i64..=7), (-20i64..=20, 1i64..=7)].prop_map(|v| {
        syms()
            .into_iter()
            .zip(v)
            .map(|(s, (a, b))| (s, Rational::new(a.into(), b.into())))
            .collect()
    })
}

proptest! {
    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), x in point()) {
        let (a, b) = (p.evaluate(&x).unwrap(), q.evaluate(&x).unwrap());
        prop_assert_eq!((&p + &q).evaluate(&x).unwrap(), &a + &b);
        prop_assert_eq!((&p * &q).evaluate(&x).unwrap(), &a * &b);
    }

    #[test]
    fn text_round_trip(p in poly()) {
        let back: MultiPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn derivative_matches_finite_differences(p in poly(), x in point()) {
        let xf = x.to_f64();
        for s in syms() {
            let d = p.differentiate(&s).evaluate(&xf).unwrap();
            let v = *xf.get(&s).unwrap();
            let h = 1e-6 * v.abs().max(1.0);
            let (mut up, mut dn) = (xf.clone(), xf.clone());
            up.insert(s.clone(), v + h);
            dn.insert(s.clone(), v - h);
            let fd = (p.evaluate(&up).unwrap() - p.evaluate(&dn).unwrap()) / (2.0 * h);
            // Size of the largest cancelling sum, which bounds the rounding error.
            let abs = MultiPoly::from_terms(p.terms().map(|(m, c)| (m.clone(), c.abs())));
            let mag = abs.evaluate(&xf.map(|v| v.abs())).unwrap().max(1.0);
            prop_assert!((fd - d).abs() <= 1e-6 * mag / v.abs().max(1.0), "{} d/d{}: {} vs {}", p, s, d, fd);
        }
    }

    #[test]
    fn vieta_recovery(start in 0.5f64..3.0, gaps in prop::collection::vec(0.3f64..2.0, 0..6)) {
        let mut roots = vec![start];
        for g in gaps {
            roots.push(roots.last().unwrap() + g);
        }
        let e = elementary_symmetric_values(&roots);
        let got = recover_multiset(&e[1..]).unwrap();
        prop_assert_eq!(got.len(), roots.len());
        for (a, b) in got.iter().zip(&roots) {
            prop_assert!((a - b).abs() <= 1e-8 * b.abs(), "{:?} vs {:?}", got, roots);
        }
    }

    #[test]
    fn roots_of_products_of_linear_factors(rs in prop::collection::vec(-20i32..=20, 1..6)) {
        let p = rs.iter().fold(UniPoly::new(vec![1.0]), |acc, r| {
            let c = acc.coeffs();
            let mut out = vec![0.0; c.len() + 1];
            for (k, v) in c.iter().enumerate() {
                out[k + 1] += v;
                out[k] -= *r as f64 * v;
            }
            UniPoly::new(out)
        });
        let mut want: Vec<f64> = rs.iter().map(|r| *r as f64).collect();
        want.sort_by(f64::total_cmp);
        let got = real_roots(&p).unwrap();
        prop_assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0), "{:?} vs {:?}", got, want);
        }
    }

    #[test]
    fn elimination_and_cofactor_determinants_agree(v in prop::collection::vec(-9i64..=9, 16)) {
        let m = ExactMatrix::from_vec(4, 4, v.into_iter().map(Rational::from_i64).collect());
        prop_assert_eq!(m.det().unwrap(), det_by_minors(&m));
    }
}
