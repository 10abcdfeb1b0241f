//! Real roots of univariate polynomials and inversion of elementary
//! symmetric values.
//!
//! Roots come from the eigenvalues of the companion matrix. Eigenvalues
//! that sit within a small relative radius of each other are treated as one
//! multiple root when their centroid is real; every accepted real root is
//! then polished by Newton's method with compensated Horner evaluation.
//!
//! A root of multiplicity m perturbs its eigenvalues by about eps^(1/m), so
//! clustering widens in stages. A real cluster that still has complex
//! eigenvalues close by is held back for the next, wider stage.

use nalgebra::{Complex, DMatrix};

type Complex64 = Complex<f64>;

use super::{PolyError, UniPoly};

/// Imaginary parts below this (relative to `max(1, |z|)`) count as real.
pub const IMAG_CUTOFF: f64 = 1e-8;

/// Successive relative radii for grouping eigenvalues into one multiple root.
const CLUSTER_RADII: [f64; 3] = [1e-5, 1e-4, 1e-3];

/// All real roots of `p`, ascending, each repeated by its multiplicity.
pub fn real_roots(p: &UniPoly<f64>) -> Result<Vec<f64>, PolyError> {
    let deg = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    let coeffs = p.coeffs();
    let lead = coeffs[deg];

    let mut roots = Vec::new();
    // Exact zero roots.
    let zeros = coeffs.iter().take_while(|c| **c == 0.0).count();
    roots.extend(std::iter::repeat(0.0).take(zeros));
    let reduced: Vec<f64> = coeffs[zeros..].iter().map(|c| c / lead).collect();
    let d = reduced.len() - 1;
    if d == 0 {
        return Ok(roots);
    }

    let eig = companion_eigenvalues(&reduced);
    let poly = UniPoly::new(reduced);
    for (centroid, mult) in staged_clusters(eig) {
        let root = if mult == 1 {
            polish(&poly, centroid.re)
        } else {
            // A multiple root is a simple root of the (mult-1)th derivative.
            let mut dp = poly.clone();
            for _ in 1..mult {
                dp = dp.derivative();
            }
            polish(&dp, centroid.re)
        };
        roots.extend(std::iter::repeat(root).take(mult));
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}

/// Recovers the multiset `{x_1..x_m}` from `e = [e_1, .., e_m]` as the roots
/// of `z^m - e_1 z^(m-1) + e_2 z^(m-2) - ... ± e_m`. Sorted ascending.
pub fn recover_multiset(e: &[f64]) -> Result<Vec<f64>, PolyError> {
    if e.is_empty() {
        return Err(PolyError::EmptyInput);
    }
    let m = e.len();
    let mut desc = Vec::with_capacity(m + 1);
    desc.push(1.0);
    for (k, ek) in e.iter().enumerate() {
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        desc.push(sign * ek);
    }
    let roots = real_roots(&UniPoly::from_leading(desc))?;
    if roots.len() < m {
        return Err(PolyError::NonRealRoots {
            expected: m,
            found: roots.len(),
        });
    }
    Ok(roots)
}

/// Eigenvalues of the companion matrix of a monic polynomial given by
/// ascending coefficients.
fn companion_eigenvalues(monic: &[f64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    if d == 1 {
        return vec![Complex64::new(-monic[0], 0.0)];
    }
    let mut c = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        c[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        c[(i, d - 1)] = -monic[i];
    }
    c.complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect()
}

fn is_real(z: Complex64) -> bool {
    z.im.abs() <= IMAG_CUTOFF * z.norm().max(1.0)
}

/// Real clusters as `(centroid, multiplicity)`.
fn staged_clusters(eig: Vec<Complex64>) -> Vec<(Complex64, usize)> {
    let mut pending = eig;
    let mut out = Vec::new();
    for (stage, &radius) in CLUSTER_RADII.iter().enumerate() {
        let last = stage + 1 == CLUSTER_RADII.len();
        let groups = cluster(&pending, radius);
        let complex: Vec<Complex64> = groups
            .iter()
            .filter(|g| !is_real(g.0))
            .flat_map(|g| g.1.iter().copied())
            .collect();
        let mut next = Vec::new();
        for (centroid, members) in groups {
            let reach = 10.0 * radius * centroid.norm().max(1.0);
            let crowded = !last && complex.iter().any(|z| (z - centroid).norm() <= reach);
            if is_real(centroid) && !crowded {
                out.push((centroid, members.len()));
            } else {
                next.extend(members);
            }
        }
        pending = next;
    }
    out
}

/// Groups eigenvalues by single linkage within `radius` (relative).
fn cluster(eig: &[Complex64], radius: f64) -> Vec<(Complex64, Vec<Complex64>)> {
    let n = eig.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in 0..i {
            let r = radius * eig[i].norm().max(eig[j].norm()).max(1.0);
            if (eig[i] - eig[j]).norm() <= r {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(eig[i]),
            None => groups.push((r, vec![eig[i]])),
        }
    }
    groups
        .into_iter()
        .map(|(_, m)| (m.iter().sum::<Complex64>() / m.len() as f64, m))
        .collect()
}

fn polish(p: &UniPoly<f64>, mut x: f64) -> f64 {
    let dp = p.derivative();
    let mut fx = horner_compensated(p.coeffs(), x).abs();
    for _ in 0..30 {
        let d = dp.eval(&x);
        if d == 0.0 || fx == 0.0 {
            break;
        }
        let step = horner_compensated(p.coeffs(), x) / d;
        let cand = x - step;
        let fc = horner_compensated(p.coeffs(), cand).abs();
        if fc >= fx {
            break;
        }
        x = cand;
        fx = fc;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Horner evaluation with error-free transformations; about twice the
/// working precision.
fn horner_compensated(coeffs: &[f64], x: f64) -> f64 {
    let mut s = match coeffs.last() {
        Some(c) => *c,
        None => return 0.0,
    };
    let mut err = 0.0;
    for c in coeffs.iter().rev().skip(1) {
        let (p, pe) = two_prod(s, x);
        let (t, se) = two_sum(p, *c);
        s = t;
        err = err * x + (pe + se);
    }
    s + err
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn cubic_with_integer_roots() {
        // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
        let p = UniPoly::new(vec![-6.0, 11.0, -6.0, 1.0]);
        let r = real_roots(&p).unwrap();
        assert!(close(&r, &[1.0, 2.0, 3.0], 1e-10), "{r:?}");
    }

    #[test]
    fn no_real_roots() {
        let p = UniPoly::new(vec![1.0, 0.0, 1.0]);
        assert!(real_roots(&p).unwrap().is_empty());
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(matches!(
            real_roots(&UniPoly::zero()),
            Err(PolyError::ZeroPolynomial)
        ));
    }

    #[test]
    fn repeated_and_zero_roots() {
        // z^2 (z-2)^2 = z^4 - 4z^3 + 4z^2
        let p = UniPoly::new(vec![0.0, 0.0, 4.0, -4.0, 1.0]);
        let r = real_roots(&p).unwrap();
        assert!(close(&r, &[0.0, 0.0, 2.0, 2.0], 1e-10), "{r:?}");
    }

    #[test]
    fn triple_root_away_from_one() {
        // (z-18)^3
        let p = UniPoly::new(vec![-5832.0, 972.0, -54.0, 1.0]);
        let r = real_roots(&p).unwrap();
        assert!(close(&r, &[18.0, 18.0, 18.0], 1e-8), "{r:?}");
    }

    #[test]
    fn near_real_complex_pair_is_not_a_root() {
        // (z-3)(z^2 - 10z + 25.01): roots 3 and 5 +- 0.1i
        let p = UniPoly::new(vec![-75.03, 55.01, -13.0, 1.0]);
        let r = real_roots(&p).unwrap();
        assert!(close(&r, &[3.0], 1e-10), "{r:?}");
    }

    #[test]
    fn multiset_examples() {
        let r = recover_multiset(&[10.0, 31.0, 30.0]).unwrap();
        assert!(close(&r, &[2.0, 3.0, 5.0], 1e-10), "{r:?}");
        let r = recover_multiset(&[4.0, 4.0]).unwrap();
        assert!(close(&r, &[2.0, 2.0], 1e-10), "{r:?}");
        assert!(matches!(
            recover_multiset(&[0.0, 1.0]),
            Err(PolyError::NonRealRoots { expected: 2, found: 0 })
        ));
    }

    #[test]
    fn compensated_horner_is_accurate() {
        // (x-1)^5 near x = 1 suffers cancellation with plain Horner.
        let c = [-1.0, 5.0, -10.0, 10.0, -5.0, 1.0];
        let x = 1.0 + 1e-3;
        let v = horner_compensated(&c, x);
        assert!((v - 1e-15).abs() < 1e-20, "{v}");
    }
}
