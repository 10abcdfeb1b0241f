use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ParamPoint, PolyError, Symbol};
use crate::scalar::Scalar;

/// A monomial: symbols with positive exponents, sorted by symbol.
///
/// Ordered graded-lexicographically, with earlier symbols treated as the
/// larger variables (so `k12 > k13 > k21`).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    /// Product of the given powers, in any order; zero exponents are dropped.
    pub fn from_factors(factors: impl IntoIterator<Item = (Symbol, u32)>) -> Self {
        let mut f: Vec<(Symbol, u32)> = factors.into_iter().filter(|(_, e)| *e > 0).collect();
        f.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(f.len());
        for (s, e) in f {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, s: &Symbol) -> u32 {
        self.0
            .binary_search_by(|(t, _)| t.cmp(s))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    fn without(&self, s: &Symbol) -> (u32, Monomial) {
        let e = self.exponent(s);
        let rest = self.0.iter().filter(|(t, _)| t != s).cloned().collect();
        (e, Monomial(rest))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let mut k = 0;
        loop {
            match (a.get(k), b.get(k)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((sa, ea)), Some((sb, eb))) => {
                    match sa.cmp(sb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {}
                    }
                    match ea.cmp(eb) {
                        Ordering::Equal => k += 1,
                        o => return o,
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse multivariate polynomial with arbitrary-precision integer
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    pub fn var(s: Symbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(s), BigInt::one());
        MultiPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds the monomial with coefficient one.
    pub fn add_monomial(&mut self, m: Monomial) {
        self.add_term(m, BigInt::one());
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(s, _)| s.clone()))
            .collect()
    }

    pub fn pow(&self, exp: i64) -> Result<MultiPoly, PolyError> {
        if exp < 0 {
            return Err(PolyError::NegativeExponent(exp));
        }
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, s: &Symbol) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(s);
            if e == 0 {
                continue;
            }
            let factors = m
                .0
                .iter()
                .filter_map(|(t, k)| match (t == s, *k) {
                    (true, 1) => None,
                    (true, k) => Some((t.clone(), k - 1)),
                    (false, k) => Some((t.clone(), k)),
                })
                .collect();
            out.add_term(Monomial(factors), c * BigInt::from(e));
        }
        out
    }

    pub fn evaluate<T: Scalar>(&self, point: &ParamPoint<T>) -> Result<T, PolyError> {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut term = T::from_bigint(c);
            for (s, e) in &m.0 {
                let v = point
                    .get(s)
                    .ok_or_else(|| PolyError::MissingSymbol(s.clone()))?;
                for _ in 0..*e {
                    term = term * v.clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Exact evaluation at an integer point, avoiding rational normalization.
    pub fn evaluate_integer(&self, point: &ParamPoint<BigInt>) -> Result<BigInt, PolyError> {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (s, e) in &m.0 {
                let v = point
                    .get(s)
                    .ok_or_else(|| PolyError::MissingSymbol(s.clone()))?;
                term *= v.pow(*e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitute values for some symbols; the rest stay symbolic.
    pub fn substitute(&self, values: &BTreeMap<Symbol, BigInt>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for (s, e) in &m.0 {
                match values.get(s) {
                    Some(v) => coef *= v.pow(*e),
                    None => rest.push((s.clone(), *e)),
                }
            }
            out.add_term(Monomial(rest), coef);
        }
        out
    }

    /// Apply a renaming of symbols. The renaming must be injective on the
    /// symbols present.
    pub fn rename(&self, mut f: impl FnMut(&Symbol) -> Symbol) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut mono = Monomial::one();
            for (s, e) in &m.0 {
                let v = Monomial(vec![(f(s), *e)]);
                mono = mono.mul(&v);
            }
            out.add_term(mono, c.clone());
        }
        out
    }

    /// View as a polynomial in `s`: entry `k` is the coefficient of `s^k`.
    pub fn coefficients_in(&self, s: &Symbol) -> Vec<MultiPoly> {
        let deg = self.degree_in(s) as usize;
        let mut out = vec![MultiPoly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.without(s);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Flatten into an evaluator indexed by position in `symbols`.
    pub fn compile(&self, symbols: &[Symbol]) -> Result<CompiledPoly, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut factors = Vec::with_capacity(m.0.len());
            for (s, e) in &m.0 {
                let idx = symbols
                    .iter()
                    .position(|t| t == s)
                    .ok_or_else(|| PolyError::MissingSymbol(s.clone()))?;
                factors.push((idx, *e));
            }
            terms.push((c.to_f64().unwrap_or(f64::NAN), factors));
        }
        Ok(CompiledPoly { terms })
    }
}

/// A polynomial flattened for repeated floating-point evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| {
                fs.iter()
                    .fold(*c, |acc, &(i, e)| acc * x[i].powi(e as i32))
            })
            .sum()
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::constant(1)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;

    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl From<Symbol> for MultiPoly {
    fn from(s: Symbol) -> Self {
        MultiPoly::var(s)
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for MultiPoly {
    fn product<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::one(), |a, b| a * b)
    }
}

/// Serialized as `coef*sym^e*sym` terms joined by `" + "`, largest first.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.0.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MultiPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(MultiPoly::zero());
        }
        let mut p = MultiPoly::zero();
        for term in s.split(" + ") {
            let mut parts = term.trim().split('*');
            let coef: BigInt = parts
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| PolyError::Parse(term.to_string()))?;
            let mut mono = Monomial::one();
            for factor in parts {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| PolyError::Parse(term.to_string()))?,
                    ),
                    None => (factor, 1),
                };
                if name.is_empty() || exp == 0 {
                    return Err(PolyError::Parse(term.to_string()));
                }
                let sym: Symbol = name.parse().unwrap();
                mono = mono.mul(&Monomial(vec![(sym, exp)]));
            }
            p.add_term(mono, coef);
        }
        Ok(p)
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sign of the leading coefficient, used when results are defined up to sign.
pub fn leading_sign(p: &MultiPoly) -> i32 {
    match p.terms().next() {
        Some((_, c)) if c.is_negative() => -1,
        Some(_) => 1,
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn k(to: usize, from: usize) -> MultiPoly {
        MultiPoly::var(Symbol::rate(to, from))
    }

    #[test]
    fn product_distributes() {
        let p = &(&k(1, 2) + &k(1, 3)) * &k(2, 1);
        assert_eq!(p.to_string(), "1*k12*k21 + 1*k13*k21");
    }

    #[test]
    fn additive_inverse_is_zero() {
        let p = &(&k(1, 2) * &k(3, 1)) + &MultiPoly::constant(7);
        assert!((&p + &(-&p)).is_zero());
        assert_eq!((&p - &p).to_string(), "0");
    }

    #[test]
    fn square_of_binomial() {
        let p = (&k(1, 3) + &k(1, 4)).pow(2).unwrap();
        assert_eq!(p.to_string(), "1*k13^2 + 2*k13*k14 + 1*k14^2");
        assert!(matches!(
            k(1, 3).pow(-1),
            Err(PolyError::NegativeExponent(-1))
        ));
    }

    #[test]
    fn evaluation_examples() {
        let mut x = ParamPoint::new();
        x.insert(Symbol::rate(1, 3), BigRational::from_i64(2));
        x.insert(Symbol::rate(1, 4), BigRational::from_i64(3));
        x.insert(Symbol::rate(2, 1), BigRational::from_i64(4));
        let p = &(&k(1, 3) * &k(1, 4)) * &k(2, 1);
        assert_eq!(p.evaluate(&x).unwrap(), BigRational::from_i64(24));
        let c5 = &(&k(1, 3) * &k(2, 1)) + &(&k(1, 4) * &k(2, 1));
        assert_eq!(c5.evaluate(&x).unwrap(), BigRational::from_i64(20));
        assert_eq!(
            MultiPoly::zero().evaluate(&x).unwrap(),
            BigRational::from_i64(0)
        );
        assert!(matches!(
            k(5, 1).evaluate(&x),
            Err(PolyError::MissingSymbol(_))
        ));
    }

    #[test]
    fn derivatives() {
        let s12 = Symbol::rate(1, 2);
        assert_eq!((&k(1, 2) * &k(1, 3)).differentiate(&s12), k(1, 3));
        assert!(k(2, 1).differentiate(&s12).is_zero());
        let p = &k(1, 2).pow(2).unwrap() * &k(3, 1);
        assert_eq!(p.differentiate(&s12).to_string(), "2*k12*k31");
    }

    #[test]
    fn parse_round_trip() {
        let text = "1*k12^2*k31 + -3*k13*k14 + 5";
        let p: MultiPoly = text.parse().unwrap();
        assert_eq!(p.to_string(), text);
        assert!("1*k12 + x".parse::<MultiPoly>().is_err());
    }

    #[test]
    fn coefficients_in_variable() {
        let s = Symbol::named("s");
        let sv = MultiPoly::var(s.clone());
        let p = &(&sv * &sv) + &(&k(2, 1) * &sv) + k(1, 2);
        let cs = p.coefficients_in(&s);
        assert_eq!(cs, vec![k(1, 2), k(2, 1), MultiPoly::one()]);
    }

    #[test]
    fn compiled_matches_exact() {
        let p: MultiPoly = "2*k12^2*k31 + -3*k13 + 1".parse().unwrap();
        let syms = [Symbol::rate(1, 2), Symbol::rate(1, 3), Symbol::rate(3, 1)];
        let c = p.compile(&syms).unwrap();
        assert_eq!(c.eval(&[2.0, 1.0, 3.0]), 2.0 * 4.0 * 3.0 - 3.0 + 1.0);
    }

    #[test]
    fn monomial_from_unsorted_factors() {
        let m = Monomial::from_factors([
            (Symbol::rate(3, 1), 1),
            (Symbol::rate(1, 2), 2),
            (Symbol::rate(3, 1), 1),
            (Symbol::rate(1, 4), 0),
        ]);
        assert_eq!(m.to_string(), "k12^2*k31^2");
    }

    #[test]
    fn integer_evaluation_matches_rational() {
        let p: MultiPoly = "2*k12^2*k31 + -3*k13 + 1".parse().unwrap();
        let pt: ParamPoint<BigInt> = [(1, 2, 7), (1, 3, -2), (3, 1, 5)]
            .iter()
            .map(|&(t, f, v)| (Symbol::rate(t, f), BigInt::from(v)))
            .collect();
        let q = pt.map(crate::Rational::from_bigint);
        assert_eq!(
            crate::Rational::from_bigint(&p.evaluate_integer(&pt).unwrap()),
            p.evaluate(&q).unwrap()
        );
    }
}
