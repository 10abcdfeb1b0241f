//! Seeded random points. Every consumer derives its generator from a base
//! seed plus a stream index, so results do not depend on scheduling.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{ParamPoint, Symbol};
use crate::Rational;

/// Default range for exact random points: integers in `1..=10^4`.
pub const INTEGER_RANGE: (i64, i64) = (1, 10_000);

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn integer_point(params: &[Symbol], rng: &mut impl Rng, lo: i64, hi: i64) -> ParamPoint<BigInt> {
    params
        .iter()
        .map(|s| (s.clone(), BigInt::from(rng.gen_range(lo..=hi))))
        .collect()
}

/// Random integer point in the default range, as rationals.
pub fn rational_point(params: &[Symbol], rng: &mut impl Rng) -> ParamPoint<Rational> {
    integer_point(params, rng, INTEGER_RANGE.0, INTEGER_RANGE.1).map(|v| Rational::from_integer(v.clone()))
}

pub fn uniform_point(params: &[Symbol], rng: &mut impl Rng, lo: f64, hi: f64) -> ParamPoint<f64> {
    params
        .iter()
        .map(|s| (s.clone(), rng.gen_range(lo..hi)))
        .collect()
}
