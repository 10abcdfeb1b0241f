//! Exact polynomial arithmetic and the univariate numerics built on it.

mod multi;
mod point;
mod roots;
mod symbol;
mod symmetric;
mod uni;

use thiserror::Error;

pub use multi::{leading_sign, CompiledPoly, Monomial, MultiPoly};
pub use point::ParamPoint;
pub use roots::{real_roots, recover_multiset, IMAG_CUTOFF};
pub use symbol::Symbol;
pub use symmetric::{elementary_symmetric, elementary_symmetric_all, elementary_symmetric_values};
pub use uni::{interpolate, UniPoly};

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("no value assigned to symbol {0}")]
    MissingSymbol(Symbol),
    #[error("elementary symmetric degree {k} out of range for {len} symbols")]
    DegreeOutOfRange { k: usize, len: usize },
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(String),
    #[error("zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("expected {expected} real roots, found {found}")]
    NonRealRoots { expected: usize, found: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("cannot parse polynomial term `{0}`")]
    Parse(String),
}
