//! Structural identifiability of linear compartmental models.
//!
//! The coefficients of a model's input-output equation are computed exactly,
//! either by enumerating spanning incoming forests or by evaluating
//! determinants at rational points. Parameters are then classified through
//! exact Jacobian ranks, model automorphisms, closed-form recovery formulas
//! for mammillary (star) models, and multi-start sampling of coefficient
//! fibers.

pub mod ident;
pub mod ioeq;
pub mod linalg;
pub mod mammillary;
pub mod model;
pub mod poly;
pub mod sample;
pub mod scalar;

pub use linalg::{det_by_minors, LinalgError, Matrix};
pub use model::{parse_model, Edge, Model, ModelError, Permutation};
pub use poly::{MultiPoly, ParamPoint, PolyError, Symbol, UniPoly};
pub use scalar::Scalar;

/// Arbitrary-precision rational, reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub type ExactMatrix = Matrix<Rational>;
pub type FloatMatrix = Matrix<f64>;
pub type SymbolicMatrix = Matrix<MultiPoly>;

pub type ExactPoint = ParamPoint<Rational>;
pub type FloatPoint = ParamPoint<f64>;
