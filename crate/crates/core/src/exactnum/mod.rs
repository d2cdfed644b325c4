//! Exact arithmetic kernel: rationals, the half-Eisenstein lattice, dense
//! univariate and sparse bivariate polynomials, and fraction-free linear
//! algebra over any of them.

mod bipoly;
mod eisenstein;
pub mod linalg;
mod rational;
mod scalar;
mod unipoly;

pub use bipoly::{BivariatePoly, Term};
pub use eisenstein::{EisensteinRational, HalfEisenstein};
pub use rational::Rational;
pub(crate) use rational::primitive_integer_vector;
pub use scalar::{Field, Scalar};
pub use unipoly::UniPoly;
