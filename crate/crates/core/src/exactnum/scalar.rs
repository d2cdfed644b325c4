use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Commutative ring with exact (remainder-free) division where it exists.
///
/// This is the minimum needed for fraction-free elimination: Bareiss only
/// ever divides by a previous pivot that is known to divide exactly.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(v: i64) -> Self;

    /// `Some(q)` with `q * rhs == self` when such a `q` exists in the ring.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

/// A [`Scalar`] in which every nonzero element is invertible.
pub trait Field: Scalar {
    fn inv(&self) -> Option<Self> {
        Self::one().exact_div(self)
    }
}
