//! Numbers on the lattice `(p + q·√3 i)/2` and the field `Q(√-3)` around it.
//!
//! [`HalfEisenstein`] stores the doubled coordinates `(2 Re z, 2 Im z / √3)`,
//! which is exactly how root tables list them. Points with `p ≡ q (mod 2)`
//! are the Eisenstein integers `Z[ω]` and are closed under multiplication;
//! products that leave the integer lattice are rejected.
//!
//! [`EisensteinRational`] is `a + b·√-3` with rational `a, b`, the field in
//! which exact elimination over complex candidates is carried out.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use super::scalar::{Field, Scalar};
use crate::error::{QesError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEisenstein {
    /// `2 Re z`
    pub p: i64,
    /// `2 Im z / √3`
    pub q: i64,
}

impl HalfEisenstein {
    pub const fn new(p: i64, q: i64) -> Self {
        HalfEisenstein { p, q }
    }

    /// The real integer `v`, stored as `(2v, 0)`.
    pub const fn from_int(v: i64) -> Self {
        HalfEisenstein { p: 2 * v, q: 0 }
    }

    pub fn is_real(&self) -> bool {
        self.q == 0
    }

    /// Eisenstein integers (`p ≡ q mod 2`) form a ring.
    pub fn is_eisenstein_integer(&self) -> bool {
        (self.p - self.q).is_even()
    }

    pub fn conj(&self) -> Self {
        HalfEisenstein { p: self.p, q: -self.q }
    }

    pub fn checked_add(&self, rhs: &Self) -> Self {
        HalfEisenstein { p: self.p + rhs.p, q: self.q + rhs.q }
    }

    /// Exact product; errors when the result is not on the lattice.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let re2 = self.p * rhs.p - 3 * self.q * rhs.q;
        let im2 = self.p * rhs.q + rhs.p * self.q;
        if re2.is_odd() || im2.is_odd() {
            return Err(QesError::OffLattice {
                p: format!("{re2}/2"),
                q: format!("{im2}/2"),
            });
        }
        Ok(HalfEisenstein { p: re2 / 2, q: im2 / 2 })
    }

    /// Real value as a rational, when `q = 0`.
    pub fn real_value(&self) -> Option<Rational> {
        self.is_real().then(|| Rational::frac(self.p, 2))
    }

    pub fn to_field(&self) -> EisensteinRational {
        EisensteinRational::new(Rational::frac(self.p, 2), Rational::frac(self.q, 2))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.p as f64 / 2.0, self.q as f64 * 3f64.sqrt() / 2.0)
    }
}

impl fmt::Display for HalfEisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            return write!(f, "{}", Rational::frac(self.p, 2));
        }
        let sign = if self.q < 0 { '-' } else { '+' };
        match self.q.abs() {
            1 => write!(f, "({} {} √3 i)/2", self.p, sign),
            q => write!(f, "({} {} {}√3 i)/2", self.p, sign, q),
        }
    }
}

/// `re + im·√-3` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EisensteinRational {
    pub re: Rational,
    pub im: Rational,
}

impl EisensteinRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        EisensteinRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        EisensteinRational { re, im: Rational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        EisensteinRational { re: self.re.clone(), im: -&self.im }
    }

    /// `z · conj(z) = re² + 3 im²`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + Rational::from(3) * &self.im * &self.im
    }

    /// Back to lattice coordinates when `2 re` and `2 im` are integers.
    pub fn to_half(&self) -> Option<HalfEisenstein> {
        let p = (&self.re * Rational::from(2)).to_i64()?;
        let q = (&self.im * Rational::from(2)).to_i64()?;
        Some(HalfEisenstein::new(p, q))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64() * 3f64.sqrt())
    }
}

impl fmt::Debug for EisensteinRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + ({})√-3", self.re, self.im)
        }
    }
}

impl Add for EisensteinRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        EisensteinRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for EisensteinRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        EisensteinRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for EisensteinRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Mul<&EisensteinRational> for &EisensteinRational {
    type Output = EisensteinRational;
    fn mul(self, rhs: &EisensteinRational) -> EisensteinRational {
        let re = &self.re * &rhs.re - Rational::from(3) * &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        EisensteinRational { re, im }
    }
}

impl Neg for EisensteinRational {
    type Output = Self;
    fn neg(self) -> Self {
        EisensteinRational { re: -self.re, im: -self.im }
    }
}

impl Scalar for EisensteinRational {
    fn zero() -> Self {
        EisensteinRational::default()
    }
    fn one() -> Self {
        EisensteinRational::real(Rational::from(1))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_int(v: i64) -> Self {
        EisensteinRational::real(Rational::from(v))
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &rhs.conj();
        Some(EisensteinRational { re: &num.re / &n, im: &num.im / &n })
    }
}

impl Field for EisensteinRational {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_and_cube_roots_of_unity() {
        let one = HalfEisenstein::new(2, 0);
        assert_eq!(one.checked_mul(&one).unwrap(), one);

        let w = HalfEisenstein::new(-1, 1);
        assert_eq!(w.checked_mul(&w).unwrap(), HalfEisenstein::new(-1, -1));
        assert_eq!(w.checked_mul(&w).unwrap(), w.conj());

        let z = HalfEisenstein::new(1, 1);
        let z3 = z.checked_mul(&z).unwrap().checked_mul(&z).unwrap();
        assert_eq!(z3, HalfEisenstein::new(-2, 0));
    }

    #[test]
    fn off_lattice_products_are_rejected() {
        // (1/2)·(1/2) = 1/4 has 2·Re = 1/2.
        let half = HalfEisenstein::new(1, 0);
        assert!(matches!(half.checked_mul(&half), Err(QesError::OffLattice { .. })));
    }

    #[test]
    fn field_division_inverts_multiplication() {
        let a = HalfEisenstein::new(3, 1).to_field();
        let b = HalfEisenstein::new(-2, 4).to_field();
        let q = (a.clone() * b.clone()).exact_div(&b).unwrap();
        assert_eq!(q, a);
        assert!(a.exact_div(&EisensteinRational::zero()).is_none());
    }

    fn lattice() -> impl Strategy<Value = HalfEisenstein> {
        (-40i64..40, -40i64..40).prop_map(|(a, b)| HalfEisenstein::new(2 * a + (b & 1), b))
    }

    proptest! {
        #[test]
        fn ring_axioms_on_eisenstein_integers(a in lattice(), b in lattice(), c in lattice()) {
            let ab = a.checked_mul(&b).unwrap();
            prop_assert_eq!(ab, b.checked_mul(&a).unwrap());
            prop_assert_eq!(
                ab.checked_mul(&c).unwrap(),
                a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.checked_mul(&b.checked_add(&c)).unwrap(),
                ab.checked_add(&a.checked_mul(&c).unwrap())
            );
            prop_assert!(ab.is_eisenstein_integer());
            // The lattice product agrees with the field product.
            prop_assert_eq!(ab.to_field(), a.to_field() * b.to_field());
        }

        #[test]
        fn conjugate_sum_and_norm_are_real(a in lattice()) {
            prop_assert!(a.checked_add(&a.conj()).is_real());
            prop_assert!(a.checked_mul(&a.conj()).unwrap().is_real());
        }
    }
}
