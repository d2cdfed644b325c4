//! Floating-point scalars for the numeric oracles: `f64` and a 256-bit
//! binary float.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::ops::Abs;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use crate::exactnum::Rational;

pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn cbrt(&self) -> Self {
        if *self == Self::zero() {
            return Self::zero();
        }
        let m = (self.abs().ln() / Self::from_f64(3.0)).exp();
        if *self < Self::zero() {
            -m
        } else {
            m
        }
    }
    /// Unit roundoff of the format.
    fn epsilon() -> Self;
    /// Decimal rendering with `digits` significant digits.
    fn to_decimal(&self, digits: usize) -> String;
}

impl Real for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn cbrt(&self) -> Self {
        f64::cbrt(*self)
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*e}", digits.max(1) - 1, self)
    }
}

/// Working precision of [`Ext`] in bits (about 77 decimal digits).
pub const EXT_BITS: usize = 256;

type Big = FBig<HalfEven, 2>;

/// Binary float with [`EXT_BITS`] bits of significand.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Ext(Big);

impl Ext {
    fn wrap(x: Big) -> Self {
        Ext(x.with_precision(EXT_BITS).value())
    }

    fn from_bigint(v: &num_bigint::BigInt) -> Self {
        let parsed = IBig::from_str_radix(&v.to_str_radix(16), 16).expect("hex round trip");
        Ext::wrap(Big::from(parsed))
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Ext::one(), |acc, _| acc * self.clone())
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        Ext(self.0 + rhs.0)
    }
}

impl Sub for Ext {
    type Output = Ext;
    fn sub(self, rhs: Ext) -> Ext {
        Ext(self.0 - rhs.0)
    }
}

impl Mul for Ext {
    type Output = Ext;
    fn mul(self, rhs: Ext) -> Ext {
        Ext(self.0 * rhs.0)
    }
}

impl Div for Ext {
    type Output = Ext;
    fn div(self, rhs: Ext) -> Ext {
        Ext(self.0 / rhs.0)
    }
}

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext(-self.0)
    }
}

impl Real for Ext {
    fn zero() -> Self {
        Ext::wrap(Big::ZERO)
    }
    fn one() -> Self {
        Ext::wrap(Big::ONE)
    }
    fn from_f64(x: f64) -> Self {
        Ext::wrap(Big::try_from(x).expect("finite f64"))
    }
    fn from_rational(r: &Rational) -> Self {
        Ext::from_bigint(r.numer()) / Ext::from_bigint(r.denom())
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn abs(&self) -> Self {
        Ext(self.0.clone().abs())
    }
    fn sqrt(&self) -> Self {
        Ext(self.0.sqrt())
    }
    fn exp(&self) -> Self {
        Ext(self.0.exp())
    }
    fn ln(&self) -> Self {
        Ext(self.0.ln())
    }
    fn epsilon() -> Self {
        Ext::wrap(Big::from_parts(IBig::ONE, 1 - EXT_BITS as isize))
    }
    fn to_decimal(&self, digits: usize) -> String {
        format!("{:e}", self.0.clone().with_base_and_precision::<10>(digits.max(1)).value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_carries_more_than_double_precision() {
        let third = Ext::from_rational(&Rational::frac(1, 3));
        let back = third.clone() * Ext::from_f64(3.0) - Ext::one();
        assert!(back.abs() < Ext::from_f64(1e-70));
        let tiny = Ext::from_f64(1e-30);
        let sum = Ext::one() + tiny.clone() - Ext::one();
        assert!(((sum - tiny) / Ext::from_f64(1e-30)).abs() < Ext::from_f64(1e-40));
        assert_eq!(Ext::from_rational(&Rational::frac(-7, 2)).to_f64(), -3.5);
    }

    #[test]
    fn ext_sqrt_and_epsilon() {
        let two = Ext::from_f64(2.0);
        let r = two.sqrt();
        assert!((r.clone() * r - two).abs() < Ext::from_f64(1e-70));
        assert!(Ext::epsilon() < Ext::from_f64(1e-70));
        assert!(Ext::epsilon() > Ext::zero());
        let x = Ext::from_f64(64.0).cbrt();
        assert!((x - Ext::from_f64(4.0)).abs() < Ext::from_f64(1e-70));
        let y = Ext::from_f64(-3.0).exp().ln();
        assert!((y + Ext::from_f64(3.0)).abs() < Ext::from_f64(1e-70));
    }

    #[test]
    fn decimal_rendering() {
        let third = Ext::from_rational(&Rational::frac(1, 3));
        assert_eq!(third.to_decimal(30), "3.33333333333333333333333333333e-1");
        assert_eq!(Ext::from_f64(-1234.5).to_decimal(8), "-1.2345e3");
        assert_eq!(1.5f64.to_decimal(3), "1.50e0");
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Rational::new(num_bigint::BigInt::from(10).pow(100u32), 7).unwrap();
        let x = Ext::from_rational(&big);
        assert!(((x.to_f64() - 1e100 / 7.0) / (1e100 / 7.0)).abs() < 1e-15);
    }
}
