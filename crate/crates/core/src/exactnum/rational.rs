//! Arbitrary-precision rationals, always stored in lowest terms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{Field, Scalar};
use crate::error::{QesError, Result};

/// Exact rational number with a positive denominator and coprime parts.
///
/// Equality is structural because the representation is canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(QesError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    /// `num / den` for small literals; panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("zero denominator in literal")
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Integer value, if this rational is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.0.is_zero() {
            return Err(QesError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::from_integer(1).checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Rational {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Exact square root when both reduced parts are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = exact_root(self.numer(), 2)?;
        let d = exact_root(self.denom(), 2)?;
        Some(Rational(BigRational::new(n, d)))
    }

    /// Exact real cube root when both reduced parts are perfect cubes.
    pub fn cbrt_exact(&self) -> Option<Rational> {
        let n = exact_root(self.numer(), 3)?;
        let d = exact_root(self.denom(), 3)?;
        Some(Rational(BigRational::new(n, d)))
    }

    /// Nearest rational to `x` with the given power-of-ten denominator.
    pub fn from_f64_decimal(x: f64, digits: u32) -> Option<Rational> {
        if !x.is_finite() {
            return None;
        }
        format!("{:.*}", digits as usize, x).parse().ok()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

fn exact_root(v: &BigInt, k: u32) -> Option<BigInt> {
    let r = if v.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        -(-v).nth_root(k)
    } else {
        v.nth_root(k)
    };
    (num_traits::pow(r.clone(), k as usize) == *v).then_some(r)
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::from_integer(0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"-0.125"` or `"1e-3"`.
impl FromStr for Rational {
    type Err = QesError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || QesError::InvalidArgument(format!("cannot parse {s:?} as a rational"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d);
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if frac_part.starts_with(['+', '-']) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let digits = if digits == "-" || digits == "+" || digits.is_empty() {
            return Err(bad());
        } else {
            digits
        };
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = exp - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let r = if scale >= 0 {
            BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Rational(r))
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RationalRepr {
            num: self.numer().to_string(),
            den: self.denom().to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = RationalRepr::deserialize(deserializer)?;
        let n: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let d: BigInt = repr.den.parse().map_err(D::Error::custom)?;
        Rational::new(n, d).map_err(D::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor; use `checked_div` for the fallible form.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::from_integer(0), |a, b| a + b)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_int(v: i64) -> Self {
        Rational::from_integer(v)
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        self.checked_div(rhs).ok()
    }
}

impl Field for Rational {}

/// gcd of the numerators of a list of integer-valued rationals.
pub(crate) fn integer_content(values: &[Rational]) -> BigInt {
    values
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v.numer()))
}

/// Rescale to coprime integers (gcd 1), keeping the direction of the vector.
pub(crate) fn primitive_integer_vector(values: &[Rational]) -> Vec<Rational> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<Rational> = values
        .iter()
        .map(|v| v * Rational::from_integer(lcm.clone()))
        .collect();
    let g = integer_content(&scaled);
    if g.is_zero() {
        return scaled;
    }
    let g = Rational::from_integer(g);
    scaled.iter().map(|v| v / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adds_and_reduces() {
        assert_eq!(Rational::frac(1, 3) + Rational::frac(1, 6), Rational::frac(1, 2));
        let r = Rational::new(2, 4).unwrap();
        assert_eq!(r.numer(), &BigInt::from(1));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(Rational::new(3, -6).unwrap(), Rational::frac(-1, 2));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Rational::new(1, 0), Err(QesError::DivisionByZero));
        assert_eq!(
            Rational::from(1).checked_div(&Rational::from(0)),
            Err(QesError::DivisionByZero)
        );
        assert!(Rational::from(5).exact_div(&Rational::from(0)).is_none());
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("3/12".parse::<Rational>().unwrap(), Rational::frac(1, 4));
        assert_eq!("-0.125".parse::<Rational>().unwrap(), Rational::frac(-1, 8));
        assert_eq!("1e-3".parse::<Rational>().unwrap(), Rational::frac(1, 1000));
        assert_eq!("2.5E2".parse::<Rational>().unwrap(), Rational::from(250));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("-".parse::<Rational>().is_err());
    }

    #[test]
    fn exact_roots() {
        assert_eq!(Rational::frac(16129, 4).sqrt_exact(), Some(Rational::frac(127, 2)));
        assert_eq!(Rational::from(2).sqrt_exact(), None);
        assert_eq!(Rational::from(-1).sqrt_exact(), None);
        assert_eq!(Rational::frac(-27, 8).cbrt_exact(), Some(Rational::frac(-3, 2)));
        assert_eq!(Rational::from(64).cbrt_exact(), Some(Rational::from(4)));
        assert_eq!(Rational::from(4).cbrt_exact(), None);
    }

    #[test]
    fn serde_uses_decimal_strings() {
        let r = Rational::frac(-7, 3);
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, r#"{"num":"-7","den":"3"}"#);
        let back: Rational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<Rational>(r#"{"num":"1","den":"0"}"#).is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = [Rational::frac(1, 2), Rational::frac(-3, 2), Rational::from(0)];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![Rational::from(1), Rational::from(-3), Rational::from(0)]
        );
    }
}
