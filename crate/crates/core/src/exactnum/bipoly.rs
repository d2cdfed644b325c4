//! Sparse polynomials in two formal symbols over the rationals.
//!
//! Perturbative corrections are polynomials in `b = βμ²` and `g = γμ`; the
//! same type also carries the secular polynomials in `(s, t)`. The symbol
//! names only matter for display.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePoly {
    /// `(deg_x, deg_y) -> coefficient`; zero coefficients are never stored.
    terms: BTreeMap<(u32, u32), Rational>,
}

/// One serialized term, `coef · b^b · g^g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub b: u32,
    pub g: u32,
    pub coef: Rational,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        BivariatePoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(dx: u32, dy: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((dx, dy), c);
        }
        BivariatePoly { terms }
    }

    /// The first symbol (`b`, or `s` for secular polynomials).
    pub fn x() -> Self {
        Self::monomial(1, 0, Rational::from(1))
    }

    /// The second symbol (`g`, or `t`).
    pub fn y() -> Self {
        Self::monomial(0, 1, Rational::from(1))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut out = BivariatePoly::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    fn add_term(&mut self, key: (u32, u32), c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> Rational {
        self.terms.get(&(dx, dy)).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value, if the polynomial has no symbol dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Largest `dx + dy` over stored terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return BivariatePoly::zero();
        }
        BivariatePoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Exact substitution of both symbols.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.eval_with(x, y, |c| c.clone())
    }

    /// Substitution into any commutative ring reachable from the rationals.
    pub fn eval_with<T>(&self, x: &T, y: &T, lift: impl Fn(&Rational) -> T) -> T
    where
        T: Clone + Add<Output = T> + Mul<Output = T>,
    {
        let dx = self.degree_x().unwrap_or(0) as usize;
        let dy = self.degree_y().unwrap_or(0) as usize;
        let powers = |v: &T, n: usize| {
            let mut out = vec![lift(&Rational::from(1))];
            for i in 0..n {
                let next = out[i].clone() * v.clone();
                out.push(next);
            }
            out
        };
        let px = powers(x, dx);
        let py = powers(y, dy);
        self.terms
            .iter()
            .map(|((i, j), c)| lift(c) * px[*i as usize].clone() * py[*j as usize].clone())
            .fold(lift(&Rational::zero()), |acc, v| acc + v)
    }

    /// Substitute `x = value` and keep a polynomial in the second symbol.
    pub fn substitute_x<T: Scalar>(&self, value: &T, lift: impl Fn(&Rational) -> T) -> Vec<T> {
        let dy = self.degree_y().map(|d| d as usize + 1).unwrap_or(0);
        let mut out = vec![T::zero(); dy];
        let mut pow_cache: Vec<T> = vec![T::one()];
        for ((i, j), c) in &self.terms {
            while pow_cache.len() <= *i as usize {
                let next = pow_cache.last().unwrap().clone() * value.clone();
                pow_cache.push(next);
            }
            out[*j as usize] = out[*j as usize].clone() + lift(c) * pow_cache[*i as usize].clone();
        }
        out
    }

    /// Swap the roles of the two symbols.
    pub fn swap_symbols(&self) -> Self {
        BivariatePoly {
            terms: self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())).collect(),
        }
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|((b, g), c)| Term { b: *b, g: *g, coef: c.clone() })
            .collect()
    }

    /// Render with custom symbol names, e.g. `["s", "t"]`.
    pub fn display_with(&self, names: [&str; 2]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, ((i, j), c)) in self.terms.iter().enumerate() {
            let mut mono = Vec::new();
            for (name, e) in names.iter().zip([i, j]) {
                match e {
                    0 => {}
                    1 => mono.push(name.to_string()),
                    _ => mono.push(format!("{name}^{e}")),
                }
            }
            let neg = c.is_negative();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag == Rational::from(1)) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", mag, mono.join("*")),
            };
            match (n, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(["b", "g"]))
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for BivariatePoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_terms().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BivariatePoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(deserializer)?;
        Ok(BivariatePoly::from_terms(
            terms.into_iter().map(|t| ((t.b, t.g), t.coef)),
        ))
    }
}

impl Add<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, &-c);
        }
        out
    }
}

impl Mul<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), &(c1 * c2));
            }
        }
        out
    }
}

impl Add for BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> Self {
        self.scale(&Rational::from(-1))
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        self.scale(&Rational::from(-1))
    }
}

/// Division is only supported by nonzero constants.
impl Scalar for BivariatePoly {
    fn zero() -> Self {
        BivariatePoly::zero()
    }
    fn one() -> Self {
        BivariatePoly::constant(Rational::from(1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_int(v: i64) -> Self {
        BivariatePoly::constant(Rational::from(v))
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let c = rhs.as_constant()?;
        Some(self.scale(&c.recip().ok()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b() -> BivariatePoly {
        BivariatePoly::x()
    }
    fn g() -> BivariatePoly {
        BivariatePoly::y()
    }
    fn r(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn evaluates_first_order_corrections() {
        let s1 = (&b() + &g()).scale(&r(1, 3));
        assert_eq!(s1.eval(&r(1, 1), &r(2, 1)), r(1, 1));
        assert_eq!(BivariatePoly::zero().eval(&r(7, 3), &r(-1, 2)), r(0, 1));
        let t1 = (&b().scale(&r(2, 1)) - &g()).scale(&r(1, 3));
        assert_eq!(t1.eval(&r(0, 1), &r(0, 1)), r(0, 1));
    }

    #[test]
    fn symbolic_cancellation_drops_terms() {
        // (-3g)/3 + g = 0
        let p = &g().scale(&r(-3, 1)).scale(&r(1, 3)) + &g();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
        assert_eq!(p.total_degree(), None);
    }

    #[test]
    fn display_and_serde() {
        let p = &(&b().scale(&r(1, 3)) - &g()) + &BivariatePoly::constant(r(2, 1));
        assert_eq!(p.to_string(), "2 - g + 1/3*b");
        assert_eq!(p.display_with(["s", "t"]), "2 - t + 1/3*s");
        let js = serde_json::to_string(&p).unwrap();
        let back: BivariatePoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }

    fn arb_poly() -> impl Strategy<Value = BivariatePoly> {
        proptest::collection::vec(((0u32..3, 0u32..3), -5i64..5, 1i64..4), 0..5).prop_map(|ts| {
            BivariatePoly::from_terms(ts.into_iter().map(|(k, n, d)| (k, Rational::frac(n, d))))
        })
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(
            p in arb_poly(), q in arb_poly(),
            bn in -6i64..6, gn in -6i64..6, d in 1i64..5,
        ) {
            let (bv, gv) = (r(bn, d), r(gn, d + 1));
            prop_assert_eq!((&p * &q).eval(&bv, &gv), p.eval(&bv, &gv) * q.eval(&bv, &gv));
            prop_assert_eq!((&p + &q).eval(&bv, &gv), p.eval(&bv, &gv) + q.eval(&bv, &gv));
        }

        #[test]
        fn no_zero_coefficients_stored(p in arb_poly(), q in arb_poly()) {
            let prod = &(&p * &q) - &(&q * &p);
            prop_assert!(prod.is_zero());
            for (_, c) in (&p + &q).terms() {
                prop_assert!(!c.is_zero());
            }
        }
    }
}
