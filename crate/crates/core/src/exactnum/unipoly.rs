//! Dense univariate polynomials over an exact coefficient ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use super::scalar::{Field, Scalar};

/// `coeffs[i]` multiplies `x^i`. The leading coefficient is nonzero unless
/// the polynomial is identically zero, in which case `coeffs` is empty.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniPoly<F = Rational> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UniPoly::new(vec![F::zero(), F::one()])
    }

    /// `x - a`.
    pub fn linear_root(a: F) -> Self {
        UniPoly::new(vec![-a, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, k: &F) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(UniPoly::constant(F::one()), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_int(i as i64))
                .collect(),
        )
    }
}

impl<F: Field> UniPoly<F> {
    /// Quotient and remainder; `None` if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead_inv = divisor.leading()?.inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * d.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((UniPoly::new(quot), UniPoly::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `a` as a root, by repeated synthetic division.
    pub fn root_multiplicity(&self, a: &F) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = UniPoly::linear_root(a.clone());
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin).expect("nonzero divisor");
            if !r.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    }
}

impl UniPoly<Rational> {
    /// Number of distinct real roots, by Sturm's theorem.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        // Work with the square-free part so the chain ends in a constant.
        let g = self.gcd(&self.derivative());
        let p = self.div_rem(&g).expect("nonzero gcd").0;
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero divisor");
            chain.push(-r);
        }
        chain.pop();
        let sign_changes = |signs: Vec<i32>| {
            let s: Vec<i32> = signs.into_iter().filter(|&s| s != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_neg_inf = chain
            .iter()
            .map(|q| {
                let d = q.degree().unwrap_or(0);
                let s = q.leading().map(|l| l.signum()).unwrap_or(0);
                if d % 2 == 0 { s } else { -s }
            })
            .collect();
        let at_pos_inf = chain
            .iter()
            .map(|q| q.leading().map(|l| l.signum()).unwrap_or(0))
            .collect();
        sign_changes(at_neg_inf) - sign_changes(at_pos_inf)
    }
}

impl<F: Scalar> Add<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<F: Scalar> Sub<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<F: Scalar> Mul<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<F: Scalar> Add for UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<F: Scalar> Sub for UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<F: Scalar> Mul for UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<F: Scalar> Neg for UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> Self {
        UniPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

/// Polynomials over a field form a Euclidean ring; exact division succeeds
/// when the remainder vanishes.
impl<F: Field> Scalar for UniPoly<F> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_int(v: i64) -> Self {
        UniPoly::constant(F::from_int(v))
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(rhs)?;
        r.is_zero().then_some(q)
    }
}

impl<F: Scalar + fmt::Debug> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c:?}"),
                1 => format!("({c:?})x"),
                _ => format!("({c:?})x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
