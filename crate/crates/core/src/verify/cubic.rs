//! Closed-form check at `N = 1`.
//!
//! With `u⃗ = (1, -s)` the three rows of `Q(λ)u⃗ = 0` reduce to
//! `t = s² - λgs` and the depressed cubic `s³ - λg s² - λb s - 1 = 0`,
//! whose root near `s = 1` is the ground branch.

use crate::exactnum::{BivariatePoly, Rational};

use super::real::Real;

/// Exact Taylor coefficients `(s⁽ᵏ⁾, t⁽ᵏ⁾)`, `k = 0..=order`, of the cubic root
/// through `s = 1` at `λ = 0`.
pub fn cubic_series_n1(order: usize) -> (Vec<BivariatePoly>, Vec<BivariatePoly>) {
    let len = order + 1;
    let mul = |a: &[BivariatePoly], b: &[BivariatePoly]| -> Vec<BivariatePoly> {
        let mut out = vec![BivariatePoly::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        out
    };
    let shift = |a: &[BivariatePoly], c: &BivariatePoly| -> Vec<BivariatePoly> {
        let mut out = vec![BivariatePoly::zero(); len];
        for (i, x) in a.iter().enumerate().take(len - 1) {
            out[i + 1] = x * c;
        }
        out
    };
    let add = |a: &[BivariatePoly], b: &[BivariatePoly]| -> Vec<BivariatePoly> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    };

    let mut one = vec![BivariatePoly::zero(); len];
    one[0] = BivariatePoly::constant(Rational::from(1));
    let third = Rational::frac(1, 3);

    // s = 1 + σ with 3σ = λg(1+σ)² + λb(1+σ) - 3σ² - σ³; each pass fixes one order
    let mut sigma = vec![BivariatePoly::zero(); len];
    for _ in 0..len {
        let s = add(&one, &sigma);
        let s2 = mul(&s, &s);
        let sig2 = mul(&sigma, &sigma);
        let sig3 = mul(&sig2, &sigma);
        let rhs: Vec<BivariatePoly> = shift(&s2, &BivariatePoly::y())
            .iter()
            .zip(shift(&s, &BivariatePoly::x()))
            .zip(sig2.iter().zip(&sig3))
            .map(|((a, b), (c, d))| &(&(a + &b) - &c.scale(&Rational::from(3))) - d)
            .collect();
        sigma = rhs.iter().map(|x| x.scale(&third)).collect();
    }
    let s = add(&one, &sigma);
    let t: Vec<BivariatePoly> = mul(&s, &s)
        .iter()
        .zip(shift(&s, &BivariatePoly::y()))
        .map(|(a, b)| a - &b)
        .collect();
    (s, t)
}

/// Numeric ground branch `(s, t, u⃗)` at `N = 1` by Newton on the cubic,
/// started from `s = 1`.
pub fn cubic_oracle_n1<T: Real>(lambda: &T, b: &T, g: &T) -> (T, T, Vec<T>) {
    let lg = lambda.clone() * g.clone();
    let lb = lambda.clone() * b.clone();
    let three = T::from_f64(3.0);
    let two = T::from_f64(2.0);
    let mut s = T::one();
    for _ in 0..200 {
        let f = s.clone() * s.clone() * s.clone() - lg.clone() * s.clone() * s.clone() - lb.clone() * s.clone() - T::one();
        let df = three.clone() * s.clone() * s.clone() - two.clone() * lg.clone() * s.clone() - lb.clone();
        let step = f / df;
        s = s - step.clone();
        if step.abs() <= T::epsilon() * (T::one() + s.abs()) {
            break;
        }
    }
    let t = s.clone() * s.clone() - lg * s.clone();
    let u = vec![T::one(), -s.clone()];
    (s, t, u)
}
