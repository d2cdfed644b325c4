//! Exact elimination for the coupled secular system.
//!
//! Any kernel vector of `Q⁽⁰⁾(s, t)` has `u₀ ≠ 0` (the super band is
//! nonzero), so with `u₀ = 1` rows `0..N-1` determine `u₁…u_N` as
//! polynomials in `(s, t)` and the two trailing rows `f`, `h` are the whole
//! root condition. `R(s) = Res_t(f, h)` is built by evaluation and
//! interpolation, its lattice roots are split off by exact division, and a
//! constant quotient certifies that nothing was missed.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QesError, Result};
use crate::exactnum::linalg::determinant;
use crate::exactnum::{BivariatePoly, EisensteinRational, HalfEisenstein, Rational, Scalar, UniPoly};

/// `u₀…u_N` in the symbols `(s, t)` with `u₀ = 1`.
pub fn forward_recurrence(degree: usize) -> Vec<BivariatePoly> {
    let s = BivariatePoly::x();
    let t = BivariatePoly::y();
    let mut u = vec![BivariatePoly::constant(Rational::from(1))];
    for k in 0..degree {
        let mut acc = &s * &u[k];
        if k >= 1 {
            acc = acc + &t * &u[k - 1];
        }
        if k >= 2 {
            acc = acc + u[k - 2].scale(&Rational::from((degree + 2 - k) as i64));
        }
        u.push(acc.scale(&Rational::frac(-1, k as i64 + 1)));
    }
    u
}

/// Rows `N` and `N+1` of `Q⁽⁰⁾(s,t)·u` after the forward solve.
pub fn consistency_rows(degree: usize) -> (BivariatePoly, BivariatePoly) {
    let u = forward_recurrence(degree);
    let s = BivariatePoly::x();
    let t = BivariatePoly::y();
    let n = degree;
    let mut f = &s * &u[n];
    if n >= 1 {
        f = f + &t * &u[n - 1];
    }
    if n >= 2 {
        f = f + u[n - 2].scale(&Rational::from(2));
    }
    let mut h = &t * &u[n];
    if n >= 1 {
        h = h + u[n - 1].clone();
    }
    (f, h)
}

/// `grid[j][i]` multiplies `s^i t^j`; the polynomial is scaled to integers.
fn integer_grid(p: &BivariatePoly) -> Vec<Vec<BigInt>> {
    let lcm = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let dt = p.degree_y().map_or(0, |d| d as usize + 1);
    let ds = p.degree_x().map_or(0, |d| d as usize + 1);
    let mut grid = vec![vec![BigInt::zero(); ds]; dt];
    for ((i, j), c) in p.terms() {
        let scaled = c * Rational::from_integer(lcm.clone());
        grid[*j as usize][*i as usize] = scaled.numer().clone();
    }
    grid
}

/// Integers as a [`Scalar`], for fraction-free determinants.
#[derive(Clone, PartialEq, Debug)]
struct Int(BigInt);

impl std::ops::Add for Int {
    type Output = Int;
    fn add(self, rhs: Int) -> Int {
        Int(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Int {
    type Output = Int;
    fn sub(self, rhs: Int) -> Int {
        Int(self.0 - rhs.0)
    }
}

impl std::ops::Mul for Int {
    type Output = Int;
    fn mul(self, rhs: Int) -> Int {
        Int(self.0 * rhs.0)
    }
}

impl std::ops::Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        Int(-self.0)
    }
}

impl Scalar for Int {
    fn zero() -> Self {
        Int(BigInt::zero())
    }
    fn one() -> Self {
        Int(BigInt::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_int(v: i64) -> Self {
        Int(v.into())
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.0.is_zero() {
            return None;
        }
        let (q, r) = self.0.div_rem(&rhs.0);
        r.is_zero().then_some(Int(q))
    }
}

fn horner_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn sylvester(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<Int>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut mat = vec![vec![Int::zero(); size]; size];
    for r in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[r][r + j] = Int(c.clone());
        }
    }
    for r in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + r][r + j] = Int(c.clone());
        }
    }
    mat
}

/// Primitive integer polynomial with positive leading coefficient.
fn primitive(mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let g = coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return coeffs;
    }
    let sign = if coeffs.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    let g = g * sign;
    coeffs.iter().map(|c| c / &g).collect()
}

/// `Res_t(f, h)` as a primitive integer polynomial in `s`, low degree first.
///
/// The determinant of the formal Sylvester matrix is a polynomial in `s` of
/// degree at most `deg_t(h)·deg_s(f) + deg_t(f)·deg_s(h)`, so that many
/// exact evaluations pin it down.
pub fn resultant_in_s(f: &BivariatePoly, h: &BivariatePoly) -> Vec<BigInt> {
    let fg = integer_grid(f);
    let hg = integer_grid(h);
    if fg.is_empty() || hg.is_empty() {
        return Vec::new();
    }
    let m = fg.len() - 1;
    let n = hg.len() - 1;
    let ds = |g: &[Vec<BigInt>]| g.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0);
    let bound = n * ds(&fg) + m * ds(&hg);
    let x0 = -(bound as i64 / 2);
    let values: Vec<BigInt> = (0..=bound)
        .map(|j| {
            let x = BigInt::from(x0 + j as i64);
            let a: Vec<BigInt> = fg.iter().map(|c| horner_int(c, &x)).collect();
            let b: Vec<BigInt> = hg.iter().map(|c| horner_int(c, &x)).collect();
            if m + n == 0 {
                BigInt::one()
            } else {
                determinant(&sylvester(&a, &b)).0
            }
        })
        .collect();

    // Newton forward differences, then the falling-factorial basis expanded
    // with every term scaled by bound!/k! to stay integral.
    let mut diffs = values;
    for k in 1..=bound {
        for j in (k..=bound).rev() {
            diffs[j] = &diffs[j] - &diffs[j - 1];
        }
    }
    let mut weights = vec![BigInt::one(); bound + 1];
    for k in (0..bound).rev() {
        weights[k] = &weights[k + 1] * BigInt::from(k + 1);
    }
    let mut acc = vec![BigInt::zero(); bound + 1];
    let mut basis = vec![BigInt::one()];
    for k in 0..=bound {
        if !diffs[k].is_zero() {
            let w = &diffs[k] * &weights[k];
            for (i, c) in basis.iter().enumerate() {
                acc[i] += &w * c;
            }
        }
        // basis *= (x - x0 - k)
        let shift = BigInt::from(x0 + k as i64);
        let mut next = vec![BigInt::zero(); basis.len() + 1];
        for (i, c) in basis.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &shift;
        }
        basis = next;
    }
    primitive(acc)
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn to_mod(v: &BigInt) -> u64 {
    v.mod_floor(&BigInt::from(PRIME)).to_u64().unwrap()
}

/// Value of `2^D · R((p + q√-3)/2)` modulo a 61-bit prime, as `a + b√-3`.
/// A nonzero result proves `R` does not vanish at that lattice point.
fn lattice_residue(coeffs_mod: &[u64], p: i64, q: i64) -> (u64, u64) {
    let pm = (p.rem_euclid(PRIME as i64)) as u64;
    let qm = (q.rem_euclid(PRIME as i64)) as u64;
    let three = 3u64;
    let mut a = 0u64;
    let mut b = 0u64;
    let mut pow2 = 1u64;
    // Horner with the 2^(D-i) factors folded in from the top.
    for c in coeffs_mod.iter().rev() {
        let na = (mulmod(a, pm) + PRIME - mulmod(three, mulmod(b, qm))) % PRIME;
        let nb = (mulmod(a, qm) + mulmod(b, pm)) % PRIME;
        a = (na + mulmod(*c, pow2)) % PRIME;
        b = nb;
        pow2 = mulmod(pow2, 2);
    }
    (a, b)
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

fn rational_mod(c: &Rational) -> u64 {
    mulmod(to_mod(c.numer()), invmod(to_mod(c.denom())))
}

/// Remainder-sequence gcd over `F_P`, monic; empty for the zero polynomial.
fn gcd_mod(a: &[u64], b: &[u64]) -> Vec<u64> {
    let trim = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let inv = invmod(*b.last().unwrap());
        while a.len() >= b.len() {
            let c = mulmod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (j, d) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + PRIME - mulmod(c, *d)) % PRIME;
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lead) = a.last() {
        let inv = invmod(lead);
        a.iter_mut().for_each(|c| *c = mulmod(*c, inv));
    }
    a
}

/// What reduction modulo a prime above `P` says about the `t` partners of
/// one `s`.
#[derive(Debug, PartialEq)]
pub enum ModularVerdict {
    /// No common root: the gcd is constant.
    NoPartner,
    /// At most one partner, and its image lifts to this lattice point.
    Single(HalfEisenstein),
    /// Leading coefficient lost, a larger gcd, or no lattice lift.
    Unclear,
}

/// The trailing rows reduced through `Z[ω] → F_P`, `√-3 ↦ r`.
///
/// If the leading coefficient of `f(s, ·)` survives reduction, Gauss's lemma
/// over the localization at a prime above `P` bounds the degree of the true
/// gcd by the degree of the modular one.
pub struct ModularRows {
    f: Vec<(u32, u32, u64)>,
    h: Vec<(u32, u32, u64)>,
    f_deg_t: usize,
    h_deg_t: usize,
    sqrt_m3: u64,
}

impl ModularRows {
    pub fn new(f: &BivariatePoly, h: &BivariatePoly) -> Self {
        // P ≡ 3 (mod 4) and P ≡ 1 (mod 3), so -3 has the square root below.
        let sqrt_m3 = powmod(PRIME - 3, (PRIME + 1) / 4);
        debug_assert_eq!(mulmod(sqrt_m3, sqrt_m3), PRIME - 3);
        let reduce = |p: &BivariatePoly| {
            p.terms().map(|((i, j), c)| (*i, *j, rational_mod(c))).collect::<Vec<_>>()
        };
        ModularRows {
            f: reduce(f),
            h: reduce(h),
            f_deg_t: f.degree_y().unwrap_or(0) as usize,
            h_deg_t: h.degree_y().unwrap_or(0) as usize,
            sqrt_m3,
        }
    }

    fn image(&self, z: HalfEisenstein) -> u64 {
        let p = z.p.rem_euclid(PRIME as i64) as u64;
        let q = z.q.rem_euclid(PRIME as i64) as u64;
        mulmod((p + mulmod(q, self.sqrt_m3)) % PRIME, invmod(2))
    }

    fn specialize(terms: &[(u32, u32, u64)], deg_t: usize, s: u64) -> Vec<u64> {
        let mut out = vec![0u64; deg_t + 1];
        for (i, j, c) in terms {
            out[*j as usize] = (out[*j as usize] + mulmod(*c, powmod(s, *i as u64))) % PRIME;
        }
        out
    }

    pub fn verdict(&self, s: HalfEisenstein, bound: i64) -> ModularVerdict {
        let sm = self.image(s);
        let fs = Self::specialize(&self.f, self.f_deg_t, sm);
        let hs = Self::specialize(&self.h, self.h_deg_t, sm);
        if fs[self.f_deg_t] == 0 {
            return ModularVerdict::Unclear;
        }
        let g = gcd_mod(&fs, &hs);
        match g.len() {
            1 => ModularVerdict::NoPartner,
            2 => {
                let t = (PRIME - g[0]) % PRIME;
                let two_t = mulmod(t, 2);
                for q in -bound..=bound {
                    let qr = mulmod(q.rem_euclid(PRIME as i64) as u64, self.sqrt_m3);
                    let pm = (two_t + PRIME - qr) % PRIME;
                    let p = if pm > PRIME / 2 { pm as i64 - PRIME as i64 } else { pm as i64 };
                    if p.abs() <= bound {
                        return ModularVerdict::Single(HalfEisenstein::new(p, q));
                    }
                }
                ModularVerdict::Unclear
            }
            _ => ModularVerdict::Unclear,
        }
    }
}

/// Exact quotient in `Z[x]` by a primitive divisor, if it divides.
fn divide_exact(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    let dd = den.len() - 1;
    if num.len() <= dd {
        return None;
    }
    let lead = den.last().unwrap();
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let (c, r) = rem[i + dd].div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    rem[..dd].iter().all(|c| c.is_zero()).then_some(quot)
}

/// Lattice points `(p, q)` with `q ≥ 0` whose orbit under conjugation
/// exhausts the roots of `R`, with multiplicity, plus the leftover factor.
pub struct LatticeSplit {
    pub roots: Vec<HalfEisenstein>,
    pub leftover: Vec<BigInt>,
}

pub fn split_lattice_roots(poly: &[BigInt], bound: i64) -> LatticeSplit {
    let mut r = poly.to_vec();
    let mut roots = Vec::new();
    let reduce = |r: &[BigInt]| -> Vec<u64> { r.iter().map(to_mod).collect() };
    let mut residues = reduce(&r);
    'scan: for p in -bound..=bound {
        for q in 0..=bound {
            loop {
                if r.len() <= 1 {
                    break 'scan;
                }
                if lattice_residue(&residues, p, q) != (0, 0) {
                    break;
                }
                let divisor = if q == 0 {
                    primitive(vec![BigInt::from(-p), BigInt::from(2)])
                } else {
                    primitive(vec![
                        BigInt::from(p * p + 3 * q * q),
                        BigInt::from(-4 * p),
                        BigInt::from(4),
                    ])
                };
                match divide_exact(&r, &divisor) {
                    Some(quot) => {
                        r = quot;
                        residues = reduce(&r);
                        roots.push(HalfEisenstein::new(p, q));
                        if q != 0 {
                            roots.push(HalfEisenstein::new(p, -q));
                        }
                    }
                    None => break,
                }
            }
        }
    }
    LatticeSplit { roots, leftover: r }
}

/// Numeric roots of an integer polynomial, for diagnostics only.
pub fn approximate_roots(coeffs: &[BigInt]) -> Vec<(f64, f64)> {
    let Some(lead) = coeffs.last() else { return Vec::new() };
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = Rational::from_integer(lead.clone());
    let monic: Vec<Complex64> = coeffs
        .iter()
        .map(|c| Complex64::new((Rational::from_integer(c.clone()) / &lead).to_f64(), 0.0))
        .collect();
    let radius = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * (radius / 2.0).min(10.0)).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z.into_iter().map(|c| (c.re, c.im)).collect()
}

/// `f(s₀, ·)` as a polynomial in `t` over `Q(√-3)`.
pub fn specialize_s(p: &BivariatePoly, s: &EisensteinRational) -> UniPoly<EisensteinRational> {
    UniPoly::new(p.substitute_x(s, |c| EisensteinRational::real(c.clone())))
}

/// Lattice roots of a polynomial over `Q(√-3)`; errors if a nonconstant
/// factor survives the scan.
pub fn lattice_roots_over_field(
    poly: &UniPoly<EisensteinRational>,
    bound: i64,
    degree: usize,
) -> Result<Vec<HalfEisenstein>> {
    let mut r = poly.clone();
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            let z = HalfEisenstein::new(p, q).to_field();
            while r.degree().unwrap_or(0) > 0 && r.eval(&z).is_zero() {
                r = r.div_rem(&UniPoly::linear_root(z.clone())).unwrap().0;
                out.push(HalfEisenstein::new(p, q));
            }
        }
    }
    let left = r.degree().unwrap_or(0);
    if left > 0 {
        return Err(QesError::RootSetIncomplete {
            degree,
            count: left,
            approx: Vec::new(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn n1_rows_reduce_to_the_cubic() {
        let (f, h) = consistency_rows(1);
        // f = t - s², h = 1 - s t
        let s = BivariatePoly::x();
        let t = BivariatePoly::y();
        assert_eq!(f, &t - &(&s * &s));
        assert_eq!(h, BivariatePoly::constant(Rational::from(1)) - &s * &t);
        // Res_t = ±(s³ - 1)
        assert_eq!(resultant_in_s(&f, &h), ints(&[-1, 0, 0, 1]));
    }

    #[test]
    fn interpolated_resultant_matches_polynomial_bareiss() {
        for n in 0..=4 {
            let (f, h) = consistency_rows(n);
            let by_interp = resultant_in_s(&f, &h);
            // Direct Sylvester determinant over Q[s].
            let to_t = |p: &BivariatePoly| -> Vec<UniPoly> {
                let dy = p.degree_y().unwrap() as usize;
                (0..=dy)
                    .map(|j| {
                        let dx = p.degree_x().unwrap_or(0) as usize;
                        UniPoly::new((0..=dx).map(|i| p.coeff(i as u32, j as u32)).collect())
                    })
                    .collect()
            };
            let a = to_t(&f);
            let b = to_t(&h);
            let (m, k) = (a.len() - 1, b.len() - 1);
            let mut mat = vec![vec![UniPoly::zero(); m + k]; m + k];
            for r in 0..k {
                for (j, c) in a.iter().rev().enumerate() {
                    mat[r][r + j] = c.clone();
                }
            }
            for r in 0..m {
                for (j, c) in b.iter().rev().enumerate() {
                    mat[k + r][r + j] = c.clone();
                }
            }
            let direct = if m + k == 0 { UniPoly::constant(Rational::from(1)) } else { determinant(&mat) };
            let lead = direct.leading().unwrap().clone();
            let monic_direct = direct.scale(&lead.recip().unwrap());
            let interp = UniPoly::new(by_interp.iter().map(|c| Rational::from_integer(c.clone())).collect());
            let interp = interp.scale(&interp.leading().unwrap().recip().unwrap());
            assert_eq!(interp, monic_direct, "N = {n}");
        }
    }

    #[test]
    fn lattice_split_of_cyclotomic_factors() {
        // (s - 1)(s² + s + 1)(2s + 3) = s³-1 times 2s+3
        let p = ints(&[-3, -2, 0, 3, 2]);
        let split = split_lattice_roots(&p, 4);
        assert_eq!(split.leftover.len(), 1);
        let mut roots = split.roots.clone();
        roots.sort();
        assert_eq!(
            roots,
            vec![
                HalfEisenstein::new(-3, 0),
                HalfEisenstein::new(-1, -1),
                HalfEisenstein::new(-1, 1),
                HalfEisenstein::new(2, 0),
            ]
        );
    }

    #[test]
    fn off_lattice_leftover_is_reported() {
        // s² - 2 has no lattice roots.
        let p = ints(&[-2, 0, 1]);
        let split = split_lattice_roots(&p, 6);
        assert!(split.roots.is_empty());
        let approx = approximate_roots(&split.leftover);
        let mut re: Vec<f64> = approx.iter().map(|z| z.0).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2f64.sqrt()).abs() < 1e-10 && (re[1] - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn repeated_roots_are_split_with_multiplicity() {
        // (2s - 1)² (s² - s + 1)
        let p = ints(&[1, -4, 4]);
        let q = ints(&[1, -1, 1]);
        let mut prod = vec![BigInt::zero(); 5];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let split = split_lattice_roots(&prod, 3);
        assert_eq!(split.leftover.len(), 1);
        assert_eq!(split.roots.iter().filter(|z| **z == HalfEisenstein::new(1, 0)).count(), 2);
        assert!(split.roots.contains(&HalfEisenstein::new(1, 1)));
    }
}
