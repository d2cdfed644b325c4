//! The strong-core limit `λ = 0`: roots of the coupled secular system, the
//! integer Taylor vectors of each root, and the closed-form factorizations.

pub mod elimination;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::exactnum::linalg::{determinant, rank};
use crate::exactnum::{primitive_integer_vector, EisensteinRational, Field, HalfEisenstein, Rational, Scalar, UniPoly};
use crate::magyari::build_split;

use elimination::{
    approximate_roots, consistency_rows, lattice_roots_over_field, resultant_in_s, specialize_s,
    split_lattice_roots, ModularRows, ModularVerdict,
};

/// A simultaneous root `(s, t)` of both secular determinants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootPair {
    pub s: HalfEisenstein,
    pub t: HalfEisenstein,
    #[serde(rename = "N")]
    pub degree: usize,
    /// Branch index `n` for the real family `s = t = N - 3n`.
    #[serde(rename = "n", default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<usize>,
}

impl RootPair {
    /// The real root `s = t = N - 3n`.
    pub fn real(degree: usize, n: usize) -> Result<Self> {
        if n > degree / 2 {
            return Err(QesError::InvalidArgument(format!(
                "branch n = {n} out of range 0..={} for N = {degree}",
                degree / 2
            )));
        }
        let v = HalfEisenstein::from_int(degree as i64 - 3 * n as i64);
        Ok(RootPair { s: v, t: v, degree, branch: Some(n) })
    }

    fn from_parts(degree: usize, s: HalfEisenstein, t: HalfEisenstein) -> Self {
        let branch = (s == t && s.is_real())
            .then(|| 2 * degree as i64 - s.p)
            .filter(|d| d % 6 == 0 && *d >= 0 && *d / 6 <= degree as i64 / 2)
            .map(|d| (d / 6) as usize);
        RootPair { s, t, degree, branch }
    }

    pub fn is_real(&self) -> bool {
        self.s.is_real() && self.t.is_real()
    }

    /// `(s, t)` as rationals for a real root.
    pub fn real_values(&self) -> Option<(Rational, Rational)> {
        Some((self.s.real_value()?, self.t.real_value()?))
    }

    pub fn conj(&self) -> Self {
        RootPair { s: self.s.conj(), t: self.t.conj(), ..*self }
    }

    /// Table order: decreasing `Re s`, then `|Im s|`, positive imaginary
    /// part first.
    fn sort_key(&self) -> (i64, i64, i64, i64, i64) {
        (-self.s.p, self.s.q.abs(), -self.s.q, -self.t.p, -self.t.q)
    }
}

/// Integer Taylor coefficients `u₀…u_N` of a zero-order solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    #[serde(rename = "N")]
    pub degree: usize,
    pub entries: Vec<Rational>,
    pub root: RootPair,
}

impl CoefficientVector {
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|e| e.to_i64()).collect()
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(self.entries.clone())
    }
}

/// `(det 𝒥ᵀQ⁽⁰⁾(s,t), det 𝒦ᵀQ⁽⁰⁾(s,t))`, the top and bottom square blocks.
pub fn secular_dets<F: Scalar>(degree: usize, s: F, t: F) -> (F, F) {
    let q = build_split(degree, s, t);
    (determinant(&q.top_block()), determinant(&q.bottom_block()))
}

/// Forward solve of rows `0..N-1` from `u₀ = 1`; `None` if either trailing
/// row fails, i.e. `(s, t)` is not a root.
pub fn kernel_vector<F: Field>(degree: usize, s: &F, t: &F) -> Option<Vec<F>> {
    let n = degree;
    let mut u = vec![F::one()];
    for k in 0..n {
        let mut acc = s.clone() * u[k].clone();
        if k >= 1 {
            acc = acc + t.clone() * u[k - 1].clone();
        }
        if k >= 2 {
            acc = acc + F::from_int((n + 2 - k) as i64) * u[k - 2].clone();
        }
        let next = (-acc).exact_div(&F::from_int(k as i64 + 1))?;
        u.push(next);
    }
    let mut row_n = s.clone() * u[n].clone();
    if n >= 1 {
        row_n = row_n + t.clone() * u[n - 1].clone();
    }
    if n >= 2 {
        row_n = row_n + F::from_int(2) * u[n - 2].clone();
    }
    let mut row_last = t.clone() * u[n].clone();
    if n >= 1 {
        row_last = row_last + u[n - 1].clone();
    }
    (row_n.is_zero() && row_last.is_zero()).then_some(u)
}

/// The real family `s = t = N - 3n`, each member checked exactly.
pub fn real_roots(degree: usize) -> Result<Vec<RootPair>> {
    (0..=degree / 2)
        .map(|n| {
            let root = RootPair::real(degree, n)?;
            let (s, t) = root.real_values().unwrap();
            let (d1, d2) = secular_dets(degree, s.clone(), t.clone());
            let q0 = build_split(degree, s.clone(), t.clone()).q0_dense();
            if !d1.is_zero() || !d2.is_zero() || rank(&q0) > degree || kernel_vector(degree, &s, &t).is_none() {
                return Err(QesError::Inconsistent(format!(
                    "s = t = {s} fails the exact root check at N = {degree}"
                )));
            }
            Ok(root)
        })
        .collect()
}

/// Complete root set with its elimination certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootCertificate {
    #[serde(rename = "N")]
    pub degree: usize,
    /// Degree of `Res_t(f, h)` in `s`.
    pub resultant_degree: usize,
    /// Half-width of the lattice scan in `(p, q)`.
    pub scan_bound: i64,
    pub roots: Vec<RootPair>,
}

/// All roots, proven complete: every root of the resultant is accounted for
/// by a lattice point, and each lattice `s` is paired with every `t` solving
/// both trailing rows.
pub fn certify_roots(degree: usize) -> Result<RootCertificate> {
    let (f, h) = consistency_rows(degree);
    let res = resultant_in_s(&f, &h);
    if res.is_empty() {
        return Err(QesError::Inconsistent(format!(
            "resultant vanishes identically at N = {degree}: the root set is not finite"
        )));
    }
    let resultant_degree = res.len() - 1;
    let bound = 2 * degree as i64;
    let split = split_lattice_roots(&res, bound);
    if split.leftover.len() > 1 {
        return Err(QesError::RootSetIncomplete {
            degree,
            count: split.leftover.len() - 1,
            approx: approximate_roots(&split.leftover),
        });
    }
    let s_values: BTreeSet<HalfEisenstein> = split.roots.into_iter().collect();
    let modular = ModularRows::new(&f, &h);
    let mut roots = Vec::new();
    for s in s_values {
        let sf = s.to_field();
        let ts = match modular.verdict(s, bound) {
            ModularVerdict::NoPartner => continue,
            ModularVerdict::Single(t) if kernel_vector(degree, &sf, &t.to_field()).is_some() => vec![t],
            _ => exact_partners(&f, &h, s, bound, degree)?,
        };
        for t in ts {
            if kernel_vector(degree, &sf, &t.to_field()).is_none() {
                return Err(QesError::Inconsistent(format!(
                    "(s, t) = ({s}, {t}) passed elimination but has no kernel vector"
                )));
            }
            roots.push(RootPair::from_parts(degree, s, t));
        }
    }
    roots.sort_by_key(RootPair::sort_key);
    roots.dedup();
    Ok(RootCertificate { degree, resultant_degree, scan_bound: bound, roots })
}

/// Every `t` with `f(s, t) = h(s, t) = 0`, from the exact gcd over `Q(√-3)`.
fn exact_partners(
    f: &crate::exactnum::BivariatePoly,
    h: &crate::exactnum::BivariatePoly,
    s: HalfEisenstein,
    bound: i64,
    degree: usize,
) -> Result<Vec<HalfEisenstein>> {
    let sf = s.to_field();
    let g = specialize_s(f, &sf).gcd(&specialize_s(h, &sf));
    match g.degree() {
        None => Err(QesError::Inconsistent(format!(
            "both trailing rows vanish identically at s = {s}"
        ))),
        Some(0) => Ok(Vec::new()),
        Some(1) => {
            let t = -g.coeff(0);
            Ok(vec![t.to_half().ok_or_else(|| QesError::OffLattice {
                p: (&t.re * Rational::from(2)).to_string(),
                q: (&t.im * Rational::from(2)).to_string(),
            })?])
        }
        Some(_) => lattice_roots_over_field(&g, bound, degree),
    }
}

pub fn enumerate_roots(degree: usize) -> Result<Vec<RootPair>> {
    certify_roots(degree).map(|c| c.roots)
}

/// `u₀ = 1` integer kernel vector of a real root.
pub fn zero_coefficients(root: &RootPair) -> Result<CoefficientVector> {
    let (s, t) = root.real_values().ok_or_else(|| {
        QesError::InvalidArgument(format!(
            "zero_coefficients needs a real root, got s = {}; use zero_coefficients_complex",
            root.s
        ))
    })?;
    let u = kernel_vector(root.degree, &s, &t).ok_or_else(|| QesError::NotARoot {
        degree: root.degree,
        s: s.to_string(),
        t: t.to_string(),
    })?;
    let mut entries = primitive_integer_vector(&u);
    if entries[0].is_negative() {
        entries = entries.iter().map(|e| -e).collect();
    }
    Ok(CoefficientVector { degree: root.degree, entries, root: *root })
}

/// Kernel vector with `u₀ = 1` over `Q(√-3)` for any root.
pub fn zero_coefficients_complex(root: &RootPair) -> Result<Vec<EisensteinRational>> {
    kernel_vector(root.degree, &root.s.to_field(), &root.t.to_field()).ok_or_else(|| {
        QesError::NotARoot { degree: root.degree, s: root.s.to_string(), t: root.t.to_string() }
    })
}

/// `(1 - x)^(N-2n) (1 + x + x²)^n` expanded in `x = r/μ`.
pub fn closed_form_wavefunction(degree: usize, n: usize) -> Result<UniPoly> {
    if n > degree / 2 {
        return Err(QesError::InvalidArgument(format!(
            "branch n = {n} out of range 0..={} for N = {degree}",
            degree / 2
        )));
    }
    let int = |v: &[i64]| UniPoly::new(v.iter().map(|&c| Rational::from(c)).collect());
    Ok(&int(&[1, -1]).pow((degree - 2 * n) as u32) * &int(&[1, 1, 1]).pow(n as u32))
}

/// Multiplicity of the node at `x = 1`.
pub fn nodal_multiplicity(poly: &UniPoly) -> usize {
    poly.root_multiplicity(&Rational::from(1))
}

/// Trinomial triangle rows `0..=K`: each entry is the sum of its three
/// nearest neighbours in the row above.
pub fn pascal_ground(k: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::from(1)]];
    for _ in 0..k {
        let prev = rows.last().unwrap();
        let get = |i: isize| -> BigInt {
            if i < 0 || i as usize >= prev.len() {
                BigInt::zero()
            } else {
                prev[i as usize].clone()
            }
        };
        let row = (0..prev.len() + 2)
            .map(|i| {
                let i = i as isize;
                get(i) + get(i - 1) + get(i - 2)
            })
            .collect();
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests;
