//! The order-by-order hierarchy in `λ` around a real zero-order branch.
//!
//! Expanding `s`, `t` and `u⃗` in `λ`, order `k` of `Q(λ)u⃗ = 0` reads
//! `Q⁽⁰⁾u⃗⁽ᵏ⁾ + s⁽ᵏ⁾𝒥u⃗⁽⁰⁾ + t⁽ᵏ⁾𝒦u⃗⁽⁰⁾ = Ξ⁽ᵏ⁻¹⁾`. Projecting on the two left
//! null vectors of `Q⁽⁰⁾` fixes `s⁽ᵏ⁾ ± t⁽ᵏ⁾`; a triangular solve then gives
//! `u⃗⁽ᵏ⁾` with one component pinned to zero. Everything is exact in the
//! formal symbols `b`, `g`.

use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::exactnum::linalg::{dot, left_nullspace, Matrix};
use crate::exactnum::{primitive_integer_vector, BivariatePoly, Rational, Scalar};
use crate::magyari::{build_split, PseudoHamiltonian, SelectorPair};
use crate::verify::real::Real;
use crate::zeroorder::{zero_coefficients, CoefficientVector, RootPair};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeftNullPair {
    pub v_plus: Vec<Rational>,
    pub v_minus: Vec<Rational>,
    /// `⟨v₊|𝒥u⃗⁽⁰⁾⟩ = ⟨v₊|𝒦u⃗⁽⁰⁾⟩`
    pub c_plus: Rational,
    /// `⟨v₋|𝒥u⃗⁽⁰⁾⟩ = -⟨v₋|𝒦u⃗⁽⁰⁾⟩`
    pub c_minus: Rational,
}

/// Which component of every correction `u⃗⁽ᵏ⁾`, `k ≥ 1`, is pinned to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gauge {
    /// `u⁽ᵏ⁾₀ = 0`, forward substitution.
    Down,
    /// `u⁽ᵏ⁾_N = 0`, backward substitution.
    Up,
}

impl std::str::FromStr for Gauge {
    type Err = QesError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "down" => Ok(Gauge::Down),
            "up" => Ok(Gauge::Up),
            other => Err(QesError::InvalidArgument(format!("unknown gauge {other:?}, expected down or up"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSeries {
    #[serde(rename = "N")]
    pub degree: usize,
    #[serde(rename = "n")]
    pub branch: usize,
    /// Highest order `K_max`.
    pub order: usize,
    pub gauge: Gauge,
    pub s_corr: Vec<BivariatePoly>,
    pub t_corr: Vec<BivariatePoly>,
    pub u_corr: Vec<Vec<BivariatePoly>>,
}

fn normalize_sign(v: Vec<Rational>) -> Vec<Rational> {
    let v = primitive_integer_vector(&v);
    match v.iter().find(|x| x.signum() != 0) {
        Some(first) if first.is_negative() => v.iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// The two left null vectors of `Q⁽⁰⁾(s, s)`, recombined so that their
/// overlaps with `𝒥u⃗⁽⁰⁾` and `𝒦u⃗⁽⁰⁾` are equal (`v₊`) and opposite (`v₋`).
pub fn left_null_pair(root: &RootPair, u0: &CoefficientVector) -> Result<LeftNullPair> {
    let (s, t) = root.real_values().ok_or_else(|| {
        QesError::InvalidArgument(format!("left null pair needs a real branch, got s = {}", root.s))
    })?;
    let n = root.degree;
    let q0 = build_split(n, s, t).q0_dense();
    let basis = left_nullspace(&q0);
    if basis.len() != 2 {
        return Err(QesError::RankAnomaly { expected: 2, found: basis.len() });
    }
    let sel = SelectorPair::new(n);
    let ju = sel.apply_j(&u0.entries, Rational::zero());
    let ku = sel.apply_k(&u0.entries, Rational::zero());
    let a: Vec<Rational> = basis.iter().map(|v| dot(v, &ju)).collect();
    let b: Vec<Rational> = basis.iter().map(|v| dot(v, &ku)).collect();
    let combine = |x: Rational, y: Rational| -> Vec<Rational> {
        basis[0].iter().zip(&basis[1]).map(|(p, q)| &x * p - &y * q).collect()
    };
    let v_plus = combine(&a[1] - &b[1], &a[0] - &b[0]);
    let v_minus = combine(&a[1] + &b[1], &a[0] + &b[0]);
    if v_plus.iter().all(|x| x.signum() == 0) {
        return Err(QesError::DegenerateOverlap { which: '-' });
    }
    if v_minus.iter().all(|x| x.signum() == 0) {
        return Err(QesError::DegenerateOverlap { which: '+' });
    }
    let v_plus = normalize_sign(v_plus);
    let v_minus = normalize_sign(v_minus);
    let c_plus = dot(&v_plus, &ju);
    let c_minus = dot(&v_minus, &ju);
    if c_plus.signum() == 0 {
        return Err(QesError::DegenerateOverlap { which: '+' });
    }
    if c_minus.signum() == 0 {
        return Err(QesError::DegenerateOverlap { which: '-' });
    }
    if dot(&v_plus, &ku) != c_plus || dot(&v_minus, &ku) != -&c_minus {
        return Err(QesError::Inconsistent("left null pair lost its overlap signs".into()));
    }
    Ok(LeftNullPair { v_plus, v_minus, c_plus, c_minus })
}

fn apply_q0(q: &PseudoHamiltonian, u: &[BivariatePoly]) -> Vec<BivariatePoly> {
    (0..q.rows())
        .map(|r| {
            let lo = r.saturating_sub(2);
            let hi = (r + 1).min(q.degree);
            (lo..=hi).fold(BivariatePoly::zero(), |acc, c| acc + u[c].scale(&q.q0_entry(r, c)))
        })
        .collect()
}

fn apply_q1(q: &PseudoHamiltonian, u: &[BivariatePoly]) -> Vec<BivariatePoly> {
    (0..q.rows())
        .map(|r| {
            let lo = r.saturating_sub(1);
            let hi = (r + 1).min(q.degree);
            (lo..=hi).fold(BivariatePoly::zero(), |acc, c| acc + &q.q1_entry(r, c) * &u[c])
        })
        .collect()
}

/// `(s𝒥 + t𝒦)u⃗` for symbolic `s`, `t`.
fn apply_selectors(s: &BivariatePoly, t: &BivariatePoly, u: &[BivariatePoly]) -> Vec<BivariatePoly> {
    let n = u.len() - 1;
    (0..n + 2)
        .map(|r| {
            let mut acc = BivariatePoly::zero();
            if r <= n {
                acc = acc + s * &u[r];
            }
            if r >= 1 {
                acc = acc + t * &u[r - 1];
            }
            acc
        })
        .collect()
}

fn constant_vector(v: &[Rational]) -> Vec<BivariatePoly> {
    v.iter().map(|x| BivariatePoly::constant(x.clone())).collect()
}

/// `Ξ⁽ᵏ⁻¹⁾ = -Q⁽¹⁾u⃗⁽ᵏ⁻¹⁾ - Σ_{j=1}^{k-1} (s⁽ʲ⁾𝒥 + t⁽ʲ⁾𝒦) u⃗⁽ᵏ⁻ʲ⁾`, using orders
/// below `k` from `series`.
pub fn rhs_xi(k: usize, series: &PerturbationSeries, q: &PseudoHamiltonian) -> Vec<BivariatePoly> {
    assert!(k >= 1 && series.u_corr.len() >= k, "rhs_xi needs orders 0..k-1");
    let mut xi: Vec<BivariatePoly> = apply_q1(q, &series.u_corr[k - 1]).into_iter().map(|x| -x).collect();
    for j in 1..k {
        let term = apply_selectors(&series.s_corr[j], &series.t_corr[j], &series.u_corr[k - j]);
        for (x, y) in xi.iter_mut().zip(term) {
            *x = &*x - &y;
        }
    }
    xi
}

fn project(v: &[Rational], xi: &[BivariatePoly]) -> BivariatePoly {
    v.iter().zip(xi).fold(BivariatePoly::zero(), |acc, (c, x)| acc + x.scale(c))
}

/// `s⁽ᵏ⁾ + t⁽ᵏ⁾ = ⟨v₊|Ξ⟩/c₊`, `s⁽ᵏ⁾ - t⁽ᵏ⁾ = ⟨v₋|Ξ⟩/c₋`.
pub fn solve_st(pair: &LeftNullPair, xi: &[BivariatePoly]) -> Result<(BivariatePoly, BivariatePoly)> {
    if pair.c_plus.signum() == 0 {
        return Err(QesError::DegenerateOverlap { which: '+' });
    }
    if pair.c_minus.signum() == 0 {
        return Err(QesError::DegenerateOverlap { which: '-' });
    }
    let sum = project(&pair.v_plus, xi).scale(&pair.c_plus.recip()?);
    let diff = project(&pair.v_minus, xi).scale(&pair.c_minus.recip()?);
    let half = Rational::frac(1, 2);
    Ok(((&sum + &diff).scale(&half), (&sum - &diff).scale(&half)))
}

/// Solve `Q⁽⁰⁾(s₀, t₀)u⃗ = τ` in the given gauge, then check every row.
pub fn propagate_u(
    k: usize,
    tau: &[BivariatePoly],
    root: &RootPair,
    gauge: Gauge,
) -> Result<Vec<BivariatePoly>> {
    let (s0, t0) = root.real_values().ok_or_else(|| {
        QesError::InvalidArgument("propagate_u needs a real branch".into())
    })?;
    let n = root.degree;
    let q = build_split(n, s0.clone(), t0.clone());
    let mut u = vec![BivariatePoly::zero(); n + 1];
    match gauge {
        Gauge::Down => {
            for r in 0..n {
                let mut acc = tau[r].clone() - u[r].scale(&s0);
                if r >= 1 {
                    acc = acc - u[r - 1].scale(&t0);
                }
                if r >= 2 {
                    acc = acc - u[r - 2].scale(&Rational::from((n + 2 - r) as i64));
                }
                u[r + 1] = acc.scale(&Rational::frac(1, r as i64 + 1));
            }
        }
        Gauge::Up => {
            for r in (2..=n + 1).rev() {
                let mut acc = tau[r].clone() - u[r - 1].scale(&t0);
                if r <= n {
                    acc = acc - u[r].scale(&s0);
                }
                if r < n {
                    acc = acc - u[r + 1].scale(&Rational::from(r as i64 + 1));
                }
                u[r - 2] = acc.scale(&Rational::frac(1, (n + 2 - r) as i64));
            }
        }
    }
    let check = apply_q0(&q, &u);
    if check.iter().zip(tau).any(|(a, b)| a != b) {
        return Err(QesError::Inconsistent(format!(
            "order {k}: consistency rows do not vanish after the {gauge:?} solve at N = {n}"
        )));
    }
    Ok(u)
}

/// Lower-triangular block `R⋆` used by the downward solve: rows `0..N-1`,
/// columns `1..N` of `Q⁽⁰⁾`.
pub fn propagator_down(degree: usize, s: &Rational, t: &Rational) -> Matrix<Rational> {
    let q = build_split(degree, s.clone(), t.clone()).q0_dense();
    q[..degree].iter().map(|row| row[1..].to_vec()).collect()
}

/// Upper-triangular block used by the upward solve: rows `2..N+1`,
/// columns `0..N-1`.
pub fn propagator_up(degree: usize, s: &Rational, t: &Rational) -> Matrix<Rational> {
    let q = build_split(degree, s.clone(), t.clone()).q0_dense();
    q[2..].iter().map(|row| row[..degree].to_vec()).collect()
}

/// Full order-`k` residual `Q⁽⁰⁾u⃗⁽ᵏ⁾ + Q⁽¹⁾u⃗⁽ᵏ⁻¹⁾ + Σ_{j=1}^{k} (s⁽ʲ⁾𝒥 + t⁽ʲ⁾𝒦)u⃗⁽ᵏ⁻ʲ⁾`.
pub fn order_residual(series: &PerturbationSeries, k: usize) -> Vec<BivariatePoly> {
    let s0 = series.s_corr[0].as_constant().expect("constant zero order");
    let t0 = series.t_corr[0].as_constant().expect("constant zero order");
    let q = build_split(series.degree, s0, t0);
    let mut res = apply_q0(&q, &series.u_corr[k]);
    if k >= 1 {
        for (x, y) in res.iter_mut().zip(apply_q1(&q, &series.u_corr[k - 1])) {
            *x = &*x + &y;
        }
        for j in 1..=k {
            let term = apply_selectors(&series.s_corr[j], &series.t_corr[j], &series.u_corr[k - j]);
            for (x, y) in res.iter_mut().zip(term) {
                *x = &*x + &y;
            }
        }
    }
    res
}

/// Build the hierarchy through order `K_max` for branch `n`.
pub fn run_series(degree: usize, branch: usize, order: usize, gauge: Gauge) -> Result<PerturbationSeries> {
    let root = RootPair::real(degree, branch)?;
    let u0 = zero_coefficients(&root)?;
    let pair = left_null_pair(&root, &u0)?;
    run_series_with(&root, &u0, &pair, order, gauge)
}

pub fn run_series_with(
    root: &RootPair,
    u0: &CoefficientVector,
    pair: &LeftNullPair,
    order: usize,
    gauge: Gauge,
) -> Result<PerturbationSeries> {
    let (s0, t0) = root.real_values().ok_or_else(|| {
        QesError::InvalidArgument("perturbation series needs a real branch".into())
    })?;
    let n = root.degree;
    let q = build_split(n, s0.clone(), t0.clone());
    let sel = SelectorPair::new(n);
    let ju = constant_vector(&sel.apply_j(&u0.entries, Rational::zero()));
    let ku = constant_vector(&sel.apply_k(&u0.entries, Rational::zero()));
    let mut series = PerturbationSeries {
        degree: n,
        branch: root.branch.unwrap_or_default(),
        order,
        gauge,
        s_corr: vec![BivariatePoly::constant(s0)],
        t_corr: vec![BivariatePoly::constant(t0)],
        u_corr: vec![constant_vector(&u0.entries)],
    };
    for k in 1..=order {
        let xi = rhs_xi(k, &series, &q);
        let (sk, tk) = solve_st(pair, &xi)?;
        let tau: Vec<BivariatePoly> = xi
            .iter()
            .zip(ju.iter().zip(&ku))
            .map(|(x, (j, kk))| x - &(&(&sk * j) + &(&tk * kk)))
            .collect();
        let uk = propagate_u(k, &tau, root, gauge)?;
        series.s_corr.push(sk);
        series.t_corr.push(tk);
        series.u_corr.push(uk);
    }
    Ok(series)
}

/// Partial sums through `K_max` at numeric `(λ, b, g)`.
pub fn evaluate_series(series: &PerturbationSeries, lambda: f64, b: f64, g: f64) -> (f64, f64, Vec<f64>) {
    evaluate_series_in(series, series.order, &lambda, &b, &g)
}

/// Partial sums through order `upto` in any [`Real`] type.
pub fn evaluate_series_in<T: Real>(
    series: &PerturbationSeries,
    upto: usize,
    lambda: &T,
    b: &T,
    g: &T,
) -> (T, T, Vec<T>) {
    let upto = upto.min(series.order);
    let lift = |c: &Rational| T::from_rational(c);
    let mut s = T::zero();
    let mut t = T::zero();
    let mut u = vec![T::zero(); series.degree + 1];
    let mut pow = T::one();
    for k in 0..=upto {
        s = s + pow.clone() * series.s_corr[k].eval_with(b, g, lift);
        t = t + pow.clone() * series.t_corr[k].eval_with(b, g, lift);
        for (ui, c) in u.iter_mut().zip(&series.u_corr[k]) {
            *ui = ui.clone() + pow.clone() * c.eval_with(b, g, lift);
        }
        pow = pow * lambda.clone();
    }
    (s, t, u)
}

#[cfg(test)]
mod tests;
