//! The physical model behind the pseudo-Hamiltonian.
//!
//! The quartic potential `V = A r⁴ + B r³ + C r² + D r + F/r + G/r²` with the
//! ansatz `ψ = exp(-αr³/3 - βr²/2 - γr) Σ ωₙ r^(n+l+1)` terminates after
//! `N + 1` terms only when the `(N+2) × (N+1)` four-diagonal recurrence
//! matrix annihilates `ω`. After `ωₙ → uₙ = ωₙ μⁿ`, scaling row `k` by `μᵏ`
//! and dividing every row by `2τ`, the matrix splits as
//! `Q = Q⁽⁰⁾(s, t) + λ Q⁽¹⁾(b, g)` with integer outer bands.

use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::exactnum::linalg::Matrix;
use crate::exactnum::{BivariatePoly, Rational, Scalar};

/// Input couplings. `D` and `F` are outputs of the termination conditions
/// and are deliberately absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// `r⁴` coupling.
    pub a: Rational,
    /// `r³` coupling.
    pub b: Rational,
    /// `r²` coupling.
    pub c: Rational,
    /// `r⁻²` coupling.
    pub g: Rational,
    /// Angular momentum ℓ.
    pub ell: u32,
}

impl PhysicalParams {
    pub fn new(a: Rational, b: Rational, c: Rational, g: Rational, ell: u32) -> Self {
        PhysicalParams { a, b, c, g, ell }
    }

    /// `G + (ℓ + 1/2)²`, which must be positive.
    pub fn core_discriminant(&self) -> Rational {
        let half = Rational::frac(2 * self.ell as i64 + 1, 2);
        &self.g + &half * &half
    }

    /// A physical realization of formal strong-core parameters `(λ, b, g)`:
    /// ℓ = 0, `Ω = 1/λ` and `α = Ω`, which makes `μ = 1`, `β = b`, `γ = g`
    /// and keeps every derived quantity rational.
    pub fn canonical(lambda: &Rational, b: &Rational, g: &Rational) -> Result<Self> {
        if lambda.signum() <= 0 || *lambda >= Rational::from(2) {
            return Err(QesError::Domain(format!(
                "lambda = {lambda} must lie in (0, 2) so that Ω = 1/λ > 1/2"
            )));
        }
        let omega = lambda.recip()?;
        let l = &omega - Rational::from(1);
        let g_core = &l * (&l + Rational::from(1));
        let a = &omega * &omega;
        let b_cpl = Rational::from(2) * &omega * b;
        let c_cpl = b * b + Rational::from(2) * &omega * g;
        Ok(PhysicalParams::new(a, b_cpl, c_cpl, g_core, 0))
    }
}

/// A derived parameter: always available as a float, and exactly when every
/// root extraction on the way happened to be rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamValue {
    pub value: f64,
    pub exact: Option<Rational>,
}

impl ParamValue {
    fn exact(r: Rational) -> Self {
        ParamValue { value: r.to_f64(), exact: Some(r) }
    }

    fn from_parts(value: f64, exact: Option<Rational>) -> Self {
        match exact {
            Some(r) => ParamValue::exact(r),
            None => ParamValue { value, exact: None },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub degree: usize,
    pub ell: u32,
    /// `√A`
    pub alpha: ParamValue,
    /// `B / 2α`
    pub beta: ParamValue,
    /// `(C - β²) / 2α`
    pub gamma: ParamValue,
    /// `l` with `l(l+1) = G + ℓ(ℓ+1)`, `l > -1/2`.
    pub l_eff: ParamValue,
    /// `l + 1`
    pub omega: ParamValue,
    /// `(Ω/α)^(1/3)`
    pub mu: ParamValue,
    /// `(Ω²α)^(1/3)`
    pub tau: ParamValue,
    /// `1/Ω = 1/(μτ)`
    pub lambda: ParamValue,
    /// Formal symbol `b = βμ²`.
    pub b: ParamValue,
    /// Formal symbol `g = γμ`.
    pub g: ParamValue,
    /// Termination-admitting linear coupling `D(N)`.
    pub d: ParamValue,
}

impl AnsatzParams {
    /// `D(N) = -2α(N + l + 2) + 2βγ` for another truncation degree.
    pub fn d_of_n(&self, degree: usize) -> ParamValue {
        let n = degree as f64;
        let value = -2.0 * self.alpha.value * (n + self.l_eff.value + 2.0)
            + 2.0 * self.beta.value * self.gamma.value;
        let exact = match (&self.alpha.exact, &self.l_eff.exact, &self.beta.exact, &self.gamma.exact) {
            (Some(a), Some(l), Some(b), Some(g)) => Some(
                Rational::from(-2) * a * (Rational::from(degree as i64) + l + Rational::from(2))
                    + Rational::from(2) * b * g,
            ),
            _ => None,
        };
        ParamValue::from_parts(value, exact)
    }

    /// True when every parameter is known exactly.
    pub fn is_exact(&self) -> bool {
        self.exact_params().is_some()
    }

    /// `(α, β, γ, l, Ω, μ, τ)` as rationals, if all are exact.
    pub fn exact_params(&self) -> Option<ExactAnsatz> {
        Some(ExactAnsatz {
            alpha: self.alpha.exact.clone()?,
            beta: self.beta.exact.clone()?,
            gamma: self.gamma.exact.clone()?,
            l_eff: self.l_eff.exact.clone()?,
            omega: self.omega.exact.clone()?,
            mu: self.mu.exact.clone()?,
            tau: self.tau.exact.clone()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactAnsatz {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub l_eff: Rational,
    pub omega: Rational,
    pub mu: Rational,
    pub tau: Rational,
}

impl ExactAnsatz {
    pub fn lambda(&self) -> Rational {
        self.omega.recip().expect("Ω > 1/2")
    }
    pub fn b(&self) -> Rational {
        &self.beta * &self.mu * &self.mu
    }
    pub fn g(&self) -> Rational {
        &self.gamma * &self.mu
    }
}

pub fn derive_ansatz(params: &PhysicalParams, degree: usize) -> Result<AnsatzParams> {
    if params.a.signum() <= 0 {
        return Err(QesError::Domain(format!(
            "A = {} must be positive for normalizable asymptotics",
            params.a
        )));
    }
    let disc = params.core_discriminant();
    if disc.signum() <= 0 {
        return Err(QesError::Domain(format!(
            "core too attractive: G + (ℓ+1/2)² = {disc} ≤ 0"
        )));
    }
    let two = Rational::from(2);

    let alpha_x = params.a.sqrt_exact();
    let alpha = ParamValue::from_parts(params.a.to_f64().sqrt(), alpha_x.clone());

    let beta_x = alpha_x.as_ref().map(|a| &params.b / (&two * a));
    let beta = ParamValue::from_parts(params.b.to_f64() / (2.0 * alpha.value), beta_x.clone());

    let gamma_x = match (&alpha_x, &beta_x) {
        (Some(a), Some(b)) => Some((&params.c - b * b) / (&two * a)),
        _ => None,
    };
    let gamma = ParamValue::from_parts(
        (params.c.to_f64() - beta.value * beta.value) / (2.0 * alpha.value),
        gamma_x.clone(),
    );

    let l_x = disc.sqrt_exact().map(|r| r - Rational::frac(1, 2));
    let l_eff = ParamValue::from_parts(disc.to_f64().sqrt() - 0.5, l_x.clone());

    let omega_x = l_x.as_ref().map(|l| l + Rational::from(1));
    let omega = ParamValue::from_parts(l_eff.value + 1.0, omega_x.clone());

    let mu_x = match (&omega_x, &alpha_x) {
        (Some(o), Some(a)) => (o / a).cbrt_exact(),
        _ => None,
    };
    let mu = ParamValue::from_parts((omega.value / alpha.value).cbrt(), mu_x.clone());

    let tau_x = match (&omega_x, &alpha_x) {
        (Some(o), Some(a)) => (o * o * a).cbrt_exact(),
        _ => None,
    };
    let tau = ParamValue::from_parts((omega.value * omega.value * alpha.value).cbrt(), tau_x);

    let lambda = ParamValue::from_parts(1.0 / omega.value, omega_x.as_ref().map(|o| o.recip().unwrap()));

    let b_x = match (&beta_x, &mu_x) {
        (Some(b), Some(m)) => Some(b * m * m),
        _ => None,
    };
    let b = ParamValue::from_parts(beta.value * mu.value * mu.value, b_x);
    let g_x = match (&gamma_x, &mu_x) {
        (Some(g), Some(m)) => Some(g * m),
        _ => None,
    };
    let g = ParamValue::from_parts(gamma.value * mu.value, g_x);

    let mut out = AnsatzParams {
        degree,
        ell: params.ell,
        alpha,
        beta,
        gamma,
        l_eff,
        omega,
        mu,
        tau,
        lambda,
        b,
        g,
        d: ParamValue { value: 0.0, exact: None },
    };
    out.d = out.d_of_n(degree);
    Ok(out)
}

/// Entry `(row, col)` of `Q(λ) = Q⁽⁰⁾(s, t) + λ Q⁽¹⁾(b, g)` in any ring that
/// the integers embed into.
#[allow(clippy::too_many_arguments)]
pub fn scaled_entry<T>(
    degree: usize,
    row: usize,
    col: usize,
    s: &T,
    t: &T,
    lambda: &T,
    b: &T,
    g: &T,
    int: impl Fn(i64) -> T,
) -> T
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    let k = row as i64;
    let n = degree as i64;
    if col + 2 == row {
        int(n + 2 - k)
    } else if col + 1 == row {
        t.clone() + lambda.clone() * int(-(k - 1)) * b.clone()
    } else if col == row {
        s.clone() + lambda.clone() * int(-k) * g.clone()
    } else if col == row + 1 {
        int(k + 1) + lambda.clone() * int(k * (k + 1) / 2)
    } else {
        int(0)
    }
}

/// The split pseudo-Hamiltonian in band storage.
///
/// Band vectors are indexed by row: `diag_main[k]` sits at `(k, k)`,
/// `diag_super[k]` at `(k, k+1)`, `diag_sub[k-1]` at `(k, k-1)` and
/// `diag_subsub[k-2]` at `(k, k-2)`; the `pert_*` bands follow the same
/// layout for `Q⁽¹⁾`.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoHamiltonian<F = Rational> {
    pub degree: usize,
    pub diag_subsub: Vec<i64>,
    pub diag_sub: Vec<F>,
    pub diag_main: Vec<F>,
    pub diag_super: Vec<i64>,
    pub pert_sub: Vec<BivariatePoly>,
    pub pert_main: Vec<BivariatePoly>,
    pub pert_super: Vec<BivariatePoly>,
}

/// Build `Q⁽⁰⁾(s, t)` and the formal `Q⁽¹⁾(b, g)` for truncation degree `N`.
pub fn build_split<F: Scalar>(degree: usize, s: F, t: F) -> PseudoHamiltonian<F> {
    let n = degree as i64;
    let b = BivariatePoly::x();
    let g = BivariatePoly::y();
    PseudoHamiltonian {
        degree,
        diag_subsub: (2..=n + 1).map(|k| n + 2 - k).collect(),
        diag_sub: vec![t; degree + 1],
        diag_main: vec![s; degree + 1],
        diag_super: (0..n).map(|k| k + 1).collect(),
        pert_sub: (1..=n + 1).map(|k| b.scale(&Rational::from(-(k - 1)))).collect(),
        pert_main: (0..=n).map(|k| g.scale(&Rational::from(-k))).collect(),
        pert_super: (0..n)
            .map(|k| BivariatePoly::constant(Rational::from(k * (k + 1) / 2)))
            .collect(),
    }
}

impl<F: Scalar> PseudoHamiltonian<F> {
    pub fn rows(&self) -> usize {
        self.degree + 2
    }

    pub fn cols(&self) -> usize {
        self.degree + 1
    }

    pub fn q0_entry(&self, row: usize, col: usize) -> F {
        if col + 2 == row {
            F::from_int(self.diag_subsub[row - 2])
        } else if col + 1 == row {
            self.diag_sub[row - 1].clone()
        } else if col == row {
            self.diag_main[row].clone()
        } else if col == row + 1 {
            F::from_int(self.diag_super[row])
        } else {
            F::zero()
        }
    }

    pub fn q1_entry(&self, row: usize, col: usize) -> BivariatePoly {
        if col + 1 == row {
            self.pert_sub[row - 1].clone()
        } else if col == row {
            self.pert_main[row].clone()
        } else if col == row + 1 {
            self.pert_super[row].clone()
        } else {
            BivariatePoly::zero()
        }
    }

    pub fn q0_dense(&self) -> Matrix<F> {
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.q0_entry(r, c)).collect())
            .collect()
    }

    pub fn q1_dense(&self) -> Matrix<BivariatePoly> {
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.q1_entry(r, c)).collect())
            .collect()
    }

    /// `𝒥ᵀ Q⁽⁰⁾`: rows `0..=N`, a square block.
    pub fn top_block(&self) -> Matrix<F> {
        let mut m = self.q0_dense();
        m.pop();
        m
    }

    /// `𝒦ᵀ Q⁽⁰⁾`: rows `1..=N+1`, a square block.
    pub fn bottom_block(&self) -> Matrix<F> {
        let mut m = self.q0_dense();
        m.remove(0);
        m
    }
}

impl PseudoHamiltonian<Rational> {
    /// `Q⁽⁰⁾ + λ Q⁽¹⁾` evaluated at rational `(λ, b, g)`.
    pub fn evaluate(&self, lambda: &Rational, b: &Rational, g: &Rational) -> Matrix<Rational> {
        (0..self.rows())
            .map(|r| {
                (0..self.cols())
                    .map(|c| self.q0_entry(r, c) + lambda * self.q1_entry(r, c).eval(b, g))
                    .collect()
            })
            .collect()
    }
}

/// The quasi-unit selectors with `Q⁽⁰⁾(s,t) = Q⁽⁰⁾(0,0) + s𝒥 + t𝒦`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectorPair {
    pub degree: usize,
}

impl SelectorPair {
    pub fn new(degree: usize) -> Self {
        SelectorPair { degree }
    }

    /// `(N+2) × (N+1)`, identity on rows `0..=N`.
    pub fn j_dense<F: Scalar>(&self) -> Matrix<F> {
        let n = self.degree;
        (0..n + 2)
            .map(|r| (0..=n).map(|c| if r == c { F::one() } else { F::zero() }).collect())
            .collect()
    }

    /// `(N+2) × (N+1)`, identity on rows `1..=N+1`.
    pub fn k_dense<F: Scalar>(&self) -> Matrix<F> {
        let n = self.degree;
        (0..n + 2)
            .map(|r| (0..=n).map(|c| if r == c + 1 { F::one() } else { F::zero() }).collect())
            .collect()
    }

    /// `𝒥u`: `u` padded with a trailing zero.
    pub fn apply_j<T: Clone>(&self, u: &[T], zero: T) -> Vec<T> {
        let mut out = u.to_vec();
        out.push(zero);
        out
    }

    /// `𝒦u`: `u` shifted down by one row.
    pub fn apply_k<T: Clone>(&self, u: &[T], zero: T) -> Vec<T> {
        let mut out = vec![zero];
        out.extend_from_slice(u);
        out
    }
}

/// Physical `(E, F)` from spectral `(s, t)`, with `S = sτ` and `T = tτ/μ`.
pub fn backout_physical(s: f64, t: f64, ansatz: &AnsatzParams) -> (f64, f64) {
    let tau = ansatz.tau.value;
    let mu = ansatz.mu.value;
    let beta = ansatz.beta.value;
    let gamma = ansatz.gamma.value;
    let e = 2.0 * t * tau / mu + beta * (2.0 * ansatz.l_eff.value + 3.0) - gamma * gamma;
    let f = -2.0 * gamma * ansatz.omega.value - 2.0 * s * tau;
    (e, f)
}

pub fn backout_physical_exact(s: &Rational, t: &Rational, ansatz: &ExactAnsatz) -> (Rational, Rational) {
    let two = Rational::from(2);
    let e = &two * t * &ansatz.tau / &ansatz.mu
        + &ansatz.beta * (&two * &ansatz.l_eff + Rational::from(3))
        - &ansatz.gamma * &ansatz.gamma;
    let f = -(&two * &ansatz.gamma * &ansatz.omega) - &two * s * &ansatz.tau;
    (e, f)
}

/// Inverse of [`backout_physical_exact`].
pub fn spectral_from_physical_exact(e: &Rational, f: &Rational, ansatz: &ExactAnsatz) -> (Rational, Rational) {
    let two = Rational::from(2);
    let big_s = -(&ansatz.gamma * &ansatz.omega) - f / &two;
    let big_t = (e + &ansatz.gamma * &ansatz.gamma
        - &ansatz.beta * (&two * &ansatz.l_eff + Rational::from(3)))
        / &two;
    (&big_s / &ansatz.tau, &ansatz.mu * &big_t / &ansatz.tau)
}

/// The unscaled four-term recurrence matrix for the Taylor coefficients `ω`:
/// row `k` reads `R_k ω_{k-2} + T_k ω_{k-1} + S_k ω_k + P_k ω_{k+1} = 0`.
pub fn recurrence_matrix_exact(
    degree: usize,
    e: &Rational,
    f: &Rational,
    ansatz: &ExactAnsatz,
) -> Matrix<Rational> {
    let n = degree as i64;
    let two = Rational::from(2);
    let (alpha, beta, gamma, l) = (&ansatz.alpha, &ansatz.beta, &ansatz.gamma, &ansatz.l_eff);
    (0..=n + 1)
        .map(|k| {
            let kk = Rational::from(k);
            (0..=n)
                .map(|c| {
                    if c + 2 == k {
                        &two * alpha * Rational::from(n + 2 - k)
                    } else if c + 1 == k {
                        e + gamma * gamma - beta * (&two * &kk + &two * l + Rational::from(1))
                    } else if c == k {
                        -(&two * gamma * (&kk + l + Rational::from(1))) - f
                    } else if c == k + 1 {
                        Rational::from(k + 1) * (&kk + &two * l + &two)
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::linalg::{mat_vec, transpose};
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn strong_core_example() -> PhysicalParams {
        // ℓ = 0, B = 0, C = 1, Ω = 64 (so G = Ω(Ω-1)), A = √Ω/8 = 1.
        PhysicalParams::new(r(1, 1), r(0, 1), r(1, 1), r(4032, 1), 0)
    }

    #[test]
    fn integer_core_example() {
        let p = PhysicalParams::new(r(1, 1), r(0, 1), r(0, 1), r(2, 1), 0);
        let a = derive_ansatz(&p, 0).unwrap();
        assert_eq!(a.alpha.exact, Some(r(1, 1)));
        assert_eq!(a.beta.exact, Some(r(0, 1)));
        assert_eq!(a.gamma.exact, Some(r(0, 1)));
        assert_eq!(a.l_eff.exact, Some(r(1, 1)));
        assert_eq!(a.omega.exact, Some(r(2, 1)));
        assert_eq!(a.d.exact, Some(r(-6, 1)));
    }

    #[test]
    fn strong_core_parameters_are_consistent() {
        let a = derive_ansatz(&strong_core_example(), 4).unwrap();
        let x = a.exact_params().expect("all parameters rational");
        assert_eq!(x.alpha, r(1, 1));
        assert_eq!(x.mu, r(4, 1));
        assert_eq!(x.tau, r(16, 1));
        assert_eq!(x.gamma, r(1, 2));
        // γ = 2(α/Ω)^(1/3) and C = 4(A²/Ω)^(1/3) describe the same point.
        assert_eq!(x.gamma, r(2, 1) * (&x.alpha / &x.omega).cbrt_exact().unwrap());
        assert_eq!(a.d.exact, Some(r(-138, 1)));
        assert_eq!(a.d.exact, Some(r(-2, 1) * &x.alpha * (&x.omega + r(5, 1))));
        assert_eq!(&x.mu * &x.tau, x.omega);
    }

    #[test]
    fn backout_of_the_ground_state() {
        let a = derive_ansatz(&strong_core_example(), 4).unwrap();
        let x = a.exact_params().unwrap();
        let (e, f) = backout_physical_exact(&r(-2, 1), &r(-2, 1), &x);
        assert_eq!(e, r(-65, 4));
        assert_eq!(f, r(0, 1));
        let (ef, ff) = backout_physical(-2.0, -2.0, &a);
        assert!((ef + 16.25).abs() < 1e-12 && ff.abs() < 1e-12);
        // E = -γ² - 4(AΩ)^(1/3)
        let four_cbrt = r(4, 1) * (r(1, 1) * &x.omega).cbrt_exact().unwrap();
        assert_eq!(e, -(&x.gamma * &x.gamma) - four_cbrt);
    }

    #[test]
    fn empty_potential_limit() {
        let p = PhysicalParams::new(r(1, 1), r(0, 1), r(0, 1), r(0, 1), 0);
        let a = derive_ansatz(&p, 0).unwrap();
        let (e, f) = backout_physical(0.0, 0.0, &a);
        // β = γ = 0: E = 0, F = 0.
        assert_eq!((e, f), (0.0, 0.0));
    }

    #[test]
    fn domain_errors() {
        let bad_a = PhysicalParams::new(r(0, 1), r(0, 1), r(0, 1), r(1, 1), 0);
        assert!(matches!(derive_ansatz(&bad_a, 1), Err(QesError::Domain(_))));
        let bad_g = PhysicalParams::new(r(1, 1), r(0, 1), r(0, 1), r(-1, 2), 0);
        assert!(matches!(derive_ansatz(&bad_g, 1), Err(QesError::Domain(_))));
    }

    #[test]
    fn irrational_parameters_satisfy_identities() {
        let p = PhysicalParams::new(r(3, 1), r(1, 2), r(2, 1), r(5, 1), 1);
        let a = derive_ansatz(&p, 3).unwrap();
        assert!(!a.is_exact());
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        assert!(rel(a.mu.value * a.tau.value, a.omega.value) < 1e-15);
        assert!(rel(a.alpha.value * a.mu.value * a.mu.value, a.tau.value) < 1e-15);
        assert!(rel(a.omega.value / a.mu.value, a.tau.value) < 1e-15);
        assert!(rel(a.lambda.value * a.mu.value * a.tau.value, 1.0) < 1e-15);
        assert!(a.l_eff.value > -0.5);
        let l = a.l_eff.value;
        assert!(rel(l * (l + 1.0), 5.0 + 2.0) < 1e-14);
    }

    #[test]
    fn first_order_bands_for_n1() {
        let q = build_split(1, Rational::zero(), Rational::zero());
        let q1 = q.q1_dense();
        let b = BivariatePoly::x();
        let g = BivariatePoly::y();
        assert_eq!(q1[0], vec![BivariatePoly::zero(), BivariatePoly::zero()]);
        assert_eq!(q1[1], vec![BivariatePoly::zero(), -g]);
        assert_eq!(q1[2], vec![BivariatePoly::zero(), -b]);
    }

    #[test]
    fn super_bands() {
        let q = build_split(2, Rational::zero(), Rational::zero());
        assert_eq!(q.diag_super, vec![1, 2]);
        assert_eq!(q.diag_subsub, vec![2, 1]);
        let n = 6;
        let q = build_split(n, Rational::zero(), Rational::zero());
        assert_eq!(
            q.pert_super[n - 1],
            BivariatePoly::constant(Rational::from((n * (n - 1) / 2) as i64))
        );
        assert_eq!(q.rows(), n + 2);
        assert_eq!(q.cols(), n + 1);
        assert!(q.pert_main[0].is_zero() && q.pert_super[0].is_zero());
    }

    #[test]
    fn selectors_are_isometries_and_square_blocks() {
        for n in 0..6 {
            let sel = SelectorPair::new(n);
            let j: Matrix<Rational> = sel.j_dense();
            let k: Matrix<Rational> = sel.k_dense();
            for m in [&j, &k] {
                let mt = transpose(m);
                let prod: Matrix<Rational> = mt
                    .iter()
                    .map(|row| (0..=n).map(|c| mat_vec(m, &unit(n + 1, c)).iter().zip(row).fold(Rational::zero(), |a, (x, y)| a + x * y)).collect())
                    .collect();
                for (i, row) in prod.iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        assert_eq!(*v, Rational::from((i == c) as i64));
                    }
                }
            }
            let q = build_split(n, r(1, 3), r(-2, 1));
            assert_eq!(q.top_block().len(), n + 1);
            assert_eq!(q.bottom_block().len(), n + 1);
        }
    }

    fn unit(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|c| Rational::from((c == i) as i64)).collect()
    }

    proptest! {
        #[test]
        fn selector_reconstruction(n in 0usize..=12, sn in -20i64..20, tn in -20i64..20, d in 1i64..7) {
            let (s, t) = (r(sn, d), r(tn, d + 2));
            let base = build_split(n, Rational::zero(), Rational::zero()).q0_dense();
            let full = build_split(n, s.clone(), t.clone()).q0_dense();
            let sel = SelectorPair::new(n);
            let j: Matrix<Rational> = sel.j_dense();
            let k: Matrix<Rational> = sel.k_dense();
            for row in 0..n + 2 {
                for col in 0..=n {
                    let rebuilt = &base[row][col] + &s * &j[row][col] + &t * &k[row][col];
                    prop_assert_eq!(&rebuilt, &full[row][col]);
                }
            }
        }

        /// Rescaling the raw recurrence reproduces `Q⁽⁰⁾ + λQ⁽¹⁾` exactly.
        #[test]
        fn scaling_consistency(
            n in 0usize..=8,
            omega_idx in 0usize..3,
            beta_n in -6i64..6,
            gamma_n in -6i64..6,
            sn in -9i64..9,
            tn in -9i64..9,
        ) {
            // α = 1 and Ω a perfect cube keep μ, τ rational.
            let omega = [8i64, 27, 64][omega_idx];
            let beta = r(beta_n, 3);
            let gamma = r(gamma_n, 2);
            let l = omega - 1;
            let params = PhysicalParams::new(
                r(1, 1),
                r(2, 1) * &beta,
                &beta * &beta + r(2, 1) * &gamma,
                r(l * (l + 1), 1),
                0,
            );
            let a = derive_ansatz(&params, n).unwrap();
            let x = a.exact_params().unwrap();
            prop_assert_eq!(&x.beta, &beta);
            prop_assert_eq!(&x.gamma, &gamma);
            let (s, t) = (r(sn, 2), r(tn, 3));
            let (e, f) = backout_physical_exact(&s, &t, &x);
            prop_assert_eq!(spectral_from_physical_exact(&e, &f, &x), (s.clone(), t.clone()));

            let raw = recurrence_matrix_exact(n, &e, &f, &x);
            let two_tau = r(2, 1) * &x.tau;
            let split = build_split(n, s, t).evaluate(&x.lambda(), &x.b(), &x.g());
            for k in 0..n + 2 {
                for c in 0..=n {
                    // ω_c = u_c μ^{-c}; row k scaled by μ^k / 2τ.
                    let scaled = &raw[k][c] * x.mu.pow(k as u32) / x.mu.pow(c as u32) / &two_tau;
                    prop_assert_eq!(&scaled, &split[k][c]);
                }
            }
        }
    }
}
