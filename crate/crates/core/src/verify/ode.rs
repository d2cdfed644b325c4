//! Direct check of the radial equation
//! `-ψ'' + [ℓ(ℓ+1)/r² + V(r)]ψ = Eψ` for a terminated series.

use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::magyari::{derive_ansatz, PhysicalParams};
use crate::perturb::{evaluate_series_in, run_series, Gauge};

use super::newton::{newton_full, NewtonOptions, NewtonSolution};
use super::real::Real;

/// The ansatz parameters recomputed in working precision, so that a
/// high-precision solve is not limited by `f64` inputs.
#[derive(Clone, Debug)]
pub struct RealAnsatz<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub l_eff: T,
    pub omega: T,
    pub mu: T,
    pub tau: T,
    pub lambda: T,
    pub b: T,
    pub g: T,
}

impl<T: Real> RealAnsatz<T> {
    pub fn from_physical(params: &PhysicalParams) -> Result<Self> {
        // domain checks and exact values where they exist
        let exact = derive_ansatz(params, 0)?;
        let lift = |v: &crate::magyari::ParamValue, approx: T| match &v.exact {
            Some(r) => T::from_rational(r),
            None => approx,
        };
        let two = T::from_f64(2.0);
        let a = T::from_rational(&params.a);
        let alpha = lift(&exact.alpha, a.sqrt());
        let beta = lift(&exact.beta, T::from_rational(&params.b) / (two.clone() * alpha.clone()));
        let gamma = lift(
            &exact.gamma,
            (T::from_rational(&params.c) - beta.clone() * beta.clone()) / (two.clone() * alpha.clone()),
        );
        let l_eff = lift(
            &exact.l_eff,
            T::from_rational(&params.core_discriminant()).sqrt() - T::from_f64(0.5),
        );
        let omega = l_eff.clone() + T::one();
        let mu = lift(&exact.mu, (omega.clone() / alpha.clone()).cbrt());
        let tau = omega.clone() / mu.clone();
        let lambda = T::one() / omega.clone();
        let b = beta.clone() * mu.clone() * mu.clone();
        let g = gamma.clone() * mu.clone();
        Ok(RealAnsatz { alpha, beta, gamma, l_eff, omega, mu, tau, lambda, b, g })
    }

    /// `D(N) = -2α(N + l + 2) + 2βγ`
    pub fn d(&self, degree: usize) -> T {
        let two = T::from_f64(2.0);
        -(two.clone() * self.alpha.clone() * (T::from_f64(degree as f64 + 2.0) + self.l_eff.clone()))
            + two * self.beta.clone() * self.gamma.clone()
    }

    /// Physical `(E, F)` from spectral `(s, t)`.
    pub fn backout(&self, s: &T, t: &T) -> (T, T) {
        let two = T::from_f64(2.0);
        let e = two.clone() * t.clone() * self.tau.clone() / self.mu.clone()
            + self.beta.clone() * (two.clone() * self.l_eff.clone() + T::from_f64(3.0))
            - self.gamma.clone() * self.gamma.clone();
        let f = -(two.clone() * self.gamma.clone() * self.omega.clone()) - two * s.clone() * self.tau.clone();
        (e, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    pub grid: Vec<f64>,
    /// `|residual| / (1 + |ψ|)` at each grid point.
    pub relative: Vec<f64>,
    /// `|residual|` over the sum of magnitudes of the terms that cancel in it.
    pub scaled: Vec<f64>,
    pub max_relative: f64,
    pub max_scaled: f64,
}

/// `points` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect()
}

/// Residual of `ψ = exp(-αr³/3 - βr²/2 - γr) r^(l+1) Σ uₙ (r/μ)ⁿ` with the
/// given `(E, F)` and `D = D(N)`.
///
/// The prefactor is divided out before anything is summed, so deep tails
/// neither underflow nor overflow; the `1 + |ψ|` metric is recovered in log
/// space. Near a high-order node of the polynomial `f64` loses most of its
/// digits here, which is why this is generic.
pub fn ode_residual<T: Real>(
    params: &PhysicalParams,
    ansatz: &RealAnsatz<T>,
    e: &T,
    f: &T,
    u: &[T],
    grid: &[f64],
) -> Result<OdeResidual> {
    if u.is_empty() {
        return Err(QesError::InvalidArgument("empty coefficient vector".into()));
    }
    if let Some(r) = grid.iter().find(|r| **r <= 0.0 || !r.is_finite()) {
        return Err(QesError::InvalidArgument(format!("grid point r = {r} must be positive")));
    }
    let num = |v: f64| T::from_f64(v);
    let d = ansatz.d(u.len() - 1);
    let (a, b, c, g) = (
        T::from_rational(&params.a),
        T::from_rational(&params.b),
        T::from_rational(&params.c),
        T::from_rational(&params.g),
    );
    let centrifugal = num((params.ell * (params.ell + 1)) as f64);
    let RealAnsatz { alpha, beta, gamma, l_eff, mu, .. } = ansatz.clone();
    let lp1 = l_eff + T::one();

    let mut relative = Vec::with_capacity(grid.len());
    let mut scaled = Vec::with_capacity(grid.len());
    for &rf in grid {
        let r = num(rf);
        let r2 = r.clone() * r.clone();
        let x = r.clone() / mu.clone();
        // p(x) with first and second derivatives in x
        let (mut p, mut dp, mut ddp) = (T::zero(), T::zero(), T::zero());
        for uk in u.iter().rev() {
            ddp = ddp * x.clone() + num(2.0) * dp.clone();
            dp = dp * x.clone() + p.clone();
            p = p * x.clone() + uk.clone();
        }
        let dp = dp / mu.clone();
        let ddp = ddp / (mu.clone() * mu.clone());

        let phi = alpha.clone() * r2.clone() * r.clone() / num(3.0) + beta.clone() * r2.clone() / num(2.0)
            + gamma.clone() * r.clone();
        let dphi = alpha.clone() * r2.clone() + beta.clone() * r.clone() + gamma.clone();
        let ddphi = num(2.0) * alpha.clone() * r.clone() + beta.clone();
        let h = lp1.clone() / r.clone() - dphi;
        let dh = -(lp1.clone() / r2.clone()) - ddphi;
        let v = a.clone() * r2.clone() * r2.clone()
            + b.clone() * r2.clone() * r.clone()
            + c.clone() * r2.clone()
            + d.clone() * r.clone()
            + f.clone() / r.clone()
            + g.clone() / r2.clone();
        let pot = centrifugal.clone() / r2.clone() + v - e.clone();

        let terms = [
            -ddp,
            -(num(2.0) * h.clone() * dp),
            -((h.clone() * h + dh) * p.clone()),
            pot * p.clone(),
        ];
        let res = terms.iter().fold(T::zero(), |acc, x| acc + x.clone()).abs();
        let size = terms.iter().fold(T::zero(), |acc, x| acc + x.abs());
        scaled.push(if size == T::zero() { 0.0 } else { (res.clone() / size).to_f64() });

        // |Φ R| / (1 + |Φ p|) = |R| / (exp(-ln Φ) + |p|)
        let log_phi = -phi + lp1.clone() * r.ln();
        relative.push((res / ((-log_phi).exp() + p.abs())).to_f64());
    }
    let max = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    Ok(OdeResidual {
        grid: grid.to_vec(),
        max_relative: max(&relative),
        max_scaled: max(&scaled),
        relative,
        scaled,
    })
}

/// A Newton-refined bound state of the physical problem.
#[derive(Clone, Debug)]
pub struct PhysicalSolution<T> {
    pub ansatz: RealAnsatz<T>,
    pub newton: NewtonSolution<T>,
    pub e: T,
    pub f: T,
    pub d: T,
}

/// Seed from the order-`order` series of branch `n`, polish with Newton at
/// the physical `(λ, b, g)` and back out `(E, F, D)`.
pub fn solve_physical<T: Real>(
    params: &PhysicalParams,
    degree: usize,
    branch: usize,
    order: usize,
    opts: &NewtonOptions<T>,
) -> Result<PhysicalSolution<T>> {
    let ansatz = RealAnsatz::<T>::from_physical(params)?;
    let series = run_series(degree, branch, order, Gauge::Down)?;
    let seed = evaluate_series_in(&series, order, &ansatz.lambda, &ansatz.b, &ansatz.g);
    let newton = newton_full(degree, &ansatz.lambda, &ansatz.b, &ansatz.g, seed, opts)?;
    let (e, f) = ansatz.backout(&newton.s, &newton.t);
    let d = ansatz.d(degree);
    Ok(PhysicalSolution { ansatz, newton, e, f, d })
}
