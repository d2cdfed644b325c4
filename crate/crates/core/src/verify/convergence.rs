//! How fast the truncated series approaches the finite-`λ` solution.

use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::exactnum::Rational;
use crate::perturb::{evaluate_series_in, run_series, Gauge};

use super::newton::{newton_full, NewtonOptions};
use super::real::{Ext, Real, EXT_BITS};

/// Errors below this are indistinguishable from the Newton tolerance.
const NOISE_FLOOR: f64 = 1e-60;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    #[serde(rename = "N")]
    pub degree: usize,
    #[serde(rename = "n")]
    pub branch: usize,
    pub order: usize,
    pub b: Rational,
    pub g: Rational,
    pub lambda: Vec<Rational>,
    /// `errors[K][i] = max(|Δs|, |Δt|)` of the order-`K` partial sum at `lambda[i]`.
    pub errors: Vec<Vec<f64>>,
    /// Least-squares slope of `log error` against `log λ` per order; `None`
    /// when the error sits at the noise floor for some `λ`.
    pub slopes: Vec<Option<f64>>,
    pub newton_residuals: Vec<f64>,
    pub newton_converged: bool,
    pub precision_bits: usize,
}

impl ConvergenceReport {
    /// Every order `K` converges at least like `λ^(K + margin)`.
    pub fn passes(&self, margin: f64) -> bool {
        self.newton_converged
            && self
                .slopes
                .iter()
                .enumerate()
                .all(|(k, s)| s.is_none_or(|s| s >= k as f64 + margin))
    }
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Compare partial sums of orders `0..=order` against an extended-precision
/// Newton solve at each `λ`, seeded from the full partial sum.
pub fn convergence_report(
    degree: usize,
    branch: usize,
    order: usize,
    lambdas: &[Rational],
    b: &Rational,
    g: &Rational,
) -> Result<ConvergenceReport> {
    if lambdas.len() < 2 {
        return Err(QesError::InvalidArgument("need at least two λ values to fit a slope".into()));
    }
    if let Some(l) = lambdas.iter().find(|l| l.signum() <= 0) {
        return Err(QesError::InvalidArgument(format!("λ = {l} must be positive")));
    }
    let series = run_series(degree, branch, order, Gauge::Down)?;
    let (bx, gx) = (Ext::from_rational(b), Ext::from_rational(g));
    let opts = NewtonOptions::<Ext>::for_precision();
    let mut errors = vec![Vec::with_capacity(lambdas.len()); order + 1];
    let mut newton_residuals = Vec::new();
    let mut newton_converged = true;
    for lam in lambdas {
        let lx = Ext::from_rational(lam);
        let seed = evaluate_series_in(&series, order, &lx, &bx, &gx);
        let sol = newton_full(degree, &lx, &bx, &gx, seed, &opts)?;
        newton_residuals.push(sol.residual.to_f64());
        newton_converged &= sol.converged;
        for (k, errs) in errors.iter_mut().enumerate() {
            let (s, t, _) = evaluate_series_in(&series, k, &lx, &bx, &gx);
            let ds = (s - sol.s.clone()).abs().to_f64();
            let dt = (t - sol.t.clone()).abs().to_f64();
            errs.push(ds.max(dt));
        }
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| l.to_f64().ln()).collect();
    let slopes = errors
        .iter()
        .map(|errs| {
            if errs.iter().any(|e| *e < NOISE_FLOOR) {
                None
            } else {
                Some(fit_slope(&xs, &errs.iter().map(|e| e.ln()).collect::<Vec<_>>()))
            }
        })
        .collect();
    Ok(ConvergenceReport {
        degree,
        branch,
        order,
        b: b.clone(),
        g: g.clone(),
        lambda: lambdas.to_vec(),
        errors,
        slopes,
        newton_residuals,
        newton_converged,
        precision_bits: EXT_BITS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<Rational> {
        vec![Rational::frac(1, 100), Rational::frac(1, 1000), Rational::frac(1, 10000)]
    }

    #[test]
    fn slope_fit_is_exact_on_power_laws() {
        let xs: Vec<f64> = [1e-2f64, 1e-3, 1e-4].iter().map(|x| x.ln()).collect();
        let ys: Vec<f64> = [1e-2f64, 1e-3, 1e-4].iter().map(|x| (5.0 * x.powi(3)).ln()).collect();
        assert!((fit_slope(&xs, &ys) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn n1_converges_order_by_order() {
        let rep = convergence_report(1, 0, 3, &grid(), &Rational::from(1), &Rational::frac(-1, 2)).unwrap();
        assert!(rep.newton_converged);
        for (k, s) in rep.slopes.iter().enumerate() {
            let s = s.unwrap();
            assert!(s >= k as f64 + 0.5, "K = {k}: slope {s}");
        }
        assert!(rep.passes(0.5));
    }

    #[test]
    fn vanishing_couplings_hit_the_floor() {
        let rep = convergence_report(1, 0, 2, &grid(), &Rational::from(0), &Rational::from(0)).unwrap();
        assert!(rep.errors.iter().flatten().all(|e| *e < NOISE_FLOOR));
        assert!(rep.slopes.iter().all(Option::is_none));
    }

    #[test]
    fn needs_two_positive_lambdas() {
        let one = [Rational::frac(1, 10)];
        assert!(convergence_report(1, 0, 1, &one, &Rational::from(1), &Rational::from(1)).is_err());
        let neg = [Rational::frac(1, 10), Rational::frac(-1, 10)];
        assert!(convergence_report(1, 0, 1, &neg, &Rational::from(1), &Rational::from(1)).is_err());
    }
}
