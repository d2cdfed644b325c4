//! Damped Newton on the full finite-`λ` system `Q(λ)u⃗ = 0`, `u₀ = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::magyari::scaled_entry;

use super::real::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonSolution<T = f64> {
    pub s: T,
    pub t: T,
    /// `u₀…u_N` with `u₀ = 1`.
    pub u: Vec<T>,
    /// Max-norm of `Q(λ)u⃗` at the returned point.
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct NewtonOptions<T> {
    pub max_iter: usize,
    /// Stop once the residual max-norm is at or below this.
    pub tol: T,
}

impl Default for NewtonOptions<f64> {
    fn default() -> Self {
        NewtonOptions { max_iter: 60, tol: 1e-13 }
    }
}

impl<T: Real> NewtonOptions<T> {
    /// Tolerance a few hundred ulps above the working precision.
    pub fn for_precision() -> Self {
        NewtonOptions { max_iter: 200, tol: T::epsilon() * T::from_f64(1024.0) }
    }
}

struct System<'a, T> {
    degree: usize,
    lambda: &'a T,
    b: &'a T,
    g: &'a T,
}

impl<T: Real> System<'_, T> {
    fn entry(&self, row: usize, col: usize, s: &T, t: &T) -> T {
        scaled_entry(self.degree, row, col, s, t, self.lambda, self.b, self.g, |v| T::from_f64(v as f64))
    }

    fn residual(&self, s: &T, t: &T, u: &[T]) -> Vec<T> {
        let n = self.degree;
        (0..n + 2)
            .map(|row| {
                let lo = row.saturating_sub(2);
                let hi = (row + 1).min(n);
                (lo..=hi).fold(T::zero(), |acc, col| acc + self.entry(row, col, s, t) * u[col].clone())
            })
            .collect()
    }

    /// Columns: `u₁…u_N`, then `s`, then `t`.
    fn jacobian(&self, s: &T, t: &T, u: &[T]) -> Vec<Vec<T>> {
        let n = self.degree;
        (0..n + 2)
            .map(|row| {
                let mut out: Vec<T> = (1..=n).map(|col| self.entry(row, col, s, t)).collect();
                out.push(if row <= n { u[row].clone() } else { T::zero() });
                out.push(if row >= 1 { u[row - 1].clone() } else { T::zero() });
                out
            })
            .collect()
    }
}

fn max_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| {
        let a = x.abs();
        if a > acc {
            a
        } else {
            acc
        }
    })
}

/// Gaussian elimination with partial pivoting; `None` on an exactly zero pivot.
fn solve_dense<T: Real>(mut a: Vec<Vec<T>>, mut rhs: Vec<T>) -> Option<Vec<T>> {
    let m = rhs.len();
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() == T::zero() {
            return None;
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..m {
            let factor = a[row][col].clone() / a[col][col].clone();
            for k in col..m {
                let v = a[row][k].clone() - factor.clone() * a[col][k].clone();
                a[row][k] = v;
            }
            let v = rhs[row].clone() - factor * rhs[col].clone();
            rhs[row] = v;
        }
    }
    let mut x = vec![T::zero(); m];
    for row in (0..m).rev() {
        let acc = (row + 1..m).fold(rhs[row].clone(), |acc, k| acc - a[row][k].clone() * x[k].clone());
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}

/// Newton from `seed = (s, t, u⃗)`. The seed is rescaled to `u₀ = 1`.
/// Non-convergence is not an error: the best point is returned with
/// `converged = false`.
pub fn newton_full<T: Real>(
    degree: usize,
    lambda: &T,
    b: &T,
    g: &T,
    seed: (T, T, Vec<T>),
    opts: &NewtonOptions<T>,
) -> Result<NewtonSolution<T>> {
    let (mut s, mut t, u) = seed;
    if u.len() != degree + 1 {
        return Err(QesError::InvalidArgument(format!(
            "seed has {} coefficients, expected N + 1 = {}",
            u.len(),
            degree + 1
        )));
    }
    if u[0] == T::zero() {
        return Err(QesError::InvalidArgument("seed must have u0 != 0".into()));
    }
    let mut u: Vec<T> = u.iter().map(|x| x.clone() / u[0].clone()).collect();
    let sys = System { degree, lambda, b, g };
    let mut res = max_norm(&sys.residual(&s, &t, &u));
    let mut iterations = 0;
    while res > opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let f = sys.residual(&s, &t, &u);
        let jac = sys.jacobian(&s, &t, &u);
        // square: N + 2 rows against u₁…u_N, s, t
        let step = solve_dense(jac, f.iter().map(|x| -x.clone()).collect())
            .ok_or(QesError::SingularJacobian { iteration: iterations })?;
        let mut alpha = T::one();
        let mut accepted = false;
        for _ in 0..40 {
            let mut nu = u.clone();
            for (i, d) in step[..degree].iter().enumerate() {
                nu[i + 1] = nu[i + 1].clone() + alpha.clone() * d.clone();
            }
            let ns = s.clone() + alpha.clone() * step[degree].clone();
            let nt = t.clone() + alpha.clone() * step[degree + 1].clone();
            let nres = max_norm(&sys.residual(&ns, &nt, &nu));
            if nres < res {
                u = nu;
                s = ns;
                t = nt;
                res = nres;
                accepted = true;
                break;
            }
            alpha = alpha / T::from_f64(2.0);
        }
        if !accepted {
            break;
        }
    }
    let converged = res <= opts.tol;
    Ok(NewtonSolution { s, t, u, residual: res, iterations, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturb::{evaluate_series, run_series, Gauge};
    use crate::verify::cubic::cubic_oracle_n1;
    use crate::verify::real::Ext;

    #[test]
    fn converges_from_series_seed() {
        let series = run_series(4, 1, 4, Gauge::Down).unwrap();
        let seed = evaluate_series(&series, 0.01, 1.0, -0.5);
        let sol = newton_full(4, &0.01, &1.0, &-0.5, seed, &NewtonOptions::default()).unwrap();
        assert!(sol.converged, "{sol:?}");
        assert!(sol.residual <= 1e-12);
        assert_eq!(sol.u[0], 1.0);
    }

    #[test]
    fn agrees_with_cubic_in_extended_precision() {
        let (lam, b, g) = (Ext::from_f64(0.01), Ext::from_f64(0.5), Ext::from_f64(1.0));
        let seed = (Ext::one(), Ext::one(), vec![Ext::one(), -Ext::one()]);
        let sol = newton_full(1, &lam, &b, &g, seed, &NewtonOptions::for_precision()).unwrap();
        assert!(sol.converged);
        let (s, t, _) = cubic_oracle_n1(&lam, &b, &g);
        assert!((sol.s - s).abs() < Ext::from_f64(1e-70));
        assert!((sol.t - t).abs() < Ext::from_f64(1e-70));
    }

    #[test]
    fn zero_lambda_root_is_a_fixed_point() {
        let seed = (2.0, 2.0, vec![1.0, -2.0, 1.0]);
        let sol = newton_full(2, &0.0, &1.0, &1.0, seed, &NewtonOptions::default()).unwrap();
        assert!(sol.converged);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn rejects_bad_seeds() {
        let bad = newton_full(2, &0.01, &1.0, &1.0, (2.0, 2.0, vec![1.0, 0.0]), &NewtonOptions::default());
        assert!(matches!(bad, Err(QesError::InvalidArgument(_))));
        let bad = newton_full(1, &0.01, &1.0, &1.0, (1.0, 1.0, vec![0.0, 1.0]), &NewtonOptions::default());
        assert!(matches!(bad, Err(QesError::InvalidArgument(_))));
    }

    #[test]
    fn singular_jacobian_is_reported() {
        // at s = t = 0, u = (1, 0) the last Jacobian row is zero
        let r = newton_full(1, &0.0, &0.0, &0.0, (0.0, 0.0, vec![1.0, 0.0]), &NewtonOptions::default());
        assert!(matches!(r, Err(QesError::SingularJacobian { iteration: 1 })), "{r:?}");
    }
}
