use super::*;
use crate::exactnum::linalg::determinant;
use proptest::prelude::*;

fn r(v: i64) -> Rational {
    Rational::from(v)
}

fn ints(v: &[Rational]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

fn pair_of(n: usize, branch: usize) -> LeftNullPair {
    let root = RootPair::real(n, branch).unwrap();
    left_null_pair(&root, &zero_coefficients(&root).unwrap()).unwrap()
}

fn lin(c: Rational, cb: Rational, cg: Rational) -> BivariatePoly {
    &(&BivariatePoly::constant(c) + &BivariatePoly::x().scale(&cb)) + &BivariatePoly::y().scale(&cg)
}

#[test]
fn left_null_pair_examples() {
    let p = pair_of(0, 0);
    assert_eq!(ints(&p.v_plus), vec![1, 1]);
    assert_eq!(ints(&p.v_minus), vec![1, -1]);
    assert_eq!((p.c_plus.clone(), p.c_minus.clone()), (r(1), r(1)));

    let p = pair_of(1, 0);
    assert_eq!(ints(&p.v_plus), vec![1, 0, -1]);
    assert_eq!(p.c_plus, r(1));
    assert_eq!(ints(&p.v_minus), vec![1, -2, 1]);
    assert_eq!(p.c_minus, r(3));

    let p = pair_of(2, 1);
    assert_eq!(ints(&p.v_plus), vec![1, 1, 1, 1]);
    assert_eq!(ints(&p.v_minus), vec![3, -1, 1, -3]);
    assert_eq!((p.c_plus.clone(), p.c_minus.clone()), (r(3), r(3)));
}

#[test]
fn left_null_pair_at_n2_top_branch() {
    let p = pair_of(2, 0);
    assert_eq!(ints(&p.v_plus), vec![2, -1, -1, 2]);
    assert_eq!(p.c_plus, r(3));
    assert_eq!(ints(&p.v_minus), vec![0, 1, -1, 0]);
    assert_eq!(p.c_minus, r(-3));
}

#[test]
fn left_null_pair_rejects_complex_roots() {
    let root = crate::zeroorder::enumerate_roots(1).unwrap()[1];
    let u0 = CoefficientVector { degree: 1, entries: vec![r(1), r(1)], root };
    assert!(matches!(left_null_pair(&root, &u0), Err(QesError::InvalidArgument(_))));
}

#[test]
fn first_order_xi_for_n1() {
    let series = run_series(1, 0, 0, Gauge::Down).unwrap();
    let q = build_split(1, r(1), r(1));
    let xi = rhs_xi(1, &series, &q);
    assert_eq!(xi[0], BivariatePoly::zero());
    assert_eq!(xi[1], -BivariatePoly::y());
    assert_eq!(xi[2], -BivariatePoly::x());
}

#[test]
fn first_order_n1_values() {
    let series = run_series(1, 0, 1, Gauge::Down).unwrap();
    let third = Rational::frac(1, 3);
    assert_eq!(series.s_corr[1], lin(r(0), third.clone(), third.clone()));
    assert_eq!(series.t_corr[1], lin(r(0), Rational::frac(2, 3), -&third));
    assert_eq!(series.u_corr[1][0], BivariatePoly::zero());
    assert_eq!(series.u_corr[1][1], lin(r(0), -&third, -&third));
}

#[test]
fn n0_corrections_vanish() {
    let series = run_series(0, 0, 3, Gauge::Down).unwrap();
    for k in 1..=3 {
        assert!(series.s_corr[k].is_zero());
        assert!(series.t_corr[k].is_zero());
        assert!(series.u_corr[k].iter().all(BivariatePoly::is_zero));
    }
}

#[test]
fn propagator_determinants() {
    let mut fact = 1i64;
    for n in 0..=12usize {
        if n > 0 {
            fact *= n as i64;
        }
        for branch in 0..=n / 2 {
            let (s, t) = RootPair::real(n, branch).unwrap().real_values().unwrap();
            let down = propagator_down(n, &s, &t);
            let up = propagator_up(n, &s, &t);
            if n == 0 {
                assert!(down.is_empty() && up.is_empty());
                continue;
            }
            assert_eq!(determinant(&down), r(fact), "N = {n}");
            assert_eq!(determinant(&up), r(fact), "N = {n}");
            for (i, row) in down.iter().enumerate() {
                assert_eq!(row[i], r(i as i64 + 1));
                assert!(row[i + 1..].iter().all(|x| x.signum() == 0));
            }
            for (i, row) in up.iter().enumerate() {
                assert_eq!(row[i], r((n - i) as i64));
                assert!(row[..i].iter().all(|x| x.signum() == 0));
            }
        }
    }
}

#[test]
fn gauge_solves_disagree_on_u_only() {
    let down = run_series(4, 1, 3, Gauge::Down).unwrap();
    let up = run_series(4, 1, 3, Gauge::Up).unwrap();
    assert_eq!(down.s_corr, up.s_corr);
    assert_eq!(down.t_corr, up.t_corr);
    assert!(up.u_corr[1][4].is_zero());
    assert!(down.u_corr[1][0].is_zero());
    assert_ne!(down.u_corr[1], up.u_corr[1]);
}

/// The up-gauge vector is the down-gauge vector times the scalar series
/// `c(λ) = Σ λᵏ u⁽ᵏ⁾₀(up)`.
fn assert_gauge_covariant(down: &PerturbationSeries, up: &PerturbationSeries) {
    for k in 0..=down.order {
        for i in 0..=down.degree {
            let mut conv = BivariatePoly::zero();
            for j in 0..=k {
                conv = conv + &up.u_corr[j][0] * &down.u_corr[k - j][i];
            }
            assert_eq!(conv, up.u_corr[k][i], "order {k}, component {i}");
        }
    }
}

#[test]
fn degenerate_overlap_reports_which_side() {
    let pair = LeftNullPair { v_plus: vec![r(1)], v_minus: vec![r(1)], c_plus: r(0), c_minus: r(1) };
    assert!(matches!(solve_st(&pair, &[BivariatePoly::zero()]), Err(QesError::DegenerateOverlap { which: '+' })));
}

#[test]
fn evaluate_series_examples() {
    let series = run_series(1, 0, 1, Gauge::Down).unwrap();
    let (s, t, u) = evaluate_series(&series, 0.01, 1.0, 1.0);
    assert!((s - (1.0 + 0.01 * 2.0 / 3.0)).abs() < 1e-15);
    assert!((t - (1.0 + 0.01 / 3.0)).abs() < 1e-15);
    assert_eq!(u[0], 1.0);
    assert!((u[1] - (-1.0 - 0.01 * 2.0 / 3.0)).abs() < 1e-15);

    let (s, t, _) = evaluate_series(&run_series(4, 2, 4, Gauge::Down).unwrap(), 0.0, 1.0, -1.0);
    assert_eq!((s, t), (-2.0, -2.0));
}

#[test]
fn gauge_parses() {
    assert_eq!("up".parse::<Gauge>().unwrap(), Gauge::Up);
    assert!("sideways".parse::<Gauge>().is_err());
    assert_eq!(serde_json::to_string(&Gauge::Down).unwrap(), "\"down\"");
}

#[test]
fn all_small_branches_solve_cleanly() {
    for n in 0..=8usize {
        for branch in 0..=n / 2 {
            let down = run_series(n, branch, 4, Gauge::Down).unwrap();
            let up = run_series(n, branch, 4, Gauge::Up).unwrap();
            for k in 0..=4 {
                assert!(order_residual(&down, k).iter().all(BivariatePoly::is_zero), "N={n} n={branch} k={k}");
                assert!(order_residual(&up, k).iter().all(BivariatePoly::is_zero));
                assert!(down.s_corr[k].total_degree().unwrap_or(0) <= k as u32);
                assert!(down.t_corr[k].total_degree().unwrap_or(0) <= k as u32);
            }
            assert_eq!(down.s_corr, up.s_corr, "N={n} n={branch}");
            assert_eq!(down.t_corr, up.t_corr);
            assert_gauge_covariant(&down, &up);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn correction_degree_is_bounded_by_order(n in 1usize..=10, pick in 0usize..6) {
        let branch = pick % (n / 2 + 1);
        let series = run_series(n, branch, 3, Gauge::Up).unwrap();
        for k in 0..=3 {
            prop_assert!(series.s_corr[k].total_degree().unwrap_or(0) <= k as u32);
            prop_assert!(series.t_corr[k].total_degree().unwrap_or(0) <= k as u32);
            for c in &series.u_corr[k] {
                prop_assert!(c.total_degree().unwrap_or(0) <= k as u32);
            }
        }
    }

    #[test]
    fn series_solves_to_order_lambda_k(n in 0usize..=5, pick in 0usize..3, bn in -4i64..=4, gn in -4i64..=4) {
        // plugging the exact truncated series into Q(λ)u = 0 leaves O(λ^(K+1))
        let branch = pick % (n / 2 + 1);
        let order = 3usize;
        let series = run_series(n, branch, order, Gauge::Down).unwrap();
        let (b, g) = (Rational::frac(bn, 2), Rational::frac(gn, 2));
        let mut prev = None;
        for lam_den in [100i64, 1000] {
            let lam = Rational::frac(1, lam_den);
            let (s, t, u): (f64, f64, Vec<f64>) =
                evaluate_series_in(&series, order, &lam.to_f64(), &b.to_f64(), &g.to_f64());
            let worst = (0..n + 2)
                .map(|row| {
                    (0..=n).map(|col| {
                        crate::magyari::scaled_entry(n, row, col, &s, &t, &lam.to_f64(), &b.to_f64(), &g.to_f64(), |v| v as f64) * u[col]
                    }).sum::<f64>().abs()
                })
                .fold(0.0f64, f64::max);
            if let Some(p) = prev {
                // ten times smaller λ: at least λ^(K+1) = 10⁴ reduction, unless at roundoff
                prop_assert!(worst < 1e-12 || worst * 1e3 < p, "{p} -> {worst}");
            }
            prev = Some(worst);
        }
    }
}
