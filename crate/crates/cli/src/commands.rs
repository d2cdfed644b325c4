//! One function per command; each returns a [`Document`].

use qes_core::exactnum::linalg::{determinant, mat_vec, transpose};
use qes_core::exactnum::{BivariatePoly, Rational, Term};
use qes_core::magyari::{backout_physical_exact, build_split, derive_ansatz, spectral_from_physical_exact, PhysicalParams};
use qes_core::perturb::{
    evaluate_series_in, left_null_pair, order_residual, propagator_down, propagator_up, run_series, Gauge,
    PerturbationSeries,
};
use qes_core::verify::real::{Ext, Real, EXT_BITS};
use qes_core::verify::{
    convergence_report, cubic_oracle_n1, cubic_series_n1, log_grid, newton_full, ode_residual, solve_physical,
    NewtonOptions, RealAnsatz,
};
use qes_core::zeroorder::{
    certify_roots, closed_form_wavefunction, nodal_multiplicity, pascal_ground, real_roots, zero_coefficients, RootPair,
};
use qes_core::{QesError, Result};

use crate::config::{Command, Couplings, RunConfig};
use crate::doc::*;

/// Radial grid of the ODE check.
pub const ODE_GRID: (f64, f64, usize) = (1e-2, 10.0, 50);
/// Largest accepted ODE residual of a Newton-converged solution.
pub const ODE_TOL: f64 = 1e-10;

pub fn run(cfg: &RunConfig) -> Result<Document> {
    Ok(match cfg.command {
        Command::Roots => Document::Roots(cmd_roots(degree(cfg)?)?),
        Command::Coeffs => Document::Coeffs(cmd_coeffs(degree(cfg)?, cfg.branch_or_default())?),
        Command::Pascal => Document::Pascal(cmd_pascal(cfg.k_rows.or(cfg.degree).unwrap_or(6))?),
        Command::Leftvecs => Document::Leftvecs(cmd_leftvecs(degree(cfg)?, cfg.branch_or_default())?),
        Command::Series => Document::Series(cmd_series(cfg)?),
        Command::Spectrum => Document::Spectrum(cmd_spectrum(cfg)?),
        Command::Verify => Document::Verify(cmd_verify(cfg)?),
        Command::Tables => {
            let which = cfg.table.ok_or_else(|| QesError::InvalidArgument("tables needs a table number".into()))?;
            let range = if which == 3 { cfg.k_rows.or(cfg.degree) } else { cfg.degree };
            Document::Tables(cmd_tables(which, range)?)
        }
    })
}

fn degree(cfg: &RunConfig) -> Result<usize> {
    cfg.degree.ok_or_else(|| QesError::InvalidArgument("missing --N".into()))
}

fn to_ints(v: &[Rational]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| QesError::Inconsistent(format!("{x} is not a machine integer"))))
        .collect()
}

fn term_lists(polys: &[BivariatePoly]) -> Vec<Vec<Term>> {
    polys.iter().map(BivariatePoly::to_terms).collect()
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::from(1), |acc, k| acc * Rational::from(k))
}

pub fn cmd_roots(degree: usize) -> Result<RootsDoc> {
    let cert = certify_roots(degree)?;
    let reals: Vec<RootPair> = cert.roots.iter().filter(|r| r.is_real()).cloned().collect();
    let expected = real_roots(degree)?;
    let mut sorted_reals: Vec<_> = reals.iter().map(|r| (r.s, r.t)).collect();
    let mut sorted_expected: Vec<_> = expected.iter().map(|r| (r.s, r.t)).collect();
    sorted_reals.sort();
    sorted_expected.sort();
    let checks = vec![
        Check::exact("real_family", sorted_reals == sorted_expected),
        Check::exact("resultant_degree", cert.resultant_degree == cert.roots.len()),
    ];
    Ok(RootsDoc {
        degree,
        count: cert.roots.len(),
        resultant_degree: cert.resultant_degree,
        scan_bound: cert.scan_bound,
        roots: cert
            .roots
            .iter()
            .map(|r| RootRow { s0: r.s, t0: r.t, real: r.is_real(), n: r.branch })
            .collect(),
        checks,
    })
}

pub fn cmd_coeffs(degree: usize, n: usize) -> Result<CoeffsDoc> {
    let root = RootPair::real(degree, n)?;
    let (s0, t0) = root.real_values().expect("real branch");
    let u0 = zero_coefficients(&root)?;
    let closed = closed_form_wavefunction(degree, n)?;
    let mult = nodal_multiplicity(&closed);
    let checks = vec![
        Check::exact("closed_form", closed.coeffs() == &u0.entries[..]),
        Check::exact("node_multiplicity", mult == degree - 2 * n),
    ];
    Ok(CoeffsDoc { degree, n, s0, t0, u0: u0.entries, closed_form: closed.coeffs().to_vec(), node_multiplicity: mult, checks })
}

pub fn cmd_pascal(k: usize) -> Result<PascalDoc> {
    let big = pascal_ground(k);
    let mut rows = Vec::with_capacity(big.len());
    for row in &big {
        let r: Option<Vec<i64>> = row.iter().map(|v| i64::try_from(v).ok()).collect();
        rows.push(r.ok_or_else(|| QesError::InvalidArgument(format!("row entries overflow 64 bits at K = {k}")))?);
    }
    let mut ok = true;
    for (kk, row) in big.iter().enumerate() {
        let u = zero_coefficients(&RootPair::real(2 * kk, kk)?)?;
        ok &= row.iter().map(|v| Rational::from_integer(v.clone())).collect::<Vec<_>>() == u.entries;
    }
    Ok(PascalDoc { k, rows, checks: vec![Check::exact("ground_states", ok)] })
}

pub fn cmd_leftvecs(degree: usize, n: usize) -> Result<LeftvecsDoc> {
    let root = RootPair::real(degree, n)?;
    let (s0, t0) = root.real_values().expect("real branch");
    let u0 = zero_coefficients(&root)?;
    let pair = left_null_pair(&root, &u0)?;
    let qt = transpose(&build_split(degree, s0.clone(), t0.clone()).q0_dense());
    let kills = |v: &[Rational]| mat_vec(&qt, v).iter().all(|x| x.signum() == 0);
    let checks = vec![Check::exact("left_kernel", kills(&pair.v_plus) && kills(&pair.v_minus))];
    Ok(LeftvecsDoc {
        degree,
        n,
        s0,
        t0,
        u0: u0.entries,
        v_plus: pair.v_plus,
        v_minus: pair.v_minus,
        c_plus: pair.c_plus,
        c_minus: pair.c_minus,
        checks,
    })
}

fn residuals_vanish(series: &PerturbationSeries) -> bool {
    (0..=series.order).all(|k| order_residual(series, k).iter().all(BivariatePoly::is_zero))
}

/// Partial sums in exact arithmetic.
fn eval_exact(
    series: &PerturbationSeries,
    lambda: &Rational,
    b: &Rational,
    g: &Rational,
) -> (Rational, Rational, Vec<Rational>) {
    let mut s = Rational::from(0);
    let mut t = Rational::from(0);
    let mut u = vec![Rational::from(0); series.degree + 1];
    let mut pow = Rational::from(1);
    for k in 0..=series.order {
        s += &(&pow * &series.s_corr[k].eval(b, g));
        t += &(&pow * &series.t_corr[k].eval(b, g));
        for (ui, c) in u.iter_mut().zip(&series.u_corr[k]) {
            *ui += &(&pow * &c.eval(b, g));
        }
        pow = &pow * lambda;
    }
    (s, t, u)
}

pub fn cmd_series(cfg: &RunConfig) -> Result<SeriesDoc> {
    let degree = degree(cfg)?;
    let n = cfg.branch_or_default();
    let series = run_series(degree, n, cfg.order, cfg.gauge)?;
    let other = run_series(degree, n, cfg.order, if cfg.gauge == Gauge::Down { Gauge::Up } else { Gauge::Down })?;
    let checks = vec![
        Check::exact("hierarchy_residuals", residuals_vanish(&series)),
        Check::exact("gauge_agreement", series.s_corr == other.s_corr && series.t_corr == other.t_corr),
    ];
    let evaluated = match &cfg.couplings {
        Couplings::Formal { lambda, b, g } => {
            let (s, t, u) = eval_exact(&series, lambda, b, g);
            Some(Evaluated {
                lambda: lambda.clone(),
                b: b.clone(),
                g: g.clone(),
                s: Value::exact(&s, cfg.precision),
                t: Value::exact(&t, cfg.precision),
                u: u.iter().map(|x| Value::exact(x, cfg.precision)).collect(),
            })
        }
        Couplings::Physical(_) => {
            return Err(QesError::InvalidArgument(
                "series evaluates at formal --lambda/--b/--g; use spectrum for physical couplings".into(),
            ))
        }
        Couplings::None => None,
    };
    Ok(SeriesDoc {
        degree,
        n,
        order: cfg.order,
        gauge: cfg.gauge,
        s0: series.s_corr[0].as_constant().expect("constant zero order"),
        t0: series.t_corr[0].as_constant().expect("constant zero order"),
        s_corr: term_lists(&series.s_corr),
        t_corr: term_lists(&series.t_corr),
        u_corr: series.u_corr.iter().map(|u| term_lists(u)).collect(),
        evaluated,
        checks,
    })
}

fn ansatz_doc(a: &qes_core::magyari::AnsatzParams, r: &RealAnsatz<Ext>, digits: usize) -> AnsatzDoc {
    let v = |p: &qes_core::magyari::ParamValue, x: &Ext| Value::either(p.exact.as_ref(), x, digits);
    AnsatzDoc {
        alpha: v(&a.alpha, &r.alpha),
        beta: v(&a.beta, &r.beta),
        gamma: v(&a.gamma, &r.gamma),
        l: v(&a.l_eff, &r.l_eff),
        omega: v(&a.omega, &r.omega),
        mu: v(&a.mu, &r.mu),
        tau: v(&a.tau, &r.tau),
        lambda: v(&a.lambda, &r.lambda),
        b: v(&a.b, &r.b),
        g: v(&a.g, &r.g),
    }
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<SpectrumDoc> {
    let degree = degree(cfg)?;
    let n = cfg.branch_or_default();
    let digits = cfg.precision;
    let params = cfg
        .couplings
        .physical()?
        .ok_or_else(|| QesError::InvalidArgument("spectrum needs couplings".into()))?;
    let ansatz = derive_ansatz(&params, degree)?;
    let ra = RealAnsatz::<Ext>::from_physical(&params)?;
    let series = run_series(degree, n, cfg.order, cfg.gauge)?;
    let mut checks = vec![Check::exact("hierarchy_residuals", residuals_vanish(&series))];

    let (s_x, t_x, u_x) = evaluate_series_in(&series, cfg.order, &ra.lambda, &ra.b, &ra.g);
    let (e_x, f_x) = ra.backout(&s_x, &t_x);
    let exact = ansatz.exact_params();
    let exact_sums = exact.as_ref().map(|x| {
        let (s, t, u) = eval_exact(&series, &x.lambda(), &x.b(), &x.g());
        let (e, f) = backout_physical_exact(&s, &t, x);
        checks.push(Check::exact("backout_roundtrip", spectral_from_physical_exact(&e, &f, x) == (s.clone(), t.clone())));
        (s, t, u, e, f)
    });
    let pick = |i: usize, approx: &Ext| {
        let r = exact_sums.as_ref().map(|(s, t, _, e, f)| [s, t, e, f][i]);
        Value::either(r, approx, digits)
    };
    let (s, t, e, f) = (pick(0, &s_x), pick(1, &t_x), pick(2, &e_x), pick(3, &f_x));
    let u: Vec<Value> = match &exact_sums {
        Some((_, _, u, _, _)) => u.iter().map(|x| Value::exact(x, digits)).collect(),
        None => u_x.iter().map(|x| Value::approx(x, digits)).collect(),
    };
    let d = Value::either(ansatz.d.exact.as_ref(), &ra.d(degree), digits);

    let orders = (0..=cfg.order)
        .map(|k| {
            let term = |p: &BivariatePoly| -> Value {
                match &exact {
                    Some(x) => Value::exact(&(&x.lambda().pow(k as u32) * &p.eval(&x.b(), &x.g())), digits),
                    None => {
                        let v = ra.lambda.powi(k as u32) * p.eval_with(&ra.b, &ra.g, Ext::from_rational);
                        Value::approx(&v, digits)
                    }
                }
            };
            OrderTerm { k, s: term(&series.s_corr[k]), t: term(&series.t_corr[k]) }
        })
        .collect();

    let grid = log_grid(ODE_GRID.0, ODE_GRID.1, ODE_GRID.2);
    let series_ode = ode_residual(&params, &ra, &e_x, &f_x, &u_x, &grid)?;
    let seed = (s_x.clone(), t_x.clone(), u_x.clone());
    let mut oracle = OracleDoc { newton_delta_s: None, newton_delta_t: None, cubic_delta_s: None, cubic_delta_t: None };
    let mut ode = OdeDoc {
        r_min: ODE_GRID.0,
        r_max: ODE_GRID.1,
        points: ODE_GRID.2,
        series_max_relative: series_ode.max_relative,
        newton_max_relative: None,
        newton_max_scaled: None,
    };
    let newton = match newton_full(degree, &ra.lambda, &ra.b, &ra.g, seed, &NewtonOptions::for_precision()) {
        Ok(sol) => {
            let (ne, nf) = ra.backout(&sol.s, &sol.t);
            let res = ode_residual(&params, &ra, &ne, &nf, &sol.u, &grid)?;
            ode.newton_max_relative = Some(res.max_relative);
            ode.newton_max_scaled = Some(res.max_scaled);
            oracle.newton_delta_s = Some((s_x.clone() - sol.s.clone()).abs().to_f64());
            oracle.newton_delta_t = Some((t_x.clone() - sol.t.clone()).abs().to_f64());
            checks.push(Check::numeric(
                "newton_converged",
                sol.converged,
                format!("residual {:e} after {} iterations", sol.residual.to_f64(), sol.iterations),
            ));
            checks.push(Check::numeric(
                "ode_residual",
                sol.converged && res.max_relative <= ODE_TOL && res.max_scaled <= ODE_TOL,
                format!("max relative {:e}, max scaled {:e}", res.max_relative, res.max_scaled),
            ));
            Some(NewtonDoc {
                s: Value::approx(&sol.s, digits),
                t: Value::approx(&sol.t, digits),
                e: Value::approx(&ne, digits),
                f: Value::approx(&nf, digits),
                residual: sol.residual.to_f64(),
                iterations: sol.iterations,
                converged: sol.converged,
                precision_bits: EXT_BITS,
            })
        }
        Err(err) => {
            checks.push(Check::numeric("newton_converged", false, err.to_string()));
            None
        }
    };
    if degree == 1 && n == 0 {
        let (cs, ct, _) = cubic_oracle_n1(&ra.lambda, &ra.b, &ra.g);
        oracle.cubic_delta_s = Some((s_x.clone() - cs).abs().to_f64());
        oracle.cubic_delta_t = Some((t_x.clone() - ct).abs().to_f64());
    }

    Ok(SpectrumDoc {
        inputs: cfg.couplings.clone(),
        degree,
        n,
        order: cfg.order,
        gauge: cfg.gauge,
        ansatz: ansatz_doc(&ansatz, &ra, digits),
        s0: series.s_corr[0].as_constant().expect("constant zero order"),
        t0: series.t_corr[0].as_constant().expect("constant zero order"),
        s_corr: term_lists(&series.s_corr),
        t_corr: term_lists(&series.t_corr),
        orders,
        s,
        t,
        e,
        f,
        d,
        u,
        newton,
        ode_residual: ode,
        oracle,
        checks,
    })
}

/// λ values of the convergence study.
pub fn lambda_grid() -> Vec<Rational> {
    vec![Rational::frac(1, 100), Rational::frac(1, 1000), Rational::frac(1, 10000)]
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyDoc> {
    let degree = degree(cfg)?;
    let n = cfg.branch_or_default();
    let order = cfg.order;
    let approx = |v: &qes_core::magyari::ParamValue| {
        v.exact.clone().or_else(|| Rational::from_f64_decimal(v.value, 15)).unwrap_or_default()
    };
    let (b, g, physical, extra_lambda): (Rational, Rational, Option<PhysicalParams>, Option<Rational>) =
        match &cfg.couplings {
            Couplings::Formal { lambda, b, g } => {
                (b.clone(), g.clone(), None, Some(lambda.clone()).filter(|l| l.signum() > 0))
            }
            Couplings::None => (Rational::from(1), Rational::from(1), None, None),
            Couplings::Physical(p) => {
                let a = derive_ansatz(p, degree)?;
                (approx(&a.b), approx(&a.g), Some(p.clone()), None)
            }
        };

    let root = RootPair::real(degree, n)?;
    let (s0, t0) = root.real_values().expect("real branch");
    let u0 = zero_coefficients(&root)?;
    let mut checks = Vec::new();

    let pair = left_null_pair(&root, &u0)?;
    let qt = transpose(&build_split(degree, s0.clone(), t0.clone()).q0_dense());
    let kills = |v: &[Rational]| mat_vec(&qt, v).iter().all(|x| x.signum() == 0);
    checks.push(Check::exact("left_kernel", kills(&pair.v_plus) && kills(&pair.v_minus)));

    let closed = closed_form_wavefunction(degree, n)?;
    checks.push(Check::exact("closed_form", closed.coeffs() == &u0.entries[..]));

    let dets_ok = determinant(&propagator_down(degree, &s0, &t0)) == factorial(degree)
        && determinant(&propagator_up(degree, &s0, &t0)) == factorial(degree);
    checks.push(Check::exact("propagator_determinant", dets_ok));

    let down = run_series(degree, n, order, Gauge::Down)?;
    let up = run_series(degree, n, order, Gauge::Up)?;
    checks.push(Check::exact("hierarchy_residuals", residuals_vanish(&down) && residuals_vanish(&up)));
    checks.push(Check::exact("gauge_agreement", down.s_corr == up.s_corr && down.t_corr == up.t_corr));
    if degree == 1 {
        let (cs, ct) = cubic_series_n1(order);
        checks.push(Check::exact("cubic_series", down.s_corr == cs && down.t_corr == ct));
    }

    let report = convergence_report(degree, n, order, &lambda_grid(), &b, &g)?;
    let slopes: Vec<String> = report
        .slopes
        .iter()
        .map(|s| s.map_or("exact".to_string(), |v| format!("{v:.3}")))
        .collect();
    checks.push(Check::numeric(
        "convergence_slopes",
        report.passes(0.5),
        format!("slopes [{}], need K + 0.5", slopes.join(", ")),
    ));

    let grid = log_grid(ODE_GRID.0, ODE_GRID.1, ODE_GRID.2);
    let opts = NewtonOptions::<Ext>::for_precision();
    let mut ode = Vec::new();
    let mut points: Vec<(Rational, PhysicalParams)> = Vec::new();
    for lam in lambda_grid().into_iter().chain(extra_lambda) {
        points.push((lam.clone(), PhysicalParams::canonical(&lam, &b, &g)?));
    }
    if let Some(p) = physical {
        let a = derive_ansatz(&p, degree)?;
        points.push((approx(&a.lambda), p));
    }
    for (lam, params) in points {
        let sol = solve_physical::<Ext>(&params, degree, n, order, &opts)?;
        let res = ode_residual(&params, &sol.ansatz, &sol.e, &sol.f, &sol.newton.u, &grid)?;
        ode.push(OdePoint {
            lambda: lam,
            converged: sol.newton.converged,
            newton_residual: sol.newton.residual.to_f64(),
            max_relative: res.max_relative,
            max_scaled: res.max_scaled,
        });
    }
    let worst = ode.iter().map(|p| p.max_relative.max(p.max_scaled)).fold(0.0, f64::max);
    checks.push(Check::numeric(
        "ode_residual",
        ode.iter().all(|p| p.converged) && worst <= ODE_TOL,
        format!("worst {worst:e} over {} solves", ode.len()),
    ));

    Ok(VerifyDoc { degree, n, order, b, g, convergence: report, ode, checks })
}

/// Reference tables. `range` picks a single `N` (tables 1, 2, 4) or the
/// last row `K` (table 3); `None` gives the standard extent.
pub fn cmd_tables(which: u8, range: Option<usize>) -> Result<TablesDoc> {
    let span = |default: std::ops::RangeInclusive<usize>| match range {
        Some(n) => n..=n,
        None => default,
    };
    let mut checks = Vec::new();
    let table = match which {
        1 => {
            let mut rows = Vec::new();
            let mut counts_ok = true;
            for degree in span(1..=5) {
                let roots = certify_roots(degree)?.roots;
                counts_ok &= roots.len() == (degree + 1) * (degree + 2) / 2;
                rows.push(Table1Row {
                    degree,
                    p: roots.iter().map(|r| r.s.p).collect(),
                    q: roots.iter().map(|r| r.s.q).collect(),
                });
            }
            checks.push(Check::exact("root_counts", counts_ok));
            TableBody::Roots(rows)
        }
        2 => {
            let mut rows = Vec::new();
            let mut closed_ok = true;
            for degree in span(0..=6) {
                for root in real_roots(degree)? {
                    let n = root.branch.expect("real branch");
                    let u = zero_coefficients(&root)?;
                    closed_ok &= closed_form_wavefunction(degree, n)?.coeffs() == &u.entries[..];
                    rows.push(Table2Row { degree, s: degree as i64 - 3 * n as i64, u: to_ints(&u.entries)? });
                }
            }
            checks.push(Check::exact("closed_form", closed_ok));
            TableBody::Coefficients(rows)
        }
        3 => {
            let k = range.unwrap_or(6);
            let doc = cmd_pascal(k)?;
            let mut trinomial_ok = true;
            for (kk, row) in doc.rows.iter().enumerate() {
                let closed = closed_form_wavefunction(2 * kk, kk)?;
                trinomial_ok &= to_ints(closed.coeffs())? == *row;
            }
            checks.extend(doc.checks);
            checks.push(Check::exact("trinomial_expansion", trinomial_ok));
            TableBody::Pascal(doc.rows)
        }
        4 => {
            let mut rows = Vec::new();
            let mut kernel_ok = true;
            for degree in span(0..=4) {
                for n in 0..=degree / 2 {
                    let d = cmd_leftvecs(degree, n)?;
                    kernel_ok &= d.checks.iter().all(|c| c.passed);
                    rows.push(Table4Row {
                        degree,
                        s: degree as i64 - 3 * n as i64,
                        v_plus: to_ints(&d.v_plus)?,
                        c_plus: to_ints(&[d.c_plus])?[0],
                        v_minus: to_ints(&d.v_minus)?,
                        c_minus: to_ints(&[d.c_minus])?[0],
                    });
                }
            }
            checks.push(Check::exact("left_kernel", kernel_ok));
            TableBody::LeftVectors(rows)
        }
        other => return Err(QesError::InvalidArgument(format!("unsupported table {other}, expected 1 to 4"))),
    };
    Ok(TablesDoc { table, checks })
}
