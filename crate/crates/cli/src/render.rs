//! Text, JSON and CSV output.

use std::fmt::Write as _;

use qes_core::exactnum::{BivariatePoly, Rational, Term};
use qes_core::{QesError, Result};

use crate::config::Format;
use crate::doc::*;

pub fn render(doc: &Document, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(doc)
            .map(|s| s + "\n")
            .map_err(|e| QesError::Inconsistent(format!("serialization failed: {e}"))),
        Format::Table => Ok(text(doc)),
        Format::Csv => csv_of(doc),
    }
}

/// Right-aligned columns, widths from the widest cell.
fn grid(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| {
                let pad = " ".repeat(w - c.chars().count());
                // first column holds labels
                if i == 0 { format!("{c}{pad}") } else { format!("{pad}{c}") }
            })
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect());
    for row in rows {
        out += &line(row.iter().map(|s| s.as_str()).collect());
    }
    out
}

fn list<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn poly(terms: &[Term]) -> String {
    BivariatePoly::from_terms(terms.iter().map(|t| ((t.b, t.g), t.coef.clone()))).display_with(["b", "g"])
}

fn value(v: &Value) -> String {
    match &v.exact {
        Some(r) => format!("{r}  ({})", v.decimal),
        None => v.decimal.clone(),
    }
}

fn checks(out: &mut String, checks: &[Check]) {
    for c in checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        let kind = if c.exact { "exact" } else { "numeric" };
        match &c.detail {
            Some(d) => writeln!(out, "check {} [{kind}]: {status}  {d}", c.name).unwrap(),
            None => writeln!(out, "check {} [{kind}]: {status}", c.name).unwrap(),
        }
    }
}

fn text(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::Roots(d) => {
            writeln!(out, "N = {}: {} roots, resultant degree {}", d.degree, d.count, d.resultant_degree).unwrap();
            let rows: Vec<Vec<String>> = d
                .roots
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![
                        (i + 1).to_string(),
                        r.s0.p.to_string(),
                        r.s0.q.to_string(),
                        r.t0.p.to_string(),
                        r.t0.q.to_string(),
                        r.n.map_or("-".into(), |n| n.to_string()),
                    ]
                })
                .collect();
            out += &grid(&["#", "2Re s", "2Im s/√3", "2Re t", "2Im t/√3", "n"], &rows);
            checks(&mut out, &d.checks);
        }
        Document::Coeffs(d) => {
            writeln!(out, "N = {}, n = {}, s0 = t0 = {}", d.degree, d.n, d.s0).unwrap();
            writeln!(out, "u0          = {}", list(&d.u0)).unwrap();
            writeln!(out, "closed form = {}", list(&d.closed_form)).unwrap();
            writeln!(out, "node multiplicity at x = 1: {}", d.node_multiplicity).unwrap();
            checks(&mut out, &d.checks);
        }
        Document::Pascal(d) => {
            let rows: Vec<Vec<String>> =
                d.rows.iter().enumerate().map(|(k, r)| vec![k.to_string(), list(r)]).collect();
            out += &grid(&["K", "row"], &rows);
            checks(&mut out, &d.checks);
        }
        Document::Leftvecs(d) => {
            writeln!(out, "N = {}, n = {}, s0 = t0 = {}", d.degree, d.n, d.s0).unwrap();
            writeln!(out, "u0 = {}", list(&d.u0)).unwrap();
            writeln!(out, "v+ = {}   <v+|J u0> = <v+|K u0> = {}", list(&d.v_plus), d.c_plus).unwrap();
            writeln!(out, "v- = {}   <v-|J u0> = -<v-|K u0> = {}", list(&d.v_minus), d.c_minus).unwrap();
            checks(&mut out, &d.checks);
        }
        Document::Series(d) => {
            let gauge = if d.gauge == qes_core::perturb::Gauge::Down { "down" } else { "up" };
            writeln!(out, "N = {}, n = {}, order {}, gauge {gauge}", d.degree, d.n, d.order).unwrap();
            for k in 0..=d.order {
                writeln!(out, "k = {k}").unwrap();
                writeln!(out, "  s = {}", poly(&d.s_corr[k])).unwrap();
                writeln!(out, "  t = {}", poly(&d.t_corr[k])).unwrap();
                let u: Vec<String> = d.u_corr[k].iter().map(|c| poly(c)).collect();
                writeln!(out, "  u = ({})", u.join(", ")).unwrap();
            }
            if let Some(e) = &d.evaluated {
                writeln!(out, "at lambda = {}, b = {}, g = {}:", e.lambda, e.b, e.g).unwrap();
                writeln!(out, "  s = {}", value(&e.s)).unwrap();
                writeln!(out, "  t = {}", value(&e.t)).unwrap();
            }
            checks(&mut out, &d.checks);
        }
        Document::Spectrum(d) => {
            writeln!(out, "N = {}, n = {}, order {}, s0 = t0 = {}", d.degree, d.n, d.order, d.s0).unwrap();
            let a = &d.ansatz;
            let rows: Vec<Vec<String>> = [
                ("alpha", &a.alpha),
                ("beta", &a.beta),
                ("gamma", &a.gamma),
                ("l", &a.l),
                ("Omega", &a.omega),
                ("mu", &a.mu),
                ("tau", &a.tau),
                ("lambda", &a.lambda),
                ("b", &a.b),
                ("g", &a.g),
                ("s", &d.s),
                ("t", &d.t),
                ("E", &d.e),
                ("F", &d.f),
                ("D", &d.d),
            ]
            .iter()
            .map(|(k, v)| vec![k.to_string(), value(v)])
            .collect();
            out += &grid(&["quantity", "value"], &rows);
            if let Some(n) = &d.newton {
                writeln!(out, "newton: E = {}, F = {}, residual {:e}", n.e.decimal, n.f.decimal, n.residual).unwrap();
            }
            writeln!(out, "ode residual of series: {:e}", d.ode_residual.series_max_relative).unwrap();
            checks(&mut out, &d.checks);
        }
        Document::Verify(d) => {
            writeln!(out, "N = {}, n = {}, order {}, b = {}, g = {}", d.degree, d.n, d.order, d.b, d.g).unwrap();
            let c = &d.convergence;
            let mut headers = vec!["K".to_string()];
            headers.extend(c.lambda.iter().map(|l| format!("err@{l}")));
            headers.push("slope".into());
            let rows: Vec<Vec<String>> = c
                .errors
                .iter()
                .enumerate()
                .map(|(k, errs)| {
                    let mut row = vec![k.to_string()];
                    row.extend(errs.iter().map(|e| format!("{e:.3e}")));
                    row.push(c.slopes[k].map_or("exact".into(), |s| format!("{s:.3}")));
                    row
                })
                .collect();
            let hdr: Vec<&str> = headers.iter().map(|s| s.as_str()).collect();
            out += &grid(&hdr, &rows);
            checks(&mut out, &d.checks);
        }
        Document::Tables(d) => {
            match &d.table {
                TableBody::Roots(rows) => {
                    let r: Vec<Vec<String>> =
                        rows.iter().map(|r| vec![r.degree.to_string(), list(&r.p), list(&r.q)]).collect();
                    out += &grid(&["N", "2Re s", "2Im s/√3"], &r);
                }
                TableBody::Coefficients(rows) => {
                    let r: Vec<Vec<String>> =
                        rows.iter().map(|r| vec![r.degree.to_string(), r.s.to_string(), list(&r.u)]).collect();
                    out += &grid(&["N", "s", "u"], &r);
                }
                TableBody::Pascal(rows) => {
                    let r: Vec<Vec<String>> =
                        rows.iter().enumerate().map(|(k, r)| vec![k.to_string(), list(r)]).collect();
                    out += &grid(&["K", "row"], &r);
                }
                TableBody::LeftVectors(rows) => {
                    let r: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.degree.to_string(),
                                r.s.to_string(),
                                list(&r.v_plus),
                                r.c_plus.to_string(),
                                list(&r.v_minus),
                                r.c_minus.to_string(),
                            ]
                        })
                        .collect();
                    out += &grid(&["N", "s", "v+", "c+", "v-", "c-"], &r);
                }
            }
            checks(&mut out, &d.checks);
        }
    }
    out
}

fn csv_of(doc: &Document) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut put = |rec: Vec<String>| w.write_record(&rec).map_err(|e| QesError::Inconsistent(e.to_string()));
    let s = |x: &dyn ToString| x.to_string();
    match doc {
        Document::Roots(d) => {
            put(vec!["N".into(), "p_s".into(), "q_s".into(), "p_t".into(), "q_t".into(), "real".into(), "n".into()])?;
            for r in &d.roots {
                put(vec![
                    s(&d.degree),
                    s(&r.s0.p),
                    s(&r.s0.q),
                    s(&r.t0.p),
                    s(&r.t0.q),
                    s(&r.real),
                    r.n.map_or(String::new(), |n| n.to_string()),
                ])?;
            }
        }
        Document::Pascal(PascalDoc { rows, .. }) | Document::Tables(TablesDoc { table: TableBody::Pascal(rows), .. }) => {
            put(vec!["K".into(), "j".into(), "value".into()])?;
            for (k, row) in rows.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    put(vec![s(&k), s(&j), s(v)])?;
                }
            }
        }
        Document::Tables(TablesDoc { table: TableBody::Roots(rows), .. }) => {
            put(vec!["N".into(), "p".into(), "q".into()])?;
            for r in rows {
                for (p, q) in r.p.iter().zip(&r.q) {
                    put(vec![s(&r.degree), s(p), s(q)])?;
                }
            }
        }
        Document::Tables(TablesDoc { table: TableBody::Coefficients(rows), .. }) => {
            put(vec!["N".into(), "s".into(), "j".into(), "u".into()])?;
            for r in rows {
                for (j, u) in r.u.iter().enumerate() {
                    put(vec![s(&r.degree), s(&r.s), s(&j), s(u)])?;
                }
            }
        }
        Document::Tables(TablesDoc { table: TableBody::LeftVectors(rows), .. }) => {
            put(vec!["N".into(), "s".into(), "vector".into(), "overlap".into(), "j".into(), "entry".into()])?;
            for r in rows {
                for (name, v, c) in [("plus", &r.v_plus, r.c_plus), ("minus", &r.v_minus, r.c_minus)] {
                    for (j, x) in v.iter().enumerate() {
                        put(vec![s(&r.degree), s(&r.s), name.into(), s(&c), s(&j), s(x)])?;
                    }
                }
            }
        }
        Document::Verify(d) => {
            put(vec!["K".into(), "lambda".into(), "error".into(), "slope".into()])?;
            for (k, errs) in d.convergence.errors.iter().enumerate() {
                for (lam, e) in d.convergence.lambda.iter().zip(errs) {
                    let slope = d.convergence.slopes[k].map_or(String::new(), |v| v.to_string());
                    put(vec![s(&k), rational_decimal(lam), s(e), slope])?;
                }
            }
        }
        _ => {
            return Err(QesError::InvalidArgument(
                "csv covers flat tables only: roots, pascal, tables and verify".into(),
            ))
        }
    }
    let bytes = w.into_inner().map_err(|e| QesError::Inconsistent(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| QesError::Inconsistent(e.to_string()))
}

fn rational_decimal(r: &Rational) -> String {
    r.to_f64().to_string()
}
