//! Serializable result documents, one per command.

use serde::{Deserialize, Serialize};

use qes_core::exactnum::{HalfEisenstein, Rational, Term};
use qes_core::perturb::Gauge;
use qes_core::verify::real::{Ext, Real};
use qes_core::verify::ConvergenceReport;

use crate::config::Couplings;

/// Outcome of one internal check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Exact checks are proofs; the rest are numeric oracles.
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn exact(name: &str, passed: bool) -> Self {
        Check { name: name.into(), passed, exact: true, detail: None }
    }

    pub fn numeric(name: &str, passed: bool, detail: String) -> Self {
        Check { name: name.into(), passed, exact: false, detail: Some(detail) }
    }
}

/// A real number: exact when known, always as a float and as a decimal
/// string at the requested precision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Value {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
    pub value: f64,
    pub decimal: String,
}

impl Value {
    pub fn exact(r: &Rational, digits: usize) -> Self {
        Value { exact: Some(r.clone()), value: r.to_f64(), decimal: Ext::from_rational(r).to_decimal(digits) }
    }

    pub fn approx<T: Real>(x: &T, digits: usize) -> Self {
        Value { exact: None, value: x.to_f64(), decimal: x.to_decimal(digits) }
    }

    pub fn either<T: Real>(exact: Option<&Rational>, approx: &T, digits: usize) -> Self {
        match exact {
            Some(r) => Value::exact(r, digits),
            None => Value::approx(approx, digits),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub s0: HalfEisenstein,
    pub t0: HalfEisenstein,
    pub real: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsDoc {
    #[serde(rename = "N")]
    pub degree: usize,
    pub count: usize,
    pub resultant_degree: usize,
    pub scan_bound: i64,
    pub roots: Vec<RootRow>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffsDoc {
    #[serde(rename = "N")]
    pub degree: usize,
    pub n: usize,
    pub s0: Rational,
    pub t0: Rational,
    pub u0: Vec<Rational>,
    /// `(1 - x)^(N-2n) (1 + x + x²)^n`
    pub closed_form: Vec<Rational>,
    pub node_multiplicity: usize,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PascalDoc {
    #[serde(rename = "K")]
    pub k: usize,
    pub rows: Vec<Vec<i64>>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeftvecsDoc {
    #[serde(rename = "N")]
    pub degree: usize,
    pub n: usize,
    pub s0: Rational,
    pub t0: Rational,
    pub u0: Vec<Rational>,
    pub v_plus: Vec<Rational>,
    pub v_minus: Vec<Rational>,
    pub c_plus: Rational,
    pub c_minus: Rational,
    pub checks: Vec<Check>,
}

/// Partial sums at one `(λ, b, g)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluated {
    pub lambda: Rational,
    pub b: Rational,
    pub g: Rational,
    pub s: Value,
    pub t: Value,
    pub u: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    #[serde(rename = "N")]
    pub degree: usize,
    pub n: usize,
    pub order: usize,
    pub gauge: Gauge,
    pub s0: Rational,
    pub t0: Rational,
    pub s_corr: Vec<Vec<Term>>,
    pub t_corr: Vec<Vec<Term>>,
    pub u_corr: Vec<Vec<Vec<Term>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluated: Option<Evaluated>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzDoc {
    pub alpha: Value,
    pub beta: Value,
    pub gamma: Value,
    pub l: Value,
    #[serde(rename = "Omega")]
    pub omega: Value,
    pub mu: Value,
    pub tau: Value,
    pub lambda: Value,
    pub b: Value,
    pub g: Value,
}

/// `λᵏ s⁽ᵏ⁾` and `λᵏ t⁽ᵏ⁾` at the run's couplings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderTerm {
    pub k: usize,
    pub s: Value,
    pub t: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonDoc {
    pub s: Value,
    pub t: Value,
    #[serde(rename = "E")]
    pub e: Value,
    #[serde(rename = "F")]
    pub f: Value,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub precision_bits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeDoc {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    /// Series solution at `K_max`.
    pub series_max_relative: f64,
    /// Newton-polished solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton_max_relative: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton_max_scaled: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton_delta_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton_delta_t: Option<f64>,
    /// `N = 1` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic_delta_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic_delta_t: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDoc {
    pub inputs: Couplings,
    #[serde(rename = "N")]
    pub degree: usize,
    pub n: usize,
    pub order: usize,
    pub gauge: Gauge,
    pub ansatz: AnsatzDoc,
    pub s0: Rational,
    pub t0: Rational,
    pub s_corr: Vec<Vec<Term>>,
    pub t_corr: Vec<Vec<Term>>,
    pub orders: Vec<OrderTerm>,
    pub s: Value,
    pub t: Value,
    #[serde(rename = "E")]
    pub e: Value,
    #[serde(rename = "F")]
    pub f: Value,
    #[serde(rename = "D")]
    pub d: Value,
    pub u: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton: Option<NewtonDoc>,
    pub ode_residual: OdeDoc,
    pub oracle: OracleDoc,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdePoint {
    pub lambda: Rational,
    pub converged: bool,
    pub newton_residual: f64,
    pub max_relative: f64,
    pub max_scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyDoc {
    #[serde(rename = "N")]
    pub degree: usize,
    pub n: usize,
    pub order: usize,
    pub b: Rational,
    pub g: Rational,
    pub convergence: ConvergenceReport,
    pub ode: Vec<OdePoint>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    #[serde(rename = "N")]
    pub degree: usize,
    /// `2 Re s`
    pub p: Vec<i64>,
    /// `2 Im s / √3`
    pub q: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    #[serde(rename = "N")]
    pub degree: usize,
    pub s: i64,
    pub u: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table4Row {
    #[serde(rename = "N")]
    pub degree: usize,
    pub s: i64,
    pub v_plus: Vec<i64>,
    pub c_plus: i64,
    pub v_minus: Vec<i64>,
    pub c_minus: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", content = "rows")]
pub enum TableBody {
    #[serde(rename = "1")]
    Roots(Vec<Table1Row>),
    #[serde(rename = "2")]
    Coefficients(Vec<Table2Row>),
    #[serde(rename = "3")]
    Pascal(Vec<Vec<i64>>),
    #[serde(rename = "4")]
    LeftVectors(Vec<Table4Row>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TablesDoc {
    pub table: TableBody,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Document {
    Roots(RootsDoc),
    Coeffs(CoeffsDoc),
    Pascal(PascalDoc),
    Leftvecs(LeftvecsDoc),
    Series(SeriesDoc),
    Spectrum(SpectrumDoc),
    Verify(VerifyDoc),
    Tables(TablesDoc),
}

impl Document {
    pub fn checks(&self) -> &[Check] {
        match self {
            Document::Roots(d) => &d.checks,
            Document::Coeffs(d) => &d.checks,
            Document::Pascal(d) => &d.checks,
            Document::Leftvecs(d) => &d.checks,
            Document::Series(d) => &d.checks,
            Document::Spectrum(d) => &d.checks,
            Document::Verify(d) => &d.checks,
            Document::Tables(d) => &d.checks,
        }
    }

    /// Checks that decide the exit status. `verify` gates on its numeric
    /// oracles too; everything else only on exact checks.
    pub fn failed_checks(&self) -> Vec<&Check> {
        let all = matches!(self, Document::Verify(_));
        self.checks().iter().filter(|c| !c.passed && (all || c.exact)).collect()
    }
}

/// Machine-readable failure report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub error: ErrorBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
}

impl ErrorDoc {
    pub fn new(kind: &str, message: String) -> Self {
        ErrorDoc { error: ErrorBody { kind: kind.into(), message, failed: Vec::new() } }
    }

    pub fn from_error(e: &qes_core::QesError) -> Self {
        ErrorDoc::new(e.kind(), e.to_string())
    }
}
