//! Command-line arguments and the validated run configuration.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use qes_core::exactnum::Rational;
use qes_core::magyari::PhysicalParams;
use qes_core::perturb::Gauge;
use qes_core::{QesError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Complete root set of the secular system at order zero.
    Roots,
    /// Integer Taylor vector of a real branch.
    Coeffs,
    /// Generalized Pascal (trinomial) triangle.
    Pascal,
    /// Left null pair of a real branch.
    Leftvecs,
    /// Perturbation series in the formal symbols b, g.
    Series,
    /// End-to-end bound state for given couplings.
    Spectrum,
    /// Exact checks plus numeric oracles for one branch.
    Verify,
    /// Reference tables 1 to 4.
    Tables,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    Down,
    Up,
}

impl From<GaugeArg> for Gauge {
    fn from(g: GaugeArg) -> Gauge {
        match g {
            GaugeArg::Down => Gauge::Down,
            GaugeArg::Up => Gauge::Up,
        }
    }
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "qes", version, about = "Exact bound states of the Kratzer-plus-quartic radial equation")]
pub struct Cli {
    pub command: Command,
    /// Table number for `tables`.
    pub which: Option<u8>,

    /// Truncation degree N.
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    /// Branch index n, with s = t = N - 3n at order zero.
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Last row of the Pascal triangle.
    #[arg(long = "K")]
    pub big_k: Option<usize>,
    /// Highest perturbative order K_max.
    #[arg(long, default_value_t = 2)]
    pub order: usize,

    /// Quartic coupling A (physical mode; rationals like 3/2 accepted)
    #[arg(long = "A", value_parser = rational, allow_hyphen_values = true)]
    pub a: Option<Rational>,
    /// Cubic coupling B
    #[arg(long = "B", value_parser = rational, allow_hyphen_values = true)]
    pub b_cpl: Option<Rational>,
    /// Quadratic coupling C
    #[arg(long = "C", value_parser = rational, allow_hyphen_values = true)]
    pub c: Option<Rational>,
    /// Centrifugal coupling G
    #[arg(long = "G", value_parser = rational, allow_hyphen_values = true)]
    pub g_cpl: Option<Rational>,
    /// Angular momentum ell (default 0)
    #[arg(long)]
    pub ell: Option<u32>,

    /// Formal expansion parameter lambda (formal mode)
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub lambda: Option<Rational>,
    /// Formal symbol b
    #[arg(long = "b", value_parser = rational, allow_hyphen_values = true)]
    pub b: Option<Rational>,
    /// Formal symbol g
    #[arg(long = "g", value_parser = rational, allow_hyphen_values = true)]
    pub g: Option<Rational>,

    /// Gauge fixing of the coefficient vector
    #[arg(long, value_enum, default_value = "down")]
    pub gauge: GaugeArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Significant digits for evaluated reals.
    #[arg(long, default_value_t = 17)]
    pub precision: usize,
    /// Write the document here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Where the couplings come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Couplings {
    /// `A, B, C, G, ℓ` as given.
    Physical(PhysicalParams),
    /// Formal `(λ, b, g)`.
    Formal { lambda: Rational, b: Rational, g: Rational },
    None,
}

impl Couplings {
    /// Physical couplings, realizing formal ones canonically.
    pub fn physical(&self) -> Result<Option<PhysicalParams>> {
        match self {
            Couplings::Physical(p) => Ok(Some(p.clone())),
            Couplings::Formal { lambda, b, g } => PhysicalParams::canonical(lambda, b, g).map(Some),
            Couplings::None => Ok(None),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub table: Option<u8>,
    pub degree: Option<usize>,
    pub branch: Option<usize>,
    pub k_rows: Option<usize>,
    pub order: usize,
    pub couplings: Couplings,
    pub gauge: Gauge,
    pub format: Format,
    pub precision: usize,
    pub out: Option<PathBuf>,
}

/// Largest N accepted by `tables`.
pub const TABLE_MAX_N: usize = 12;

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let physical_given = cli.a.is_some()
            || cli.b_cpl.is_some()
            || cli.c.is_some()
            || cli.g_cpl.is_some()
            || cli.ell.is_some();
        let formal_given = cli.lambda.is_some() || cli.b.is_some() || cli.g.is_some();
        let couplings = match (physical_given, formal_given) {
            (true, true) => {
                return Err(QesError::InvalidArgument(
                    "give either --A/--B/--C/--G/--ell or --lambda/--b/--g, not both".into(),
                ))
            }
            (true, false) => {
                let a = cli.a.ok_or_else(|| QesError::InvalidArgument("physical mode needs --A".into()))?;
                let zero = Rational::from(0);
                Couplings::Physical(PhysicalParams::new(
                    a,
                    cli.b_cpl.unwrap_or_else(|| zero.clone()),
                    cli.c.unwrap_or_else(|| zero.clone()),
                    cli.g_cpl.unwrap_or(zero),
                    cli.ell.unwrap_or(0),
                ))
            }
            (false, true) => {
                let lambda =
                    cli.lambda.ok_or_else(|| QesError::InvalidArgument("formal mode needs --lambda".into()))?;
                if lambda.signum() < 0 {
                    return Err(QesError::Domain(format!("lambda = {lambda} must be non-negative")));
                }
                Couplings::Formal {
                    lambda,
                    b: cli.b.unwrap_or_else(|| Rational::from(0)),
                    g: cli.g.unwrap_or_else(|| Rational::from(0)),
                }
            }
            (false, false) => Couplings::None,
        };
        let cfg = RunConfig {
            command: cli.command,
            table: cli.which,
            degree: cli.big_n,
            branch: cli.n,
            k_rows: cli.big_k,
            order: cli.order,
            couplings,
            gauge: cli.gauge.into(),
            format: cli.format,
            precision: cli.precision.max(1),
            out: cli.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        use Command::*;
        if matches!(self.command, Roots | Coeffs | Leftvecs | Series | Spectrum | Verify) && self.degree.is_none() {
            let name = format!("{:?}", self.command).to_lowercase();
            return Err(QesError::InvalidArgument(format!("{name} needs --N")));
        }
        if let (Some(n), Some(branch)) = (self.degree, self.branch) {
            if branch > n / 2 {
                return Err(QesError::InvalidArgument(format!(
                    "branch n = {branch} out of range 0..={} for N = {n}",
                    n / 2
                )));
            }
        }
        if self.command == Spectrum && self.couplings == Couplings::None {
            return Err(QesError::InvalidArgument(
                "spectrum needs couplings: --A [--B --C --G --ell] or --lambda [--b --g]".into(),
            ));
        }
        if self.command == Tables {
            match self.table {
                Some(1..=4) => {}
                Some(t) => return Err(QesError::InvalidArgument(format!("unsupported table {t}, expected 1 to 4"))),
                None => return Err(QesError::InvalidArgument("tables needs a table number 1 to 4".into())),
            }
            if self.degree.or(self.k_rows).is_some_and(|n| n > TABLE_MAX_N) {
                return Err(QesError::InvalidArgument(format!("tables support N, K up to {TABLE_MAX_N}")));
            }
        }
        Ok(())
    }

    /// Branch index, defaulting to the top branch `n = 0`.
    pub fn branch_or_default(&self) -> usize {
        self.branch.unwrap_or(0)
    }
}
