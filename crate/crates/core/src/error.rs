use thiserror::Error;

/// Errors raised by the exact solver and its numeric oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QesError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("result leaves the half-Eisenstein lattice: ({p} + {q}·√3 i)/2 is not representable")]
    OffLattice { p: String, q: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("(s, t) = ({s}, {t}) is not a root for N = {degree}: trailing consistency rows do not vanish")]
    NotARoot { degree: usize, s: String, t: String },

    #[error("left kernel of Q0 has dimension {found}, expected {expected}")]
    RankAnomaly { expected: usize, found: usize },

    #[error("degenerate overlap: <v{which}|J u0> vanishes, the 2x2 inversion is singular")]
    DegenerateOverlap { which: char },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("root set incomplete for N = {degree}: {count} root(s) off the lattice scan, approx {approx:?}")]
    RootSetIncomplete { degree: usize, count: usize, approx: Vec<(f64, f64)> },

    #[error("singular Jacobian at Newton iteration {iteration}")]
    SingularJacobian { iteration: usize },
}

impl QesError {
    /// Short machine-readable tag used in error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            QesError::DivisionByZero => "division_by_zero",
            QesError::OffLattice { .. } => "off_lattice",
            QesError::Domain(_) => "domain",
            QesError::InvalidArgument(_) => "invalid_argument",
            QesError::NotARoot { .. } => "not_a_root",
            QesError::RankAnomaly { .. } => "rank_anomaly",
            QesError::DegenerateOverlap { .. } => "degenerate_overlap",
            QesError::Inconsistent(_) => "internal_inconsistency",
            QesError::RootSetIncomplete { .. } => "root_set_incomplete",
            QesError::SingularJacobian { .. } => "singular_jacobian",
        }
    }
}

pub type Result<T> = std::result::Result<T, QesError>;
