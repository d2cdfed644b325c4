//! Independent numeric checks of the exact machinery.

pub mod convergence;
pub mod cubic;
pub mod newton;
pub mod ode;
pub mod real;

pub use convergence::{convergence_report, ConvergenceReport};
pub use cubic::{cubic_oracle_n1, cubic_series_n1};
pub use newton::{newton_full, NewtonOptions, NewtonSolution};
pub use ode::{log_grid, ode_residual, solve_physical, OdeResidual, PhysicalSolution, RealAnsatz};
