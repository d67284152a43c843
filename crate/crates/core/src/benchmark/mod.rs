//! Singular benchmark solutions, error measures and the convergence study.

pub mod exact;
pub mod norms;
pub mod preflight;
pub mod reference;
pub mod study;

pub use exact::{exact_solution, exact_velocity, manufactured_f, solve_lambda, BenchmarkCase, ExactPoint};
pub use norms::{node_error_fractions, weighted_h1_error};
pub use preflight::{preflight, PreflightCheck};
pub use study::{run_convergence_study, CellReport, StudyConfig, StudyReport};
