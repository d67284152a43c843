//! Iterative solution of the saddle-point system.

mod gmres;
mod ilu;
mod schur;
mod uzawa;

pub use gmres::{gmres_left_pc, GmresOptions, GmresReport};
pub use ilu::{ilu0, IluFactors};
pub use schur::{build_schur, schur_richardson, SchurOperator};
pub use uzawa::{uzawa_solve, PressureGauge, UzawaControls, UzawaState};
