use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("cannot triangulate with step {h}: {reason}")]
    Refinement { h: f64, reason: String },

    #[error("mesh does not conform to the domain: {0}")]
    Consistency(String),

    #[error("negative power of the weight evaluated at the corner vertex")]
    SingularEvaluation,

    #[error("point ({x}, {y}) lies outside element {element}")]
    OutsideElement { element: usize, x: f64, y: f64 },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("zero pivot in row {row} of the incomplete factorization")]
    ZeroPivot { row: usize },

    #[error("GMRES stagnated in restart {restart} at relative residual {residual:e}")]
    Stagnation { restart: usize, residual: f64 },

    #[error("GMRES residual increased inside a restart cycle ({previous:e} -> {current:e})")]
    NonMonotoneResidual { previous: f64, current: f64 },

    #[error("Uzawa iteration diverged after {} outer steps", history.len())]
    Divergence { history: Vec<f64> },

    #[error("Picard iteration stopped making progress at step {k} (relative update {update:e})")]
    PicardStalled { k: usize, update: f64 },

    #[error("Picard step {k}: {source}")]
    PicardStep { k: usize, source: Box<Error> },

    #[error("no sign change of the characteristic equation found for angle {omega}")]
    RootBracketing { omega: f64 },

    #[error("assembly error: {0}")]
    Assembly(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
