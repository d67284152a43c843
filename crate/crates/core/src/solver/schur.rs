use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{self, Discretization};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Weighted pressure mass matrix scaled by `1/mu` and its row-sum lumping.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurOperator {
    pub s0: CsrMatrix,
    pub lumped: Vec<f64>,
}

impl SchurOperator {
    pub fn from_matrix(s0: CsrMatrix) -> Result<Self> {
        let lumped: Vec<f64> = (0..s0.nrows).map(|i| s0.row(i).1.iter().sum()).collect();
        if let Some(i) = lumped.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::Assembly(alloc::format!("nonpositive lumped Schur entry at row {i}")));
        }
        Ok(SchurOperator { s0, lumped })
    }
}

pub fn build_schur(d: &Discretization) -> Result<SchurOperator> {
    SchurOperator::from_matrix(assembly::assemble_pressure_mass(d)?)
}

/// `steps` sweeps of `e <- e + S~^-1 (dtilde - S0 e)` from `e = 0`.
pub fn schur_richardson(op: &SchurOperator, dtilde: &[f64], steps: usize) -> Vec<f64> {
    let n = dtilde.len();
    let mut e = vec![0.0; n];
    let mut se = vec![0.0; n];
    for _ in 0..steps {
        op.s0.spmv(&e, &mut se);
        for i in 0..n {
            e[i] += (dtilde[i] - se[i]) / op.lumped[i];
        }
    }
    e
}
