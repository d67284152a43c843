use alloc::vec;
use alloc::vec::Vec;

use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// ILU(0) factors stored in one matrix with the pattern of `A`: the strict
/// lower part holds `L` (unit diagonal implied), the rest holds `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct IluFactors {
    pub lu: CsrMatrix,
    diag: Vec<usize>,
}

pub fn ilu0(a: &CsrMatrix) -> Result<IluFactors> {
    if a.nrows != a.ncols {
        return Err(Error::Shape { what: "ilu0 matrix columns", expected: a.nrows, found: a.ncols });
    }
    let n = a.nrows;
    let mut lu = a.clone();
    let mut diag = vec![usize::MAX; n];
    for (i, d) in diag.iter_mut().enumerate() {
        *d = lu.find(i, i).ok_or(Error::ZeroPivot { row: i })?;
    }
    let mut marker = vec![usize::MAX; n];
    for i in 0..n {
        let (start, end) = (lu.row_ptr[i], lu.row_ptr[i + 1]);
        for k in start..end {
            marker[lu.col_idx[k]] = k;
        }
        for kk in start..end {
            let k = lu.col_idx[kk];
            if k >= i {
                break;
            }
            let pivot = lu.values[diag[k]];
            if pivot == 0.0 {
                return Err(Error::ZeroPivot { row: k });
            }
            let lik = lu.values[kk] / pivot;
            lu.values[kk] = lik;
            for kj in diag[k] + 1..lu.row_ptr[k + 1] {
                let pos = marker[lu.col_idx[kj]];
                if pos != usize::MAX {
                    lu.values[pos] -= lik * lu.values[kj];
                }
            }
        }
        for k in start..end {
            marker[lu.col_idx[k]] = usize::MAX;
        }
        if lu.values[diag[i]] == 0.0 || !lu.values[diag[i]].is_finite() {
            return Err(Error::ZeroPivot { row: i });
        }
    }
    Ok(IluFactors { lu, diag })
}

impl IluFactors {
    /// Solves `L U x = r` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let m = &self.lu;
        for i in 0..m.nrows {
            let mut s = x[i];
            for k in m.row_ptr[i]..self.diag[i] {
                s -= m.values[k] * x[m.col_idx[k]];
            }
            x[i] = s;
        }
        for i in (0..m.nrows).rev() {
            let mut s = x[i];
            for k in self.diag[i] + 1..m.row_ptr[i + 1] {
                s -= m.values[k] * x[m.col_idx[k]];
            }
            x[i] = s / m.values[self.diag[i]];
        }
    }

    pub fn solve(&self, r: &[f64]) -> Vec<f64> {
        let mut x = r.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Dense `L` with its unit diagonal.
    pub fn lower_dense(&self) -> Vec<Vec<f64>> {
        let mut d = self.lu.to_dense();
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if j > i {
                    *v = 0.0;
                } else if j == i {
                    *v = 1.0;
                }
            }
        }
        d
    }

    pub fn upper_dense(&self) -> Vec<Vec<f64>> {
        let mut d = self.lu.to_dense();
        for (i, row) in d.iter_mut().enumerate() {
            for v in row.iter_mut().take(i) {
                *v = 0.0;
            }
        }
        d
    }
}
