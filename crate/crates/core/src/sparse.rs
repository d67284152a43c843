//! Compressed sparse row matrices with a fixed pattern.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    /// Sorted and unique within each row.
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

/// Collects the nonzero positions row by row before any value is stored.
#[derive(Debug, Clone)]
pub struct PatternBuilder {
    ncols: usize,
    rows: Vec<Vec<usize>>,
}

impl PatternBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        PatternBuilder { ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn add(&mut self, i: usize, j: usize) {
        debug_assert!(j < self.ncols);
        self.rows[i].push(j);
    }

    /// All pairs of `rows` x `cols`.
    pub fn add_block(&mut self, rows: &[usize], cols: &[usize]) {
        for &i in rows {
            self.rows[i].extend_from_slice(cols);
        }
    }

    pub fn build(self) -> CsrMatrix {
        let nrows = self.rows.len();
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for mut r in self.rows {
            r.sort_unstable();
            r.dedup();
            col_idx.extend_from_slice(&r);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        CsrMatrix { nrows, ncols: self.ncols, row_ptr, col_idx, values: vec![0.0; nnz] }
    }
}

impl CsrMatrix {
    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut b = PatternBuilder::new(nrows, ncols);
        for &(i, j, _) in triplets {
            b.add(i, j);
        }
        let mut m = b.build();
        for &(i, j, v) in triplets {
            m.add_to(i, j, v).expect("entry is in the pattern");
        }
        m
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut t = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(rows.len(), ncols, &t)
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        Self::from_triplets(n, n, &t)
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Position of entry `(i, j)` in `values`, if it is in the pattern.
    #[inline]
    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_ptr[i];
        self.col_idx[start..self.row_ptr[i + 1]].binary_search(&j).ok().map(|k| start + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.find(i, j).map_or(0.0, |k| self.values[k])
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        match self.find(i, j) {
            Some(k) => {
                self.values[k] += v;
                Ok(())
            }
            None => Err(Error::Assembly(alloc::format!("entry ({i}, {j}) outside the sparsity pattern"))),
        }
    }

    /// `y = A x`.
    pub fn spmv(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yi = s;
        }
    }

    /// `y += alpha A x`.
    pub fn spmv_add(&self, alpha: f64, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yi += alpha * s;
        }
    }

    /// `y = A^T x`.
    pub fn spmv_transpose(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.nrows);
        debug_assert_eq!(y.len(), self.ncols);
        y.iter_mut().for_each(|v| *v = 0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.col_idx[k]] += self.values[k] * xi;
            }
        }
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                col_idx[next[j]] = i;
                values[next[j]] = self.values[k];
                next[j] += 1;
            }
        }
        CsrMatrix { nrows: self.ncols, ncols: self.nrows, row_ptr, col_idx, values }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (i, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                row[j] = v;
            }
        }
        d
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// `y += alpha x`.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> CsrMatrix {
        CsrMatrix::from_dense(&[vec![4.0, 0.0, 1.0], vec![0.0, 3.0, 0.0], vec![2.0, 0.0, 5.0], vec![0.0, 7.0, 0.0]])
    }

    #[test]
    fn products() {
        let a = sample();
        assert_eq!(a.nnz(), 6);
        let mut y = vec![0.0; 4];
        a.spmv(&[1.0, 2.0, 3.0], &mut y);
        assert_eq!(y, vec![7.0, 6.0, 17.0, 14.0]);
        let mut z = vec![0.0; 3];
        a.spmv_transpose(&[1.0, 1.0, 1.0, 1.0], &mut z);
        assert_eq!(z, vec![6.0, 10.0, 6.0]);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().to_dense()[1], vec![0.0, 3.0, 0.0, 7.0]);
    }

    #[test]
    fn pattern_rejects_foreign_entries() {
        let mut a = sample();
        assert!(a.add_to(1, 0, 1.0).is_err());
        a.add_to(1, 1, 1.0).unwrap();
        assert_eq!(a.get(1, 1), 4.0);
        assert_eq!(a.get(1, 0), 0.0);
    }

    #[test]
    fn duplicates_accumulate() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 0, -1.0)]);
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.get(0, 0), 3.0);
    }

    proptest! {
        #[test]
        fn transpose_product_is_adjoint(
            entries in proptest::collection::vec((0usize..6, 0usize..5, -1.0f64..1.0), 0..30),
            x in proptest::collection::vec(-1.0f64..1.0, 5),
            y in proptest::collection::vec(-1.0f64..1.0, 6),
        ) {
            let a = CsrMatrix::from_triplets(6, 5, &entries);
            let mut ax = vec![0.0; 6];
            a.spmv(&x, &mut ax);
            let mut aty = vec![0.0; 5];
            a.spmv_transpose(&y, &mut aty);
            prop_assert!((dot(&ax, &y) - dot(&x, &aty)).abs() < 1e-12);
            let mut at_y2 = vec![0.0; 5];
            a.transpose().spmv(&y, &mut at_y2);
            for (p, q) in aty.iter().zip(&at_y2) {
                prop_assert!((p - q).abs() < 1e-12);
            }
        }
    }
}
