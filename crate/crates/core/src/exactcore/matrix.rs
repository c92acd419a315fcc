//! Sparse exact matrices, row-major. A matrix with `rows x cols` maps column
//! vectors of length `cols` to column vectors of length `rows`.

use serde::{Deserialize, Serialize};

use super::{Rational, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        ExactMatrix { rows: n, cols: n, data: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| r.max_index().is_none_or(|m| m < cols)));
        ExactMatrix { rows: data.len(), cols, data }
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut buckets: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); rows];
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter() {
                buckets[i].push((j as u32, v.clone()));
            }
        }
        ExactMatrix { rows, cols: columns.len(), data: buckets.into_iter().map(SparseVec::from_sorted).collect() }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        ExactMatrix { rows: rows.len(), cols, data: rows.iter().map(|r| SparseVec::from_dense(r)).collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
        let mut m = Self::from_dense(&dense);
        if rows.is_empty() {
            m.cols = 0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i].get(j)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut buckets: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r.iter() {
                buckets[j].push((i as u32, v.clone()));
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, data: buckets.into_iter().map(SparseVec::from_sorted).collect() }
    }

    /// Columns as sparse vectors.
    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn column(&self, j: usize) -> SparseVec {
        let pairs: Vec<(u32, Rational)> = self
            .data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let v = r.get(j);
                (!v.is_zero()).then_some((i as u32, v))
            })
            .collect();
        SparseVec::from_sorted(pairs)
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        debug_assert!(v.max_index().is_none_or(|m| m < self.cols));
        let pairs: Vec<(u32, Rational)> = self
            .data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let x = r.dot(v);
                (!x.is_zero()).then_some((i as u32, x))
            })
            .collect();
        SparseVec::from_sorted(pairs)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut pairs: Vec<(usize, Rational)> = Vec::new();
                for (k, a) in r.iter() {
                    for (j, b) in other.data[k].iter() {
                        pairs.push((j, a * b));
                    }
                }
                SparseVec::from_pairs(pairs)
            })
            .collect();
        ExactMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum dimension mismatch");
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference dimension mismatch");
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|r| r.scale(c)).collect() }
    }

    pub fn neg(&self) -> ExactMatrix {
        self.scale(&-Rational::one())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        ExactMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, other.rows);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(&b.offset(self.cols))).collect();
        ExactMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// Sub-matrix of the given row and column ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> ExactMatrix {
        let data = self.data[rows.clone()].iter().map(|r| r.slice(cols.start, cols.end)).collect();
        ExactMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Keeps the listed rows (in the given order).
    pub fn select_rows(&self, idx: &[usize]) -> ExactMatrix {
        ExactMatrix { rows: idx.len(), cols: self.cols, data: idx.iter().map(|&i| self.data[i].clone()).collect() }
    }

    /// Keeps the listed columns (in the given order).
    pub fn select_cols(&self, idx: &[usize]) -> ExactMatrix {
        let mut map = vec![None; self.cols];
        for (new, &old) in idx.iter().enumerate() {
            map[old] = Some(new as u32);
        }
        ExactMatrix { rows: self.rows, cols: idx.len(), data: self.data.iter().map(|r| r.reindex(&map)).collect() }
    }

    /// First nonzero entry `(row, col)`, used as a failure witness.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.data.iter().enumerate().find_map(|(i, r)| r.leading().map(|(j, _)| (i, j)))
    }
}
