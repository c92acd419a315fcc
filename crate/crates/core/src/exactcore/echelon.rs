//! Fraction-free echelon reduction and canonical subspaces.
//!
//! Rows are kept as primitive integer vectors during elimination; every update
//! `p*v - a*r` is followed by a content division, which keeps coefficients small.
//! The final basis is brought to reduced row echelon form with unit pivots, which
//! is unique for a given row space.

use serde::{Deserialize, Serialize};

use super::{ExactMatrix, Rational, SparseVec};

/// Incremental echelon basis of a growing span.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<u32>>,
}

impl EchelonBuilder {
    pub fn new(ambient: usize) -> Self {
        EchelonBuilder { ambient, rows: Vec::new(), pivot_row: vec![None; ambient] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Reduces `v` against the current rows. The result is zero iff `v` lies in the span;
    /// otherwise it is a primitive integer multiple of a valid new echelon row.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.primitive();
        let mut from = 0u32;
        loop {
            let hit = v
                .entries()
                .iter()
                .find(|(c, _)| *c >= from && self.pivot_row[*c as usize].is_some())
                .map(|(c, a)| (*c, a.clone()));
            let Some((c, a)) = hit else { break };
            let r = &self.rows[self.pivot_row[c as usize].unwrap() as usize];
            let p = r.leading().unwrap().1.clone();
            v = v.lincomb(&p, &-a, r).primitive();
            from = c + 1;
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        if self.is_full() || v.is_zero() {
            return false;
        }
        let r = self.reduce(v);
        match r.leading() {
            None => false,
            Some((c, _)) => {
                self.pivot_row[c] = Some(self.rows.len() as u32);
                self.rows.push(r);
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Canonical reduced echelon basis of the span.
    pub fn finish(self) -> Subspace {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r.leading().unwrap().0);
        let n = rows.len();
        let mut pivot_pos = vec![None; self.ambient];
        for (k, r) in rows.iter().enumerate() {
            pivot_pos[r.leading().unwrap().0] = Some(k);
        }
        let mut done: Vec<Option<SparseVec>> = vec![None; n];
        for k in (0..n).rev() {
            let mut r = rows[k].clone();
            let lead = r.leading().unwrap().0;
            let hits: Vec<(usize, Rational)> = r
                .iter()
                .filter(|(c, _)| *c != lead && pivot_pos[*c].is_some())
                .map(|(c, v)| (pivot_pos[c].unwrap(), v.clone()))
                .collect();
            for (j, coef) in hits {
                r = r.axpy(&-coef, done[j].as_ref().unwrap());
            }
            let inv = r.leading().unwrap().1.recip();
            done[k] = Some(r.scale(&inv));
        }
        let basis: Vec<SparseVec> = done.into_iter().map(|r| r.unwrap()).collect();
        Subspace::from_rref(self.ambient, basis)
    }
}

/// A subspace of `Q^ambient` stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
    pivots: Vec<u32>,
}

impl Subspace {
    fn from_rref(ambient: usize, basis: Vec<SparseVec>) -> Self {
        let pivots = basis.iter().map(|b| b.leading().unwrap().0 as u32).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(SparseVec::unit).collect(), pivots: (0..ambient as u32).collect() }
    }

    pub fn span<'a, I: IntoIterator<Item = &'a SparseVec>>(ambient: usize, vectors: I) -> Self {
        let mut b = EchelonBuilder::new(ambient);
        for v in vectors {
            if b.is_full() {
                break;
            }
            b.insert(v);
        }
        b.finish()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// `v` minus its component along the pivot coordinates; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v.get(p as usize);
            if !c.is_zero() {
                out = out.axpy(&-c, b);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        Some(SparseVec::from_pairs(self.pivots.iter().enumerate().map(|(k, &p)| (k, v.get(p as usize))).collect()))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(self.ambient, self.basis.iter().chain(other.basis.iter()))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // x = sum c_i b_i lies in `other` iff its class modulo `other` vanishes
        let q = QuotientSpace::new(other.clone());
        let images: Vec<SparseVec> = self.basis.iter().map(|b| q.project(b)).collect();
        let m = ExactMatrix::from_columns(q.dim(), &images);
        let (_, ker, _) = rank_kernel_image(&m);
        let vecs: Vec<SparseVec> = ker
            .basis()
            .iter()
            .map(|c| {
                let mut acc = SparseVec::new();
                for (k, v) in c.iter() {
                    acc = acc.axpy(v, &self.basis[k]);
                }
                acc
            })
            .collect();
        Subspace::span(self.ambient, vecs.iter())
    }

    /// Matrix whose columns are the basis vectors (the inclusion map).
    pub fn inclusion(&self) -> ExactMatrix {
        ExactMatrix::from_columns(self.ambient, &self.basis)
    }

    /// Image of the subspace under a linear map.
    pub fn image_under(&self, f: &ExactMatrix) -> Subspace {
        let imgs: Vec<SparseVec> = self.basis.iter().map(|b| f.apply(b)).collect();
        Subspace::span(f.rows(), imgs.iter())
    }
}

/// The quotient `Q^ambient / W` with the canonical complement spanned by the non-pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSpace {
    sub: Subspace,
    free: Vec<u32>,
    index_of: Vec<Option<u32>>,
}

impl QuotientSpace {
    pub fn new(sub: Subspace) -> Self {
        let n = sub.ambient;
        let mut is_pivot = vec![false; n];
        for &p in &sub.pivots {
            is_pivot[p as usize] = true;
        }
        let free: Vec<u32> = (0..n as u32).filter(|&j| !is_pivot[j as usize]).collect();
        let mut index_of = vec![None; n];
        for (k, &j) in free.iter().enumerate() {
            index_of[j as usize] = Some(k as u32);
        }
        QuotientSpace { sub, free, index_of }
    }

    pub fn ambient_dim(&self) -> usize {
        self.sub.ambient
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.sub.reduce(v).reindex(&self.index_of)
    }

    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_pairs(v.iter().map(|(k, x)| (self.free[k] as usize, x.clone())).collect())
    }

    /// `dim x ambient` projection matrix.
    pub fn proj(&self) -> ExactMatrix {
        let cols: Vec<SparseVec> = (0..self.sub.ambient).map(|j| self.project(&SparseVec::unit(j))).collect();
        ExactMatrix::from_columns(self.dim(), &cols)
    }

    /// `ambient x dim` section matrix.
    pub fn section(&self) -> ExactMatrix {
        let cols: Vec<SparseVec> = self.free.iter().map(|&j| SparseVec::unit(j as usize)).collect();
        ExactMatrix::from_columns(self.sub.ambient, &cols)
    }
}

/// Rank, kernel and image of `m`, all canonical.
pub fn rank_kernel_image(m: &ExactMatrix) -> (usize, Subspace, Subspace) {
    let rref = Subspace::span(m.cols(), m.row_vectors().iter());
    let rank = rref.dim();
    let mut is_pivot = vec![false; m.cols()];
    for &p in rref.pivots() {
        is_pivot[p as usize] = true;
    }
    let kernel_vecs: Vec<SparseVec> = (0..m.cols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut pairs = vec![(f, Rational::one())];
            for (b, &p) in rref.basis().iter().zip(rref.pivots()) {
                let c = b.get(f);
                if !c.is_zero() {
                    pairs.push((p as usize, -c));
                }
            }
            SparseVec::from_pairs(pairs)
        })
        .collect();
    let kernel = Subspace::span(m.cols(), kernel_vecs.iter());
    let image = Subspace::span(m.rows(), m.columns().iter());
    debug_assert_eq!(image.dim(), rank);
    (rank, kernel, image)
}

pub fn rank(m: &ExactMatrix) -> usize {
    let (r, c) = (m.rows(), m.cols());
    if r <= c {
        Subspace::span(c, m.row_vectors().iter()).dim()
    } else {
        Subspace::span(r, m.columns().iter()).dim()
    }
}

pub fn kernel(m: &ExactMatrix) -> Subspace {
    rank_kernel_image(m).1
}

pub fn image(m: &ExactMatrix) -> Subspace {
    Subspace::span(m.rows(), m.columns().iter())
}

/// Solves `m * x = b` for every column of `b`; `None` if some column is inconsistent.
/// Free variables are set to zero, so the solution is unique whenever `m` is injective.
pub fn solve(m: &ExactMatrix, b: &ExactMatrix) -> Option<ExactMatrix> {
    assert_eq!(m.rows(), b.rows());
    let n = m.cols();
    let aug = m.hstack(b);
    let r = Subspace::span(aug.cols(), aug.row_vectors().iter());
    if r.pivots().iter().any(|&p| p as usize >= n) {
        return None;
    }
    let mut out_rows: Vec<SparseVec> = vec![SparseVec::new(); n];
    for (row, &p) in r.basis().iter().zip(r.pivots()) {
        out_rows[p as usize] = row.slice(n, aug.cols());
    }
    Some(ExactMatrix::from_rows(b.cols(), out_rows))
}
