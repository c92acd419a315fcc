//! Tensor products over K and over A, and spaces of A-linear maps.

use std::sync::Arc;

use super::map::GradedMap;
use super::module::{Action, ModuleRep, Quotient, Submodule};
use crate::error::{JetError, Result};
use crate::exactcore::{rank_kernel_image, EchelonBuilder, ExactMatrix, Rational, SparseVec, Subspace};

/// Index bookkeeping for a graded tensor product over K: degree `g` is the direct sum of
/// `L_a ⊗ R_{g-a}`, blocks ordered by `a`, each block left-index-major.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub dims: Vec<usize>,
    offsets: Vec<Vec<usize>>,
}

impl TensorLayout {
    pub fn new(left: &[usize], right: &[usize]) -> Self {
        let n = left.len();
        assert_eq!(n, right.len());
        let mut offsets = Vec::with_capacity(n);
        let mut dims = Vec::with_capacity(n);
        for g in 0..n {
            let mut off = Vec::with_capacity(g + 1);
            let mut acc = 0;
            for a in 0..=g {
                off.push(acc);
                acc += left[a] * right[g - a];
            }
            offsets.push(off);
            dims.push(acc);
        }
        TensorLayout { left: left.to_vec(), right: right.to_vec(), dims, offsets }
    }

    pub fn ndeg(&self) -> usize {
        self.dims.len()
    }

    /// Position of `e_i ⊗ f_j` with `e_i` in left degree `a` and `f_j` in right degree `b`.
    pub fn index(&self, a: usize, i: usize, b: usize, j: usize) -> Option<(usize, usize)> {
        let g = a + b;
        (g < self.ndeg()).then(|| (g, self.offsets[g][a] + i * self.right[b] + j))
    }

    /// Inverse of [`TensorLayout::index`] within degree `g`: `(a, i, j)`.
    pub fn split(&self, g: usize, idx: usize) -> (usize, usize, usize) {
        let a = (0..=g)
            .find(|&a| {
                let lo = self.offsets[g][a];
                idx >= lo && idx < lo + self.left[a] * self.right[g - a]
            })
            .expect("index within degree");
        let r = idx - self.offsets[g][a];
        let w = self.right[g - a];
        (a, r / w, r % w)
    }

    /// `u ⊗ v` for `u` in left degree `a` and `v` in right degree `b`.
    pub fn pure(&self, a: usize, u: &SparseVec, b: usize, v: &SparseVec) -> Option<SparseVec> {
        let g = a + b;
        if g >= self.ndeg() {
            return None;
        }
        let base = self.offsets[g][a];
        let w = self.right[b];
        let mut pairs = Vec::with_capacity(u.nnz() * v.nnz());
        for (i, x) in u.iter() {
            for (j, y) in v.iter() {
                pairs.push((base + i * w + j, x * y));
            }
        }
        Some(SparseVec::from_pairs(pairs))
    }

    /// Extends `l ⊗ id` to the tensor product.
    pub fn act_left(&self, l: &Action) -> Action {
        let s = l.shift;
        let n = self.ndeg();
        let blocks = (0..n)
            .map(|g| {
                if g + s >= n {
                    return None;
                }
                let mut cols = Vec::with_capacity(self.dims[g]);
                for a in 0..=g {
                    let b = g - a;
                    let m = l.blocks[a].as_ref().expect("in-window block");
                    let mcols = m.columns();
                    for i in 0..self.left[a] {
                        for j in 0..self.right[b] {
                            cols.push(self.pure(a + s, &mcols[i], b, &SparseVec::unit(j)).unwrap());
                        }
                    }
                }
                Some(ExactMatrix::from_columns(self.dims[g + s], &cols))
            })
            .collect();
        Action { shift: s, blocks }
    }

    /// Extends `id ⊗ r` to the tensor product.
    pub fn act_right(&self, r: &Action) -> Action {
        let s = r.shift;
        let n = self.ndeg();
        let blocks = (0..n)
            .map(|g| {
                if g + s >= n {
                    return None;
                }
                let mut cols = Vec::with_capacity(self.dims[g]);
                for a in 0..=g {
                    let b = g - a;
                    let m = r.blocks[b].as_ref().expect("in-window block");
                    let mcols = m.columns();
                    for i in 0..self.left[a] {
                        for j in 0..self.right[b] {
                            cols.push(self.pure(a, &SparseVec::unit(i), b + s, &mcols[j]).unwrap());
                        }
                    }
                }
                Some(ExactMatrix::from_columns(self.dims[g + s], &cols))
            })
            .collect();
        Action { shift: s, blocks }
    }
}

/// Which action of which factor a tensor-product action is induced from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    LeftPlus,
    Right,
    RightPlus,
}

/// `L ⊗_K R` with actions induced from the chosen factors.
pub fn tensor_k(l: &ModuleRep, r: &ModuleRep, main: Side, plus: Option<Side>, label: &str) -> (Arc<ModuleRep>, TensorLayout) {
    let layout = TensorLayout::new(l.dims(), r.dims());
    let induced = |side: Side| -> Vec<Action> {
        match side {
            Side::Left => l.gen_actions().iter().map(|a| layout.act_left(a)).collect(),
            Side::LeftPlus => l.plus_actions().expect("plus action").iter().map(|a| layout.act_left(a)).collect(),
            Side::Right => r.gen_actions().iter().map(|a| layout.act_right(a)).collect(),
            Side::RightPlus => r.plus_actions().expect("plus action").iter().map(|a| layout.act_right(a)).collect(),
        }
    };
    let m = ModuleRep::from_tables(l.alg().clone(), label, layout.dims.clone(), induced(main), plus.map(induced));
    (Arc::new(m), layout)
}

/// `P⁺ ⊗_A Q` with the bullet action `a•(p⊗q) = (ap)⊗q`.
#[derive(Clone, Debug)]
pub struct TensorOverA {
    pub module: Arc<ModuleRep>,
    pub over_k: Arc<ModuleRep>,
    pub layout: TensorLayout,
    pub quotient: Quotient,
}

pub fn tensor_over_a(pplus: &ModuleRep, q: &ModuleRep, label: &str) -> Result<TensorOverA> {
    let alg = pplus.alg().clone();
    let plus = pplus
        .plus_actions()
        .ok_or_else(|| JetError::ActionInconsistent(format!("{} carries no plus action", pplus.label())))?;
    let (pq, layout) = tensor_k(pplus, q, Side::Left, None, &format!("{}(x)K{}", pplus.label(), q.label()));
    let n = alg.ndeg();
    let mut builders: Vec<EchelonBuilder> = layout.dims.iter().map(|&d| EchelonBuilder::new(d)).collect();
    for (i, xp) in plus.iter().enumerate() {
        let s = alg.gen_degree(i);
        let xq = q.gen_action(i);
        for a in 0..n {
            for b in 0..n - a {
                if a + b + s >= n {
                    continue;
                }
                let mp = xp.blocks[a].as_ref().unwrap().columns();
                let mq = xq.blocks[b].as_ref().unwrap().columns();
                for ii in 0..pplus.dim(a) {
                    for jj in 0..q.dim(b) {
                        let lhs = layout.pure(a + s, &mp[ii], b, &SparseVec::unit(jj)).unwrap();
                        let rhs = layout.pure(a, &SparseVec::unit(ii), b + s, &mq[jj]).unwrap();
                        builders[a + b + s].insert(&lhs.sub(&rhs));
                    }
                }
            }
        }
    }
    let spaces: Vec<Subspace> = builders.into_iter().map(|b| b.finish()).collect();
    let sub = Submodule::from_spaces(&pq, spaces, false)?;
    let quotient = sub.quotient_data(label, false)?;
    Ok(TensorOverA { module: quotient.module.clone(), over_k: pq, layout, quotient })
}

/// A basis of the A-linear maps `P → Q` raising degree by `shift`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub shift: i64,
    pub basis: Vec<GradedMap>,
    /// Coordinates of `x_i · f_k` in the basis (only when every generator preserves degree).
    pub action: Option<Vec<ExactMatrix>>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

struct Unknowns {
    offsets: Vec<Option<usize>>,
    total: usize,
}

fn unknowns(p: &ModuleRep, q: &ModuleRep, shift: i64) -> Unknowns {
    let mut offsets = Vec::with_capacity(p.ndeg());
    let mut total = 0;
    for g in 0..p.ndeg() {
        let t = g as i64 + shift;
        if t >= 0 && (t as usize) < q.ndeg() {
            offsets.push(Some(total));
            total += p.dim(g) * q.dim(t as usize);
        } else {
            offsets.push(None);
        }
    }
    Unknowns { offsets, total }
}

fn flatten(f: &GradedMap, u: &Unknowns) -> SparseVec {
    let mut pairs = Vec::new();
    for (g, off) in u.offsets.iter().enumerate() {
        let (Some(off), Some(m)) = (off, f.block(g)) else { continue };
        let cols = m.cols();
        for r in 0..m.rows() {
            for (c, v) in m.row(r).iter() {
                pairs.push((off + r * cols + c, v.clone()));
            }
        }
    }
    SparseVec::from_pairs(pairs)
}

fn unflatten(v: &SparseVec, p: &Arc<ModuleRep>, q: &Arc<ModuleRep>, shift: i64, u: &Unknowns) -> Result<GradedMap> {
    let blocks = (0..p.ndeg())
        .map(|g| {
            u.offsets[g].map(|off| {
                let t = (g as i64 + shift) as usize;
                let (rows, cols) = (q.dim(t), p.dim(g));
                let data = (0..rows).map(|r| v.slice(off + r * cols, off + (r + 1) * cols)).collect();
                ExactMatrix::from_rows(cols, data)
            })
        })
        .collect();
    GradedMap::new(p.clone(), q.clone(), shift, blocks)
}

/// A-linear maps `P → Q` of the given degree shift, cut out by `f(x·p) = x·f(p)` for all
/// generators `x` and basis vectors `p` where both sides lie in the window.
pub fn hom_a(p: &Arc<ModuleRep>, q: &Arc<ModuleRep>, shift: i64) -> Result<HomSpace> {
    let alg = p.alg().clone();
    let u = unknowns(p, q, shift);
    let mut rows: Vec<SparseVec> = Vec::new();
    for i in 0..alg.ngens() {
        let s = alg.gen_degree(i);
        let xp = p.gen_action(i);
        let xq = q.gen_action(i);
        for g in 0..p.ndeg() {
            let (Some(off), Some(a)) = (u.offsets[g], xp.blocks[g].as_ref()) else { continue };
            let Some(Some(off2)) = u.offsets.get(g + s).copied() else { continue };
            let t = (g as i64 + shift) as usize;
            let Some(b) = xq.blocks[t].as_ref() else { continue };
            let (pc, pc2, qr2) = (p.dim(g), p.dim(g + s), q.dim(t + s));
            let acols = a.columns();
            for c in 0..pc {
                for r in 0..qr2 {
                    // f_{g+s}(x e_c)[r] - (x f_g(e_c))[r]
                    let mut pairs: Vec<(usize, Rational)> = Vec::new();
                    for (k, v) in acols[c].iter() {
                        pairs.push((off2 + r * pc2 + k, v.clone()));
                    }
                    for (k, v) in b.row(r).iter() {
                        pairs.push((off + k * pc + c, -v));
                    }
                    let row = SparseVec::from_pairs(pairs);
                    if !row.is_zero() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let system = ExactMatrix::from_rows(u.total, rows);
    let (_, ker, _) = rank_kernel_image(&system);
    let basis: Vec<GradedMap> = ker.basis().iter().map(|v| unflatten(v, p, q, shift, &u)).collect::<Result<_>>()?;
    for f in &basis {
        f.check_a_linear()?;
    }
    let action = if (0..alg.ngens()).all(|i| alg.gen_degree(i) == 0) {
        let mut tables = Vec::new();
        for i in 0..alg.ngens() {
            let xq = q.gen_action(i);
            let cols: Vec<SparseVec> = basis
                .iter()
                .map(|f| {
                    let blocks = (0..p.ndeg())
                        .map(|g| {
                            let t = f.target_degree(g)?;
                            Some(xq.blocks[t].as_ref()?.mul(f.block(g)?))
                        })
                        .collect();
                    let xf = GradedMap::new(p.clone(), q.clone(), shift, blocks)?;
                    ker.coords(&flatten(&xf, &u))
                        .ok_or_else(|| JetError::FactorizationFailure("x·f left the Hom space".into()))
                })
                .collect::<Result<_>>()?;
            tables.push(ExactMatrix::from_columns(basis.len(), &cols));
        }
        Some(tables)
    } else {
        None
    };
    Ok(HomSpace { shift, basis, action })
}
