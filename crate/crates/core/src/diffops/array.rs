//! Spaces of multi-argument operators `Δ(x)(a_1)…(a_m) ∈ Q`, stored as flat coordinate
//! vectors over the basis tuples of `X ⊗ A^{⊗m}`.
//!
//! Slot 0 takes values in `X`, slots `1..=m` in `A`. The order condition in slot `i < m`
//! is measured against the plus structure of the next slot,
//! `(δ_c Δ)(…, x_i, x_{i+1}, …) = Δ(…, c x_i, x_{i+1}, …) − Δ(…, x_i, c x_{i+1}, …)`,
//! and in the last slot against the action on `Q`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::algebra::{AlgebraRep, ModuleRep};
use crate::error::{JetError, Result};
use crate::exactcore::{kernel, ExactMatrix, Rational, SparseVec, Subspace};

/// Which algebra elements the order conditions are tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VerificationSet {
    /// Generators for graded presentations, every basis element otherwise.
    #[default]
    Auto,
    Generators,
    Basis,
}

impl VerificationSet {
    pub fn elements(self, alg: &AlgebraRep) -> Vec<usize> {
        let gens = || (0..alg.ngens()).map(|i| alg.gen_basis(i)).collect();
        let basis = || (0..alg.total_dim()).filter(|&b| b != alg.unit()).collect();
        match self {
            VerificationSet::Generators => gens(),
            VerificationSet::Basis => basis(),
            VerificationSet::Auto if alg.is_graded() => gens(),
            VerificationSet::Auto => basis(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ArraySpec {
    pub source: Arc<ModuleRep>,
    pub target: Arc<ModuleRep>,
    /// Number of algebra slots after slot 0.
    pub slots: usize,
    /// Order bound per slot (`slots + 1` entries).
    pub orders: Vec<usize>,
    /// Whether the array must vanish when a slot is `1` (slot 0 only when `X = A`).
    pub vanish: Vec<bool>,
    pub shift: i64,
    pub set: VerificationSet,
}

/// A basis tuple `(x, a_1, …, a_m)` with `x` a global basis index of `X` and the `a_i`
/// global basis indices of `A`.
pub type Tuple = Vec<u32>;

/// Linear combination of `c · Δ(t)`, keyed by the algebra basis element `c` acting on `Q`.
type Expr = BTreeMap<(u32, Tuple), Rational>;

#[derive(Debug)]
pub struct ArraySpace {
    pub spec: ArraySpec,
    pub tuples: Vec<Tuple>,
    /// Grade of each tuple.
    pub grades: Vec<usize>,
    /// Offset of each tuple's block of `dim Q_{grade+shift}` coordinates.
    pub offsets: Vec<usize>,
    index: HashMap<Tuple, usize>,
    pub space: Subspace,
    x_offsets: Vec<usize>,
}

impl ArraySpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn ambient(&self) -> usize {
        self.space.ambient_dim()
    }

    pub fn basis(&self) -> &[SparseVec] {
        self.space.basis()
    }

    pub fn tuple_index(&self, t: &[u32]) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// `(grade, local index)` of a global basis index of `X`.
    pub fn locate_x(&self, x: u32) -> (usize, usize) {
        let x = x as usize;
        let g = self.x_offsets.partition_point(|&o| o <= x) - 1;
        (g, x - self.x_offsets[g])
    }

    pub fn global_x(&self, g: usize, i: usize) -> u32 {
        (self.x_offsets[g] + i) as u32
    }

    /// `Δ(t)` as a vector of `Q` in degree `grade(t) + shift`.
    pub fn eval(&self, v: &SparseVec, t: usize) -> SparseVec {
        let lo = self.offsets[t];
        let hi = lo + self.spec.target.dim(self.target_grade(t));
        v.slice(lo, hi)
    }

    pub fn target_grade(&self, t: usize) -> usize {
        (self.grades[t] as i64 + self.spec.shift) as usize
    }

    /// Flattens the array given by `f(tuple index)`; `None` if any value is unavailable.
    pub fn flatten(&self, mut f: impl FnMut(usize) -> Option<SparseVec>) -> Option<SparseVec> {
        let mut pairs = Vec::new();
        for t in 0..self.tuples.len() {
            let v = f(t)?;
            pairs.extend(v.iter().map(|(i, c)| (self.offsets[t] + i, c.clone())));
        }
        Some(SparseVec::from_pairs(pairs))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.space.contains(v)
    }
}

fn x_offsets(x: &ModuleRep) -> Vec<usize> {
    let mut out = Vec::with_capacity(x.ndeg() + 1);
    let mut acc = 0;
    for g in 0..x.ndeg() {
        out.push(acc);
        acc += x.dim(g);
    }
    out.push(acc);
    out
}

struct Ctx<'a> {
    alg: &'a AlgebraRep,
    x: &'a ModuleRep,
    xoff: &'a [usize],
    last: usize,
}

impl Ctx<'_> {
    fn x_locate(&self, x: u32) -> (usize, usize) {
        let x = x as usize;
        let g = self.xoff.partition_point(|&o| o <= x) - 1;
        (g, x - self.xoff[g])
    }

    /// `c · e`, where `e` is a basis element of slot `i`, as global indices.
    fn mul_slot(&self, i: usize, c: usize, e: u32) -> Option<Vec<(u32, Rational)>> {
        if i == 0 {
            let (g, k) = self.x_locate(e);
            let d = self.alg.degree_of(c);
            let v = self.x.act(c, g, &SparseVec::unit(k))?;
            Some(v.iter().map(|(j, r)| ((self.xoff[g + d] + j) as u32, r.clone())).collect())
        } else {
            self.mul_alg(c, e as usize)
        }
    }

    fn mul_alg(&self, c: usize, e: usize) -> Option<Vec<(u32, Rational)>> {
        let d = self.alg.degree_of(c) + self.alg.degree_of(e);
        let v = self.alg.mul_basis(c, e)?;
        Some(v.iter().map(|(j, r)| (self.alg.global(d, j) as u32, r.clone())).collect())
    }

    fn delta(&self, expr: &Expr, slot: usize, c: usize) -> Option<Expr> {
        let mut out = Expr::new();
        let mut push = |k: (u32, Tuple), r: Rational| {
            *out.entry(k).or_insert_with(Rational::zero) += &r;
        };
        for ((q, t), coef) in expr {
            for (e, r) in self.mul_slot(slot, c, t[slot])? {
                let mut t2 = t.clone();
                t2[slot] = e;
                push((*q, t2), coef * &r);
            }
            if slot < self.last {
                for (e, r) in self.mul_alg(c, t[slot + 1] as usize)? {
                    let mut t2 = t.clone();
                    t2[slot + 1] = e;
                    push((*q, t2), -(coef * &r));
                }
            } else {
                for (e, r) in self.mul_alg(c, *q as usize)? {
                    push((e, t.clone()), -(coef * &r));
                }
            }
        }
        out.retain(|_, r| !r.is_zero());
        Some(out)
    }
}

/// Nondecreasing sequences of length `len` over `0..n`.
fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s: Vec<usize>| {
                let lo = s.last().copied().unwrap_or(0);
                (lo..n).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Solves for all arrays satisfying the order and vanishing conditions of `spec`.
pub fn array_space(spec: ArraySpec) -> Result<ArraySpace> {
    let x = spec.source.clone();
    let q = spec.target.clone();
    let alg = x.alg().clone();
    if spec.orders.len() != spec.slots + 1 || spec.vanish.len() != spec.slots + 1 {
        return Err(JetError::DimensionMismatch("one order and one vanishing flag per slot".into()));
    }
    if spec.vanish[0] && x.dims() != alg.dims().as_slice() {
        return Err(JetError::ValidationError("vanishing at 1 in slot 0 needs X = A".into()));
    }
    let xoff = x_offsets(&x);
    let top = alg.ndeg();

    // enumerate tuples by grade
    let mut tuples: Vec<Tuple> = Vec::new();
    let mut grades = Vec::new();
    let mut partial: Vec<(Tuple, usize)> = (0..x.ndeg())
        .flat_map(|g| (0..x.dim(g)).map(move |i| (g, i)))
        .map(|(g, i)| (vec![(xoff[g] + i) as u32], g))
        .collect();
    let alg_ref: &AlgebraRep = &alg;
    for _ in 0..spec.slots {
        partial = partial
            .into_iter()
            .flat_map(|(t, g)| {
                (0..alg_ref.total_dim()).filter_map(move |b| {
                    let g2 = g + alg_ref.degree_of(b);
                    (g2 < top).then(|| {
                        let mut t2 = t.clone();
                        t2.push(b as u32);
                        (t2, g2)
                    })
                })
            })
            .collect();
    }
    for (t, g) in partial {
        let tg = g as i64 + spec.shift;
        if tg >= 0 && (tg as usize) < q.ndeg() {
            tuples.push(t);
            grades.push(g);
        }
    }
    let mut offsets = Vec::with_capacity(tuples.len());
    let mut acc = 0;
    for &g in &grades {
        offsets.push(acc);
        acc += q.dim((g as i64 + spec.shift) as usize);
    }
    let ambient = acc;
    let index: HashMap<Tuple, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();

    let ctx = Ctx { alg: &alg, x: &x, xoff: &xoff, last: spec.slots };
    let set = spec.set.elements(&alg);
    let mut rows: Vec<SparseVec> = Vec::new();

    // vanishing at 1
    for (ti, t) in tuples.iter().enumerate() {
        let hit = (0..=spec.slots).any(|i| spec.vanish[i] && t[i] == alg.unit() as u32);
        if hit {
            let d = q.dim((grades[ti] as i64 + spec.shift) as usize);
            rows.extend((0..d).map(|r| SparseVec::unit(offsets[ti] + r)));
        }
    }

    // order conditions
    for slot in 0..=spec.slots {
        for cs in multisets(set.len(), spec.orders[slot] + 1) {
            for t in &tuples {
                let mut expr: Expr = BTreeMap::new();
                expr.insert((alg.unit() as u32, t.clone()), Rational::one());
                let mut ok = true;
                for &c in &cs {
                    match ctx.delta(&expr, slot, set[c]) {
                        Some(e) => expr = e,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    if let Some(mut eqs) = equations(&expr, &index, &offsets, &grades, &q, &alg, spec.shift) {
                        rows.append(&mut eqs);
                    }
                }
            }
        }
    }
    let m = ExactMatrix::from_rows(ambient, rows);
    let space = kernel(&m);
    Ok(ArraySpace { spec, tuples, grades, offsets, index, space, x_offsets: xoff })
}

/// Rows expressing `Σ coef · c·Δ(t) = 0`; `None` if some term leaves the window.
fn equations(
    expr: &Expr,
    index: &HashMap<Tuple, usize>,
    offsets: &[usize],
    grades: &[usize],
    q: &ModuleRep,
    alg: &AlgebraRep,
    shift: i64,
) -> Option<Vec<SparseVec>> {
    let mut out_grade = None;
    let mut acc: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for ((c, t), coef) in expr {
        let ti = *index.get(t)?;
        let src = (grades[ti] as i64 + shift) as usize;
        let block = q.action_block(*c as usize, src)?;
        out_grade.get_or_insert(src + alg.degree_of(*c as usize));
        for (o, row) in block.row_vectors().iter().enumerate() {
            let e = acc.entry(o).or_default();
            e.extend(row.iter().map(|(r, x)| (offsets[ti] + r, coef * x)));
        }
    }
    Some(acc.into_values().map(SparseVec::from_pairs).filter(|v| !v.is_zero()).collect())
}
