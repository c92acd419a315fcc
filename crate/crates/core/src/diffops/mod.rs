//! Differential operators between modules: the `δ_a` calculus, order certification,
//! the spaces `Diff_k(P, Q)` and `D_σ(Q)`, gluing and the splitting `Diff_k = D_(k) ⊕ Id`.

pub mod array;

use std::sync::Arc;

use crate::algebra::{hom_a, AlgebraRep, ModuleRep};
use crate::derham::{derham, tower_word};
use crate::error::{JetError, Result};
use crate::exactcore::{rank, ExactMatrix, SparseVec};
use crate::holonomy::hol_tower;
use crate::jets::{algebra_module, jet_module};
pub use crate::algebra::GradedMap;
pub use array::{array_space, ArraySpace, ArraySpec, Tuple, VerificationSet};

/// Matrix of the action of a homogeneous element `(d, a)` from degree `g` of `m`.
fn elem_block(m: &ModuleRep, d: usize, a: &SparseVec, g: usize) -> Option<ExactMatrix> {
    if g + d >= m.ndeg() {
        return None;
    }
    let alg = m.alg();
    let mut acc = ExactMatrix::zero(m.dim(g + d), m.dim(g));
    for (k, c) in a.iter() {
        acc = acc.add(&m.action_block(alg.global(d, k), g)?.scale(c));
    }
    Some(acc)
}

/// `δ_a Φ: p ↦ Φ(a p) − a Φ(p)` for a homogeneous algebra element `a = (d, local vector)`.
pub fn delta_action(a: (usize, &SparseVec), phi: &GradedMap) -> Result<GradedMap> {
    let (d, av) = a;
    let alg = phi.source.alg();
    if d > alg.top() {
        return Err(JetError::TruncationTooSmall(format!("element of degree {d} lies beyond the window {}", alg.top())));
    }
    let p = &phi.source;
    let q = &phi.target;
    let shift = phi.shift + d as i64;
    let blocks = (0..p.ndeg())
        .map(|g| {
            let t = g as i64 + shift;
            if t < 0 || t as usize >= q.ndeg() {
                return None;
            }
            let first = phi.block(g + d)?.mul(&elem_block(p, d, av, g)?);
            let second = elem_block(q, d, av, phi.target_degree(g)?)?.mul(phi.block(g)?);
            Some(first.sub(&second))
        })
        .collect();
    let mut out = GradedMap::new(p.clone(), q.clone(), shift, blocks)?;
    out.certified_order = phi.certified_order.map(|k| k.saturating_sub(1));
    Ok(out)
}

fn vanishes(m: &GradedMap) -> bool {
    m.blocks.iter().flatten().all(|b| b.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    AtMost(usize),
    ExceedsMax,
}

/// The smallest `k ≤ max_k` such that every `(k+1)`-fold `δ` composite over the verification
/// set vanishes on the window.
pub fn diff_order(phi: &GradedMap, max_k: usize, set: VerificationSet) -> Result<Order> {
    let alg = phi.source.alg().clone();
    let elems = set.elements(&alg);
    let mut frontier: Vec<(usize, GradedMap)> = vec![(0, phi.clone())];
    for k in 0..=max_k {
        let mut next = Vec::new();
        for (lo, m) in &frontier {
            for (ci, &c) in elems.iter().enumerate().skip(*lo) {
                let (d, i) = alg.locate(c);
                let dm = delta_action((d, &SparseVec::unit(i)), m)?;
                if !vanishes(&dm) {
                    next.push((ci, dm));
                }
            }
        }
        if next.is_empty() {
            return Ok(Order::AtMost(k));
        }
        frontier = next;
    }
    Ok(Order::ExceedsMax)
}

/// `phi` with its order certificate, or a [`JetError::CertificationFailure`] if the order
/// exceeds `k`.
pub fn certify(phi: &GradedMap, k: usize, set: VerificationSet) -> Result<GradedMap> {
    match diff_order(phi, k, set)? {
        Order::AtMost(o) => Ok(phi.clone().with_order(o)),
        Order::ExceedsMax => Err(JetError::CertificationFailure(format!(
            "operator {} -> {} has order above {k}",
            phi.source.label(),
            phi.target.label()
        ))),
    }
}

/// `Diff_k(P, Q)` in a fixed shift, with its module structures when the algebra is
/// finite-dimensional.
#[derive(Debug)]
pub struct DiffSpace {
    pub p: Arc<ModuleRep>,
    pub q: Arc<ModuleRep>,
    pub order: usize,
    pub shift: i64,
    pub array: ArraySpace,
    pub basis: Vec<GradedMap>,
    /// `(aΔ)(p) = aΔ(p)`, one coordinate matrix per generator.
    pub left: Option<Vec<ExactMatrix>>,
    /// `(a⁺Δ)(p) = Δ(ap)`.
    pub right: Option<Vec<ExactMatrix>>,
    /// `(a•Δ)(p) = a⁺Δ(p)` through the plus action of `Q`, when present.
    pub bullet: Option<Vec<ExactMatrix>>,
}

/// The single-slot array of a map `P → Q`.
pub fn flatten_map(space: &ArraySpace, phi: &GradedMap) -> Option<SparseVec> {
    space.flatten(|t| {
        let (g, i) = space.locate_x(space.tuples[t][0]);
        phi.apply(g, &SparseVec::unit(i))
    })
}

/// The map `P → Q` of a single-slot array.
pub fn map_of(space: &ArraySpace, v: &SparseVec) -> Result<GradedMap> {
    let p = &space.spec.source;
    GradedMap::from_fn(p.clone(), space.spec.target.clone(), space.spec.shift, |g, i| {
        space.tuple_index(&[space.global_x(g, i)]).map(|t| space.eval(v, t))
    })
}

fn action_table(space: &ArraySpace, basis: &[GradedMap], act: impl Fn(&GradedMap) -> Option<GradedMap>) -> Option<ExactMatrix> {
    let cols: Option<Vec<SparseVec>> =
        basis.iter().map(|b| act(b).and_then(|m| flatten_map(space, &m)).and_then(|v| space.space.coords(&v))).collect();
    Some(ExactMatrix::from_columns(basis.len(), &cols?))
}

pub fn diff_space(p: &Arc<ModuleRep>, q: &Arc<ModuleRep>, k: usize, shift: i64, set: VerificationSet) -> Result<DiffSpace> {
    let alg = p.alg().clone();
    let array = array_space(ArraySpec {
        source: p.clone(),
        target: q.clone(),
        slots: 0,
        orders: vec![k],
        vanish: vec![false],
        shift,
        set,
    })?;
    let basis: Vec<GradedMap> = array.basis().iter().map(|v| map_of(&array, v)).collect::<Result<_>>()?;
    let (mut left, mut right, mut bullet) = (None, None, None);
    if !alg.is_graded() {
        let mut l = Vec::new();
        let mut r = Vec::new();
        let mut b = Vec::new();
        for i in 0..alg.ngens() {
            let x = alg.gen_basis(i);
            let on_q = GradedMap::from_fn(q.clone(), q.clone(), 0, |g, j| q.act(x, g, &SparseVec::unit(j)))?;
            let on_p = GradedMap::from_fn(p.clone(), p.clone(), 0, |g, j| p.act(x, g, &SparseVec::unit(j)))?;
            l.push(action_table(&array, &basis, |m| on_q.compose(m).ok()));
            r.push(action_table(&array, &basis, |m| m.compose(&on_p).ok()));
            if q.has_plus() {
                let plus_q = GradedMap::from_fn(q.clone(), q.clone(), 0, |g, j| q.plus_act(x, g, &SparseVec::unit(j)))?;
                b.push(action_table(&array, &basis, |m| plus_q.compose(m).ok()));
            }
        }
        left = l.into_iter().collect();
        right = r.into_iter().collect();
        if q.has_plus() {
            bullet = b.into_iter().collect();
        }
    }
    Ok(DiffSpace { p: p.clone(), q: q.clone(), order: k, shift, array, basis, left, right, bullet })
}

impl DiffSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every basis operator certifies at order `≤ k`, and the left and right actions commute.
    pub fn verify(&self, set: VerificationSet) -> Result<()> {
        for b in &self.basis {
            certify(b, self.order, set)?;
        }
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            for x in l {
                for y in r {
                    if x.mul(y) != y.mul(x) {
                        return Err(JetError::ActionInconsistent("left and right actions on Diff do not commute".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Arrays `Δ(a_1)…(a_n) ∈ Q` with order `≤ orders[i]` in slot `i`: `Diff⁺_{σ_1,…,σ_n}(Q)`, or
/// `D_σ(Q)` when `vanish` is set.
pub fn iterated_space(q: &Arc<ModuleRep>, orders: &[usize], vanish: bool, shift: i64, set: VerificationSet) -> Result<ArraySpace> {
    if orders.is_empty() {
        return Err(JetError::ValidationError("at least one slot is required".into()));
    }
    array_space(ArraySpec {
        source: algebra_module(q.alg()),
        target: q.clone(),
        slots: orders.len() - 1,
        orders: orders.to_vec(),
        vanish: vec![vanish; orders.len()],
        shift,
        set,
    })
}

/// `D_σ(Q)` for `σ = sigma`.
pub fn d_sigma_space(q: &Arc<ModuleRep>, sigma: &[u32], shift: i64, set: VerificationSet) -> Result<ArraySpace> {
    if sigma.contains(&0) {
        return Err(JetError::ValidationError(format!("sequence {sigma:?} must consist of positive integers")));
    }
    let orders: Vec<usize> = sigma.iter().map(|&s| s as usize).collect();
    iterated_space(q, &orders, true, shift, set)
}

/// `C_{s,t}(Δ): a ↦ Δ(a)(1)` for `Δ` in the two-slot space `Diff⁺_s(Diff⁺_t Q)`.
pub fn glue(space: &ArraySpace, delta: &SparseVec, set: VerificationSet) -> Result<GradedMap> {
    let ArraySpec { slots, ref orders, .. } = space.spec;
    if slots != 1 {
        return Err(JetError::DimensionMismatch("gluing needs a two-slot array".into()));
    }
    let alg = space.spec.target.alg().clone();
    let a = algebra_module(&alg);
    let one = alg.unit() as u32;
    let m = GradedMap::from_fn(a, space.spec.target.clone(), space.spec.shift, |g, i| {
        let t = space.tuple_index(&[alg.global(g, i) as u32, one])?;
        Some(space.eval(delta, t))
    })?;
    certify(&m, orders[0] + orders[1], set)
}

/// Rank of `C_{s,t}` on `Diff⁺_s(Diff⁺_t Q)` and the dimension of `Diff_{s+t}(A, Q)`.
pub fn glue_rank(q: &Arc<ModuleRep>, s: usize, t: usize, shift: i64, set: VerificationSet) -> Result<(usize, usize)> {
    let two = iterated_space(q, &[s, t], false, shift, set)?;
    let target = diff_space(&algebra_module(q.alg()), q, s + t, shift, set)?;
    let cols: Vec<SparseVec> = two
        .basis()
        .iter()
        .map(|v| {
            let m = glue(&two, v, set)?;
            let flat = flatten_map(&target.array, &m).ok_or_else(|| JetError::TruncationTooSmall("glued operator leaves the window".into()))?;
            target.array.space.coords(&flat).ok_or_else(|| JetError::CertificationFailure("glued operator is not in Diff".into()))
        })
        .collect::<Result<_>>()?;
    Ok((rank(&ExactMatrix::from_columns(target.dim(), &cols)), target.dim()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    pub diff_dim: usize,
    pub d_dim: usize,
    pub q_dim: usize,
}

/// `Diff_k(A, Q) = D_(k)(Q) ⊕ Q`: checks for every basis `Δ` that `Δ − (a ↦ aΔ(1))` lies in
/// `D_(k)(Q)`, and reports the three dimensions.
pub fn split_check(q: &Arc<ModuleRep>, k: usize, shift: i64, set: VerificationSet) -> Result<SplitData> {
    let alg = q.alg().clone();
    let diff = iterated_space(q, &[k], false, shift, set)?;
    let d = iterated_space(q, &[k], true, shift, set)?;
    let one = diff
        .tuple_index(&[alg.unit() as u32])
        .ok_or_else(|| JetError::TruncationTooSmall(format!("shift {shift} leaves no room for the value at 1")))?;
    let q_grade = diff.target_grade(one);
    for v in diff.basis() {
        let at1 = diff.eval(v, one);
        let section = diff
            .flatten(|t| q.act(diff.tuples[t][0] as usize, q_grade, &at1))
            .ok_or_else(|| JetError::TruncationTooSmall("section leaves the window".into()))?;
        if !diff.contains(&section) || !d.contains(&v.sub(&section)) {
            return Err(JetError::CertificationFailure("Diff_k does not split as D_(k) plus evaluation at 1".into()));
        }
    }
    Ok(SplitData { diff_dim: diff.dim(), d_dim: d.dim(), q_dim: q.dim(q_grade) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representability {
    pub hom_dim: usize,
    pub array_dim: usize,
}

/// Checks that `f ↦ (t ↦ f(word(t)))` maps `Hom_A(M, Q)` injectively into `space` with
/// matching dimensions.
fn check_represents(
    m: &Arc<ModuleRep>,
    space: &ArraySpace,
    word: impl Fn(&Tuple) -> Option<(usize, SparseVec)>,
) -> Result<Representability> {
    let hom = hom_a(m, &space.spec.target, space.spec.shift)?;
    let words: Vec<Option<(usize, SparseVec)>> = space.tuples.iter().map(&word).collect();
    let mut cols = Vec::with_capacity(hom.dim());
    for f in &hom.basis {
        let v = space
            .flatten(|t| {
                let (g, w) = words[t].as_ref()?;
                f.apply(*g, w)
            })
            .ok_or_else(|| JetError::TruncationTooSmall("word evaluation leaves the window".into()))?;
        if !space.contains(&v) {
            return Err(JetError::CertificationFailure(format!(
                "a homomorphism out of {} does not give an operator of the expected type",
                m.label()
            )));
        }
        cols.push(v);
    }
    let r = rank(&ExactMatrix::from_columns(space.ambient(), &cols));
    if r != hom.dim() || hom.dim() != space.dim() {
        return Err(JetError::CertificationFailure(format!(
            "Hom_A({}, {}) has dimension {} (rank {r}) against {} operators",
            m.label(),
            space.spec.target.label(),
            hom.dim(),
            space.dim()
        )));
    }
    Ok(Representability { hom_dim: hom.dim(), array_dim: space.dim() })
}

fn alg_elem(alg: &AlgebraRep, b: u32) -> (usize, SparseVec) {
    let (d, i) = alg.locate(b as usize);
    (d, SparseVec::unit(i))
}

/// `Hom_A(Λ^σ, Q) ≅ D_σ(Q)` through `f ↦ f(d_n(a_n d_{n−1}(… a_2 d_1(a_1))))`.
pub fn check_lambda_representability(q: &Arc<ModuleRep>, sigma: &[u32], shift: i64, set: VerificationSet) -> Result<Representability> {
    let alg = q.alg().clone();
    let levels = derham(&alg).tower.chain(sigma)?;
    let space = d_sigma_space(q, sigma, shift, set)?;
    let carrier = levels.last().unwrap().carrier.clone();
    check_represents(&carrier, &space, |t| {
        let a: Vec<(usize, SparseVec)> = t[1..].iter().map(|&b| alg_elem(&alg, b)).collect();
        tower_word(&levels, &alg_elem(&alg, t[0]), &a)
    })
}

/// `Hom_A(Hol^τ[P], Q)` against arrays `Δ(p)(a_1)…(a_{n−1})` of orders `τ` vanishing at `1`
/// in the algebra slots.
pub fn check_hol_representability(p: &Arc<ModuleRep>, q: &Arc<ModuleRep>, tau: &[u32], shift: i64, set: VerificationSet) -> Result<Representability> {
    let alg = q.alg().clone();
    let levels = hol_tower(p).chain(tau)?;
    let mut vanish = vec![true; tau.len()];
    vanish[0] = false;
    let space = array_space(ArraySpec {
        source: p.clone(),
        target: q.clone(),
        slots: tau.len() - 1,
        orders: tau.iter().map(|&t| t as usize).collect(),
        vanish,
        shift,
        set,
    })?;
    let carrier = levels.last().unwrap().carrier.clone();
    check_represents(&carrier, &space, |t| {
        let a: Vec<(usize, SparseVec)> = t[1..].iter().map(|&b| alg_elem(&alg, b)).collect();
        let (g, i) = space.locate_x(t[0]);
        tower_word(&levels, &(g, SparseVec::unit(i)), &a)
    })
}

/// Every basis operator of `Diff_k(P, Q)` factors through `J^k(P)` as `f ∘ j_k`, and
/// `Hom_A(J^k(P), Q)` has the same dimension.
pub fn check_jet_factorization(p: &Arc<ModuleRep>, q: &Arc<ModuleRep>, k: usize, shift: i64, set: VerificationSet) -> Result<Representability> {
    let jet = jet_module(p, k)?;
    let diff = diff_space(p, q, k, shift, set)?;
    for d in &diff.basis {
        let f = jet.factor(d)?;
        f.check_a_linear()?;
        if !f.compose(jet.j())?.same_as(d) {
            return Err(JetError::FactorizationFailure("f ∘ j differs from the operator".into()));
        }
    }
    let hom = hom_a(jet.carrier(), q, shift)?;
    if hom.dim() != diff.dim() {
        return Err(JetError::CertificationFailure(format!("Hom_A(J^{k}, Q) has dimension {} against {}", hom.dim(), diff.dim())));
    }
    Ok(Representability { hom_dim: hom.dim(), array_dim: diff.dim() })
}

/// `P_σ[A](Q) = D_σ(Q) ⊕ D_{(σ_2,…)}(Q)`: the three dimensions, with `D_∅(Q) = Q`.
pub fn functor_split_dims(q: &Arc<ModuleRep>, sigma: &[u32], shift: i64, set: VerificationSet) -> Result<(usize, usize, usize)> {
    let orders: Vec<usize> = sigma.iter().map(|&s| s as usize).collect();
    let alg = q.alg().clone();
    let mut vanish = vec![true; sigma.len()];
    vanish[0] = false;
    let full = array_space(ArraySpec {
        source: algebra_module(&alg),
        target: q.clone(),
        slots: sigma.len() - 1,
        orders,
        vanish,
        shift,
        set,
    })?;
    let d = d_sigma_space(q, sigma, shift, set)?;
    let tail = if sigma.len() == 1 {
        let g = shift.max(0) as usize;
        if g < q.ndeg() { q.dim(g) } else { 0 }
    } else {
        d_sigma_space(q, &sigma[1..], shift, set)?.dim()
    };
    Ok((full.dim(), d.dim(), tail))
}

/// Sequences of length `≤ len` with entries in `1..=max`.
pub fn sequences(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..len {
        layer = layer
            .into_iter()
            .flat_map(|s| {
                (1..=max).map(move |x| {
                    let mut t = s.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
