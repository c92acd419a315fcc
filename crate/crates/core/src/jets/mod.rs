//! Jet modules `J^k(P) = (A ⊗_K P) / I^{k+1}(A ⊗_K P)` and their universal operators.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::algebra::{tensor_k, tensor_over_a, AlgebraRep, GradedMap, ModuleRep, Quotient, Side, Submodule, TensorLayout, TensorOverA};
use crate::error::{JetError, Result};
use crate::exactcore::{EchelonBuilder, ExactMatrix, SparseVec, Subspace};

/// The bimodule `J^k(P)`: main action on the `A` factor, plus action through `P`.
#[derive(Debug)]
pub struct JetModule {
    pub base: Arc<ModuleRep>,
    pub order: usize,
    /// `A ⊗_K P`.
    pub tensor: Arc<ModuleRep>,
    pub layout: TensorLayout,
    pub quotient: Quotient,
    /// `j_k: P → J^k(P)`, `p ↦ [1 ⊗ p]`.
    pub universal: GradedMap,
}

impl JetModule {
    pub fn carrier(&self) -> &Arc<ModuleRep> {
        &self.quotient.module
    }

    pub fn j(&self) -> &GradedMap {
        &self.universal
    }

    /// The unique A-linear `f: J^k(P) → Q` with `f ∘ j_k = delta`, for a differential operator
    /// `delta: P → Q` of order at most `k`. Fails if `delta` does not factor.
    pub fn factor(&self, delta: &GradedMap) -> Result<GradedMap> {
        let p = &self.base;
        let q = &delta.target;
        if delta.source.dims() != p.dims() {
            return Err(JetError::DimensionMismatch(format!(
                "operator from {} cannot factor through J^{}({})",
                delta.source.label(),
                self.order,
                p.label()
            )));
        }
        let alg = p.alg();
        let n = p.ndeg();
        let s = delta.shift;
        let mut blocks = Vec::with_capacity(n);
        for g in 0..n {
            let Some(tg) = delta_target(g, s, q.ndeg()) else {
                blocks.push(None);
                continue;
            };
            let mut cols: Vec<SparseVec> = Vec::with_capacity(self.layout.dims[g]);
            let mut ok = true;
            'outer: for a in 0..=g {
                let b = g - a;
                let Some(d) = delta.block(b) else {
                    ok = false;
                    break;
                };
                let tb = delta.target_degree(b).unwrap();
                for i in 0..alg.dim(a) {
                    let Some(act) = q.action_block(alg.global(a, i), tb) else {
                        ok = false;
                        break 'outer;
                    };
                    let m = act.mul(d);
                    cols.extend(m.columns());
                }
            }
            blocks.push(ok.then(|| ExactMatrix::from_columns(q.dim(tg), &cols)));
        }
        let big = GradedMap::new(self.tensor.clone(), q.clone(), s, blocks)?;
        let mut f = self.quotient.descend(&big)?;
        f.certified_order = Some(0);
        Ok(f)
    }

    /// The elements `j_k(p_b)` for basis vectors `p_b`, as `(degree, vector)`.
    pub fn generators(&self) -> Vec<(usize, SparseVec)> {
        let mut out = Vec::new();
        for g in 0..self.base.ndeg() {
            let m = self.universal.block(g).unwrap();
            for c in m.columns() {
                out.push((g, c));
            }
        }
        out
    }

    /// Checks that the carrier is generated over A by the image of `j_k`.
    pub fn check_generated(&self) -> Result<()> {
        let sub = Submodule::generated_by(self.carrier(), &self.generators(), false);
        if sub.dims() != self.carrier().dims() {
            return Err(JetError::CertificationFailure(format!(
                "J^{}({}) is not generated by j-images: {:?} of {:?}",
                self.order,
                self.base.label(),
                sub.dims(),
                self.carrier().dims()
            )));
        }
        Ok(())
    }
}

fn delta_target(g: usize, shift: i64, n: usize) -> Option<usize> {
    let t = g as i64 + shift;
    (t >= 0 && (t as usize) < n).then_some(t as usize)
}

type JetKey = (u64, u64, usize, bool);

fn cache() -> &'static RwLock<HashMap<JetKey, Arc<JetModule>>> {
    static CACHE: OnceLock<RwLock<HashMap<JetKey, Arc<JetModule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached_jet(p: &Arc<ModuleRep>, k: usize, inner: bool) -> Result<Arc<JetModule>> {
    let key = (p.alg().id(), p.id(), k, inner);
    if let Some(j) = cache().read().unwrap().get(&key) {
        return Ok(j.clone());
    }
    let j = Arc::new(build_jet(p, k, inner)?);
    Ok(cache().write().unwrap().entry(key).or_insert(j).clone())
}

/// `J^k(P)`, memoized per module and order. Its plus action is `a⁺[b⊗p] = [b⊗ap]`.
pub fn jet_module(p: &Arc<ModuleRep>, k: usize) -> Result<Arc<JetModule>> {
    cached_jet(p, k, false)
}

/// `J^k(P)` for a bimodule `P`, whose plus action is instead induced by the plus action of
/// `P`: `a⁺[b⊗p] = [b⊗a⁺p]`.
pub fn jet_module_inner(p: &Arc<ModuleRep>, k: usize) -> Result<Arc<JetModule>> {
    if !p.has_plus() {
        return Err(JetError::ActionInconsistent(format!("{} carries no plus action", p.label())));
    }
    cached_jet(p, k, true)
}

/// `I^{k+1}(A ⊗ P)` per degree, iterating `S_{j+1} = Σ_i ξ_i(S_j)` with
/// `ξ_i = x_i ⊗ 1 − 1 ⊗ x_i`, stopping early once the span stabilizes.
fn augmentation_power(tp: &Arc<ModuleRep>, k: usize) -> Vec<Subspace> {
    let alg = tp.alg();
    let plus = tp.plus_actions().expect("tensor carries both actions");
    let xis: Vec<(usize, Vec<Option<ExactMatrix>>)> = (0..alg.ngens())
        .map(|i| {
            let l = tp.gen_action(i);
            let r = &plus[i];
            let blocks = l
                .blocks
                .iter()
                .zip(&r.blocks)
                .map(|(a, b)| match (a, b) {
                    (Some(a), Some(b)) => Some(a.sub(b)),
                    _ => None,
                })
                .collect();
            (l.shift, blocks)
        })
        .collect();
    let mut current: Vec<Subspace> = tp.dims().iter().map(|&d| Subspace::full(d)).collect();
    for _ in 0..=k {
        let mut next: Vec<EchelonBuilder> = tp.dims().iter().map(|&d| EchelonBuilder::new(d)).collect();
        for (s, blocks) in &xis {
            for g in 0..tp.ndeg() {
                let Some(m) = &blocks[g] else { continue };
                let b = &mut next[g + s];
                for v in current[g].basis() {
                    if b.is_full() {
                        break;
                    }
                    b.insert(&m.apply(v));
                }
            }
        }
        let next: Vec<Subspace> = next.into_iter().map(|b| b.finish()).collect();
        if next == current {
            break;
        }
        current = next;
    }
    current
}

fn build_jet(p: &Arc<ModuleRep>, k: usize, inner: bool) -> Result<JetModule> {
    let alg = p.alg();
    let a = ModuleRep::algebra(alg);
    let label = format!("A(x)K{}", p.label());
    let (both, layout) = tensor_k(&a, p, Side::Left, Some(Side::Right), &label);
    let spaces = augmentation_power(&both, k);
    let tp = if inner { tensor_k(&a, p, Side::Left, Some(Side::RightPlus), &label).0 } else { both };
    let sub = Submodule { parent: tp.clone(), spaces };
    let quotient = sub.quotient_data(format!("J^{}({})", k, p.label()), true)?;
    let carrier = quotient.module.clone();
    let universal = GradedMap::from_fn(p.clone(), carrier.clone(), 0, |g, i| {
        let v = layout.pure(0, &SparseVec::unit(0), g, &SparseVec::unit(i)).unwrap();
        Some(quotient.proj.apply(g, &v).unwrap())
    })?
    .with_order(k);
    Ok(JetModule { base: p.clone(), order: k, tensor: tp, layout, quotient, universal })
}

/// `π_{t,s}: J^t(P) → J^s(P)` with `π ∘ j_t = j_s`.
pub fn jet_project(t: usize, s: usize, p: &Arc<ModuleRep>) -> Result<GradedMap> {
    if t < s {
        return Err(JetError::ValidationError(format!("jet projection needs t >= s, got {t} < {s}")));
    }
    let jt = jet_module(p, t)?;
    let js = jet_module(p, s)?;
    jt.factor(&js.universal)
}

/// `c^{s,t}: J^{s+t}(P) → J^t(J^s(P))`, `j_{s+t}(p) ↦ j_t(j_s(p))`.
pub fn cojet_glue(s: usize, t: usize, p: &Arc<ModuleRep>) -> Result<GradedMap> {
    let js = jet_module(p, s)?;
    let jts = jet_module(js.carrier(), t)?;
    let jst = jet_module(p, s + t)?;
    let delta = jts.universal.compose(&js.universal)?;
    jst.factor(&delta)
}

/// `J^k(f): J^k(P) → J^k(Q)` for an A-linear `f: P → Q`.
pub fn jet_functor_map(f: &GradedMap, k: usize) -> Result<GradedMap> {
    let jp = jet_module(&f.source, k)?;
    let jq = jet_module(&f.target, k)?;
    jp.factor(&jq.universal.compose(f)?)
}

/// `ker(π_{k,k−1})` inside `J^k(A)`.
pub fn symmetric_kernel(alg: &Arc<AlgebraRep>, k: usize) -> Result<(Arc<JetModule>, Submodule)> {
    if k == 0 {
        return Err(JetError::ValidationError("symmetric kernel needs k >= 1".into()));
    }
    let a = algebra_module(alg);
    let pi = jet_project(k, k - 1, &a)?;
    let j = jet_module(&a, k)?;
    Ok((j, pi.kernel_submodule()?))
}

/// A shared `A`-as-module instance per algebra, so jets of `A` are memoized across callers.
pub fn algebra_module(alg: &Arc<AlgebraRep>) -> Arc<ModuleRep> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<ModuleRep>>>> = OnceLock::new();
    let c = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(m) = c.read().unwrap().get(&alg.id()) {
        return m.clone();
    }
    let m = Arc::new(ModuleRep::algebra(alg));
    c.write().unwrap().entry(alg.id()).or_insert(m).clone()
}

/// The canonical isomorphism `J^k(P) ≅ J^k_+(A) ⊗•_A P`, with both directions.
#[derive(Debug)]
pub struct JetTensorIso {
    pub tensor: TensorOverA,
    /// `J^k(P) → J^k_+(A) ⊗ P`, `j_k(p) ↦ [j_k(1) ⊗ p]`.
    pub forward: GradedMap,
    /// `[u ⊗ p] ↦ J^k(ev_p)(u)` with `ev_p(a) = a p`.
    pub backward: GradedMap,
}

pub fn jet_tensor_iso(p: &Arc<ModuleRep>, k: usize) -> Result<JetTensorIso> {
    let alg = p.alg();
    let a = algebra_module(alg);
    let ja = jet_module(&a, k)?;
    let jp = jet_module(p, k)?;
    let tensor = tensor_over_a(ja.carrier(), p, &format!("J^{k}+(A)(x)A{}", p.label()))?;
    let lay = &tensor.layout;
    let j1 = ja.universal.apply(0, &SparseVec::unit(0)).unwrap();
    let delta = GradedMap::from_fn(p.clone(), tensor.module.clone(), 0, |g, i| {
        let v = lay.pure(0, &j1, g, &SparseVec::unit(i))?;
        tensor.quotient.proj.apply(g, &v)
    })?
    .with_order(k);
    let forward = jp.factor(&delta)?;

    // columns of the map on J^k(A) ⊗_K P, one J^k(ev_p) per basis vector p
    let n = p.ndeg();
    let mut ev_maps: Vec<Vec<GradedMap>> = Vec::with_capacity(n);
    for b in 0..n {
        let mut row = Vec::with_capacity(p.dim(b));
        for j in 0..p.dim(b) {
            let pv = SparseVec::unit(j);
            let ev = GradedMap::from_fn(a.clone(), p.clone(), b as i64, |g, i| p.act(alg.global(g, i), b, &pv))?;
            row.push(jet_functor_map(&ev, k)?);
        }
        ev_maps.push(row);
    }
    let big = GradedMap::from_fn(tensor.over_k.clone(), jp.carrier().clone(), 0, |g, idx| {
        let (da, i, j) = lay.split(g, idx);
        ev_maps[g - da][j].apply(da, &SparseVec::unit(i))
    })?;
    let backward = tensor.quotient.descend(&big)?;
    Ok(JetTensorIso { tensor, forward, backward })
}

impl JetTensorIso {
    /// Checks that both composites are identities.
    pub fn verify(&self) -> Result<()> {
        let fb = self.forward.compose(&self.backward)?;
        let bf = self.backward.compose(&self.forward)?;
        if !fb.same_as(&GradedMap::identity(&self.forward.target)) || !bf.same_as(&GradedMap::identity(&self.forward.source)) {
            return Err(JetError::CertificationFailure("jet/tensor maps are not mutually inverse".into()));
        }
        Ok(())
    }
}
