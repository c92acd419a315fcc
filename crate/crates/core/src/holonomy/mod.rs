//! Relative holonomy modules `Hol^{τ(n)}[P]`, the Hol-complex, its trivializing homotopy and
//! the tensor description `Hol^τ[P] ≅ Hol_+^τ ⊗• P`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{tensor_over_a, AlgebraRep, GradedMap, ModuleRep, TensorOverA};
use crate::derham::{
    cohomology, extend_chain_map, extend_seq, tower_word, CohomologyTable, ComplexKind, ComplexRep, Tower, TowerKind, TowerLevel, Verdict,
};
use crate::error::{JetError, Result};
use crate::exactcore::{Rational, SparseVec};
use crate::jets::algebra_module;

pub type HolModule = TowerLevel;

type TowerCache = RwLock<HashMap<(u64, bool), Arc<Tower>>>;

fn towers() -> &'static TowerCache {
    static CACHE: OnceLock<TowerCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The holonomy tower over `P`. A base carrying a plus action keeps it on every level.
pub fn hol_tower(p: &Arc<ModuleRep>) -> Arc<Tower> {
    let key = (p.id(), p.has_plus());
    if let Some(t) = towers().read().unwrap().get(&key) {
        return t.clone();
    }
    let t = Arc::new(Tower::new(TowerKind::Holonomy, p.clone(), p.has_plus()));
    towers().write().unwrap().entry(key).or_insert(t).clone()
}

/// `A` as a bimodule, shared per algebra.
pub fn algebra_bimodule(alg: &Arc<AlgebraRep>) -> Arc<ModuleRep> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<ModuleRep>>>> = OnceLock::new();
    let c = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(m) = c.read().unwrap().get(&alg.id()) {
        return m.clone();
    }
    let m = Arc::new(ModuleRep::algebra_bimodule(alg));
    c.write().unwrap().entry(alg.id()).or_insert(m).clone()
}

/// The absolute holonomy tower `Hol_+^τ`, carrying the plus action inherited from `A`.
pub fn hol_plus_tower(alg: &Arc<AlgebraRep>) -> Arc<Tower> {
    hol_tower(&algebra_bimodule(alg))
}

pub fn hol_module(tau: &[u32], p: &Arc<ModuleRep>) -> Result<Arc<HolModule>> {
    hol_tower(p).level(tau)
}

/// `0 → P → Hol^{τ(1)}[P] → … → Hol^{τ(n_max+1)}[P]`.
pub fn hol_complex(tau: &[u32], p: &Arc<ModuleRep>, n_max: usize) -> Result<ComplexRep> {
    let seq = extend_seq(tau, n_max + 1);
    let levels = hol_tower(p).chain(&seq)?;
    let modules = levels.iter().map(|l| l.carrier.clone()).collect();
    let differentials = levels[1..].iter().map(|l| l.d.clone().unwrap()).collect();
    ComplexRep::new(ComplexKind::Hol(seq), modules, differentials)
}

/// `Hol^τ[f]` for an A-linear `f: P → Q`, components `0..=n_max`.
pub fn hol_functor_map(f: &GradedMap, tau: &[u32], n_max: usize) -> Result<Vec<GradedMap>> {
    let seq = extend_seq(tau, n_max);
    let src = hol_tower(&f.source).chain(&seq)?;
    let tgt = hol_tower(&f.target).chain(&seq)?;
    let d: Vec<GradedMap> = tgt[1..].iter().map(|l| l.d.clone().unwrap()).collect();
    extend_chain_map(&src, &d, f.clone())
}

/// The maps `φ^{τ(n)}: Hol^{τ(n)}[P] → Hol^{τ(n−1)}[P]`, `phi[n−1] = φ^{τ(n)}`.
#[derive(Debug)]
pub struct Homotopy {
    pub tau: Vec<u32>,
    pub levels: Vec<Arc<TowerLevel>>,
    pub phi: Vec<GradedMap>,
}

fn delta(levels: &[Arc<TowerLevel>], n: usize) -> &GradedMap {
    levels[n].d.as_ref().unwrap()
}

/// Builds `φ^{τ(1)}, …, φ^{τ(n_max+1)}` through the jet factorization of
/// `id − δ_{τ(n)} ∘ φ^{τ(n)}`. Only `τ = 1` is supported unless `general` is set, in which
/// case the construction is attempted and its failure reported.
pub fn hol_homotopy(tau: &[u32], p: &Arc<ModuleRep>, n_max: usize, general: bool) -> Result<Homotopy> {
    let seq = extend_seq(tau, n_max + 1);
    if !general && seq.iter().any(|&t| t != 1) {
        return Err(JetError::UnsupportedTau(format!("{seq:?}: only the constant sequence 1 is supported without the general flag")));
    }
    let levels = hol_tower(p).chain(&seq)?;
    let mut phi: Vec<GradedMap> = Vec::with_capacity(seq.len());
    for n in 1..levels.len() {
        let lvl = &levels[n];
        let prev = &levels[n - 1].carrier;
        let id = GradedMap::identity(prev);
        let pre = if n == 1 { id } else { id.sub(&delta(&levels, n - 1).compose(&phi[n - 2])?)? };
        let big = lvl.jet.as_ref().unwrap().factor(&pre)?;
        phi.push(lvl.quotient.as_ref().unwrap().descend(&big)?);
    }
    Ok(Homotopy { tau: seq, levels, phi })
}

impl Homotopy {
    /// `φ^{τ(n+1)} δ_{τ(n+1)} + δ_{τ(n)} φ^{τ(n)} − id` at every slot `n`; `None` where it vanishes,
    /// else the first nonzero `(grade, row, column)`.
    pub fn defects(&self) -> Result<Vec<Option<(usize, usize, usize)>>> {
        let mut out = Vec::new();
        for n in 0..self.phi.len() {
            let m = &self.levels[n].carrier;
            let mut s = self.phi[n].compose(delta(&self.levels, n + 1))?;
            if n > 0 {
                s = s.add(&delta(&self.levels, n).compose(&self.phi[n - 1])?)?;
            }
            out.push(s.sub(&GradedMap::identity(m))?.first_nonzero());
        }
        Ok(out)
    }

    pub fn verify(&self) -> Result<()> {
        for (n, d) in self.defects()?.into_iter().enumerate() {
            if let Some((g, r, c)) = d {
                return Err(JetError::CertificationFailure(format!(
                    "homotopy identity fails at slot {n}, grade {g}, entry ({r}, {c})"
                )));
            }
        }
        Ok(())
    }

    /// `w_{n}(p; a_1, …, a_{n−1})` with `w_1 = δ_1 p` and `w_{n+1} = δ_{n+1}(a_n w_n)`.
    fn word(&self, p: &(usize, SparseVec), a: &[(usize, SparseVec)]) -> Option<(usize, SparseVec)> {
        tower_word(&self.levels, p, a)
    }

    /// Compares `φ^{τ(n+1)}` on every in-window word `w_{n+1}(p; a_1, …, a_n)` over basis
    /// elements with the closed form
    /// `a_n w_n(p; a_1..a_{n−1}) + Σ_k (−1)^{n−k} w_n(p; …, a_k a_{k+1}, …) + (−1)^n w_n(a_1 p; a_2..a_n)`.
    /// Returns the number of tuples checked.
    pub fn check_closed_form(&self) -> Result<usize> {
        let p = &self.levels[0].carrier;
        let alg = p.alg().clone();
        let abasis: Vec<(usize, SparseVec)> =
            (0..alg.ndeg()).flat_map(|d| (0..alg.dim(d)).map(move |i| (d, SparseVec::unit(i)))).collect();
        let pbasis: Vec<(usize, SparseVec)> =
            (0..p.ndeg()).flat_map(|g| (0..p.dim(g)).map(move |j| (g, SparseVec::unit(j)))).collect();
        let mut checked = 0;
        for pv in &pbasis {
            if let Some((g, w)) = self.word(pv, &[]) {
                let back = self.phi[0].apply(g, &w);
                if back.as_ref() != Some(&pv.1) {
                    return Err(JetError::CertificationFailure(format!("phi^1 does not invert delta_1 at grade {g}")));
                }
                checked += 1;
            }
        }
        let mut tuples: Vec<Vec<(usize, SparseVec)>> = vec![Vec::new()];
        for n in 1..self.phi.len() {
            tuples = tuples
                .iter()
                .flat_map(|t| abasis.iter().map(move |a| [t.as_slice(), std::slice::from_ref(a)].concat()))
                .filter(|t| t.iter().map(|a| a.0).sum::<usize>() < p.ndeg())
                .collect();
            let level = &self.levels[n].carrier;
            for pv in &pbasis {
                for a in &tuples {
                    let Some((g, w)) = self.word(pv, a) else { continue };
                    let Some(lhs) = self.phi[n].apply(g, &w) else { continue };
                    let Some(rhs) = self.closed_form(level, pv, a) else { continue };
                    if lhs != rhs {
                        return Err(JetError::CertificationFailure(format!(
                            "phi^{} disagrees with the closed form at grade {g} on a word of length {n}",
                            n + 1
                        )));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }

    fn closed_form(&self, level: &ModuleRep, p: &(usize, SparseVec), a: &[(usize, SparseVec)]) -> Option<SparseVec> {
        let n = a.len();
        let alg = level.alg();
        let sign = |e: usize| if e.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        let (g0, w) = self.word(p, &a[..n - 1])?;
        let (an_d, an) = &a[n - 1];
        let mut out = level.act_elem(*an_d, an, g0, &w)?;
        for k in 1..n {
            let (d1, v1) = &a[k - 1];
            let (d2, v2) = &a[k];
            let prod = alg.mul(*d1, v1, *d2, v2)?;
            let mut merged = a[..k - 1].to_vec();
            merged.push((d1 + d2, prod));
            merged.extend_from_slice(&a[k + 1..]);
            let (_, t) = self.word(p, &merged)?;
            out = out.axpy(&sign(n - k), &t);
        }
        let (d1, v1) = &a[0];
        let pm = self.levels[0].carrier.act_elem(*d1, v1, p.0, &p.1)?;
        let (_, t) = self.word(&(p.0 + d1, pm), &a[1..])?;
        Some(out.axpy(&sign(n), &t))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcyclicityReport {
    pub tau: Vec<u32>,
    pub module: String,
    pub table: CohomologyTable,
    /// Slots at which the homotopy identity failed, with the first bad entry.
    pub homotopy_defects: Vec<(usize, usize, usize, usize)>,
    pub verdict: Verdict,
}

/// Cohomology of `Hol^τ[P]` through `H^{n_max}` plus the homotopy identity.
pub fn hol_acyclicity(tau: &[u32], p: &Arc<ModuleRep>, n_max: usize, grade_max: usize, general: bool) -> Result<AcyclicityReport> {
    let c = hol_complex(tau, p, n_max)?;
    let table = cohomology(&c, grade_max)?;
    let h = hol_homotopy(tau, p, n_max, general)?;
    let homotopy_defects: Vec<(usize, usize, usize, usize)> = h
        .defects()?
        .into_iter()
        .enumerate()
        .filter_map(|(n, d)| d.map(|(g, r, c)| (n, g, r, c)))
        .collect();
    let ok = table.is_zero() && homotopy_defects.is_empty();
    let verdict = match (ok, h.tau.iter().all(|&t| t == 1)) {
        (true, _) => Verdict::Pass,
        (false, true) => Verdict::Fail,
        (false, false) => Verdict::Diagnostic,
    };
    Ok(AcyclicityReport { tau: h.tau, module: p.label().to_string(), table, homotopy_defects, verdict })
}

/// First `n ≤ n_limit` with `Hol^{1_n}[P] = 0`.
pub fn vanishing_index(p: &Arc<ModuleRep>, n_limit: usize) -> Result<Option<usize>> {
    let t = hol_tower(p);
    for n in 1..=n_limit {
        if t.level(&vec![1; n])?.carrier.is_zero() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// The isomorphisms `Hol^{τ(n)}[P] ≅ Hol_+^{τ(n)} ⊗•_A P` for `n = 0..=n_max`.
#[derive(Debug)]
pub struct PimpaIso {
    pub tau: Vec<u32>,
    pub tensors: Vec<TensorOverA>,
    pub forward: Vec<GradedMap>,
    pub backward: Vec<GradedMap>,
}

impl PimpaIso {
    pub fn verify(&self) -> Result<()> {
        for (n, (f, b)) in self.forward.iter().zip(&self.backward).enumerate() {
            let fb = f.compose(b)?;
            let bf = b.compose(f)?;
            if !fb.same_as(&GradedMap::identity(&f.target)) || !bf.same_as(&GradedMap::identity(&f.source)) {
                return Err(JetError::CertificationFailure(format!("holonomy/tensor maps are not mutually inverse at level {n}")));
            }
        }
        Ok(())
    }
}

/// `[h ⊗ p] ↦ [f(h) ⊗ g(p)]` between two tensor products over `A`, for plus-linear `f` and
/// A-linear `g` (either may be an identity).
fn tensor_map(src: &TensorOverA, tgt: &TensorOverA, f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    let big = GradedMap::from_fn(src.over_k.clone(), tgt.module.clone(), f.shift + g.shift, |deg, idx| {
        let (da, i, j) = src.layout.split(deg, idx);
        let db = deg - da;
        let fh = f.apply(da, &SparseVec::unit(i))?;
        let gp = g.apply(db, &SparseVec::unit(j))?;
        let v = tgt.layout.pure(f.target_degree(da)?, &fh, g.target_degree(db)?, &gp)?;
        tgt.quotient.proj.apply(deg, &v)
    })?;
    src.quotient.descend(&big)
}

pub fn verify_pimpa(tau: &[u32], p: &Arc<ModuleRep>, n_max: usize) -> Result<PimpaIso> {
    let alg = p.alg().clone();
    let seq = extend_seq(tau, n_max);
    let plus = hol_plus_tower(&alg).chain(&seq)?;
    let hp = hol_tower(p).chain(&seq)?;
    let id_p = GradedMap::identity(p);
    let tensors: Vec<TensorOverA> = plus
        .iter()
        .map(|l| tensor_over_a(&l.carrier, p, &format!("{}(x)A{}", l.carrier.label(), p.label())))
        .collect::<Result<_>>()?;
    let dt: Vec<GradedMap> = (1..tensors.len())
        .map(|n| Ok(tensor_map(&tensors[n - 1], &tensors[n], plus[n].d.as_ref().unwrap(), &id_p)?.with_order(seq[n - 1] as usize)))
        .collect::<Result<_>>()?;
    let t0 = &tensors[0];
    let f0 = GradedMap::from_fn(p.clone(), t0.module.clone(), 0, |g, j| {
        let v = t0.layout.pure(0, &SparseVec::unit(0), g, &SparseVec::unit(j))?;
        t0.quotient.proj.apply(g, &v)
    })?;
    let forward = extend_chain_map(&hp, &dt, f0)?;

    // Hol[ev_p] for every basis vector p
    let a = plus[0].carrier.clone();
    let hd: Vec<GradedMap> = hp[1..].iter().map(|l| l.d.clone().unwrap()).collect();
    let mut ev: Vec<Vec<Vec<GradedMap>>> = Vec::new();
    for b in 0..p.ndeg() {
        let mut row = Vec::new();
        for j in 0..p.dim(b) {
            let pv = SparseVec::unit(j);
            let e = GradedMap::from_fn(a.clone(), p.clone(), b as i64, |g, i| p.act(alg.global(g, i), b, &pv))?;
            row.push(extend_chain_map(&plus, &hd, e)?);
        }
        ev.push(row);
    }
    let mut backward = Vec::with_capacity(tensors.len());
    for (n, t) in tensors.iter().enumerate() {
        let big = GradedMap::from_fn(t.over_k.clone(), hp[n].carrier.clone(), 0, |g, idx| {
            let (da, i, j) = t.layout.split(g, idx);
            ev[g - da][j][n].apply(da, &SparseVec::unit(i))
        })?;
        backward.push(t.quotient.descend(&big)?);
    }
    Ok(PimpaIso { tau: seq, tensors, forward, backward })
}

/// Checks `iso_Q ∘ Hol[f] = (id ⊗ f) ∘ iso_P` at every level.
pub fn pimpa_naturality(f: &GradedMap, tau: &[u32], n_max: usize) -> Result<()> {
    let ip = verify_pimpa(tau, &f.source, n_max)?;
    let iq = verify_pimpa(tau, &f.target, n_max)?;
    let hf = hol_functor_map(f, tau, n_max)?;
    let plus = hol_plus_tower(f.source.alg()).chain(&ip.tau)?;
    for n in 0..=n_max {
        let tf = tensor_map(&ip.tensors[n], &iq.tensors[n], &GradedMap::identity(&plus[n].carrier), f)?;
        let lhs = iq.forward[n].compose(&hf[n])?;
        let rhs = tf.compose(&ip.forward[n])?;
        if !lhs.same_as(&rhs) {
            return Err(JetError::CertificationFailure(format!("naturality square fails at level {n}")));
        }
    }
    Ok(())
}

/// `Hol^{σ(n)}[A]` against `Λ^{(σ_2..σ_n)} ⊕ Λ^{σ(n)}`: both dimension vectors.
pub fn split_dims(alg: &Arc<AlgebraRep>, sigma: &[u32]) -> Result<(Vec<usize>, Vec<usize>)> {
    let hol = hol_module(sigma, &algebra_module(alg))?;
    let dr = crate::derham::derham(alg);
    let a = dr.lambda(&sigma[1..])?;
    let b = dr.lambda(sigma)?;
    let sum = a.carrier.dims().iter().zip(b.carrier.dims()).map(|(x, y)| x + y).collect();
    Ok((hol.carrier.dims().to_vec(), sum))
}
