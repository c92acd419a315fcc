//! The recursive quotient-of-jets construction shared by higher de Rham modules and
//! holonomy modules.
//!
//! Level 0 is the base module. Level 1 is `J^{σ₁}(base)` modulo `A·j(1)` (de Rham) or
//! modulo nothing (holonomy). For `n ≥ 2`, with `X` the level `σ(n−1)`, `Y` the level
//! `σ(n−2)` and `Z` the level `(σ(n−2), σ_{n−1}+σ_n)`, the relation map `g: Z → J^{σ_n}(X)`
//! is the descent of the factorization of `j_{σ_n} ∘ d_X` through `J^{σ_{n−1}+σ_n}(Y)`, and
//! level `σ(n)` is `J^{σ_n}(X) / im g`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::algebra::{GradedMap, ModuleRep, Quotient, Submodule};
use crate::error::{JetError, Result};
use crate::exactcore::SparseVec;
use crate::jets::{jet_module, jet_module_inner, JetModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TowerKind {
    DeRham,
    Holonomy,
}

#[derive(Debug)]
pub struct TowerLevel {
    pub seq: Vec<u32>,
    pub carrier: Arc<ModuleRep>,
    /// `J^{σ_n}` of the previous carrier (absent at level 0).
    pub jet: Option<Arc<JetModule>>,
    /// The quotient presentation `J^{σ_n}(prev) ↠ carrier`.
    pub quotient: Option<Quotient>,
    /// The relation map `g: Z → J^{σ_n}(X)` (levels `n ≥ 2`).
    pub relation: Option<GradedMap>,
    /// The differential from the previous level, of order at most `σ_n`.
    pub d: Option<GradedMap>,
}

impl TowerLevel {
    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn epi(&self) -> Option<&GradedMap> {
        self.quotient.as_ref().map(|q| &q.proj)
    }
}

/// A memoized tower over a fixed base module.
#[derive(Debug)]
pub struct Tower {
    pub kind: TowerKind,
    pub base: Arc<ModuleRep>,
    /// Carry the base's plus action up the tower (holonomy over a bimodule base).
    pub inner_plus: bool,
    levels: RwLock<HashMap<Vec<u32>, Arc<TowerLevel>>>,
}

impl Tower {
    pub fn new(kind: TowerKind, base: Arc<ModuleRep>, inner_plus: bool) -> Self {
        assert!(!inner_plus || base.has_plus(), "inner plus requires a bimodule base");
        let level0 = Arc::new(TowerLevel { seq: Vec::new(), carrier: base.clone(), jet: None, quotient: None, relation: None, d: None });
        let mut levels = HashMap::new();
        levels.insert(Vec::new(), level0);
        Tower { kind, base, inner_plus, levels: RwLock::new(levels) }
    }

    fn name(&self, seq: &[u32]) -> String {
        let s: Vec<String> = seq.iter().map(|x| x.to_string()).collect();
        match self.kind {
            TowerKind::DeRham => format!("Lambda^({})", s.join(",")),
            TowerKind::Holonomy => format!("Hol^({})[{}]", s.join(","), self.base.label()),
        }
    }

    fn jet(&self, m: &Arc<ModuleRep>, k: usize) -> Result<Arc<JetModule>> {
        if self.inner_plus {
            jet_module_inner(m, k)
        } else {
            jet_module(m, k)
        }
    }

    pub fn level(&self, seq: &[u32]) -> Result<Arc<TowerLevel>> {
        if seq.contains(&0) {
            return Err(JetError::ValidationError(format!("sequence {seq:?} must consist of positive integers")));
        }
        if let Some(l) = self.levels.read().unwrap().get(seq) {
            return Ok(l.clone());
        }
        let built = Arc::new(self.build(seq)?);
        let mut w = self.levels.write().unwrap();
        Ok(w.entry(seq.to_vec()).or_insert(built).clone())
    }

    fn build(&self, seq: &[u32]) -> Result<TowerLevel> {
        let n = seq.len();
        let name = self.name(seq);
        let sn = seq[n - 1] as usize;
        let x = self.level(&seq[..n - 1])?;
        let jet = self.jet(&x.carrier, sn)?;
        let jc = jet.carrier().clone();
        let (sub, relation) = if n == 1 {
            match self.kind {
                TowerKind::DeRham => {
                    let one = jet.universal.apply(0, &SparseVec::unit(self.base.alg().unit())).unwrap();
                    (Submodule::generated_by(&jc, &[(0, one)], self.inner_plus), None)
                }
                TowerKind::Holonomy => (Submodule::zero(&jc), None),
            }
        } else {
            let y = self.level(&seq[..n - 2])?;
            let mut zseq = seq[..n - 2].to_vec();
            zseq.push(seq[n - 2] + seq[n - 1]);
            let z = self.level(&zseq)?;
            let dx = x.d.as_ref().expect("level >= 1 has a differential");
            let delta = jet.universal.compose(dx)?;
            let zjet = z.jet.as_ref().expect("level >= 1 has a jet");
            debug_assert!(Arc::ptr_eq(&zjet.base, &y.carrier));
            let g_tilde = zjet.factor(&delta)?;
            let g = z.quotient.as_ref().unwrap().descend(&g_tilde)?;
            let img = g.image_submodule()?;
            (img, Some(g))
        };
        let quotient = sub.quotient_data(name, self.inner_plus)?;
        let d = quotient.proj.compose(&jet.universal)?.with_order(sn);
        Ok(TowerLevel { seq: seq.to_vec(), carrier: quotient.module.clone(), jet: Some(jet), quotient: Some(quotient), relation, d: Some(d) })
    }

    /// Levels `σ(0), …, σ(n)`.
    pub fn chain(&self, seq: &[u32]) -> Result<Vec<Arc<TowerLevel>>> {
        (0..=seq.len()).map(|k| self.level(&seq[..k])).collect()
    }
}

/// Extends `f₀: S₀ → T₀` to a chain map between towers: `f_m` is the descent through the
/// relations of `S_m` of the factorization of `D_m ∘ f_{m−1}` through `J^{σ_m}(S_{m−1})`.
pub fn extend_chain_map(source: &[Arc<TowerLevel>], target_d: &[GradedMap], f0: GradedMap) -> Result<Vec<GradedMap>> {
    let mut out = vec![f0];
    for m in 1..source.len() {
        let lvl = &source[m];
        let jet = lvl.jet.as_ref().expect("level >= 1 has a jet");
        let delta = target_d[m - 1].compose(&out[m - 1])?;
        let big = jet.factor(&delta)?;
        let f = lvl.quotient.as_ref().unwrap().descend(&big)?;
        out.push(f);
    }
    Ok(out)
}

/// The word `d_n(a_{n−1} · d_{n−1}(… a_1 · d_1(x)))` along a chain of levels, for `x` in the
/// base and homogeneous algebra elements `a_i` given as `(degree, local vector)`.
pub fn tower_word(levels: &[Arc<TowerLevel>], x: &(usize, SparseVec), a: &[(usize, SparseVec)]) -> Option<(usize, SparseVec)> {
    let mut g = x.0;
    let mut cur = levels[1].d.as_ref()?.apply(g, &x.1)?;
    for (i, (d, av)) in a.iter().enumerate() {
        cur = levels[i + 1].carrier.act_elem(*d, av, g, &cur)?;
        g += d;
        cur = levels[i + 2].d.as_ref()?.apply(g, &cur)?;
    }
    Some((g, cur))
}

/// Extends a sequence by repeating its last entry (an empty sequence extends by ones).
pub fn extend_seq(seq: &[u32], n: usize) -> Vec<u32> {
    let mut out: Vec<u32> = seq.iter().copied().take(n).collect();
    let fill = seq.last().copied().unwrap_or(1);
    while out.len() < n {
        out.push(fill);
    }
    out
}
