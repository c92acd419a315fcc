//! Higher de Rham modules, differentials, complexes and cohomology.

pub mod tower;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraRep, GradedMap, ModuleRep, Submodule};
use crate::error::{JetError, Result};
use crate::exactcore::{SparseVec, Subspace};
use crate::jets::algebra_module;
pub use tower::{extend_chain_map, extend_seq, tower_word, Tower, TowerKind, TowerLevel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexKind {
    DeRham(Vec<u32>),
    Hol(Vec<u32>),
    Resolution,
    Kernel,
}

/// A cochain complex `M_0 → M_1 → … → M_N`; `differentials[i]` maps `M_i → M_{i+1}`.
#[derive(Clone, Debug)]
pub struct ComplexRep {
    pub kind: ComplexKind,
    pub modules: Vec<Arc<ModuleRep>>,
    pub differentials: Vec<GradedMap>,
}

impl ComplexRep {
    pub fn new(kind: ComplexKind, modules: Vec<Arc<ModuleRep>>, differentials: Vec<GradedMap>) -> Result<Self> {
        let c = ComplexRep { kind, modules, differentials };
        c.verify()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    /// Checks that consecutive composites vanish exactly.
    pub fn verify(&self) -> Result<()> {
        if self.differentials.len() + 1 != self.modules.len() {
            return Err(JetError::DimensionMismatch("complex needs one differential per consecutive pair".into()));
        }
        for i in 1..self.differentials.len() {
            let dd = self.differentials[i].compose(&self.differentials[i - 1])?;
            if let Some((g, r, c)) = dd.first_nonzero() {
                return Err(JetError::CertificationFailure(format!(
                    "{:?}: d{}∘d{} has a nonzero entry at grade {g}, row {r}, column {c}",
                    self.kind,
                    i + 1,
                    i
                )));
            }
        }
        Ok(())
    }

    /// Kernel of the differential leaving `M_n`, per grade.
    pub fn kernels(&self, n: usize) -> Vec<Subspace> {
        self.differentials[n].kernels()
    }
}

/// `H^n` dimensions per grade: `dims[n][grade]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub dims: Vec<Vec<usize>>,
}

impl CohomologyTable {
    pub fn is_zero(&self) -> bool {
        self.dims.iter().flatten().all(|&d| d == 0)
    }

    /// First `(n, grade)` at which two tables differ.
    pub fn first_difference(&self, other: &CohomologyTable) -> Option<(usize, usize, usize, usize)> {
        for (n, (a, b)) in self.dims.iter().zip(&other.dims).enumerate() {
            for (g, (x, y)) in a.iter().zip(b).enumerate() {
                if x != y {
                    return Some((n, g, *x, *y));
                }
            }
        }
        None
    }
}

/// Cohomology of `C` at `M_0 … M_{N−1}` (the last module has no outgoing differential),
/// for grades `0..=grade_max`.
pub fn cohomology(c: &ComplexRep, grade_max: usize) -> Result<CohomologyTable> {
    let window = c.modules.first().map_or(0, |m| m.ndeg() - 1);
    if grade_max > window {
        return Err(JetError::UnsoundGrade { grade: grade_max, window });
    }
    let ranks: Vec<Vec<usize>> = c.differentials.iter().map(|d| d.ranks()).collect();
    let mut dims = Vec::new();
    for n in 0..c.differentials.len() {
        let row = (0..=grade_max)
            .map(|g| {
                let into = if n == 0 { 0 } else { ranks[n - 1][g] };
                c.modules[n].dim(g) - ranks[n][g] - into
            })
            .collect();
        dims.push(row);
    }
    Ok(CohomologyTable { dims })
}

/// The de Rham tower of an algebra.
#[derive(Debug)]
pub struct DeRham {
    pub alg: Arc<AlgebraRep>,
    pub tower: Tower,
}

impl DeRham {
    pub fn new(alg: &Arc<AlgebraRep>) -> Self {
        DeRham { alg: alg.clone(), tower: Tower::new(TowerKind::DeRham, algebra_module(alg), false) }
    }

    /// `Λ^{σ(n)}`.
    pub fn lambda(&self, sigma: &[u32]) -> Result<Arc<TowerLevel>> {
        self.tower.level(sigma)
    }

    /// `d_{σ(n)}: Λ^{σ(n−1)} → Λ^{σ(n)}`.
    pub fn differential(&self, sigma: &[u32]) -> Result<GradedMap> {
        if sigma.is_empty() {
            return Err(JetError::ValidationError("d needs a nonempty sequence".into()));
        }
        Ok(self.lambda(sigma)?.d.clone().unwrap())
    }

    /// `dR_σ` through `Λ^{σ(n_max+1)}`, so that `H^0 … H^{n_max}` are available.
    pub fn complex(&self, sigma: &[u32], n_max: usize) -> Result<ComplexRep> {
        let seq = extend_seq(sigma, n_max + 1);
        let levels = self.tower.chain(&seq)?;
        let modules = levels.iter().map(|l| l.carrier.clone()).collect();
        let differentials = levels[1..].iter().map(|l| l.d.clone().unwrap()).collect();
        ComplexRep::new(ComplexKind::DeRham(seq), modules, differentials)
    }

    /// Checks that the words `d(a_{n−1} d(… a_1 d(x)))` over basis elements `x, a_i` generate
    /// `Λ^{σ(n)}` as an A-module in grades `0..=grade_max`.
    pub fn check_generated_by_words(&self, sigma: &[u32], grade_max: usize) -> Result<()> {
        let levels = self.tower.chain(sigma)?;
        let carrier = &levels[sigma.len()].carrier;
        let alg = &self.alg;
        let basis: Vec<(usize, SparseVec)> =
            (0..alg.total_dim()).map(|b| (alg.degree_of(b), SparseVec::unit(alg.locate(b).1))).collect();
        let mut words = Vec::new();
        let mut tuples: Vec<(usize, Vec<usize>)> = (0..basis.len()).map(|b| (basis[b].0, vec![b])).collect();
        for _ in 1..sigma.len() {
            tuples = tuples
                .into_iter()
                .flat_map(|(g, t)| {
                    basis.iter().enumerate().filter(move |(_, e)| g + e.0 <= grade_max).map(move |(b, e)| (g + e.0, [t.clone(), vec![b]].concat()))
                })
                .collect();
        }
        for (g, t) in &tuples {
            if *g > grade_max {
                continue;
            }
            let a: Vec<(usize, SparseVec)> = t[1..].iter().map(|&b| basis[b].clone()).collect();
            if let Some((wg, w)) = tower_word(&levels, &basis[t[0]], &a) {
                if !w.is_zero() {
                    words.push((wg, w));
                }
            }
        }
        let span = Submodule::generated_by(carrier, &words, false);
        for g in 0..=grade_max.min(carrier.ndeg() - 1) {
            if span.spaces[g].dim() != carrier.dim(g) {
                return Err(JetError::DimensionMismatch(format!(
                    "words span {} of {} dimensions of {} in grade {g}",
                    span.spaces[g].dim(),
                    carrier.dim(g),
                    carrier.label()
                )));
            }
        }
        Ok(())
    }

    /// Whether the relation map `g` defining `Λ^{σ(n)}` (`n ≥ 2`) is injective.
    pub fn relation_injective(&self, sigma: &[u32]) -> Result<bool> {
        let lvl = self.lambda(sigma)?;
        match &lvl.relation {
            Some(g) => Ok(g.is_injective()),
            None => Err(JetError::ValidationError(format!("{sigma:?}: relation maps start at level 2"))),
        }
    }

    /// The chain map `dR_τ → dR_σ` for `τ ≥ σ`, component `m` mapping `Λ^{τ(m)} → Λ^{σ(m)}`.
    pub fn compare(&self, tau: &[u32], sigma: &[u32], n_max: usize) -> Result<Vec<GradedMap>> {
        let t = extend_seq(tau, n_max);
        let s = extend_seq(sigma, n_max);
        if t.iter().zip(&s).any(|(a, b)| a < b) {
            return Err(JetError::ValidationError(format!("comparison needs tau >= sigma, got {t:?} and {s:?}")));
        }
        let src = self.tower.chain(&t)?;
        let tgt = self.tower.chain(&s)?;
        let d: Vec<GradedMap> = tgt[1..].iter().map(|l| l.d.clone().unwrap()).collect();
        let f0 = GradedMap::identity(&src[0].carrier);
        extend_chain_map(&src, &d, f0)
    }
}

/// A shared de Rham tower per algebra.
pub fn derham(alg: &Arc<AlgebraRep>) -> Arc<DeRham> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<DeRham>>>> = OnceLock::new();
    let c = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(d) = c.read().unwrap().get(&alg.id()) {
        return d.clone();
    }
    let d = Arc::new(DeRham::new(alg));
    c.write().unwrap().entry(alg.id()).or_insert(d).clone()
}

/// Verdict of a rigidity comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Diagnostic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RigidityReport {
    pub tau: Vec<u32>,
    pub sigma: Vec<u32>,
    pub table_tau: CohomologyTable,
    pub table_sigma: CohomologyTable,
    /// `(n, grade, dim for τ, dim for σ)` of the first mismatch.
    pub mismatch: Option<(usize, usize, usize, usize)>,
    /// Levels `n` at which the kernel lemma applied, with whether the kernels agreed literally.
    pub kernel_lemma: Vec<(usize, bool)>,
    pub verdict: Verdict,
}

/// Compares the cohomology of `dR_τ` and `dR_σ` up to `n_max`; the verdict is diagnostic for
/// algebras not known to be smooth.
pub fn rigidity_report(alg: &Arc<AlgebraRep>, tau: &[u32], sigma: &[u32], n_max: usize, grade_max: usize) -> Result<RigidityReport> {
    let dr = derham(alg);
    let ct = dr.complex(tau, n_max)?;
    let cs = dr.complex(sigma, n_max)?;
    let table_tau = cohomology(&ct, grade_max)?;
    let table_sigma = cohomology(&cs, grade_max)?;
    let mismatch = table_tau.first_difference(&table_sigma);
    let t = extend_seq(tau, n_max + 1);
    let s = extend_seq(sigma, n_max + 1);
    let mut kernel_lemma = Vec::new();
    for n in 0..=n_max {
        if t[..n] == s[..n] {
            let kt = ct.kernels(n);
            let ks = cs.kernels(n);
            kernel_lemma.push((n, kt[..=grade_max] == ks[..=grade_max]));
        }
    }
    let ok = mismatch.is_none() && kernel_lemma.iter().all(|(_, e)| *e);
    let verdict = if !alg.is_smooth() {
        Verdict::Diagnostic
    } else if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(RigidityReport { tau: t, sigma: s, table_tau, table_sigma, mismatch, kernel_lemma, verdict })
}

/// [`rigidity_report`], with a failing verdict raised as [`JetError::RigidityViolation`].
pub fn rigidity_check(alg: &Arc<AlgebraRep>, tau: &[u32], sigma: &[u32], n_max: usize, grade_max: usize) -> Result<RigidityReport> {
    let report = rigidity_report(alg, tau, sigma, n_max, grade_max)?;
    if report.verdict == Verdict::Fail {
        return Err(JetError::RigidityViolation(match report.mismatch {
            Some((n, g, a, b)) => format!("H^{n} at grade {g}: {a} for tau, {b} for sigma"),
            None => "kernel lemma failed: kernels differ as subspaces".to_string(),
        }));
    }
    Ok(report)
}

/// `ker d_{(prefix, k)}` for each `k`, per grade, as subspaces of `Λ^{prefix}`.
pub fn kernel_lemma_kernels(alg: &Arc<AlgebraRep>, prefix: &[u32], ks: &[u32]) -> Result<Vec<Vec<Subspace>>> {
    let dr = derham(alg);
    ks.iter()
        .map(|&k| {
            let mut seq = prefix.to_vec();
            seq.push(k);
            Ok(dr.differential(&seq)?.kernels())
        })
        .collect()
}
