//! Kernel modules of the comparison maps and a resolution of the kernel complex
//! `ker(dR_{(σ₁,…,σ_k+1,1,…)} → dR_{(σ₁,…,σ_k,1,…)})` by `Hol^1`-complexes.
//!
//! With `K_l = ker(Λ^{(σ₁,…,σ_k+l)} → Λ^{(σ₁,…,σ_k+l−1)})` the sequence is
//! `… → Hol^1[K_{l+1}] -ψ_l→ Hol^1[K_l] → … → Hol^1[K_1] -ρ→ K`, where at a fixed total
//! degree `N` the column `l` contributes `Hol^{1_{N−k−l}}[K_{l+1}]`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraRep, GradedMap, ModuleRep};
use crate::derham::{cohomology, derham, extend_chain_map, extend_seq, ComplexKind, ComplexRep, CohomologyTable, Verdict};
use crate::error::{JetError, Result};
use crate::exactcore::{solve, Subspace};
use crate::holonomy::{hol_functor_map, hol_tower};

/// `K^{(r)}_{(μ)} = ker(Λ^{(μ₁,…,μ_r,…,μ_s)} → Λ^{(μ₁,…,μ_r−1,…,μ_s)})`.
#[derive(Debug)]
pub struct KernelModule {
    pub mu: Vec<u32>,
    /// 1-based slot whose index is lowered.
    pub slot: usize,
    pub module: Arc<ModuleRep>,
    pub inclusion: GradedMap,
    /// The comparison component `Λ^{(μ)} → Λ^{(μ')}`.
    pub comparison: GradedMap,
}

impl KernelModule {
    pub fn dims(&self) -> &[usize] {
        self.module.dims()
    }
}

pub fn kernel_module(alg: &Arc<AlgebraRep>, mu: &[u32], r: usize) -> Result<Arc<KernelModule>> {
    type Key = (u64, Vec<u32>, usize);
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<KernelModule>>>> = OnceLock::new();
    if r == 0 || r > mu.len() {
        return Err(JetError::ValidationError(format!("slot {r} is out of range for {mu:?}")));
    }
    if mu[r - 1] < 2 {
        return Err(JetError::UnsupportedIndex(format!("slot {r} of {mu:?} would drop to 0")));
    }
    let key = (alg.id(), mu.to_vec(), r);
    let c = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(k) = c.read().unwrap().get(&key) {
        return Ok(k.clone());
    }
    let mut lower = mu.to_vec();
    lower[r - 1] -= 1;
    let s = mu.len();
    let comparison = derham(alg).compare(mu, &lower, s)?.swap_remove(s);
    let sub = comparison.kernel_submodule()?;
    let label = format!("K^({r})_({})", mu.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    let (module, inclusion) = sub.as_module(label, false)?;
    let k = Arc::new(KernelModule { mu: mu.to_vec(), slot: r, module, inclusion, comparison });
    Ok(c.write().unwrap().entry(key).or_insert(k).clone())
}

/// The unique `h` with `inc ∘ h = f`, for an injective `inc`.
pub fn factor_through_mono(f: &GradedMap, inc: &GradedMap) -> Result<GradedMap> {
    let blocks = (0..f.source.ndeg())
        .map(|g| {
            let (Some(b), Some(t)) = (f.block(g), f.target_degree(g)) else { return Ok(None) };
            let m = inc.block(t).expect("inclusions are defined in every degree");
            solve(m, b).map(Some).ok_or_else(|| {
                JetError::FactorizationFailure(format!(
                    "map {} -> {} does not land in {} (degree {g})",
                    f.source.label(),
                    f.target.label(),
                    inc.source.label()
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut h = GradedMap::new(f.source.clone(), inc.source.clone(), f.shift, blocks)?;
    h.certified_order = f.certified_order;
    Ok(h)
}

/// `K_l` for the base sequence `σ` of length `k`: the kernel lowering the last slot of
/// `(σ₁,…,σ_k+l)`.
fn k_l(alg: &Arc<AlgebraRep>, sigma: &[u32], l: u32) -> Result<Arc<KernelModule>> {
    let mut mu = sigma.to_vec();
    *mu.last_mut().unwrap() += l;
    kernel_module(alg, &mu, sigma.len())
}

fn check_base(sigma: &[u32], k: usize) -> Result<Vec<u32>> {
    if k == 0 {
        return Err(JetError::ValidationError("k must be positive".into()));
    }
    if sigma.contains(&0) {
        return Err(JetError::ValidationError(format!("sequence {sigma:?} must consist of positive integers")));
    }
    Ok(extend_seq(sigma, k))
}

/// `(σ₁,…,σ_k+1,1,…,1)` of length `n` and `(σ₁,…,σ_k,1,…,1)`.
fn kernel_sequences(sigma: &[u32], n: usize) -> (Vec<u32>, Vec<u32>) {
    let mut up = sigma.to_vec();
    *up.last_mut().unwrap() += 1;
    let mut lo = sigma.to_vec();
    while up.len() < n {
        up.push(1);
        lo.push(1);
    }
    (up, lo)
}

/// The kernel complex `K^{(k)}_{(σ,1)}` through level `n_max + 1`, with the inclusions of its
/// components into `dR_{(σ₁,…,σ_k+1,1,…)}`.
pub fn kernel_complex(alg: &Arc<AlgebraRep>, sigma: &[u32], k: usize, n_max: usize) -> Result<(ComplexRep, Vec<GradedMap>)> {
    let sigma = check_base(sigma, k)?;
    let (up, lo) = kernel_sequences(&sigma, n_max + 1);
    let dr = derham(alg);
    let f = dr.compare(&up, &lo, n_max + 1)?;
    let levels = dr.tower.chain(&extend_seq(&up, n_max + 1))?;
    let mut modules = Vec::new();
    let mut incs = Vec::new();
    for (n, c) in f.iter().enumerate() {
        let (m, inc) = c.kernel_submodule()?.as_module(format!("K_{n}"), false)?;
        modules.push(m);
        incs.push(inc);
    }
    let mut differentials = Vec::new();
    for n in 1..levels.len() {
        let d = levels[n].d.as_ref().unwrap().compose(&incs[n - 1])?;
        differentials.push(factor_through_mono(&d, &incs[n])?);
    }
    Ok((ComplexRep::new(ComplexKind::Kernel, modules, differentials)?, incs))
}

/// `ρ̃ⁿ: Hol^{1_{n−k}}[K_1] → Λ^{(σ₁,…,σ_k+1,1,…,1)_n}` for `n = k, …, k + m_max`, built as the
/// chain map extending the defining inclusion `K_1 ↪ Λ^{(σ₁,…,σ_k+1)}`.
pub fn rho_tilde(alg: &Arc<AlgebraRep>, sigma: &[u32], k: usize, m_max: usize) -> Result<Vec<GradedMap>> {
    let sigma = check_base(sigma, k)?;
    let k1 = k_l(alg, &sigma, 1)?;
    let (up, _) = kernel_sequences(&sigma, k + m_max);
    let lam = derham(alg).tower.chain(&up)?;
    let hol = hol_tower(&k1.module).chain(&vec![1; m_max])?;
    let d: Vec<GradedMap> = lam[k + 1..].iter().map(|l| l.d.clone().unwrap()).collect();
    extend_chain_map(&hol, &d, k1.inclusion.clone())
}

/// `ρⁿ` for `n = k, …, k + m_max`, as maps onto the kernel complex components.
pub fn rho_map(alg: &Arc<AlgebraRep>, sigma: &[u32], k: usize, m_max: usize) -> Result<Vec<GradedMap>> {
    let (_, incs) = kernel_complex(alg, sigma, k, k + m_max)?;
    rho_tilde(alg, sigma, k, m_max)?
        .iter()
        .enumerate()
        .map(|(m, r)| factor_through_mono(r, &incs[k + m]))
        .collect()
}

/// The maps `ψ_lⁿ: Hol^{1_n}[K_{l+1}] → Hol^{1_{n+1}}[K_l]` for `n = 0, …, n_max`, together with
/// the defect `Hol[p] ∘ ψ̃` whose vanishing lets `ψ̃` descend into `Hol[K_l]`.
#[derive(Debug)]
pub struct PsiMap {
    pub l: u32,
    pub components: Vec<GradedMap>,
    /// `ψ̃ⁿ: Hol^{1_n}[K_{l+1}] → Hol^{1_{n+1}}[Λ_l]` before descent.
    pub lifted: Vec<GradedMap>,
    /// `Hol[p] ∘ ψ̃ⁿ` with `p: Λ_l → Λ_{l−1}`, zero by construction.
    pub defects: Vec<GradedMap>,
}

pub fn psi_map(alg: &Arc<AlgebraRep>, sigma: &[u32], k: usize, l: u32, n_max: usize) -> Result<PsiMap> {
    let sigma = check_base(sigma, k)?;
    if l == 0 {
        return Err(JetError::UnsupportedIndex("psi is indexed by l >= 1".into()));
    }
    let dr = derham(alg);
    let mut seq_l = sigma.clone();
    *seq_l.last_mut().unwrap() += l;
    let mut seq_next = seq_l.clone();
    *seq_next.last_mut().unwrap() += 1;
    let lam_l = dr.lambda(&seq_l)?;
    let lam_next = dr.lambda(&seq_next)?;
    let kl = k_l(alg, &sigma, l)?;
    let knext = k_l(alg, &sigma, l + 1)?;

    // s: Λ_{l+1} → J^1(Λ_l), descended from j_1 ∘ d_{Λ_l}
    let hol_lam = hol_tower(&lam_l.carrier);
    let target = hol_lam.chain(&vec![1; n_max + 1])?;
    let delta1 = target[1].d.as_ref().unwrap().compose(lam_l.d.as_ref().unwrap())?;
    let s_tilde = lam_next.jet.as_ref().unwrap().factor(&delta1)?;
    let s = lam_next.quotient.as_ref().unwrap().descend(&s_tilde)?;

    let source = hol_tower(&knext.module).chain(&vec![1; n_max])?;
    let d: Vec<GradedMap> = target[2..].iter().map(|t| t.d.clone().unwrap()).collect();
    let lifted = extend_chain_map(&source, &d, s.compose(&knext.inclusion)?)?;

    let hol_i = hol_functor_map(&kl.inclusion, &[1], n_max + 1)?;
    let hol_p = hol_functor_map(&kl.comparison, &[1], n_max + 1)?;
    let mut components = Vec::new();
    let mut defects = Vec::new();
    for (n, t) in lifted.iter().enumerate() {
        let defect = hol_p[n + 1].compose(t)?;
        if let Some((g, r, c)) = defect.first_nonzero() {
            return Err(JetError::FactorizationFailure(format!(
                "psi_{l}^{n}: Hol[p] ∘ psi does not vanish (grade {g}, row {r}, column {c})"
            )));
        }
        components.push(factor_through_mono(t, &hol_i[n + 1])?);
        defects.push(defect);
    }
    Ok(PsiMap { l, components, lifted, defects })
}

/// Whether the exactness condition holds at one node of the resolution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeCheck {
    /// Column: `0` is `Hol^1[K_1]`, `l` is `Hol^1[K_{l+1}]`.
    pub column: u32,
    /// Holonomy level of the component.
    pub level: usize,
    /// Grades where `ker` (outgoing) and `im` (incoming) differ.
    pub failing_grades: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub sigma: Vec<u32>,
    pub k: usize,
    pub n_max: usize,
    pub l_max: u32,
    /// Column `l` sits in total-degree shift `−k−l`.
    pub shifts: Vec<i64>,
    pub nodes: Vec<NodeCheck>,
    /// Grades at which some `ρⁿ` fails to be onto.
    pub rho_failures: Vec<(usize, usize)>,
    pub chain_maps: bool,
    /// Whether `ψ_l⁰` (unshifted) is the zero map, per `l`.
    pub psi_zero_degree: Vec<(u32, bool)>,
    /// Exactness if every `ψ_l⁰` is replaced by zero.
    pub zero_degree_replaced_exact: bool,
    pub kernel_cohomology: CohomologyTable,
    /// `H(dR_{(σ,+1,1…)})` and `H(dR_{(σ,1…)})` agree, as the vanishing of `H(K)` predicts.
    pub rigidity_consistent: bool,
    pub verdict: Verdict,
}

fn differ(kernels: &[Subspace], images: &[Subspace], grades: usize) -> Vec<usize> {
    (0..grades).filter(|&g| kernels[g] != images[g]).collect()
}

fn zero_images(m: &ModuleRep) -> Vec<Subspace> {
    (0..m.ndeg()).map(|g| Subspace::zero(m.dim(g))).collect()
}

fn commutes(f_prev: &GradedMap, f: &GradedMap, d_src: &GradedMap, d_tgt: &GradedMap) -> Result<bool> {
    Ok(f.compose(d_src)?.same_as(&d_tgt.compose(f_prev)?))
}

/// Exactness of the resolution at every node `(column l, level m)` with `l ≤ l_max` and
/// `m ≤ n_max` reachable with the computed maps, surjectivity of every `ρⁿ`, and the chain map
/// property of all maps.
pub fn resolution_report(alg: &Arc<AlgebraRep>, sigma: &[u32], k: usize, n_max: usize, l_max: u32) -> Result<ResolutionReport> {
    let base = check_base(sigma, k)?;
    let grades = alg.ndeg();
    let (kc, _) = kernel_complex(alg, &base, k, k + n_max)?;
    let rho = rho_map(alg, &base, k, n_max)?;
    let psis: Vec<PsiMap> = (1..=l_max).map(|l| psi_map(alg, &base, k, l, n_max.saturating_sub(1))).collect::<Result<_>>()?;
    let hol_of = |l: u32| -> Result<Vec<Arc<crate::derham::TowerLevel>>> { hol_tower(&k_l(alg, &base, l + 1)?.module).chain(&vec![1; n_max]) };

    let mut chain_maps = true;
    let mut rho_failures = Vec::new();
    let col0 = hol_of(0)?;
    for (m, r) in rho.iter().enumerate() {
        let ranks = r.ranks();
        for g in 0..grades {
            if ranks[g] != kc.modules[k + m].dim(g) {
                rho_failures.push((k + m, g));
            }
        }
        if m > 0 {
            chain_maps &= commutes(&rho[m - 1], r, col0[m].d.as_ref().unwrap(), &kc.differentials[k + m - 1])?;
        }
    }
    for (i, p) in psis.iter().enumerate() {
        let src = hol_of(i as u32 + 1)?;
        let tgt = hol_of(i as u32)?;
        for m in 1..p.components.len() {
            chain_maps &= commutes(&p.components[m - 1], &p.components[m], src[m].d.as_ref().unwrap(), tgt[m + 1].d.as_ref().unwrap())?;
        }
    }

    let mut nodes = Vec::new();
    let mut replaced_ok = true;
    for l in 0..=l_max {
        let col = hol_of(l)?;
        let m_top = if l == 0 { n_max } else { n_max.saturating_sub(1) };
        for m in 0..=m_top {
            let out: &GradedMap = if l == 0 { &rho[m] } else { &psis[l as usize - 1].components[m] };
            let incoming = if m == 0 {
                Some(zero_images(&col[0].carrier))
            } else if l < l_max {
                Some(psis[l as usize].components[m - 1].images())
            } else {
                None
            };
            let Some(images) = incoming else { continue };
            let kernels = out.kernels();
            nodes.push(NodeCheck { column: l, level: m, failing_grades: differ(&kernels, &images, grades) });

            // the same node with every ψ⁰ replaced by the zero map
            let kernels0 = if l > 0 && m == 0 { (0..grades).map(|g| Subspace::full(col[0].carrier.dim(g))).collect() } else { kernels };
            let images0 = if m == 1 && l < l_max { zero_images(&col[1].carrier) } else { images };
            replaced_ok &= differ(&kernels0, &images0, grades).is_empty();
        }
    }

    let psi_zero_degree = psis.iter().map(|p| (p.l, p.components.first().is_none_or(|c| c.is_zero()))).collect();
    let kernel_cohomology = cohomology(&kc, grades - 1)?;
    let dr = derham(alg);
    let (up, lo) = kernel_sequences(&base, k);
    let h_up = cohomology(&dr.complex(&up, k + n_max)?, grades - 1)?;
    let h_lo = cohomology(&dr.complex(&lo, k + n_max)?, grades - 1)?;
    let rigidity_consistent = kernel_cohomology.is_zero() == h_up.first_difference(&h_lo).is_none();

    let exact = nodes.iter().all(|n| n.failing_grades.is_empty()) && rho_failures.is_empty() && chain_maps;
    let verdict = match (exact, alg.is_smooth()) {
        (true, _) => Verdict::Pass,
        (false, true) => Verdict::Fail,
        (false, false) => Verdict::Diagnostic,
    };
    Ok(ResolutionReport {
        sigma: base,
        k,
        n_max,
        l_max,
        shifts: (0..=l_max).map(|l| -(k as i64) - l as i64).collect(),
        nodes,
        rho_failures,
        chain_maps,
        psi_zero_degree,
        zero_degree_replaced_exact: replaced_ok,
        kernel_cohomology,
        rigidity_consistent,
        verdict,
    })
}

/// [`resolution_report`], with a failing verdict raised as [`JetError::ExactnessViolation`].
pub fn verify_resolution(alg: &Arc<AlgebraRep>, sigma: &[u32], k: usize, n_max: usize, l_max: u32) -> Result<ResolutionReport> {
    let report = resolution_report(alg, sigma, k, n_max, l_max)?;
    if report.verdict == Verdict::Fail {
        let first = report.nodes.iter().find(|n| !n.failing_grades.is_empty());
        return Err(JetError::ExactnessViolation(match first {
            Some(n) => format!("column {} level {} at grades {:?}", n.column, n.level, n.failing_grades),
            None if !report.rho_failures.is_empty() => format!("rho is not onto at (level, grade) {:?}", report.rho_failures),
            None => "a resolution map is not a chain map".into(),
        }));
    }
    Ok(report)
}
