//! Graded A-modules given by per-degree dimensions and generator action tables.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use super::map::GradedMap;
use super::rep::AlgebraRep;
use crate::error::{JetError, Result};
use crate::exactcore::{EchelonBuilder, ExactMatrix, QuotientSpace, Rational, SparseVec, Subspace};

/// A homogeneous linear endomorphism of a graded module raising degree by `shift`.
/// `blocks[g]` maps degree `g` to degree `g + shift`; `None` when that lands outside the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub shift: usize,
    pub blocks: Vec<Option<ExactMatrix>>,
}

impl Action {
    pub fn identity(dims: &[usize]) -> Self {
        Action { shift: 0, blocks: dims.iter().map(|&d| Some(ExactMatrix::identity(d))).collect() }
    }

    pub fn zero(dims: &[usize], shift: usize) -> Self {
        let n = dims.len();
        Action {
            shift,
            blocks: (0..n).map(|g| (g + shift < n).then(|| ExactMatrix::zero(dims[g + shift], dims[g]))).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Action) -> Action {
        let n = self.blocks.len();
        let blocks = (0..n)
            .map(|g| {
                let a = inner.blocks[g].as_ref()?;
                let b = self.blocks.get(g + inner.shift)?.as_ref()?;
                Some(b.mul(a))
            })
            .collect();
        Action { shift: self.shift + inner.shift, blocks }
    }

    pub fn axpy(&self, c: &Rational, other: &Action) -> Action {
        assert_eq!(self.shift, other.shift);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a.add(&b.scale(c))),
                _ => None,
            })
            .collect();
        Action { shift: self.shift, blocks }
    }

    pub fn apply(&self, g: usize, v: &SparseVec) -> Option<SparseVec> {
        self.blocks.get(g)?.as_ref().map(|m| m.apply(v))
    }
}

static NEXT_MODULE_ID: AtomicU64 = AtomicU64::new(1);

/// A graded module over an [`AlgebraRep`], optionally carrying a second commuting action.
#[derive(Debug)]
pub struct ModuleRep {
    id: u64,
    alg: Arc<AlgebraRep>,
    label: String,
    dims: Vec<usize>,
    action: Vec<Action>,
    plus: Option<Vec<Action>>,
    word_cache: Vec<OnceLock<Arc<Action>>>,
    basis_cache: Vec<OnceLock<Arc<Action>>>,
    plus_word_cache: Vec<OnceLock<Arc<Action>>>,
    plus_basis_cache: Vec<OnceLock<Arc<Action>>>,
}

impl ModuleRep {
    /// Assembles a module from tables without verification; see [`ModuleRep::verify`].
    pub fn from_tables(
        alg: Arc<AlgebraRep>,
        label: impl Into<String>,
        dims: Vec<usize>,
        action: Vec<Action>,
        plus: Option<Vec<Action>>,
    ) -> Self {
        assert_eq!(dims.len(), alg.ndeg());
        assert_eq!(action.len(), alg.ngens());
        let nw = alg.words().len();
        let nb = alg.total_dim();
        ModuleRep {
            id: NEXT_MODULE_ID.fetch_add(1, Ordering::Relaxed),
            label: label.into(),
            dims,
            action,
            plus,
            word_cache: (0..nw).map(|_| OnceLock::new()).collect(),
            basis_cache: (0..nb).map(|_| OnceLock::new()).collect(),
            plus_word_cache: (0..nw).map(|_| OnceLock::new()).collect(),
            plus_basis_cache: (0..nb).map(|_| OnceLock::new()).collect(),
            alg,
        }
    }

    /// As [`ModuleRep::from_tables`], then checks the module axioms.
    pub fn new(
        alg: Arc<AlgebraRep>,
        label: impl Into<String>,
        dims: Vec<usize>,
        action: Vec<Action>,
        plus: Option<Vec<Action>>,
    ) -> Result<Self> {
        let m = Self::from_tables(alg, label, dims, action, plus);
        m.verify()?;
        Ok(m)
    }

    /// The free module `A^rank`; degree `g` is `rank` copies of `A_g`, copy-major.
    pub fn free(alg: &Arc<AlgebraRep>, rank: usize, label: impl Into<String>) -> Self {
        let adims = alg.dims();
        let dims: Vec<usize> = adims.iter().map(|d| d * rank).collect();
        let action = (0..alg.ngens())
            .map(|i| {
                let gb = alg.gen_basis(i);
                let s = alg.gen_degree(i);
                let blocks = (0..adims.len())
                    .map(|g| {
                        if g + s >= adims.len() {
                            return None;
                        }
                        let cols: Vec<SparseVec> = (0..rank)
                            .flat_map(|r| {
                                (0..adims[g]).map(move |l| (r, l))
                            })
                            .map(|(r, l)| {
                                alg.mul_basis(gb, alg.global(g, l)).unwrap().offset(r * adims[g + s])
                            })
                            .collect();
                        Some(ExactMatrix::from_columns(dims[g + s], &cols))
                    })
                    .collect();
                Action { shift: s, blocks }
            })
            .collect();
        Self::from_tables(alg.clone(), label, dims, action, None)
    }

    /// `A` as a module over itself.
    pub fn algebra(alg: &Arc<AlgebraRep>) -> Self {
        Self::free(alg, 1, "A")
    }

    /// `A` with its multiplication as both the main and the plus action.
    pub fn algebra_bimodule(alg: &Arc<AlgebraRep>) -> Self {
        let a = Self::free(alg, 1, "A");
        let plus = a.action.clone();
        a.with_plus(Some(plus))
    }

    /// The zero module.
    pub fn zero(alg: &Arc<AlgebraRep>, label: impl Into<String>) -> Self {
        let n = alg.ndeg();
        let dims = vec![0; n];
        let action = (0..alg.ngens()).map(|i| Action::zero(&dims, alg.gen_degree(i))).collect();
        Self::from_tables(alg.clone(), label, dims, action, None)
    }

    /// Copy of the tables under a new label.
    pub fn relabel(&self, label: impl Into<String>) -> Self {
        Self::from_tables(self.alg.clone(), label, self.dims.clone(), self.action.clone(), self.plus.clone())
    }

    /// Copy with the plus action dropped or replaced.
    pub fn with_plus(&self, plus: Option<Vec<Action>>) -> Self {
        Self::from_tables(self.alg.clone(), self.label.clone(), self.dims.clone(), self.action.clone(), plus)
    }

    /// Process-unique identity, used as a memoization key.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn alg(&self) -> &Arc<AlgebraRep> {
        &self.alg
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, g: usize) -> usize {
        self.dims.get(g).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn ndeg(&self) -> usize {
        self.dims.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn gen_action(&self, i: usize) -> &Action {
        &self.action[i]
    }

    pub fn gen_actions(&self) -> &[Action] {
        &self.action
    }

    pub fn has_plus(&self) -> bool {
        self.plus.is_some()
    }

    pub fn plus_actions(&self) -> Option<&[Action]> {
        self.plus.as_deref()
    }

    fn word_action(&self, w: usize, plus: bool) -> Arc<Action> {
        let cache = if plus { &self.plus_word_cache } else { &self.word_cache };
        cache[w]
            .get_or_init(|| {
                let word = &self.alg.words()[w];
                match word.gen {
                    None => Arc::new(Action::identity(&self.dims)),
                    Some(i) => {
                        let parent = self.word_action(word.parent, plus);
                        let gen = if plus { &self.plus.as_ref().expect("plus action")[i] } else { &self.action[i] };
                        Arc::new(gen.compose(&parent))
                    }
                }
            })
            .clone()
    }

    fn basis_action_impl(&self, b: usize, plus: bool) -> Arc<Action> {
        let cache = if plus { &self.plus_basis_cache } else { &self.basis_cache };
        cache[b]
            .get_or_init(|| {
                let combo = self.alg.basis_words(b);
                let d = self.alg.degree_of(b);
                let mut acc = Action::zero(&self.dims, d);
                for (w, c) in combo.iter() {
                    acc = acc.axpy(c, &self.word_action(w, plus));
                }
                Arc::new(acc)
            })
            .clone()
    }

    /// Action of the global algebra basis element `b`.
    pub fn basis_action(&self, b: usize) -> Arc<Action> {
        self.basis_action_impl(b, false)
    }

    /// Plus action of the global algebra basis element `b`.
    pub fn plus_basis_action(&self, b: usize) -> Arc<Action> {
        self.basis_action_impl(b, true)
    }

    /// `b · v` for `v` in degree `g`; `None` if out of window.
    pub fn act(&self, b: usize, g: usize, v: &SparseVec) -> Option<SparseVec> {
        self.basis_action(b).apply(g, v)
    }

    pub fn plus_act(&self, b: usize, g: usize, v: &SparseVec) -> Option<SparseVec> {
        self.plus_basis_action(b).apply(g, v)
    }

    /// Action of a homogeneous algebra element `a` of degree `d` (local coordinates).
    pub fn act_elem(&self, d: usize, a: &SparseVec, g: usize, v: &SparseVec) -> Option<SparseVec> {
        if g + d >= self.ndeg() {
            return None;
        }
        let mut acc = SparseVec::new();
        for (k, c) in a.iter() {
            let w = self.act(self.alg.global(d, k), g, v)?;
            acc = acc.axpy(c, &w);
        }
        Some(acc)
    }

    /// Matrix of the action of basis element `b` from degree `g`.
    pub fn action_block(&self, b: usize, g: usize) -> Option<ExactMatrix> {
        self.basis_action(b).blocks.get(g).cloned().flatten()
    }

    /// Checks that the generator tables define an A-module (and, when present, that the
    /// plus tables define a second A-module structure commuting with the first).
    pub fn verify(&self) -> Result<()> {
        let alg = &self.alg;
        for (i, a) in self.action.iter().enumerate() {
            check_shape(a, &self.dims, alg.gen_degree(i), &self.label)?;
        }
        let check = |plus: bool| -> Result<()> {
            for i in 0..alg.ngens() {
                let gb = alg.gen_basis(i);
                let gd = alg.gen_degree(i);
                let gen = if plus { &self.plus.as_ref().unwrap()[i] } else { &self.action[i] };
                for b in 0..alg.total_dim() {
                    let bd = alg.degree_of(b);
                    let Some(prod) = alg.mul_basis(gb, b) else { continue };
                    let lhs = gen.compose(&self.basis_action_impl(b, plus));
                    let mut rhs = Action::zero(&self.dims, gd + bd);
                    for (k, c) in prod.iter() {
                        rhs = rhs.axpy(c, &self.basis_action_impl(alg.global(gd + bd, k), plus));
                    }
                    for g in 0..self.ndeg() {
                        if let (Some(l), Some(r)) = (&lhs.blocks[g], &rhs.blocks[g]) {
                            if l != r {
                                return Err(JetError::ActionInconsistent(format!(
                                    "{}: {}action of {} times {} differs from the action of the product in degree {}",
                                    self.label,
                                    if plus { "plus " } else { "" },
                                    alg.generator_names()[i],
                                    alg.basis_name(b),
                                    g
                                )));
                            }
                        }
                    }
                }
            }
            Ok(())
        };
        check(false)?;
        if let Some(plus) = &self.plus {
            for (i, a) in plus.iter().enumerate() {
                check_shape(a, &self.dims, alg.gen_degree(i), &self.label)?;
            }
            check(true)?;
            for (i, p) in plus.iter().enumerate() {
                for (j, a) in self.action.iter().enumerate() {
                    let pa = p.compose(a);
                    let ap = a.compose(p);
                    for g in 0..self.ndeg() {
                        if let (Some(x), Some(y)) = (&pa.blocks[g], &ap.blocks[g]) {
                            if x != y {
                                return Err(JetError::ActionInconsistent(format!(
                                    "{}: plus action of generator {} does not commute with action of generator {} in degree {}",
                                    self.label, i, j, g
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The module with its plus action promoted to the main action.
    pub fn plus_as_main(&self) -> Option<ModuleRep> {
        let plus = self.plus.clone()?;
        Some(Self::from_tables(self.alg.clone(), format!("{}+", self.label), self.dims.clone(), plus, Some(self.action.clone())))
    }
}

fn check_shape(a: &Action, dims: &[usize], shift: usize, label: &str) -> Result<()> {
    if a.shift != shift || a.blocks.len() != dims.len() {
        return Err(JetError::ActionInconsistent(format!("{label}: action table has the wrong shape")));
    }
    for (g, b) in a.blocks.iter().enumerate() {
        match b {
            Some(m) if g + shift < dims.len() && m.rows() == dims[g + shift] && m.cols() == dims[g] => {}
            None if g + shift >= dims.len() => {}
            _ => return Err(JetError::ActionInconsistent(format!("{label}: action block in degree {g} has the wrong shape"))),
        }
    }
    Ok(())
}

/// A graded subspace of a module, closed under the action (and the plus action if requested).
#[derive(Clone, Debug)]
pub struct Submodule {
    pub parent: Arc<ModuleRep>,
    pub spaces: Vec<Subspace>,
}

impl Submodule {
    pub fn zero(parent: &Arc<ModuleRep>) -> Self {
        Submodule { parent: parent.clone(), spaces: parent.dims().iter().map(|&d| Subspace::zero(d)).collect() }
    }

    pub fn full(parent: &Arc<ModuleRep>) -> Self {
        Submodule { parent: parent.clone(), spaces: parent.dims().iter().map(|&d| Subspace::full(d)).collect() }
    }

    /// Smallest submodule containing the homogeneous elements `gens` (as `(degree, vector)`).
    pub fn generated_by(parent: &Arc<ModuleRep>, gens: &[(usize, SparseVec)], with_plus: bool) -> Self {
        let m = parent;
        let n = m.ndeg();
        let mut spaces: Vec<Subspace> = Vec::with_capacity(n);
        let mut actions: Vec<&Action> = m.gen_actions().iter().collect();
        if with_plus {
            actions.extend(m.plus_actions().expect("plus action requested").iter());
        }
        for g in 0..n {
            let mut b = EchelonBuilder::new(m.dim(g));
            for (d, v) in gens {
                if *d == g {
                    b.insert(v);
                }
            }
            for a in &actions {
                if a.shift > 0 && g >= a.shift {
                    let m_blk = a.blocks[g - a.shift].as_ref().unwrap();
                    for v in spaces[g - a.shift].basis() {
                        if b.is_full() {
                            break;
                        }
                        b.insert(&m_blk.apply(v));
                    }
                }
            }
            // close under degree-preserving actions
            let zero_shift: Vec<&ExactMatrix> =
                actions.iter().filter(|a| a.shift == 0).map(|a| a.blocks[g].as_ref().unwrap()).collect();
            let mut current = b.clone().finish();
            if !zero_shift.is_empty() {
                let mut frontier: Vec<SparseVec> = current.basis().to_vec();
                while !frontier.is_empty() && !b.is_full() {
                    let mut next = Vec::new();
                    for v in &frontier {
                        for a in &zero_shift {
                            let w = a.apply(v);
                            if b.insert(&w) {
                                next.push(w);
                            }
                        }
                    }
                    frontier = next;
                }
                current = b.finish();
            }
            spaces.push(current);
        }
        Submodule { parent: parent.clone(), spaces }
    }

    /// Wraps per-degree subspaces after checking closure under the action.
    pub fn from_spaces(parent: &Arc<ModuleRep>, spaces: Vec<Subspace>, with_plus: bool) -> Result<Self> {
        let s = Submodule { parent: parent.clone(), spaces };
        s.check_closed(with_plus)?;
        Ok(s)
    }

    pub fn check_closed(&self, with_plus: bool) -> Result<()> {
        let m = &self.parent;
        let mut actions: Vec<&Action> = m.gen_actions().iter().collect();
        if with_plus {
            actions.extend(m.plus_actions().ok_or_else(|| JetError::ActionInconsistent("no plus action".into()))?.iter());
        }
        for a in actions {
            for g in 0..m.ndeg() {
                let Some(blk) = &a.blocks[g] else { continue };
                for v in self.spaces[g].basis() {
                    if !self.spaces[g + a.shift].contains(&blk.apply(v)) {
                        return Err(JetError::ActionInconsistent(format!(
                            "subspace of {} is not closed under the action in degree {}",
                            m.label(),
                            g
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        Submodule { parent: self.parent.clone(), spaces: self.spaces.iter().zip(&other.spaces).map(|(a, b)| a.sum(b)).collect() }
    }

    pub fn intersect(&self, other: &Submodule) -> Submodule {
        Submodule {
            parent: self.parent.clone(),
            spaces: self.spaces.iter().zip(&other.spaces).map(|(a, b)| a.intersect(b)).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Submodule) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| a.is_subspace_of(b))
    }

    /// The quotient module with its projection. The plus action is carried along when asked.
    pub fn quotient(&self, label: impl Into<String>, keep_plus: bool) -> Result<(Arc<ModuleRep>, GradedMap)> {
        let q = self.quotient_data(label, keep_plus)?;
        Ok((q.module, q.proj))
    }

    /// The quotient together with the sections needed to descend maps through it.
    pub fn quotient_data(&self, label: impl Into<String>, keep_plus: bool) -> Result<Quotient> {
        let m = &self.parent;
        if keep_plus {
            self.check_closed(true)?;
        }
        let qs: Vec<QuotientSpace> = self.spaces.iter().map(|s| QuotientSpace::new(s.clone())).collect();
        let projs: Vec<ExactMatrix> = qs.iter().map(|q| q.proj()).collect();
        let secs: Vec<ExactMatrix> = qs.iter().map(|q| q.section()).collect();
        let dims: Vec<usize> = qs.iter().map(|q| q.dim()).collect();
        let induce = |a: &Action| Action {
            shift: a.shift,
            blocks: a
                .blocks
                .iter()
                .enumerate()
                .map(|(g, b)| b.as_ref().map(|b| projs[g + a.shift].mul(&b.mul(&secs[g]))))
                .collect(),
        };
        let action = m.gen_actions().iter().map(induce).collect();
        let plus = if keep_plus { m.plus_actions().map(|p| p.iter().map(induce).collect()) } else { None };
        let q = Arc::new(ModuleRep::from_tables(m.alg().clone(), label, dims, action, plus));
        let proj = GradedMap::new(m.clone(), q.clone(), 0, projs.into_iter().map(Some).collect())?;
        Ok(Quotient { module: q, proj, sub: self.clone(), sections: secs })
    }

    /// The submodule as a module in its own right, with the inclusion.
    pub fn as_module(&self, label: impl Into<String>, keep_plus: bool) -> Result<(Arc<ModuleRep>, GradedMap)> {
        let m = &self.parent;
        self.check_closed(keep_plus)?;
        let incs: Vec<ExactMatrix> = self.spaces.iter().map(|s| s.inclusion()).collect();
        let dims = self.dims();
        let restrict = |a: &Action| Action {
            shift: a.shift,
            blocks: a
                .blocks
                .iter()
                .enumerate()
                .map(|(g, b)| {
                    b.as_ref().map(|b| {
                        let target = &self.spaces[g + a.shift];
                        let cols: Vec<SparseVec> = self.spaces[g]
                            .basis()
                            .iter()
                            .map(|v| target.coords(&b.apply(v)).expect("closed submodule"))
                            .collect();
                        ExactMatrix::from_columns(target.dim(), &cols)
                    })
                })
                .collect(),
        };
        let action = m.gen_actions().iter().map(restrict).collect();
        let plus = if keep_plus { m.plus_actions().map(|p| p.iter().map(restrict).collect()) } else { None };
        let s = Arc::new(ModuleRep::from_tables(m.alg().clone(), label, dims, action, plus));
        let inc = GradedMap::new(s.clone(), m.clone(), 0, incs.into_iter().map(Some).collect())?;
        Ok((s, inc))
    }
}

/// A quotient module `M/S` with its projection and canonical sections.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: Arc<ModuleRep>,
    pub proj: GradedMap,
    pub sub: Submodule,
    pub sections: Vec<ExactMatrix>,
}

impl Quotient {
    /// The map `M/S → Q` induced by `f: M → Q`, after checking that `f` kills `S`.
    pub fn descend(&self, f: &GradedMap) -> Result<GradedMap> {
        let n = self.module.ndeg();
        let mut blocks = Vec::with_capacity(n);
        for g in 0..n {
            match f.block(g) {
                None => blocks.push(None),
                Some(m) => {
                    for (k, v) in self.sub.spaces[g].basis().iter().enumerate() {
                        if !m.apply(v).is_zero() {
                            return Err(JetError::FactorizationFailure(format!(
                                "map {} -> {} does not vanish on the relations of {} (degree {g}, relation {k})",
                                f.source.label(),
                                f.target.label(),
                                self.module.label()
                            )));
                        }
                    }
                    blocks.push(Some(m.mul(&self.sections[g])));
                }
            }
        }
        let mut out = GradedMap::new(self.module.clone(), f.target.clone(), f.shift, blocks)?;
        out.certified_order = f.certified_order;
        Ok(out)
    }

    /// A representative in `M` of a class in degree `g`.
    pub fn lift(&self, g: usize, v: &SparseVec) -> SparseVec {
        self.sections[g].apply(v)
    }
}

/// `A / (elements)` for homogeneous algebra elements.
pub fn quotient_of_algebra(alg: &Arc<AlgebraRep>, elements: &[(usize, SparseVec)], label: &str) -> Result<Arc<ModuleRep>> {
    let a = Arc::new(ModuleRep::algebra(alg));
    let sub = Submodule::generated_by(&a, elements, false);
    Ok(sub.quotient(label, false)?.0)
}

/// Cokernel of an A-linear map, as a module.
pub fn cokernel(f: &GradedMap, label: &str) -> Result<Arc<ModuleRep>> {
    let sub = f.image_submodule()?;
    Ok(sub.quotient(label, false)?.0)
}

/// The probe modules used to sample functor identities: `A`, `A/(generators)`, the free
/// module of rank 2, and `A/I` for each extra ideal listed.
pub fn probe_modules(alg: &Arc<AlgebraRep>, extra: &[Vec<(usize, SparseVec)>]) -> Result<Vec<Arc<ModuleRep>>> {
    let mut out = vec![Arc::new(ModuleRep::algebra(alg))];
    let gens: Vec<(usize, SparseVec)> =
        (0..alg.ngens()).map(|i| (alg.gen_degree(i), SparseVec::unit(alg.locate(alg.gen_basis(i)).1))).collect();
    out.push(quotient_of_algebra(alg, &gens, "A/(gens)")?);
    out.push(Arc::new(ModuleRep::free(alg, 2, "A^2")));
    for (k, elems) in extra.iter().enumerate() {
        out.push(quotient_of_algebra(alg, elems, &format!("A/I{k}"))?);
    }
    Ok(out)
}
