//! Homogeneous Q-linear maps between graded modules.

use std::sync::Arc;

use super::module::{ModuleRep, Submodule};
use crate::error::{JetError, Result};
use crate::exactcore::{rank_kernel_image, ExactMatrix, Rational, SparseVec, Subspace};

/// A Q-linear map raising internal degree by `shift`. `blocks[g]` maps source degree `g`
/// into target degree `g + shift`; it is `None` when that degree lies outside the window.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: Arc<ModuleRep>,
    pub target: Arc<ModuleRep>,
    pub shift: i64,
    pub blocks: Vec<Option<ExactMatrix>>,
    pub certified_order: Option<usize>,
}

fn target_degree(g: usize, shift: i64, n: usize) -> Option<usize> {
    let t = g as i64 + shift;
    (t >= 0 && (t as usize) < n).then_some(t as usize)
}

impl GradedMap {
    pub fn new(source: Arc<ModuleRep>, target: Arc<ModuleRep>, shift: i64, blocks: Vec<Option<ExactMatrix>>) -> Result<Self> {
        if blocks.len() != source.ndeg() {
            return Err(JetError::DimensionMismatch(format!(
                "map {} -> {} has {} blocks for {} degrees",
                source.label(),
                target.label(),
                blocks.len(),
                source.ndeg()
            )));
        }
        for (g, b) in blocks.iter().enumerate() {
            if let Some(m) = b {
                let t = target_degree(g, shift, target.ndeg()).ok_or_else(|| {
                    JetError::DimensionMismatch(format!("block in degree {g} lands outside the window"))
                })?;
                if m.rows() != target.dim(t) || m.cols() != source.dim(g) {
                    return Err(JetError::DimensionMismatch(format!(
                        "map {} -> {}: block in degree {g} is {}x{}, expected {}x{}",
                        source.label(),
                        target.label(),
                        m.rows(),
                        m.cols(),
                        target.dim(t),
                        source.dim(g)
                    )));
                }
            }
        }
        Ok(GradedMap { source, target, shift, blocks, certified_order: None })
    }

    /// Builds the map from its values on basis vectors: `f(g, i)` is the image of the `i`-th
    /// basis vector of degree `g`, or `None` if undefined there.
    pub fn from_fn(
        source: Arc<ModuleRep>,
        target: Arc<ModuleRep>,
        shift: i64,
        mut f: impl FnMut(usize, usize) -> Option<SparseVec>,
    ) -> Result<Self> {
        let n = source.ndeg();
        let mut blocks = Vec::with_capacity(n);
        for g in 0..n {
            let Some(t) = target_degree(g, shift, target.ndeg()) else {
                blocks.push(None);
                continue;
            };
            let mut cols = Vec::with_capacity(source.dim(g));
            let mut ok = true;
            for i in 0..source.dim(g) {
                match f(g, i) {
                    Some(v) => cols.push(v),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            blocks.push(ok.then(|| ExactMatrix::from_columns(target.dim(t), &cols)));
        }
        Self::new(source, target, shift, blocks)
    }

    pub fn identity(m: &Arc<ModuleRep>) -> Self {
        let blocks = m.dims().iter().map(|&d| Some(ExactMatrix::identity(d))).collect();
        GradedMap { source: m.clone(), target: m.clone(), shift: 0, blocks, certified_order: Some(0) }
    }

    pub fn zero(source: &Arc<ModuleRep>, target: &Arc<ModuleRep>, shift: i64) -> Self {
        let blocks = (0..source.ndeg())
            .map(|g| target_degree(g, shift, target.ndeg()).map(|t| ExactMatrix::zero(target.dim(t), source.dim(g))))
            .collect();
        GradedMap { source: source.clone(), target: target.clone(), shift, blocks, certified_order: Some(0) }
    }

    pub fn with_order(mut self, k: usize) -> Self {
        self.certified_order = Some(k);
        self
    }

    pub fn block(&self, g: usize) -> Option<&ExactMatrix> {
        self.blocks.get(g).and_then(|b| b.as_ref())
    }

    pub fn target_degree(&self, g: usize) -> Option<usize> {
        target_degree(g, self.shift, self.target.ndeg())
    }

    pub fn apply(&self, g: usize, v: &SparseVec) -> Option<SparseVec> {
        self.block(g).map(|m| m.apply(v))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GradedMap) -> Result<GradedMap> {
        if inner.target.dims() != self.source.dims() {
            return Err(JetError::DimensionMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source.label(),
                self.target.label(),
                inner.source.label(),
                inner.target.label()
            )));
        }
        let blocks = (0..inner.source.ndeg())
            .map(|g| {
                let a = inner.block(g)?;
                let t = inner.target_degree(g)?;
                let b = self.block(t)?;
                Some(b.mul(a))
            })
            .collect();
        let order = match (self.certified_order, inner.certified_order) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let mut out = GradedMap::new(inner.source.clone(), self.target.clone(), self.shift + inner.shift, blocks)?;
        out.certified_order = order;
        Ok(out)
    }

    fn zip(&self, other: &GradedMap, op: impl Fn(&ExactMatrix, &ExactMatrix) -> ExactMatrix) -> Result<GradedMap> {
        if self.shift != other.shift || self.source.dims() != other.source.dims() || self.target.dims() != other.target.dims() {
            return Err(JetError::DimensionMismatch("maps have different shapes".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(op(a, b)),
                _ => None,
            })
            .collect();
        let order = match (self.certified_order, other.certified_order) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(GradedMap { source: self.source.clone(), target: self.target.clone(), shift: self.shift, blocks, certified_order: order })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Rational) -> GradedMap {
        let mut out = self.clone();
        out.blocks = self.blocks.iter().map(|b| b.as_ref().map(|m| m.scale(c))).collect();
        out
    }

    /// Same matrices, reinterpreted between modules with identical dimensions.
    pub fn retarget(&self, source: &Arc<ModuleRep>, target: &Arc<ModuleRep>) -> Result<GradedMap> {
        GradedMap::new(source.clone(), target.clone(), self.shift, self.blocks.clone()).map(|mut m| {
            m.certified_order = self.certified_order;
            m
        })
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|m| m.is_zero())
    }

    /// Location `(degree, row, column)` of the first nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize)> {
        self.blocks
            .iter()
            .enumerate()
            .find_map(|(g, b)| b.as_ref().and_then(|m| m.first_nonzero()).map(|(r, c)| (g, r, c)))
    }

    /// Equality of all blocks defined on both sides.
    pub fn same_as(&self, other: &GradedMap) -> bool {
        self.shift == other.shift
            && self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => a == b,
                (None, None) => true,
                _ => false,
            })
    }

    /// Per-source-degree kernels (degrees without a block report the whole space).
    pub fn kernels(&self) -> Vec<Subspace> {
        (0..self.source.ndeg())
            .map(|g| match self.block(g) {
                Some(m) => rank_kernel_image(m).1,
                None => Subspace::full(self.source.dim(g)),
            })
            .collect()
    }

    /// Per-target-degree images.
    pub fn images(&self) -> Vec<Subspace> {
        let mut out: Vec<Subspace> = self.target.dims().iter().map(|&d| Subspace::zero(d)).collect();
        for g in 0..self.source.ndeg() {
            if let (Some(m), Some(t)) = (self.block(g), self.target_degree(g)) {
                out[t] = rank_kernel_image(m).2;
            }
        }
        out
    }

    /// Per-source-degree ranks.
    pub fn ranks(&self) -> Vec<usize> {
        (0..self.source.ndeg()).map(|g| self.block(g).map_or(0, crate::exactcore::rank)).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.ranks().iter().zip(self.source.dims()).all(|(r, d)| r == d)
    }

    pub fn is_surjective(&self) -> bool {
        self.images().iter().all(|s| s.is_full())
    }

    /// Checks `f(x·p) = x·f(p)` for every generator where both sides are in window.
    pub fn check_a_linear(&self) -> Result<()> {
        let alg = self.source.alg();
        for i in 0..alg.ngens() {
            let s = alg.gen_degree(i);
            let xs = self.source.gen_action(i);
            let xt = self.target.gen_action(i);
            for g in 0..self.source.ndeg() {
                let (Some(f), Some(a)) = (self.block(g), xs.blocks[g].as_ref()) else { continue };
                let Some(f2) = self.block(g + s) else { continue };
                let Some(t) = self.target_degree(g) else { continue };
                let Some(b) = xt.blocks[t].as_ref() else { continue };
                if f2.mul(a) != b.mul(f) {
                    return Err(JetError::FactorizationFailure(format!(
                        "map {} -> {} is not A-linear for generator {} in degree {}",
                        self.source.label(),
                        self.target.label(),
                        alg.generator_names()[i],
                        g
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kernel_submodule(&self) -> Result<Submodule> {
        let spaces = self.kernels();
        Submodule::from_spaces(&self.source, spaces, false)
    }

    pub fn image_submodule(&self) -> Result<Submodule> {
        Submodule::from_spaces(&self.target, self.images(), false)
    }
}
