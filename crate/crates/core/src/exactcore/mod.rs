//! Exact rational linear algebra: ranks, kernels, images, quotients and induced maps.

mod echelon;
mod matrix;
mod rational;
mod vector;

pub use echelon::{image, kernel, rank, rank_kernel_image, solve, EchelonBuilder, QuotientSpace, Subspace};
pub use matrix::ExactMatrix;
pub use rational::{ParseRationalError, Rational};
pub use vector::SparseVec;

use crate::error::{JetError, Result};

/// Projection onto `Q^ambient / W` and the canonical section.
pub fn quotient_space(ambient_dim: usize, w: &Subspace) -> Result<(ExactMatrix, ExactMatrix)> {
    if w.ambient_dim() != ambient_dim {
        return Err(JetError::DimensionMismatch(format!(
            "subspace lives in dimension {} but the ambient space has dimension {ambient_dim}",
            w.ambient_dim()
        )));
    }
    let q = QuotientSpace::new(w.clone());
    Ok((q.proj(), q.section()))
}

/// The map `Q^n / W_src -> Q^m / W_dst` induced by `f`, after checking `f(W_src) ⊆ W_dst`.
pub fn induced_map_on_quotient(f: &ExactMatrix, w_src: &Subspace, w_dst: &Subspace) -> Result<ExactMatrix> {
    if w_src.ambient_dim() != f.cols() || w_dst.ambient_dim() != f.rows() {
        return Err(JetError::DimensionMismatch(format!(
            "map is {}x{} but the subspaces live in dimensions {} and {}",
            f.rows(),
            f.cols(),
            w_src.ambient_dim(),
            w_dst.ambient_dim()
        )));
    }
    for (k, b) in w_src.basis().iter().enumerate() {
        if !w_dst.contains(&f.apply(b)) {
            return Err(JetError::FactorizationFailure(format!(
                "image of source-relation basis vector {k} leaves the target relations"
            )));
        }
    }
    let src = QuotientSpace::new(w_src.clone());
    let dst = QuotientSpace::new(w_dst.clone());
    Ok(dst.proj().mul(&f.mul(&src.section())))
}
