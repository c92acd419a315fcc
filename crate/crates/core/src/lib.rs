//! Exact computations of jet modules, higher de Rham complexes and holonomy complexes
//! over commutative Q-algebras.

pub mod algebra;
pub mod cli;
pub mod derham;
pub mod diffops;
pub mod error;
pub mod exactcore;
pub mod holonomy;
pub mod jets;
pub mod resolution;

pub use error::{JetError, Result};
