//! Algebras, modules, homogeneous maps, Hom and tensor products.

pub mod hom;
pub mod map;
pub mod module;
pub mod poly;
pub mod rep;

pub use hom::{hom_a, tensor_k, tensor_over_a, HomSpace, Side, TensorLayout, TensorOverA};
pub use map::GradedMap;
pub use module::{cokernel, probe_modules, quotient_of_algebra, Action, ModuleRep, Quotient, Submodule};
pub use poly::{parse_poly, Poly};
pub use rep::{build_algebra, monomials_of_degree, AlgebraKind, AlgebraRep, AlgebraSpec, Presentation, Word};
