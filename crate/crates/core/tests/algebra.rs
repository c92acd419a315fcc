use std::sync::Arc;

use jetforge::algebra::*;
use jetforge::exactcore::SparseVec;

fn dual() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap()
}

#[test]
fn residue_module_of_dual_numbers() {
    let a = dual();
    let q = quotient_of_algebra(&a, &[(0, SparseVec::unit(1))], "A/e").unwrap();
    assert_eq!(q.dims(), &[1]);
    assert!(q.gen_action(0).blocks[0].as_ref().unwrap().is_zero());
    q.verify().unwrap();
}

#[test]
fn cokernel_of_multiplication_by_x() {
    let a = build_algebra(&AlgebraSpec::polynomial(&["x"], 3)).unwrap();
    let am = Arc::new(ModuleRep::algebra(&a));
    let x = a.gen_basis(0);
    let mul_x = GradedMap::from_fn(am.clone(), am.clone(), 1, |g, _| am.act(x, g, &SparseVec::unit(0))).unwrap();
    let img = mul_x.images();
    let sub = Submodule::from_spaces(&am, img, false).unwrap();
    let (c, _) = sub.quotient("coker", false).unwrap();
    assert_eq!(c.dims(), &[1, 0, 0, 0]);
}

#[test]
fn hom_from_residue_module() {
    let a = dual();
    let q = quotient_of_algebra(&a, &[(0, SparseVec::unit(1))], "A/e").unwrap();
    let am = Arc::new(ModuleRep::algebra(&a));
    let h = hom_a(&q, &am, 0).unwrap();
    assert_eq!(h.dim(), 1);
    let h2 = hom_a(&am, &am, 0).unwrap();
    assert_eq!(h2.dim(), 2);
}

#[test]
fn tensor_of_residue_modules() {
    let a = dual();
    let q = quotient_of_algebra(&a, &[(0, SparseVec::unit(1))], "A/e").unwrap();
    let qp = q.with_plus(Some(q.gen_actions().to_vec()));
    let t = tensor_over_a(&qp, &q, "t").unwrap();
    assert_eq!(t.module.dims(), &[1]);
    let ab = ModuleRep::algebra_bimodule(&a);
    let t2 = tensor_over_a(&ab, &q, "t2").unwrap();
    assert_eq!(t2.module.dims(), &[1]);
}

#[test]
fn graded_quotient_dims() {
    let a = build_algebra(&AlgebraSpec::graded(&["x", "y"], &["x^2 + y^2"], 4)).unwrap();
    assert_eq!(a.dims(), vec![1, 2, 2, 2, 2]);
    let m = ModuleRep::free(&a, 2, "A^2");
    m.verify().unwrap();
}
