use std::sync::Arc;

use jetforge::algebra::*;
use jetforge::exactcore::SparseVec;
use jetforge::jets::*;

fn dual() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap()
}

#[test]
fn first_jets_of_dual_numbers() {
    let a = dual();
    let am = algebra_module(&a);
    let j = jet_module(&am, 1).unwrap();
    assert_eq!(j.carrier().dims(), &[3]);
    j.carrier().verify().unwrap();
    j.check_generated().unwrap();
    let pi = jet_project(1, 0, &am).unwrap();
    assert_eq!(pi.kernels()[0].dim(), 1);
    let (_, sk) = symmetric_kernel(&a, 1).unwrap();
    assert_eq!(sk.dims(), vec![1]);
}

#[test]
fn jets_of_polynomial_ring_are_free() {
    let a = build_algebra(&AlgebraSpec::polynomial(&["x"], 6)).unwrap();
    let am = algebra_module(&a);
    for k in 0..4 {
        let j = jet_module(&am, k).unwrap();
        let want: Vec<usize> = (0..7).map(|g| g.min(k) + 1).collect();
        assert_eq!(j.carrier().dims(), want.as_slice());
        j.carrier().verify().unwrap();
    }
    let (_, sk) = symmetric_kernel(&a, 2).unwrap();
    assert_eq!(sk.dims(), vec![0, 0, 1, 1, 1, 1, 1]);
    let c = cojet_glue(1, 1, &am).unwrap();
    assert!(c.is_injective());
}

#[test]
fn jet_tensor_isomorphism() {
    let a = dual();
    let q = quotient_of_algebra(&a, &[(0, SparseVec::unit(1))], "A/e").unwrap();
    for p in [algebra_module(&a), q] {
        for k in 0..3 {
            let iso = jet_tensor_iso(&p, k).unwrap();
            iso.verify().unwrap();
        }
    }
    let b = build_algebra(&AlgebraSpec::polynomial(&["x", "y"], 4)).unwrap();
    let iso = jet_tensor_iso(&algebra_module(&b), 2).unwrap();
    iso.verify().unwrap();
}
