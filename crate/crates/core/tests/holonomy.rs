use std::sync::Arc;

use jetforge::algebra::*;
use jetforge::derham::*;
use jetforge::exactcore::SparseVec;
use jetforge::holonomy::*;
use jetforge::jets::algebra_module;

fn dual() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap()
}

fn cubic() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "x", "x2"], &["x*x = x2", "x*x2 = 0", "x2*x2 = 0"])).unwrap()
}

fn line(t: usize) -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::polynomial(&["x"], t)).unwrap()
}

fn residue(a: &Arc<AlgebraRep>) -> Arc<ModuleRep> {
    let g = a.gen_basis(0);
    let (d, i) = a.locate(g);
    quotient_of_algebra(a, &[(d, SparseVec::unit(i))], "A/(gen)").unwrap()
}

#[test]
fn first_level_is_the_jet_module() {
    let a = line(5);
    let am = algebra_module(&a);
    let h = hol_module(&[1], &am).unwrap();
    assert_eq!(h.carrier.dims(), &[1, 2, 2, 2, 2, 2]);
    assert_eq!(vanishing_index(&am, 5).unwrap(), Some(3));
    assert_eq!(vanishing_index(&residue(&a), 5).unwrap(), Some(3));
}

#[test]
fn split_dimensions() {
    for a in [dual(), line(5)] {
        for s in [vec![1, 1], vec![2, 1], vec![1, 2], vec![2, 2, 1]] {
            let (h, l) = split_dims(&a, &s).unwrap();
            assert_eq!(h, l, "{s:?}");
        }
    }
}

#[test]
fn homotopy_on_test_algebras() {
    for a in [dual(), cubic(), line(6)] {
        for p in [algebra_module(&a), residue(&a)] {
            let c = hol_complex(&[1], &p, 3).unwrap();
            c.verify().unwrap();
            let h = hol_homotopy(&[1], &p, 3, false).unwrap();
            h.verify().unwrap();
            assert!(h.check_closed_form().unwrap() > 0);
            let top = if a.is_graded() { 6 } else { 0 };
            let r = hol_acyclicity(&[1], &p, 3, top, false).unwrap();
            assert_eq!(r.verdict, Verdict::Pass);
            assert!(r.table.is_zero());
        }
    }
}

#[test]
fn general_tau_needs_the_flag() {
    let a = dual();
    let am = algebra_module(&a);
    assert!(hol_homotopy(&[1, 2], &am, 2, false).is_err());
    let h = hol_homotopy(&[1, 2], &am, 2, true).unwrap();
    h.verify().unwrap();
}

#[test]
fn tensor_description() {
    let a = dual();
    let q = residue(&a);
    for p in [algebra_module(&a), q.clone()] {
        let iso = verify_pimpa(&[1], &p, 3).unwrap();
        iso.verify().unwrap();
    }
    let am = algebra_module(&a);
    let f = GradedMap::from_fn(am.clone(), q.clone(), 0, |_, i| Some(if i == 0 { SparseVec::unit(0) } else { SparseVec::new() })).unwrap();
    f.check_a_linear().unwrap();
    pimpa_naturality(&f, &[1], 3).unwrap();
    pimpa_naturality(&f, &[2, 1], 2).unwrap();
}
