use std::sync::Arc;

use jetforge::algebra::*;
use jetforge::derham::*;
use jetforge::error::JetError;
use jetforge::exactcore::{Rational, SparseVec};

fn dual() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap()
}

fn line(t: usize) -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::polynomial(&["x"], t)).unwrap()
}

#[test]
fn lambda_dims_over_dual_numbers() {
    let a = dual();
    let dr = derham(&a);
    assert_eq!(dr.lambda(&[1]).unwrap().carrier.dims(), &[1]);
    assert_eq!(dr.lambda(&[2]).unwrap().carrier.dims(), &[2]);
    let d2 = dr.differential(&[2]).unwrap();
    assert!(d2.apply(0, &SparseVec::unit(0)).unwrap().is_zero());
    assert!(!d2.apply(0, &SparseVec::unit(1)).unwrap().is_zero());
    assert_eq!(d2.ranks(), vec![1]);
}

#[test]
fn lambda_over_the_line() {
    let a = line(6);
    let dr = derham(&a);
    let l1 = dr.lambda(&[1]).unwrap();
    assert_eq!(l1.carrier.dims(), &[0, 1, 1, 1, 1, 1, 1]);
    assert!(dr.lambda(&[1, 1]).unwrap().carrier.is_zero());
    assert!(dr.lambda(&[1, 1, 1]).unwrap().carrier.is_zero());

    // d(x^2) = 2x dx
    let d = dr.differential(&[1]).unwrap();
    let dx = d.apply(1, &SparseVec::unit(0)).unwrap();
    let x_dx = l1.carrier.act(1, 1, &dx).unwrap();
    let dx2 = d.apply(2, &SparseVec::unit(0)).unwrap();
    assert_eq!(dx2, x_dx.scale(&Rational::from_int(2)));
    assert!(d.apply(0, &SparseVec::unit(0)).unwrap().is_zero());
}

#[test]
fn ordinary_cohomology() {
    let a = line(6);
    let c = derham(&a).complex(&[1], 1).unwrap();
    let h = cohomology(&c, 6).unwrap();
    assert_eq!(h.dims[0], vec![1, 0, 0, 0, 0, 0, 0]);
    assert_eq!(h.dims[1], vec![0; 7]);

    let b = dual();
    let c = derham(&b).complex(&[1], 1).unwrap();
    let h = cohomology(&c, 0).unwrap();
    assert_eq!(h.dims, vec![vec![1], vec![0]]);
    assert!(matches!(cohomology(&c, 1), Err(JetError::UnsoundGrade { grade: 1, window: 0 })));
}

#[test]
fn sigma_two_two_is_a_complex() {
    let a = line(5);
    let c = derham(&a).complex(&[2, 2], 2).unwrap();
    assert_eq!(c.len(), 4);
    c.verify().unwrap();
    assert!(c.differentials[0].check_a_linear().is_err());
}

#[test]
fn comparison_components_are_onto_and_commute() {
    let a = line(5);
    let dr = derham(&a);
    let f = dr.compare(&[2], &[1], 3).unwrap();
    assert!(f[1].is_surjective());
    let t = dr.tower.chain(&extend_seq(&[2], 3)).unwrap();
    let s = dr.tower.chain(&extend_seq(&[1], 3)).unwrap();
    for m in 1..f.len() {
        assert!(f[m].is_surjective());
        let lhs = f[m].compose(t[m].d.as_ref().unwrap()).unwrap();
        let rhs = s[m].d.as_ref().unwrap().compose(&f[m - 1]).unwrap();
        assert!(lhs.same_as(&rhs), "square {m}");
    }
    let same = dr.tower.chain(&[2, 1]).unwrap();
    let id = dr.compare(&[2, 1], &[2, 1], 2).unwrap();
    for (m, g) in id.iter().enumerate() {
        assert!(g.same_as(&GradedMap::identity(&same[m].carrier)), "component {m}");
    }
}

#[test]
fn rigidity_on_the_line() {
    let a = line(6);
    let r = rigidity_check(&a, &[2, 1], &[1, 1], 2, 6).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.mismatch.is_none());
    let ker = kernel_lemma_kernels(&a, &[], &[2, 3]).unwrap();
    assert_eq!(ker[0], ker[1]);
    assert_eq!(ker[0].iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![1, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn rigidity_on_dual_numbers_is_diagnostic() {
    let a = dual();
    let r = rigidity_check(&a, &[2, 1], &[1, 1], 2, 0).unwrap();
    assert_eq!(r.verdict, Verdict::Diagnostic);
}

#[test]
fn plane_forms_and_rigidity() {
    let a = build_algebra(&AlgebraSpec::polynomial(&["x", "y"], 4)).unwrap();
    let dr = derham(&a);
    assert_eq!(dr.lambda(&[1]).unwrap().carrier.dims(), &[0, 2, 4, 6, 8]);
    assert_eq!(dr.lambda(&[1, 1]).unwrap().carrier.dims(), &[0, 0, 1, 2, 3]);
    assert!(dr.lambda(&[1, 1, 1]).unwrap().carrier.is_zero());
    let h = cohomology(&dr.complex(&[1], 2).unwrap(), 4).unwrap();
    assert_eq!(h.dims[0], vec![1, 0, 0, 0, 0]);
    assert!(h.dims[1..].iter().flatten().all(|&d| d == 0));
    let r = rigidity_check(&a, &[2, 1], &[1, 1], 2, 4).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn words_generate_lambda() {
    for (a, gm) in [(line(5), 5), (dual(), 0), (build_algebra(&AlgebraSpec::polynomial(&["x", "y"], 3)).unwrap(), 3)] {
        let dr = derham(&a);
        for sigma in [vec![1], vec![2], vec![1, 1], vec![2, 1], vec![1, 2]] {
            dr.check_generated_by_words(&sigma, gm).unwrap();
        }
    }
}

#[test]
fn relation_maps_are_injective_when_smooth() {
    for a in [line(6), build_algebra(&AlgebraSpec::polynomial(&["x", "y"], 4)).unwrap()] {
        let dr = derham(&a);
        for sigma in [vec![1, 1], vec![2, 1], vec![1, 2], vec![1, 1, 1], vec![2, 2]] {
            assert!(dr.relation_injective(&sigma).unwrap(), "{sigma:?}");
        }
    }
    let dr = derham(&dual());
    let r: Vec<bool> = [vec![1, 1], vec![2, 1], vec![1, 2]].iter().map(|s| dr.relation_injective(s).unwrap()).collect();
    println!("dual numbers, relation injective for (1,1), (2,1), (1,2): {r:?}");
}
