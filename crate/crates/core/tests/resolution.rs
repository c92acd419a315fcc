use std::sync::Arc;

use jetforge::algebra::*;
use jetforge::derham::Verdict;
use jetforge::error::JetError;
use jetforge::resolution::*;

fn dual() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap()
}

fn line(t: usize) -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::polynomial(&["x"], t)).unwrap()
}

#[test]
fn kernel_modules() {
    // I/I^3 -> I/I^2 has kernel I^2/I^3
    let a = line(5);
    let k = kernel_module(&a, &[2], 1).unwrap();
    assert_eq!(k.dims(), &[0, 0, 1, 1, 1, 1]);
    let k = kernel_module(&dual(), &[2], 1).unwrap();
    assert_eq!(k.dims(), &[1]);
    assert!(matches!(kernel_module(&a, &[1], 1), Err(JetError::UnsupportedIndex(_))));
    assert!(matches!(kernel_module(&a, &[2, 1], 2), Err(JetError::UnsupportedIndex(_))));
}

#[test]
fn rho_is_onto_on_the_line() {
    let a = line(6);
    let (kc, _) = kernel_complex(&a, &[1], 1, 3).unwrap();
    let rho = rho_map(&a, &[1], 1, 2).unwrap();
    for (m, r) in rho.iter().enumerate() {
        assert!(r.is_surjective(), "rho^{}", m + 1);
        assert_eq!(r.target.dims(), kc.modules[m + 1].dims());
    }
}

#[test]
fn psi_descends() {
    let a = line(6);
    let p = psi_map(&a, &[1], 1, 1, 1).unwrap();
    assert_eq!(p.components.len(), 2);
    for d in &p.defects {
        assert!(d.is_zero());
        assert!(d.blocks.iter().flatten().any(|b| b.rows() > 0 && b.cols() > 0));
    }
    assert!(!p.components[0].is_zero());
    assert!(p.components[0].is_injective());
}

#[test]
fn resolution_on_the_line() {
    let a = line(6);
    let r = verify_resolution(&a, &[1], 1, 3, 2).unwrap();
    for n in &r.nodes {
        assert!(n.failing_grades.is_empty(), "{n:?}");
    }
    assert!(r.rho_failures.is_empty());
    assert!(r.chain_maps);
    assert!(r.kernel_cohomology.is_zero());
    assert!(r.rigidity_consistent);
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.psi_zero_degree.iter().all(|(_, z)| !z));
    assert!(!r.zero_degree_replaced_exact);
}

#[test]
fn resolution_on_the_plane() {
    let a = build_algebra(&AlgebraSpec::polynomial(&["x", "y"], 3)).unwrap();
    let r = verify_resolution(&a, &[1], 1, 2, 2).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn second_step_on_the_plane() {
    let a = build_algebra(&AlgebraSpec::polynomial(&["x", "y"], 4)).unwrap();
    let r = verify_resolution(&a, &[1], 1, 3, 2).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.nodes.len(), 8);
    assert_eq!(r.shifts, vec![-1, -2, -3]);
    let r = verify_resolution(&a, &[1, 1], 2, 2, 2).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.kernel_cohomology.is_zero());
}
