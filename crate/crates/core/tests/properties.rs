use std::sync::Arc;

use proptest::prelude::*;

use jetforge::algebra::*;
use jetforge::derham::{cohomology, derham};
use jetforge::diffops::{delta_action, diff_order, diff_space, Order, VerificationSet};
use jetforge::exactcore::{ExactMatrix, SparseVec};
use jetforge::holonomy::hol_complex;
use jetforge::jets::{algebra_module, jet_project};

fn dual() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap()
}

fn cubic() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "x", "x2"], &["x*x = x2", "x*x2 = 0", "x2*x2 = 0"])).unwrap()
}

fn poly(vars: &[&str], t: usize) -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::polynomial(vars, t)).unwrap()
}

fn finite(i: usize) -> Arc<AlgebraRep> {
    if i == 0 {
        dual()
    } else {
        cubic()
    }
}

fn seq(max_len: usize, max_entry: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=max_entry, 1..=max_len)
}

fn endo(alg: &Arc<AlgebraRep>, entries: &[i64]) -> GradedMap {
    let m = algebra_module(alg);
    let n = alg.total_dim();
    let rows: Vec<&[i64]> = entries[..n * n].chunks(n).collect();
    GradedMap::new(m.clone(), m, 0, vec![Some(ExactMatrix::from_i64(&rows))]).unwrap()
}

fn basis_elem(alg: &AlgebraRep, b: usize) -> (usize, SparseVec) {
    (alg.degree_of(b), SparseVec::unit(alg.locate(b).1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// A quadratic hypersurface in the plane has Hilbert function 1, 2, 2, 2, ...
    #[test]
    fn quadric_quotients(a in -2i64..=2, b in -2i64..=2, c in -2i64..=2) {
        prop_assume!(a != 0 || b != 0 || c != 0);
        let rel = format!("{a}*x^2 + {b}*x*y + {c}*y^2");
        let alg = build_algebra(&AlgebraSpec::graded(&["x", "y"], &[&rel], 5)).unwrap();
        alg.verify().unwrap();
        let expected: Vec<usize> = (0..=5).map(|d| if d < 2 { d + 1 } else { 2 }).collect();
        prop_assert_eq!(alg.dims(), expected);
        for i in 0..alg.total_dim() {
            for j in 0..alg.total_dim() {
                prop_assert_eq!(alg.mul_basis(i, j), alg.mul_basis(j, i));
            }
        }
    }

    /// Degree-g pieces do not depend on how far the window extends past g.
    #[test]
    fn truncation_independence(sigma in seq(3, 2), t1 in 2usize..=4, extra in 1usize..=2, two in any::<bool>()) {
        let vars: &[&str] = if two { &["x", "y"] } else { &["x"] };
        let t1 = if two { t1.min(3) } else { t1 };
        let small = derham(&poly(vars, t1));
        let large = derham(&poly(vars, t1 + extra));
        let ls = small.lambda(&sigma).unwrap();
        let ll = large.lambda(&sigma).unwrap();
        prop_assert_eq!(ls.carrier.dims(), &ll.carrier.dims()[..=t1]);
        let hs = cohomology(&small.complex(&sigma, 1).unwrap(), t1).unwrap();
        let hl = cohomology(&large.complex(&sigma, 1).unwrap(), t1).unwrap();
        prop_assert_eq!(hs, hl);
    }

    #[test]
    fn derham_complexes_square_to_zero(sigma in seq(3, 3), which in 0usize..3) {
        let alg = match which {
            0 => dual(),
            1 => cubic(),
            _ => poly(&["x"], 5),
        };
        derham(&alg).complex(&sigma, 2).unwrap().verify().unwrap();
    }

    #[test]
    fn hol_complexes_square_to_zero(tau in seq(3, 2), which in 0usize..2, probe in 0usize..3) {
        let alg = finite(which);
        let p = probe_modules(&alg, &[]).unwrap()[probe].clone();
        hol_complex(&tau, &p, 2).unwrap().verify().unwrap();
    }

    #[test]
    fn deltas_commute(which in 0usize..2, a in 0usize..3, b in 0usize..3, entries in prop::collection::vec(-3i64..=3, 9)) {
        let alg = finite(which);
        let n = alg.total_dim();
        let (a, b) = (a % n, b % n);
        let phi = endo(&alg, &entries);
        let ea = basis_elem(&alg, a);
        let eb = basis_elem(&alg, b);
        let ab = delta_action((ea.0, &ea.1), &delta_action((eb.0, &eb.1), &phi).unwrap()).unwrap();
        let ba = delta_action((eb.0, &eb.1), &delta_action((ea.0, &ea.1), &phi).unwrap()).unwrap();
        prop_assert!(ab.same_as(&ba));
    }

    /// Commutators with an algebra element lower the order by one.
    #[test]
    fn delta_lowers_order(which in 0usize..2, a in 0usize..3, entries in prop::collection::vec(-3i64..=3, 9)) {
        let alg = finite(which);
        let phi = endo(&alg, &entries);
        let e = basis_elem(&alg, a % alg.total_dim());
        let d = delta_action((e.0, &e.1), &phi).unwrap();
        match diff_order(&phi, 6, VerificationSet::Auto).unwrap() {
            Order::AtMost(k) if k >= 1 => {
                let Order::AtMost(j) = diff_order(&d, 6, VerificationSet::Auto).unwrap() else {
                    return Err(TestCaseError::fail("delta raised the order"));
                };
                prop_assert!(j < k);
            }
            Order::AtMost(_) => prop_assert!(d.is_zero()),
            Order::ExceedsMax => {}
        }
    }

    #[test]
    fn jet_projections_compose(which in 0usize..2, probe in 0usize..3, s in 0usize..=2, dt in 0usize..=1, du in 0usize..=1) {
        let alg = finite(which);
        let p = probe_modules(&alg, &[]).unwrap()[probe].clone();
        let (t, u) = (s + dt, s + dt + du);
        let lhs = jet_project(t, s, &p).unwrap().compose(&jet_project(u, t, &p).unwrap()).unwrap();
        prop_assert!(lhs.same_as(&jet_project(u, s, &p).unwrap()));
    }
}

/// `dim Diff_k` grows with `k` and stops once the algebra is exhausted.
#[test]
fn diff_dims_stabilize() {
    for alg in [dual(), cubic()] {
        let am = algebra_module(&alg);
        let dims: Vec<usize> = (0..=5).map(|k| diff_space(&am, &am, k, 0, VerificationSet::Auto).unwrap().dim()).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]), "{dims:?}");
        let n = alg.total_dim();
        assert_eq!(dims[5], n * n);
        assert_eq!(dims[4], dims[5]);
    }
}
