use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use jetforge::algebra::*;
use jetforge::diffops::*;
use jetforge::exactcore::{ExactMatrix, Rational, SparseVec};
use jetforge::jets::algebra_module;

fn dual() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap()
}

fn cubic() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "x", "x2"], &["x*x = x2", "x*x2 = 0", "x2*x2 = 0"])).unwrap()
}

fn split_pair() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = e"])).unwrap()
}

fn line(t: usize) -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::polynomial(&["x"], t)).unwrap()
}

fn map(a: &Arc<ModuleRep>, shift: i64, cols: &[&[i64]]) -> GradedMap {
    GradedMap::from_fn(a.clone(), a.clone(), shift, |_, i| {
        Some(SparseVec::from_pairs(cols[i].iter().enumerate().map(|(j, &c)| (j, Rational::from_int(c))).collect()))
    })
    .unwrap()
}

// Dense oracle: Diff_k(A, A) for a finite-dimensional algebra given by its left
// multiplication matrices, as the common kernel of all (k+1)-fold commutators with them.
type Dense = Vec<Vec<BigRational>>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mult_matrices(alg: &AlgebraRep) -> Vec<Dense> {
    let n = alg.total_dim();
    (0..n)
        .map(|c| {
            let mut m = vec![vec![q(0); n]; n];
            for b in 0..n {
                if let Some(v) = alg.mul_basis(c, b) {
                    for (j, r) in v.iter() {
                        let r: i64 = r.to_i64().unwrap();
                        m[j][b] = q(r);
                    }
                }
            }
            m
        })
        .collect()
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![q(0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        let pivot: Vec<BigRational> = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    rows[i][j] -= &f * &pivot[j];
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

fn oracle_diff_dim(alg: &AlgebraRep, k: usize) -> usize {
    let l = mult_matrices(alg);
    let n = alg.total_dim();
    let mut rows = Vec::new();
    // Φ ranges over the n^2 elementary matrices; record every (k+1)-fold commutator.
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..=k {
        words = words.into_iter().flat_map(|w| (0..n).map(move |c| [w.clone(), vec![c]].concat())).collect();
    }
    for w in &words {
        let mut images: Vec<Dense> = Vec::new();
        for e in 0..n * n {
            let mut phi = vec![vec![q(0); n]; n];
            phi[e / n][e % n] = q(1);
            for &c in w {
                let a = matmul(&phi, &l[c]);
                let b = matmul(&l[c], &phi);
                phi = a.iter().zip(&b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect();
            }
            images.push(phi);
        }
        for out in 0..n * n {
            rows.push((0..n * n).map(|e| images[e][out / n][out % n].clone()).collect());
        }
    }
    n * n - dense_rank(rows)
}

#[test]
fn delta_on_dual_numbers() {
    let a = dual();
    let am = algebra_module(&a);
    let phi = map(&am, 0, &[&[0, 0], &[1, 0]]);
    let d = delta_action((0, &SparseVec::unit(1)), &phi).unwrap();
    assert!(d.same_as(&map(&am, 0, &[&[1, 0], &[0, -1]])));
    assert_eq!(diff_order(&phi, 3, VerificationSet::Auto).unwrap(), Order::AtMost(2));
}

#[test]
fn orders_of_familiar_operators() {
    let a = line(5);
    let am = algebra_module(&a);
    let ddx = GradedMap::from_fn(am.clone(), am.clone(), -1, |g, _| {
        Some(if g == 0 { SparseVec::new() } else { SparseVec::unit(0).scale(&Rational::from_int(g as i64)) })
    })
    .unwrap();
    assert_eq!(diff_order(&ddx, 4, VerificationSet::Auto).unwrap(), Order::AtMost(1));
    let d2 = ddx.compose(&ddx).unwrap();
    assert_eq!(diff_order(&d2, 4, VerificationSet::Auto).unwrap(), Order::AtMost(2));

    let b = split_pair();
    let bm = algebra_module(&b);
    // swaps the two idempotents e and 1 - e
    let swap = map(&bm, 0, &[&[1, 0], &[1, -1]]);
    assert_eq!(diff_order(&swap, 6, VerificationSet::Auto).unwrap(), Order::ExceedsMax);
    assert!(certify(&swap, 6, VerificationSet::Auto).is_err());
}

#[test]
fn diff_dims_against_dense_oracle() {
    for alg in [dual(), cubic(), split_pair()] {
        let am = algebra_module(&alg);
        for k in 0..=3 {
            let s = diff_space(&am, &am, k, 0, VerificationSet::Auto).unwrap();
            assert_eq!(s.dim(), oracle_diff_dim(&alg, k), "{} k={k}", alg.fingerprint());
            s.verify(VerificationSet::Basis).unwrap();
        }
    }
    let am = algebra_module(&dual());
    assert_eq!(diff_space(&am, &am, 1, 0, VerificationSet::Auto).unwrap().dim(), 3);
    assert_eq!(diff_space(&am, &am, 2, 0, VerificationSet::Auto).unwrap().dim(), 4);
}

#[test]
fn d_sigma_dims() {
    let a = dual();
    let am = algebra_module(&a);
    assert_eq!(d_sigma_space(&am, &[1], 0, VerificationSet::Auto).unwrap().dim(), 1);
    assert_eq!(d_sigma_space(&am, &[2], 0, VerificationSet::Auto).unwrap().dim(), 2);

    let c = cubic();
    let cm = algebra_module(&c);
    assert_eq!(d_sigma_space(&cm, &[1], 0, VerificationSet::Auto).unwrap().dim(), 2);
    assert_eq!(d_sigma_space(&cm, &[2], 0, VerificationSet::Auto).unwrap().dim(), oracle_diff_dim(&c, 2) - 3);

    let l = line(5);
    let lm = algebra_module(&l);
    for shift in [-2, -1, 0] {
        assert_eq!(d_sigma_space(&lm, &[1, 1], shift, VerificationSet::Auto).unwrap().dim(), 0);
    }
    assert!(d_sigma_space(&lm, &[0, 1], 0, VerificationSet::Auto).is_err());
}

#[test]
fn split_and_glue() {
    for alg in [dual(), cubic()] {
        let am = algebra_module(&alg);
        for k in 1..=2 {
            let s = split_check(&am, k, 0, VerificationSet::Auto).unwrap();
            assert_eq!(s.diff_dim, s.d_dim + s.q_dim);
        }
        let (r, d) = glue_rank(&am, 1, 1, 0, VerificationSet::Auto).unwrap();
        assert_eq!(r, d);
    }
    let s = split_check(&algebra_module(&dual()), 1, 0, VerificationSet::Auto).unwrap();
    assert_eq!((s.diff_dim, s.d_dim, s.q_dim), (3, 1, 2));
}

#[test]
fn paranoid_matches_generators() {
    for alg in [dual(), cubic(), split_pair()] {
        let am = algebra_module(&alg);
        for k in 0..=2 {
            let g = diff_space(&am, &am, k, 0, VerificationSet::Generators).unwrap();
            let b = diff_space(&am, &am, k, 0, VerificationSet::Basis).unwrap();
            assert_eq!(g.array.space, b.array.space);
        }
        for sigma in [vec![1], vec![2, 1]] {
            let g = d_sigma_space(&am, &sigma, 0, VerificationSet::Generators).unwrap();
            let b = d_sigma_space(&am, &sigma, 0, VerificationSet::Basis).unwrap();
            assert_eq!(g.space, b.space);
        }
    }
}

#[test]
fn module_structures_on_diff() {
    let a = dual();
    let am = algebra_module(&a);
    let s = diff_space(&am, &am, 1, 0, VerificationSet::Auto).unwrap();
    let left = s.left.as_ref().unwrap();
    let right = s.right.as_ref().unwrap();
    assert_eq!(left.len(), a.ngens());
    assert_ne!(left[0], right[0]);
    let id = ExactMatrix::identity(s.dim());
    assert_ne!(left[0], id);
}

#[test]
fn representability_on_finite_algebras() {
    for alg in [dual(), cubic()] {
        let am = algebra_module(&alg);
        for sigma in [vec![1], vec![2], vec![1, 1], vec![2, 1]] {
            check_lambda_representability(&am, &sigma, 0, VerificationSet::Auto).unwrap();
        }
        for k in 0..=2 {
            check_jet_factorization(&am, &am, k, 0, VerificationSet::Auto).unwrap();
        }
        for tau in [vec![1], vec![1, 1], vec![2, 1]] {
            check_hol_representability(&am, &am, &tau, 0, VerificationSet::Auto).unwrap();
        }
    }
}
