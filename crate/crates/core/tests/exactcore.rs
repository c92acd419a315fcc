use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use jetforge::error::JetError;
use jetforge::exactcore::*;

fn v(xs: &[i64]) -> SparseVec {
    SparseVec::from_dense(&xs.iter().map(|&x| Rational::from_int(x)).collect::<Vec<_>>())
}

fn big(r: &Rational) -> BigRational {
    BigRational::new(r.numer(), r.denom())
}

#[test]
fn rank_kernel_image_examples() {
    let (r, k, i) = rank_kernel_image(&ExactMatrix::zero(3, 3));
    assert_eq!((r, k.dim(), i.dim()), (0, 3, 0));
    let (r, k, _) = rank_kernel_image(&ExactMatrix::identity(4));
    assert_eq!((r, k.dim()), (4, 0));
    let (r, k, _) = rank_kernel_image(&ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]));
    assert_eq!(r, 1);
    assert_eq!(k, Subspace::span(2, [&v(&[2, -1])]));
}

#[test]
fn quotient_examples() {
    let (p, _) = quotient_space(3, &Subspace::zero(3)).unwrap();
    assert_eq!(p, ExactMatrix::identity(3));
    let (p, _) = quotient_space(3, &Subspace::full(3)).unwrap();
    assert_eq!(p.rows(), 0);
    let (p, s) = quotient_space(3, &Subspace::span(3, [&v(&[1, 0, 0])])).unwrap();
    assert_eq!(p.rows(), 2);
    assert!(p.apply(&v(&[1, 0, 0])).is_zero());
    assert_eq!(p.mul(&s), ExactMatrix::identity(2));
    assert!(matches!(quotient_space(2, &Subspace::zero(3)), Err(JetError::DimensionMismatch(_))));
}

#[test]
fn induced_map_examples() {
    let w = Subspace::span(2, [&v(&[1, 1])]);
    let id = induced_map_on_quotient(&ExactMatrix::identity(2), &w, &w).unwrap();
    assert_eq!(id, ExactMatrix::identity(1));
    let z = induced_map_on_quotient(&ExactMatrix::zero(2, 2), &w, &w).unwrap();
    assert!(z.is_zero());
    // (1,0) goes to (0,1), which is -(1,0) modulo (1,1)
    let swap = induced_map_on_quotient(&ExactMatrix::from_i64(&[&[0, 1], &[1, 0]]), &w, &w).unwrap();
    assert_eq!(swap, ExactMatrix::identity(1).neg());
    let bad = Subspace::span(2, [&v(&[1, 0])]);
    let f = ExactMatrix::from_i64(&[&[0, 1], &[1, 0]]);
    assert!(matches!(induced_map_on_quotient(&f, &bad, &bad), Err(JetError::FactorizationFailure(_))));
}

fn matrix(max_dim: usize) -> impl Strategy<Value = ExactMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r).prop_map(move |rows| {
            let refs: Vec<&[i64]> = rows.iter().map(|x| x.as_slice()).collect();
            if r == 0 {
                ExactMatrix::zero(0, c)
            } else {
                ExactMatrix::from_i64(&refs)
            }
        })
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        (-50i64..50, 1i64..50).prop_map(|(n, d)| Rational::new(n, d)),
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_nullity_and_transpose(m in matrix(6)) {
        let (r, k, i) = rank_kernel_image(&m);
        prop_assert_eq!(r + k.dim(), m.cols());
        prop_assert_eq!(r, i.dim());
        prop_assert_eq!(r, rank(&m.transpose()));
        for b in k.basis() {
            prop_assert!(m.apply(b).is_zero());
        }
        for c in m.columns() {
            prop_assert!(i.contains(&c));
        }
    }

    #[test]
    fn echelon_bases_are_canonical(m in matrix(5)) {
        // the same span from a shuffled, rescaled generating set
        let cols = m.columns();
        let mut other: Vec<SparseVec> = cols.iter().rev().map(|c| c.scale(&Rational::from_int(-2))).collect();
        if let (Some(a), Some(b)) = (cols.first(), cols.last()) {
            other.push(a.add(b));
        }
        prop_assert_eq!(Subspace::span(m.rows(), &cols), Subspace::span(m.rows(), &other));
    }

    #[test]
    fn quotient_projection_and_section(m in matrix(6)) {
        let w = image(&m);
        let (p, s) = quotient_space(m.rows(), &w).unwrap();
        prop_assert_eq!(p.rows(), m.rows() - w.dim());
        prop_assert!(p.mul(&w.inclusion()).is_zero());
        prop_assert_eq!(p.mul(&s), ExactMatrix::identity(p.rows()));
    }

    #[test]
    fn induced_maps_commute_with_projections(f in matrix(5), g in matrix(5)) {
        // W_src = ker f + im(g restricted), W_dst = f(W_src) + something extra
        let n = f.cols();
        let m = f.rows();
        let extra = if g.rows() == n { image(&g) } else { Subspace::zero(n) };
        let w_src = kernel(&f).sum(&extra);
        let w_dst = w_src.image_under(&f);
        let fbar = induced_map_on_quotient(&f, &w_src, &w_dst).unwrap();
        let (ps, _) = quotient_space(n, &w_src).unwrap();
        let (pd, _) = quotient_space(m, &w_dst).unwrap();
        prop_assert_eq!(fbar.mul(&ps), pd.mul(&f));
    }

    #[test]
    fn solve_finds_exact_preimages(m in matrix(5), x in prop::collection::vec(-3i64..=3, 5)) {
        let x = v(&x[..m.cols()]);
        let b = ExactMatrix::from_columns(m.rows(), &[m.apply(&x)]);
        let y = solve(&m, &b).expect("solvable by construction");
        prop_assert_eq!(m.mul(&y), b);
    }

    #[test]
    fn rational_arithmetic_matches_bigrational(a in rational(), b in rational()) {
        prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
        prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
        prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
        if !b.is_zero() {
            prop_assert_eq!(big(&(&a / &b)), big(&a) / big(&b));
        }
        prop_assert_eq!(a < b, big(&a) < big(&b));
        let n = big(&a);
        prop_assert!(num_integer::Integer::gcd(n.numer(), n.denom()) == BigInt::from(1) || a.is_zero());
    }
}
