//! Exact ranks, kernels and quotients over Q.

use jetforge::exactcore::*;

fn main() {
    let m = ExactMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, -1]]);
    let (r, ker, im) = rank_kernel_image(&m);
    println!("rank {r}, kernel dim {}, image dim {}", ker.dim(), im.dim());
    for v in ker.basis() {
        println!("  kernel vector {:?}", v.to_dense(3).iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }

    let w = Subspace::span(2, [&SparseVec::from_dense(&[Rational::one(), Rational::one()])]);
    let swap = ExactMatrix::from_i64(&[&[0, 1], &[1, 0]]);
    let induced = induced_map_on_quotient(&swap, &w, &w).unwrap();
    println!("swap on Q^2 / (1,1) acts as {}", induced.get(0, 0));

    // entries beyond i64 spill into big integers transparently
    let big = Rational::from_int(i64::MAX);
    println!("(2^63 - 1)^2 / 3 = {}", &(&big * &big) / &Rational::from_int(3));
}
