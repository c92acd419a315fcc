//! Spaces of differential operators, their orders, and the Diff = D + Q splitting.

use jetforge::algebra::{build_algebra, AlgebraSpec, GradedMap};
use jetforge::diffops::{d_sigma_space, diff_order, diff_space, split_check, VerificationSet};
use jetforge::exactcore::{Rational, SparseVec};
use jetforge::jets::algebra_module;

fn main() -> jetforge::Result<()> {
    let line = build_algebra(&AlgebraSpec::polynomial(&["x"], 6))?;
    let a = algebra_module(&line);
    let ddx = GradedMap::from_fn(a.clone(), a.clone(), -1, |g, _| {
        Some(if g == 0 { SparseVec::new() } else { SparseVec::unit(0).scale(&Rational::from_int(g as i64)) })
    })?;
    println!("d/dx has order {:?}", diff_order(&ddx, 4, VerificationSet::Auto)?);
    println!("(d/dx)^3 has order {:?}", diff_order(&ddx.compose(&ddx)?.compose(&ddx)?, 4, VerificationSet::Auto)?);

    let cubic = build_algebra(&AlgebraSpec::structure_constants(&["1", "x", "x2"], &["x*x = x2", "x*x2 = 0", "x2*x2 = 0"]))?;
    let c = algebra_module(&cubic);
    for k in 0..=3 {
        let s = diff_space(&c, &c, k, 0, VerificationSet::Basis)?;
        print!("Diff_{k}: {}", s.dim());
        if k > 0 {
            let sp = split_check(&c, k, 0, VerificationSet::Auto)?;
            print!(" = D_({k}) {} + A {}", sp.d_dim, sp.q_dim);
        }
        println!();
    }
    println!("D_(2,1) has dimension {}", d_sigma_space(&c, &[2, 1], 0, VerificationSet::Auto)?.dim());
    Ok(())
}
