//! Cohomology of dR_tau against dR_sigma: asserted for smooth algebras, recorded for
//! singular ones.

use jetforge::algebra::{build_algebra, AlgebraSpec};
use jetforge::derham::{rigidity_check, rigidity_report};

fn main() -> jetforge::Result<()> {
    let line = build_algebra(&AlgebraSpec::polynomial(&["x"], 6))?;
    for tau in [vec![2, 1], vec![3, 3], vec![1, 2, 3]] {
        let r = rigidity_check(&line, &tau, &[1, 1], 2, 6)?;
        println!("Q[x]  tau {tau:?}: {:?}, kernel lemma at {:?}", r.verdict, r.kernel_lemma);
    }

    let dual = build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"]))?;
    let r = rigidity_report(&dual, &[2, 2], &[1], 2, 0)?;
    println!("Q[e]/(e^2) tau [2, 2]: {:?}", r.verdict);
    println!("  dR_tau  {:?}", r.table_tau.dims);
    println!("  dR_1    {:?}", r.table_sigma.dims);
    Ok(())
}
