//! The resolution of the kernel complexes by Hol^1 terms, checked node by node.

use jetforge::algebra::{build_algebra, AlgebraSpec};
use jetforge::resolution::{kernel_module, resolution_report};

fn main() -> jetforge::Result<()> {
    let line = build_algebra(&AlgebraSpec::polynomial(&["x"], 8))?;
    let k = kernel_module(&line, &[2], 1)?;
    println!("ker(Lambda^(2) -> Lambda^(1)) dims {:?}", k.dims());

    let r = resolution_report(&line, &[1], 1, 3, 2)?;
    for n in &r.nodes {
        println!("column {} level {}: {}", n.column, n.level, if n.failing_grades.is_empty() { "exact" } else { "NOT exact" });
    }
    println!("rho onto: {}, chain maps: {}, H(K) zero: {}", r.rho_failures.is_empty(), r.chain_maps, r.kernel_cohomology.is_zero());
    println!("column shifts {:?}, verdict {:?}", r.shifts, r.verdict);
    Ok(())
}
