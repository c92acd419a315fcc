//! Jet modules, their universal operators, and factorization of differential operators.

use jetforge::algebra::{build_algebra, probe_modules, AlgebraSpec};
use jetforge::diffops::{check_jet_factorization, VerificationSet};
use jetforge::jets::{cojet_glue, jet_module, jet_tensor_iso};

fn main() -> jetforge::Result<()> {
    let dual = build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"]))?;
    let probes = probe_modules(&dual, &[])?;
    for p in &probes {
        for k in 0..=2 {
            let j = jet_module(p, k)?;
            jet_tensor_iso(p, k)?.verify()?;
            println!("J^{k}({}) dims {:?}", p.label(), j.carrier().dims());
        }
    }
    let r = check_jet_factorization(&probes[0], &probes[1], 2, 0, VerificationSet::Auto)?;
    println!("Diff_2(A, A/(e)) = Hom(J^2 A, A/(e)): {} = {}", r.array_dim, r.hom_dim);

    let line = build_algebra(&AlgebraSpec::polynomial(&["x"], 6))?;
    let c = cojet_glue(1, 2, &jetforge::jets::algebra_module(&line))?;
    println!("c^(1,2) on Q[x]: injective {}", c.is_injective());
    Ok(())
}
