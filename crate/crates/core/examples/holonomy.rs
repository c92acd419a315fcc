//! Hol complexes, their trivializing homotopy, and the closed-form cross-check.

use jetforge::algebra::{build_algebra, probe_modules, AlgebraSpec};
use jetforge::holonomy::{hol_acyclicity, hol_homotopy, vanishing_index};

fn main() -> jetforge::Result<()> {
    let cubic = build_algebra(&AlgebraSpec::structure_constants(&["1", "x", "x2"], &["x*x = x2", "x*x2 = 0", "x2*x2 = 0"]))?;
    for p in probe_modules(&cubic, &[])? {
        let r = hol_acyclicity(&[1], &p, 3, 0, false)?;
        let h = hol_homotopy(&[1], &p, 3, false)?;
        println!(
            "{:<8} H = {:?}, homotopy defects {:?}, closed form on {} tuples, {:?}",
            p.label(),
            r.table.dims,
            r.homotopy_defects,
            h.check_closed_form()?,
            r.verdict
        );
    }
    let line = build_algebra(&AlgebraSpec::polynomial(&["x"], 5))?;
    let a = jetforge::jets::algebra_module(&line);
    println!("Hol^(1,..,1)[Q[x]] vanishes from level {:?}", vanishing_index(&a, 6)?);
    Ok(())
}
