//! Higher de Rham complexes of polynomial rings and their cohomology per grade.

use jetforge::algebra::{build_algebra, AlgebraSpec};
use jetforge::derham::{cohomology, derham};

fn main() -> jetforge::Result<()> {
    let plane = build_algebra(&AlgebraSpec::polynomial(&["x", "y"], 4))?;
    let dr = derham(&plane);
    for sigma in [vec![1], vec![2], vec![2, 1], vec![1, 3]] {
        let c = dr.complex(&sigma, 2)?;
        c.verify()?;
        println!("dR_{sigma:?} over Q[x,y]");
        for m in &c.modules {
            println!("  {:<18} dims {:?}", m.label(), m.dims());
        }
        for (n, row) in cohomology(&c, 4)?.dims.iter().enumerate() {
            println!("  H^{n} per grade {row:?}");
        }
    }
    Ok(())
}
