//! Spatial finite elements: assembly, Ritz projection and its convergence
//! rates for `sin(πx)`.

use fracdg::{SpatialFem, SpatialPartition};
use std::f64::consts::PI;

fn main() -> fracdg::Result<()> {
    for n in 1..=3 {
        let mut last: Option<(f64, f64)> = None;
        println!("n = {n}");
        for cells in [4, 8, 16, 32] {
            let fem = SpatialFem::assemble(SpatialPartition::unit(cells)?, n)?;
            let proj = fem.ritz_project(|x| (PI * x).sin())?;
            let l2 = fem.l2_error(&proj, |x| (PI * x).sin());
            let h1 = fem.h1_seminorm_error(&proj, |x| PI * (PI * x).cos());
            let rates = last.map_or(String::new(), |(a, b)| format!("  rates {:.2} {:.2}", (a / l2).log2(), (b / h1).log2()));
            println!("  h = 1/{cells:<3} L2 {l2:.3e}  H1 {h1:.3e}{rates}");
            last = Some((l2, h1));
        }
    }
    Ok(())
}
