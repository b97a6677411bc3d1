//! Comparing the DG solution for `u₀ = sin(πx)`, `f = 0` with the
//! eigenfunction reference solution.

use fracdg::oracle::{spectral_reference, SineModes};
use fracdg::{solve, Forcing, GradedMesh, ProblemSpec, SpatialFem, SpatialPartition};
use std::f64::consts::PI;
use std::sync::Arc;

fn main() -> fracdg::Result<()> {
    let spec = ProblemSpec::new(0.2, 0.8, 1.0, 1.0, 1.0, Arc::new(|x: f64| (PI * x).sin()), Forcing::Zero)?;
    let reference = spectral_reference(&spec, &SineModes::default().initial_mode(1, 1.0), 1)?;
    let at_end = reference.snapshot(1.0)?;
    println!("reference amplitude at T: {:.12}", at_end.amplitudes[0].1);
    for (slabs, cells) in [(16, 4), (32, 8), (64, 16), (256, 32)] {
        let mesh = GradedMesh::new(1.0, slabs, 1.0)?;
        let fem = SpatialFem::assemble(SpatialPartition::unit(cells)?, 3)?;
        let sol = solve(&spec, &mesh, &fem, 1)?;
        let err = fem.l2_error(&sol.trace(slabs), |x| at_end.eval(x));
        println!("J = {slabs:>3}, h = 1/{cells:<2}: ||U(T) - u(T)|| = {err:.3e}");
    }
    Ok(())
}
