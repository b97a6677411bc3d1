//! Solving the manufactured problem `u = t^r sin(πx)` and measuring the
//! errors at the mesh nodes.

use fracdg::xcli::{error_metrics, ErrorMetric};
use fracdg::{manufactured_problem, solve, GradedMesh, SpatialFem, SpatialPartition};

fn main() -> fracdg::Result<()> {
    let (alpha, beta) = (0.2, 0.8);
    let r = 0.4;
    let spec = manufactured_problem(r, alpha, beta, 1.0, 1.0, 1.0)?;
    let fem = SpatialFem::assemble(SpatialPartition::unit(32)?, 3)?;
    let exact = spec.exact.clone().expect("manufactured problems carry their solution");
    for sigma in [1.0, 4.0] {
        for slabs in [8, 16, 32] {
            let mesh = GradedMesh::new(1.0, slabs, sigma)?;
            let sol = solve(&spec, &mesh, &fem, 1)?;
            let (e1, e2) = error_metrics(&sol, exact.as_ref(), ErrorMetric::Exact);
            println!("sigma = {sigma}, J = {slabs:>2}: E1 = {e1:.3e}, E2 = {e2:.3e}");
        }
    }
    Ok(())
}
