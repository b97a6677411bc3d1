//! Fractional seminorm of one spatial mode of a computed solution, next to
//! the nodal L2 norms.

use fracdg::oracle::{seminorm_estimate, PiecewisePath};
use fracdg::{manufactured_problem, solve, GradedMesh, SpatialFem, SpatialPartition};

fn main() -> fracdg::Result<()> {
    let (alpha, beta) = (0.2, 0.8);
    let spec = manufactured_problem(0.5, alpha, beta, 1.0, 1.0, 1.0)?;
    let fem = SpatialFem::assemble(SpatialPartition::unit(8)?, 2)?;
    for slabs in [4, 8, 16] {
        let mesh = GradedMesh::new(1.0, slabs, 1.0)?;
        let sol = solve(&spec, &mesh, &fem, 1)?;
        let path = PiecewisePath::from_solution_mode(&sol, slabs, 1)?;
        let a = seminorm_estimate(alpha / 2.0, &path)?;
        let b = seminorm_estimate(beta / 2.0, &path)?;
        let trace = (1..=slabs).map(|j| fem.l2_norm(&sol.trace(j))).fold(0.0, f64::max);
        println!("J = {slabs:>2}: max ||U(t_j)|| = {trace:.4}, |U|_alpha/2 = {:.4}, |U|_beta/2 = {:.4}", a.value, b.value);
    }
    Ok(())
}
