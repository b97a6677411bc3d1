//! Graded temporal meshes and the two grading exponents that balance the
//! initial singularity of `t^r`.

use fracdg::{sigma_star, sigma_star_star, GradedMesh};

fn main() -> fracdg::Result<()> {
    let beta = 0.8;
    for (r, m) in [(0.2, 0), (0.2, 1), (0.4, 0), (0.4, 1)] {
        let s1 = sigma_star(m, r, beta)?;
        let s2 = sigma_star_star(m, r, beta)?;
        println!("r = {r}, m = {m}: sigma* = {s1:.4}, sigma** = {s2:.4}");
    }

    let mesh = GradedMesh::new(1.0, 8, 10.0 / 3.0)?;
    println!("\nJ = 8, sigma = 10/3");
    for j in 1..=mesh.slabs() {
        println!("  slab {j}: [{:.3e}, {:.3e}]  width {:.3e}", mesh.node(j - 1), mesh.node(j), mesh.width(j));
    }
    Ok(())
}
