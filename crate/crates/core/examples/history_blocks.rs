//! History blocks of the Riemann-Liouville derivative and their agreement
//! with brute-force quadrature of the defining integral.

use fracdg::oracle::brute_force_kernel_entry;
use fracdg::{history_block, FracOrder, GradedMesh};

fn main() -> fracdg::Result<()> {
    let gamma = FracOrder::new(0.5)?;
    let mesh = GradedMesh::new(1.0, 6, 2.0)?;
    let m = 1;
    let mut worst: f64 = 0.0;
    for j in 1..=mesh.slabs() {
        for i in 1..=j {
            let block = history_block(gamma, &mesh, m, j, i)?;
            for q in 0..=m {
                for p in 0..=m {
                    let reference = brute_force_kernel_entry(gamma.value(), &mesh, m, j, i, q, p, 1e-12)?;
                    worst = worst.max((block.entries[(q, p)] - reference).abs());
                }
            }
            if j == mesh.slabs() {
                println!("G[{j},{i}] = {:.6e} {:.6e} / {:.6e} {:.6e}",
                    block.entries[(0, 0)], block.entries[(0, 1)], block.entries[(1, 0)], block.entries[(1, 1)]);
            }
        }
    }
    println!("largest deviation from brute-force quadrature: {worst:.2e}");
    Ok(())
}
