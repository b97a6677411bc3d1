//! Graded temporal meshes and uniform spatial partitions.

use crate::error::{domain, Result};

/// Temporal nodes `t_j = (j/J)^σ T`, `j = 0..=J`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMesh {
    t_final: f64,
    sigma: f64,
    nodes: Vec<f64>,
    widths: Vec<f64>,
}

impl GradedMesh {
    pub fn new(t_final: f64, slabs: usize, sigma: f64) -> Result<Self> {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(domain("T", format!("final time must be positive, got {t_final}")));
        }
        if slabs == 0 {
            return Err(domain("J", "slab count must be at least 1"));
        }
        if !(sigma >= 1.0) || !sigma.is_finite() {
            return Err(domain("sigma", format!("grading exponent must be >= 1, got {sigma}")));
        }
        let jf = slabs as f64;
        let mut nodes: Vec<f64> = (0..=slabs)
            .map(|j| (j as f64 / jf).powf(sigma) * t_final)
            .collect();
        nodes[slabs] = t_final;
        let widths: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        if widths.iter().any(|&w| !(w > 0.0)) {
            return Err(domain("sigma", format!("grading {sigma} with J = {slabs} makes slab widths underflow")));
        }
        Ok(Self {
            t_final,
            sigma,
            nodes,
            widths,
        })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Number of slabs `J`.
    pub fn slabs(&self) -> usize {
        self.widths.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `t_j` for `j = 0..=J`.
    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// `τ_j` for the 1-based slab index `j`.
    pub fn width(&self, j: usize) -> f64 {
        self.widths[j - 1]
    }

    /// Largest width `τ = τ_J`.
    pub fn tau(&self) -> f64 {
        *self.widths.last().unwrap()
    }

    pub fn is_uniform(&self) -> bool {
        self.sigma == 1.0
    }

    /// Locates the slab containing `t` (1-based; node `t_j` belongs to slab `j`).
    pub fn slab_of(&self, t: f64) -> usize {
        let idx = self.nodes.partition_point(|&x| x < t);
        idx.clamp(1, self.slabs())
    }
}

/// `σ* = (2m + 2 - β) / (2r + 1 - β)`.
pub fn sigma_star(m: usize, r: f64, beta: f64) -> Result<f64> {
    let den = grading_denominator(r, beta)?;
    Ok((2.0 * m as f64 + 2.0 - beta) / den)
}

/// `σ** = (2m + 2) / (2r + 1 - β)`.
pub fn sigma_star_star(m: usize, r: f64, beta: f64) -> Result<f64> {
    let den = grading_denominator(r, beta)?;
    Ok((2.0 * m as f64 + 2.0) / den)
}

fn grading_denominator(r: f64, beta: f64) -> Result<f64> {
    let den = 2.0 * r + 1.0 - beta;
    if !(den > 0.0) {
        return Err(domain(
            "r",
            format!("need r > (beta - 1)/2, got r = {r}, beta = {beta}"),
        ));
    }
    Ok(den)
}

/// Uniform partition of `(a, b)` into `cells` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialPartition {
    a: f64,
    b: f64,
    cells: usize,
}

impl SpatialPartition {
    pub fn new(a: f64, b: f64, cells: usize) -> Result<Self> {
        if !(b > a) {
            return Err(domain("interval", format!("need a < b, got ({a}, {b})")));
        }
        if cells < 2 {
            return Err(domain("cells", format!("need at least 2 cells, got {cells}")));
        }
        Ok(Self { a, b, cells })
    }

    pub fn unit(cells: usize) -> Result<Self> {
        Self::new(0.0, 1.0, cells)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.cells as f64
    }

    /// Vertex `k = 0..=cells`.
    pub fn vertex(&self, k: usize) -> f64 {
        if k == self.cells {
            self.b
        } else {
            self.a + k as f64 * self.h()
        }
    }
}
