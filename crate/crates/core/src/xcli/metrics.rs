use crate::dgsolver::SpaceTimeSolution;
use crate::error::{domain, Result};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

/// How the spatial error at a node `t_j` is measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMetric {
    /// `‖u(t_j) - U(t_j)‖_{L²}` with the exact solution.
    #[default]
    Exact,
    /// `‖I_h u(t_j) - U(t_j)‖_{L²}` with the nodal interpolant `I_h u`,
    /// which removes the spatial projection error from the comparison.
    Interpolant,
}

/// `(E₁, E₂)`: the largest nodal error over `t_1..t_J`, and the error at `T`.
pub fn error_metrics(
    solution: &SpaceTimeSolution,
    exact: &(dyn Fn(f64, f64) -> f64 + Sync),
    metric: ErrorMetric,
) -> (f64, f64) {
    let fem = &solution.fem;
    let slabs = solution.mesh.slabs();
    let mut worst: f64 = 0.0;
    let mut last = 0.0;
    for j in 1..=slabs {
        let t = solution.mesh.node(j);
        let trace = solution.trace(j);
        let e = match metric {
            ErrorMetric::Exact => fem.l2_error(&trace, |x| exact(x, t)),
            ErrorMetric::Interpolant => {
                let nodal = DVector::from_fn(fem.ndof(), |k, _| exact(fem.dof_coordinate(k), t));
                fem.l2_norm(&(trace - nodal))
            }
        };
        worst = worst.max(e);
        last = e;
    }
    (worst, last)
}

/// `log₂(E(J) / E(2J))`.
pub fn observed_order(coarse: f64, fine: f64) -> Result<f64> {
    if !(coarse > 0.0 && fine > 0.0) || !coarse.is_finite() || !fine.is_finite() {
        return Err(domain("errors", format!("orders need positive errors, got ({coarse}, {fine})")));
    }
    Ok((coarse / fine).log2())
}
