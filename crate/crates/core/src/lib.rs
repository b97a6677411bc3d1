//! Time-stepping discontinuous Galerkin solver for the modified anomalous
//! subdiffusion equation
//!
//! ```text
//! ∂_t u - (κ₁ D^α_{0+} + κ₂ D^β_{0+}) ∂²_x u = f   in Ω × (0, T),   0 < α < β < 1,
//! ```
//!
//! with Riemann-Liouville derivatives in time, DG(m) time stepping on graded
//! meshes `t_j = (j/J)^σ T` and conforming P_n elements in space.
//!
//! * [`mesh`]: graded temporal mesh, spatial partition, `σ*`/`σ**`
//! * [`polybasis`]: time basis, Gauss rules, gamma and incomplete beta
//! * [`frackernel`]: RL operators on slab polynomials and history blocks
//! * [`fem1d`]: mass/stiffness assembly, Ritz projection, norms
//! * [`dgsolver`]: the slab-by-slab solver and manufactured problems
//! * [`oracle`]: reference solutions and brute-force checkers
//! * [`xcli`]: experiment configuration, sweeps and convergence tables

// Guards are written as `!(x > 0.0)` so that NaN fails them as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dgsolver;
pub mod error;
pub mod fem1d;
pub mod frackernel;
pub mod mesh;
pub mod oracle;
pub mod polybasis;
pub mod xcli;

pub use dgsolver::{
    manufactured_forcing, manufactured_problem, slab_time_matrix, solve, solve_with, DgStepper,
    Forcing, PowerTerm, ProblemSpec, SeparableTerm, SolverOptions, SpaceTimeSolution,
};
pub use error::{Error, Result};
pub use fem1d::{SpaceVec, SpatialFem};
pub use frackernel::{
    history_block, rl_derivative_of_power, rl_integral_of_slab_poly, FracOrder, HistoryBlock,
    KernelEvaluator,
};
pub use mesh::{sigma_star, sigma_star_star, GradedMesh, SpatialPartition};
