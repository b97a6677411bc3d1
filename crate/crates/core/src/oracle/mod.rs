//! Independent reference solutions and brute-force checkers.
//!
//! Nothing here is used by the solver. The quadrature routines are separate
//! from the ones in [`crate::polybasis`] so that agreement between the two
//! is meaningful.

mod kernel;
pub mod quadrature;
mod seminorm;
mod series;
mod spectral;

pub use kernel::brute_force_kernel_entry;
pub use seminorm::{seminorm_estimate, PiecewisePath, SeminormEstimate, MAX_PIECES};
pub use series::{mittag_leffler, w_laplace, w_series, w_value, ModeParams, ModeSolution, SeriesTerm};
pub use spectral::{spectral_reference, SineModes, Snapshot, SpectralReference, TimeFn};
