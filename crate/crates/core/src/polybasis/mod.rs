//! Reference-interval polynomial bases, quadrature rules and special
//! functions shared by the other modules.

mod basis;
pub mod quad;
pub mod special;

pub use basis::{TimeBasis, MAX_TIME_DEGREE};
pub use quad::{
    gauss_jacobi, gauss_jacobi_general, gauss_legendre, integrate_away_from, QuadKind, QuadRule, MAX_POINTS,
    Side,
};
pub use special::{beta_fn, gamma_fn, inc_beta_lower, ln_gamma};

/// Default point count where exactness cannot be guaranteed analytically.
pub fn default_points(m: usize) -> usize {
    (2 * (m + 1) + 4).max(12)
}
