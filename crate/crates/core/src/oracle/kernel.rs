//! Brute-force evaluation of history-block entries straight from the
//! definition of the Riemann-Liouville derivative.

use super::quadrature::{gauss_kronrod, tanh_sinh};
use crate::error::{domain, Error, Result};
use crate::mesh::GradedMesh;
use crate::polybasis::special::gamma_pos;
use crate::polybasis::TimeBasis;

/// `∫_{I_j} φ_q(t) · D^γ(φ_p χ_{I_i})(t) dt` by nested adaptive quadrature.
///
/// For `i < j` the derivative is the hypersingular-free form
/// `-γ/Γ(1-γ) ∫_{I_i} (t-s)^{-1-γ} φ_p(s) ds`, computed after the
/// substitution `t_i - s = ε(e^u - 1)` with `ε = t - t_i`, which makes the
/// inner integrand smooth however close `t` is to `t_i`. For `i = j` the
/// derivative is written as the jump term plus the weakly singular
/// integral of `φ_p'`.
#[allow(clippy::too_many_arguments)]
pub fn brute_force_kernel_entry(
    gamma: f64,
    mesh: &GradedMesh,
    m: usize,
    j: usize,
    i: usize,
    q: usize,
    p: usize,
    tol: f64,
) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain("gamma", "order must lie in (0, 1)"));
    }
    let jn = mesh.slabs();
    if i == 0 || i > j || j > jn {
        return Err(Error::Index(format!("slab pair ({j}, {i}) outside 1..={jn}")));
    }
    if p > m || q > m {
        return Err(Error::Index(format!("basis index out of range for degree {m}")));
    }
    let basis = TimeBasis::new(m)?;
    let g1 = gamma_pos(1.0 - gamma);
    let tau_j = mesh.width(j);
    let tau_i = mesh.width(i);
    let start_j = mesh.node(j - 1);
    let mut failure = None;
    let value = if i == j {
        let jump = basis.left_value(p);
        tanh_sinh(0.0, tau_j, tol, |_, eps, _| {
            // u = t - s = ε z, so the inner integral is ε^{1-γ} times an O(1) value
            let inner = tanh_sinh(0.0, 1.0, 1e-13, |_, _, z| {
                let y = eps * (1.0 - z) / tau_j;
                z.powf(-gamma) * basis.deriv(p, y)
            })
            .map(|v| v * eps.powf(1.0 - gamma) / tau_j);
            let inner = match inner {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            };
            let d = (jump * eps.powf(-gamma) + inner) / g1;
            basis.eval(q, eps / tau_j) * d
        })?
    } else {
        let gap = start_j - mesh.node(i);
        tanh_sinh(0.0, tau_j, tol, |_, dl, _| {
            let eps = gap + dl;
            let top = (1.0 + tau_i / eps).ln();
            let f = |u: f64| {
                let d = eps * u.exp_m1();
                (-gamma * u).exp() * basis.eval(p, 1.0 - d / tau_i)
            };
            let mut acc = 0.0;
            let mut lo = 0.0;
            let mut hi = 1.0f64.min(top);
            while lo < top {
                match gauss_kronrod(lo, hi, tol * 1e-3, &f) {
                    Ok(v) => acc += v,
                    Err(e) => failure = Some(e),
                }
                lo = hi;
                hi = (2.0 * hi).min(top);
                if top - hi < 1.0 {
                    hi = top;
                }
            }
            let d = -gamma / g1 * eps.powf(-gamma) * acc;
            basis.eval(q, dl / tau_j) * d
        })?
    };
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_degree_zero() {
        let mesh = GradedMesh::new(3.0, 3, 1.0).unwrap();
        let g = 0.5;
        let diag = brute_force_kernel_entry(g, &mesh, 0, 1, 1, 0, 0, 1e-13).unwrap();
        assert!((diag - 1.0 / gamma_pos(1.5)).abs() < 1e-12, "{diag}");
        let adj = brute_force_kernel_entry(g, &mesh, 0, 2, 1, 0, 0, 1e-13).unwrap();
        let exact = (2f64.sqrt() - 2.0) / gamma_pos(1.5);
        assert!((adj - exact).abs() < 1e-12, "{adj} {exact}");
        let far = brute_force_kernel_entry(g, &mesh, 0, 3, 1, 0, 0, 1e-13).unwrap();
        let exact = (3f64.sqrt() - 2.0 * 2f64.sqrt() + 1.0) / gamma_pos(1.5);
        assert!((far - exact).abs() < 1e-12, "{far} {exact}");
    }

    #[test]
    fn rejects_bad_indices() {
        let mesh = GradedMesh::new(1.0, 2, 1.0).unwrap();
        assert!(brute_force_kernel_entry(0.5, &mesh, 1, 1, 2, 0, 0, 1e-10).is_err());
        assert!(brute_force_kernel_entry(0.5, &mesh, 1, 3, 1, 0, 0, 1e-10).is_err());
        assert!(brute_force_kernel_entry(0.5, &mesh, 1, 2, 1, 2, 0, 1e-10).is_err());
    }
}
