//! Riemann-Liouville operators applied to slab-wise polynomials.
//!
//! A history block `G^γ_{j,i}` holds
//! `∫_{I_j} φ_q^{(j)}(t) · D^γ_{0+}(φ_p^{(i)} χ_{I_i})(t) dt` for the local
//! shifted Legendre basis, row `q` (test) and column `p` (trial). With
//! `D^γ = d/dt I^{1-γ}`, and `I^{1-γ}` of a bounded slab function being
//! continuous, the derivative carries no point mass at slab boundaries.

use crate::error::{domain, Error, Result};
use crate::mesh::GradedMesh;
use crate::polybasis::special::{beta_pos, gamma_pos, inc_beta_unchecked};
use crate::polybasis::{
    default_points, gauss_jacobi_general, gauss_legendre, integrate_away_from, QuadRule, TimeBasis,
};
use nalgebra::DMatrix;

/// A fractional order `0 < γ < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(domain("gamma", format!("fractional order must lie in (0, 1), got {gamma}")));
        }
        Ok(Self(gamma))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Coupling between trial slab `i` and test slab `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryBlock {
    pub j: usize,
    pub i: usize,
    pub gamma: FracOrder,
    /// `entries[(q, p)]`
    pub entries: DMatrix<f64>,
}

/// Precomputed tables for one order and one temporal degree.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    gamma: f64,
    basis: TimeBasis,
    /// `B(k+1, 1-γ)`
    beta_k: Vec<f64>,
    inv_gamma_1mg: f64,
    /// diagonal block for a unit slab
    diag_unit: DMatrix<f64>,
    legendre: QuadRule,
    /// weight `y^{1-γ}` on `[0, 1]`
    jacobi: QuadRule,
}

impl KernelEvaluator {
    pub fn new(gamma: FracOrder, m: usize) -> Result<Self> {
        Self::with_points(gamma, m, default_points(m))
    }

    pub fn with_points(gamma: FracOrder, m: usize, points: usize) -> Result<Self> {
        let basis = TimeBasis::new(m)?;
        let g = gamma.value();
        let b = 1.0 - g;
        let beta_k = (0..=m).map(|k| beta_pos(k as f64 + 1.0, b)).collect();
        let n = m + 1;
        let mut diag_unit = DMatrix::zeros(n, n);
        for q in 0..n {
            for p in 0..n {
                let mut acc = 0.0;
                for (k, &cp) in basis.monomial_expansion(p).iter().enumerate() {
                    let kf = k as f64;
                    let rate = gamma_pos(kf + 1.0) / gamma_pos(kf + 1.0 - g);
                    for (l, &cq) in basis.monomial_expansion(q).iter().enumerate() {
                        acc += cp * cq * rate / (l as f64 + kf + 1.0 - g);
                    }
                }
                diag_unit[(q, p)] = acc;
            }
        }
        Ok(Self {
            gamma: g,
            basis,
            beta_k,
            inv_gamma_1mg: 1.0 / gamma_pos(b),
            diag_unit,
            legendre: gauss_legendre(points)?,
            jacobi: gauss_jacobi_general(points.max(m + 2), b, 0.0)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn basis(&self) -> &TimeBasis {
        &self.basis
    }

    /// `I^{1-γ}(φ_p χ_{I_i})(t)` from the distances `d0 = t - t_{i-1} >= 0`
    /// and `d1 = t - t_i` (negative inside the slab).
    pub fn slab_integral(&self, p: usize, tau: f64, d0: f64, d1: f64) -> f64 {
        if d0 <= 0.0 {
            return 0.0;
        }
        let b = 1.0 - self.gamma;
        let x = d0 / tau;
        let coeffs = self.basis.monomial_expansion(p);
        let mut acc = 0.0;
        if d1 <= 0.0 {
            for (k, &c) in coeffs.iter().enumerate() {
                acc += c * self.beta_k[k] * x.powf(k as f64 + b);
            }
        } else {
            let z = tau / d0;
            for (k, &c) in coeffs.iter().enumerate() {
                let a = k as f64 + 1.0;
                let bz = if z <= 0.5 {
                    inc_beta_unchecked(z, a, b)
                } else {
                    // complement evaluated from the exact distance ratio
                    self.beta_k[k] - complement_finite(d1 / d0, b, k)
                };
                acc += c * bz * x.powf(k as f64 + b);
            }
        }
        acc * tau.powf(b) * self.inv_gamma_1mg
    }

    fn slab_integral_at(&self, mesh: &GradedMesh, i: usize, p: usize, t: f64) -> f64 {
        let d0 = t - mesh.node(i - 1);
        let d1 = t - mesh.node(i);
        self.slab_integral(p, mesh.width(i), d0, d1)
    }

    /// Diagonal block `G_{j,j}`; scales exactly as `τ_j^{1-γ}`.
    pub fn diagonal_block(&self, tau: f64) -> DMatrix<f64> {
        &self.diag_unit * tau.powf(1.0 - self.gamma)
    }

    /// Block `G_{j,i}` for `i <= j` on `mesh`.
    pub fn block(&self, mesh: &GradedMesh, j: usize, i: usize) -> Result<DMatrix<f64>> {
        let nslab = mesh.slabs();
        if i == 0 || j == 0 || i > j || j > nslab {
            return Err(Error::Index(format!(
                "history block needs 1 <= i <= j <= {nslab}, got (j, i) = ({j}, {i})"
            )));
        }
        if i == j {
            return Ok(self.diagonal_block(mesh.width(j)));
        }
        let n = self.basis.len();
        let tau_i = mesh.width(i);
        let tau_j = mesh.width(j);
        let t_lo = mesh.node(j - 1);
        let gap = t_lo - mesh.node(i);
        let b = 1.0 - self.gamma;
        let mut out = DMatrix::zeros(n, n);
        for p in 0..n {
            let f_right = self.slab_integral(p, tau_i, mesh.node(j) - mesh.node(i - 1), tau_j + gap);
            let f_left = self.slab_integral(p, tau_i, t_lo - mesh.node(i - 1), gap);
            for q in 0..n {
                let boundary = f_right - self.basis.left_value(q) * f_left;
                if q == 0 {
                    out[(q, p)] = boundary;
                    continue;
                }
                let interior = if i + 1 == j {
                    // F = R - S with R analytic away from t_{i-1} and
                    // S = (t - t_i)^{1-γ} · polynomial
                    let rho = tau_j / tau_i;
                    let coeffs = self.basis.monomial_expansion(p);
                    let regular = integrate_away_from(&self.legendre, 1.0 / rho, |y| {
                        let x = 1.0 + rho * y;
                        let r: f64 = coeffs
                            .iter()
                            .enumerate()
                            .map(|(k, &c)| c * self.beta_k[k] * x.powf(k as f64 + b))
                            .sum();
                        self.basis.deriv(q, y) * r
                    });
                    let singular = self.jacobi.integrate(|y| {
                        let x = 1.0 + rho * y;
                        let ry = rho * y;
                        let s: f64 = coeffs
                            .iter()
                            .enumerate()
                            .map(|(k, &c)| {
                                c * (0..=k)
                                    .map(|l| {
                                        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                                        sign * binom(k, l) * ry.powi(l as i32) * x.powi((k - l) as i32)
                                            / (b + l as f64)
                                    })
                                    .sum::<f64>()
                            })
                            .sum();
                        self.basis.deriv(q, y) * s
                    }) * rho.powf(b);
                    (regular - singular) * tau_i.powf(b) * self.inv_gamma_1mg
                } else {
                    integrate_away_from(&self.legendre, gap / tau_j, |y| {
                        let t_off = tau_j * y;
                        self.basis.deriv(q, y)
                            * self.slab_integral(p, tau_i, t_lo + t_off - mesh.node(i - 1), gap + t_off)
                    })
                };
                out[(q, p)] = boundary - interior;
            }
        }
        Ok(out)
    }

    /// `I^{1-γ}` applied to slab `i`'s basis function `p`, evaluated at `t`.
    pub fn rl_integral(&self, mesh: &GradedMesh, i: usize, p: usize, t: f64) -> Result<f64> {
        check_slab(mesh, i)?;
        if p > self.basis.degree() {
            return Err(Error::Index(format!("basis index {p} exceeds degree")));
        }
        let start = mesh.node(i - 1);
        if t < start {
            return Err(domain("t", format!("need t >= t_(i-1) = {start}, got {t}")));
        }
        Ok(self.slab_integral_at(mesh, i, p, t))
    }
}

/// `∫₀^w σ^{b-1}(1-σ)^k dσ = Σ_l C(k,l)(-1)^l w^{b+l}/(b+l)`.
fn complement_finite(w: f64, b: f64, k: usize) -> f64 {
    (0..=k)
        .map(|l| {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom(k, l) * w.powf(b + l as f64) / (b + l as f64)
        })
        .sum()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_slab(mesh: &GradedMesh, i: usize) -> Result<()> {
    if i == 0 || i > mesh.slabs() {
        return Err(Error::Index(format!("slab {i} outside 1..={}", mesh.slabs())));
    }
    Ok(())
}

/// `I^{1-γ}_{0+}(φ_p χ_{I_i})(t)` for `t >= t_{i-1}`.
pub fn rl_integral_of_slab_poly(
    gamma: FracOrder,
    mesh: &GradedMesh,
    m: usize,
    i: usize,
    p: usize,
    t: f64,
) -> Result<f64> {
    KernelEvaluator::new(gamma, m)?.rl_integral(mesh, i, p, t)
}

/// One-off history block; use a [`KernelEvaluator`] when computing many.
pub fn history_block(
    gamma: FracOrder,
    mesh: &GradedMesh,
    m: usize,
    j: usize,
    i: usize,
) -> Result<HistoryBlock> {
    let entries = KernelEvaluator::new(gamma, m)?.block(mesh, j, i)?;
    Ok(HistoryBlock { j, i, gamma, entries })
}

/// RL derivative of `t^r`: `Γ(r+1)/Γ(r+1-γ) t^{r-γ}`.
pub fn rl_derivative_of_power(gamma: FracOrder, r: f64, t: f64) -> Result<f64> {
    let g = gamma.value();
    if !(r > g - 1.0) {
        return Err(domain("r", format!("power rule needs r > gamma - 1, got r = {r}")));
    }
    if !(t > 0.0) {
        return Err(domain("t", format!("need t > 0, got {t}")));
    }
    Ok(power_rule_coefficient(g, r) * t.powf(r - g))
}

/// `Γ(r+1)/Γ(r+1-γ)`
pub(crate) fn power_rule_coefficient(gamma: f64, r: f64) -> f64 {
    gamma_pos(r + 1.0) / gamma_pos(r + 1.0 - gamma)
}

/// Lazily evaluated history blocks for one order on one mesh. On uniform
/// meshes blocks depend only on the lag `j - i` and are memoized by lag.
#[derive(Debug)]
pub struct KernelCache<'a> {
    eval: KernelEvaluator,
    mesh: &'a GradedMesh,
    by_lag: Vec<Option<DMatrix<f64>>>,
}

impl<'a> KernelCache<'a> {
    pub fn new(eval: KernelEvaluator, mesh: &'a GradedMesh) -> Self {
        let by_lag = if mesh.is_uniform() {
            vec![None; mesh.slabs()]
        } else {
            Vec::new()
        };
        Self { eval, mesh, by_lag }
    }

    pub fn evaluator(&self) -> &KernelEvaluator {
        &self.eval
    }

    pub fn block(&mut self, j: usize, i: usize) -> Result<DMatrix<f64>> {
        if self.by_lag.is_empty() || i > j {
            return self.eval.block(self.mesh, j, i);
        }
        let lag = j - i;
        if let Some(b) = &self.by_lag[lag] {
            return Ok(b.clone());
        }
        let b = self.eval.block(self.mesh, lag + 1, 1)?;
        self.by_lag[lag] = Some(b.clone());
        Ok(b)
    }
}
