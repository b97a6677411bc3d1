//! Scalar mode solutions `w(t)` of
//! `w + λ(κ₁ I^{1-α} + κ₂ I^{1-β}) w = 1`.

use crate::error::{domain, Error, Result};
use crate::polybasis::special::{gamma_pos, gamma_ratio, ln_gamma_pos};
use nalgebra::Complex;

const MAX_ORDER: usize = 400;

/// Parameters of one spatial mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub lambda: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ModeParams {
    fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) {
            return Err(domain("lambda", "eigenvalue must be non-negative"));
        }
        if !(self.kappa1 >= 0.0 && self.kappa2 >= 0.0) {
            return Err(domain("kappa", "diffusivities must be non-negative"));
        }
        for (name, g) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(g > 0.0 && g < 1.0) {
                return Err(domain(name, "order must lie in (0, 1)"));
            }
        }
        Ok(())
    }
}

/// One term `coeff · t^exponent` of the truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerm {
    pub coeff: f64,
    pub exponent: f64,
}

/// Truncated Picard series of `w` at a fixed time.
#[derive(Debug, Clone)]
pub struct ModeSolution {
    pub params: ModeParams,
    pub t: f64,
    /// Terms grouped by total order `p + q`.
    pub orders: Vec<Vec<SeriesTerm>>,
    /// Last order kept.
    pub truncation: usize,
    /// Magnitude of the first omitted order.
    pub tail: f64,
    pub value: f64,
}

impl ModeSolution {
    /// Sums the double series by total order until the magnitude of the next
    /// order falls below `tol`.
    pub fn compute(params: ModeParams, t: f64, tol: f64) -> Result<Self> {
        params.validate()?;
        if !(t >= 0.0) {
            return Err(domain("t", "time must be non-negative"));
        }
        let ModeParams { lambda, kappa1, kappa2, alpha, beta } = params;
        let a = 1.0 - alpha;
        let b = 1.0 - beta;
        let la = (lambda * kappa1).ln();
        let lb = (lambda * kappa2).ln();
        let lt = t.ln();
        let mut orders = Vec::new();
        let mut sum = 0.0;
        let mut carry = 0.0;
        // Rounding: each term carries a relative error of a few ulps times
        // the size of the logarithms that produced it. Those errors are
        // uncorrelated across terms and are combined in quadrature; the
        // additions themselves are bounded linearly.
        let mut coeff_noise_sq = 0.0;
        let mut total_mag = 0.0;
        let mut prev_bound = f64::INFINITY;
        for r in 0..=MAX_ORDER {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            let ln_fact = ln_gamma_pos(r as f64 + 1.0);
            let mut terms = Vec::with_capacity(r + 1);
            let mut bound = 0.0;
            let mut order_sum = 0.0;
            let mut order_noise_sq = 0.0;
            for p in 0..=r {
                let q = r - p;
                let e = p as f64 * a + q as f64 * b;
                let ln_den = ln_gamma_pos(1.0 + e);
                let mut log_mag = ln_binomial(r, p) - ln_den;
                if p > 0 {
                    log_mag += p as f64 * la;
                }
                if q > 0 {
                    log_mag += q as f64 * lb;
                }
                let coeff = sign * log_mag.exp();
                if coeff == 0.0 {
                    continue;
                }
                terms.push(SeriesTerm { coeff, exponent: e });
                if e > 0.0 && t == 0.0 {
                    continue;
                }
                let log_term = if e == 0.0 { log_mag } else { log_mag + e * lt };
                let mag = log_term.exp();
                bound += mag;
                order_sum += sign * mag;
                let scale = 4.0 + log_term.abs() + 3.0 * ln_fact + ln_den.abs() + e * ((1.0 + e).ln() + lt.abs());
                order_noise_sq += (mag * scale * f64::EPSILON).powi(2);
            }
            if r > 0 && bound < tol && bound <= prev_bound {
                let value = sum - carry;
                return Ok(Self { params, t, orders, truncation: r - 1, tail: bound, value });
            }
            coeff_noise_sq += order_noise_sq;
            total_mag += bound;
            let noise = coeff_noise_sq.sqrt() + 2.0 * f64::EPSILON * total_mag;
            if noise > tol {
                return Err(Error::NoConvergence {
                    what: "mode series (cancellation)",
                    achieved: noise,
                    requested: tol,
                });
            }
            // Kahan summation over orders
            let y = order_sum - carry;
            let s = sum + y;
            carry = (s - sum) - y;
            sum = s;
            orders.push(terms);
            prev_bound = bound;
        }
        Err(Error::NoConvergence { what: "mode series", achieved: prev_bound, requested: tol })
    }

    /// `w + λ(κ₁ I^{1-α} + κ₂ I^{1-β}) w - 1` for the truncated series, with
    /// the fractional integrals applied term by term.
    pub fn defining_residual(&self) -> f64 {
        let ModeParams { lambda, kappa1, kappa2, alpha, beta } = self.params;
        let t = self.t;
        let mut acc = -1.0;
        for term in self.orders.iter().flatten() {
            let e = term.exponent;
            acc += term.coeff * t.powf(e);
            for (kappa, g) in [(kappa1, alpha), (kappa2, beta)] {
                let shift = 1.0 - g;
                let factor = gamma_ratio(e + 1.0, shift);
                acc += lambda * kappa * term.coeff * factor * t.powf(e + shift);
            }
        }
        acc
    }
}

fn ln_binomial(r: usize, p: usize) -> f64 {
    ln_gamma_pos(r as f64 + 1.0) - ln_gamma_pos(p as f64 + 1.0) - ln_gamma_pos((r - p) as f64 + 1.0)
}

/// Series value of `w(t)`; fails when the requested tolerance cannot be met.
pub fn w_series(lambda: f64, kappa1: f64, kappa2: f64, alpha: f64, beta: f64, t: f64, tol: f64) -> Result<f64> {
    let params = ModeParams { lambda, kappa1, kappa2, alpha, beta };
    ModeSolution::compute(params, t, tol).map(|s| s.value)
}

/// `w(t)` by numerical inversion of `ŵ(s) = 1/(s + λκ₁ s^α + λκ₂ s^β)` on a
/// fixed Talbot contour. Accurate to about 1e-12 for `t > 0`; the
/// transform has no poles off the negative real axis.
pub fn w_laplace(params: ModeParams, t: f64) -> Result<f64> {
    params.validate()?;
    if !(t >= 0.0) {
        return Err(domain("t", "time must be non-negative"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let ModeParams { lambda, kappa1, kappa2, alpha, beta } = params;
    let transform = |s: Complex<f64>| -> Complex<f64> {
        let denom = s + s.powf(alpha) * (lambda * kappa1) + s.powf(beta) * (lambda * kappa2);
        denom.inv()
    };
    let nodes = 24;
    let r = 2.0 * nodes as f64 / (5.0 * t);
    let mut acc = 0.5 * (r * t).exp() * transform(Complex::new(r, 0.0)).re;
    for k in 1..nodes {
        let theta = k as f64 * std::f64::consts::PI / nodes as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex::new(r * theta * cot, r * theta);
        let slope = Complex::new(1.0, theta + (theta * cot - 1.0) * cot);
        acc += ((s * t).exp() * transform(s) * slope).re;
    }
    Ok(r / nodes as f64 * acc)
}

/// `w(t)` from the series when it converges to `tol`, otherwise from the
/// Laplace inversion.
pub fn w_value(params: ModeParams, t: f64, tol: f64) -> Result<f64> {
    match ModeSolution::compute(params, t, tol) {
        Ok(s) => Ok(s.value),
        Err(Error::NoConvergence { .. }) => w_laplace(params, t),
        Err(e) => Err(e),
    }
}

/// One-parameter Mittag-Leffler function `E_a(z) = Σ z^k / Γ(ak + 1)` by
/// its power series; intended for `|z| ≤ 2`.
pub fn mittag_leffler(a: f64, z: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain("a", "parameter must be positive"));
    }
    if z.abs() > 10.0 {
        return Err(domain("z", "power series limited to |z| <= 10"));
    }
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 0..500 {
        let term = power / gamma_pos(a * k as f64 + 1.0);
        sum += term;
        if k > 5 && term.abs() < 1e-17 * sum.abs().max(1e-300) {
            return Ok(sum);
        }
        power *= z;
    }
    Err(Error::NoConvergence { what: "Mittag-Leffler series", achieved: f64::NAN, requested: 1e-17 })
}
