//! Double-integral estimate of the fractional Sobolev seminorm of a
//! piecewise polynomial path, extended by zero outside `(0, t)`.

use super::quadrature::{gauss_kronrod, tanh_sinh};
use crate::dgsolver::SpaceTimeSolution;
use crate::error::{domain, Error, Result};
use crate::polybasis::TimeBasis;

/// Largest number of pieces accepted; the cost grows quadratically.
pub const MAX_PIECES: usize = 32;

/// Scalar path, polynomial on each piece, stored in monomials of the local
/// coordinate `y ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub struct PiecewisePath {
    nodes: Vec<f64>,
    monomials: Vec<Vec<f64>>,
}

impl PiecewisePath {
    /// `coeffs[j]` are the shifted Legendre coefficients on `[nodes[j], nodes[j+1]]`.
    pub fn from_legendre(nodes: &[f64], coeffs: &[Vec<f64>]) -> Result<Self> {
        if nodes.len() < 2 || coeffs.len() + 1 != nodes.len() {
            return Err(domain("path", "need one coefficient vector per piece"));
        }
        if nodes[0] != 0.0 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("path", "nodes must start at 0 and increase"));
        }
        let mut monomials = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.is_empty() {
                return Err(domain("path", "empty coefficient vector"));
            }
            let basis = TimeBasis::new(c.len() - 1)?;
            let mut mono = vec![0.0; c.len()];
            for (p, &cp) in c.iter().enumerate() {
                for (k, &a) in basis.monomial_expansion(p).iter().enumerate() {
                    mono[k] += cp * a;
                }
            }
            monomials.push(mono);
        }
        Ok(Self { nodes: nodes.to_vec(), monomials })
    }

    /// Sine coefficient `2∫ U(x, t) sin(kπx) dx` of a computed solution on
    /// slabs `1..=slabs`.
    pub fn from_solution_mode(sol: &SpaceTimeSolution, slabs: usize, k: usize) -> Result<Self> {
        if slabs == 0 || slabs > sol.mesh.slabs() {
            return Err(Error::Index(format!("slab count {slabs} out of range")));
        }
        let kpi = k as f64 * std::f64::consts::PI;
        let weights = sol.fem.load_vector(|x| 2.0 * (kpi * x).sin());
        let coeffs: Vec<Vec<f64>> = sol.coeffs[..slabs]
            .iter()
            .map(|c| (0..c.nrows()).map(|p| c.row(p).transpose().dot(&weights)).collect())
            .collect();
        Self::from_legendre(&sol.mesh.nodes()[..=slabs], &coeffs)
    }

    pub fn pieces(&self) -> usize {
        self.monomials.len()
    }

    pub fn end(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    fn width(&self, j: usize) -> f64 {
        self.nodes[j + 1] - self.nodes[j]
    }

    fn local(&self, j: usize, y: f64) -> f64 {
        self.monomials[j].iter().rev().fold(0.0, |acc, &a| acc * y + a)
    }

    /// `(v(y1) - v(y0)) / (y1 - y0)` on piece `j`, without cancellation.
    fn divided(&self, j: usize, y0: f64, y1: f64) -> f64 {
        let mut acc = 0.0;
        for (k, &a) in self.monomials[j].iter().enumerate().skip(1) {
            let mut s = 0.0;
            for i in 0..k {
                s += y1.powi(i as i32) * y0.powi((k - 1 - i) as i32);
            }
            acc += a * s;
        }
        acc
    }

    fn scale(&self) -> f64 {
        self.monomials.iter().flatten().fold(0.0f64, |m, a| m.max(a.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormEstimate {
    /// `∫∫_{(0,t)²} |v(x)-v(y)|² / |x-y|^{1+2s}`
    pub interior: f64,
    /// Contribution of the zero extension.
    pub exterior: f64,
    /// Square root of the sum.
    pub value: f64,
}

/// Estimates the `H^s(ℝ)` Gagliardo seminorm of the zero extension of
/// `path`, for `s ∈ (0, 1/2) ∪ (1/2, 1)`.
///
/// For `s > 1/2` the value is finite only for continuous paths that vanish
/// at both ends; other paths are rejected.
pub fn seminorm_estimate(s: f64, path: &PiecewisePath) -> Result<SeminormEstimate> {
    if !(s > 0.0 && s < 1.0) || s == 0.5 {
        return Err(domain("s", "order must lie in (0, 1/2) or (1/2, 1)"));
    }
    if path.pieces() > MAX_PIECES {
        return Err(domain("path", format!("at most {MAX_PIECES} pieces supported")));
    }
    let smooth = s > 0.5;
    let scale = path.scale().max(f64::MIN_POSITIVE);
    let n = path.pieces();
    let jumps: Vec<f64> = (1..n).map(|b| path.local(b, 0.0) - path.local(b - 1, 1.0)).collect();
    let v_start = path.local(0, 0.0);
    let v_end = path.local(n - 1, 1.0);
    if smooth {
        let tol = 1e-12 * scale;
        if jumps.iter().any(|j| j.abs() > tol) || v_start.abs() > tol || v_end.abs() > tol {
            return Err(domain("path", "seminorm is infinite for s > 1/2 unless the zero extension is continuous"));
        }
    }
    let tol = 1e-11 * scale * scale;
    let two_s = 2.0 * s;
    let mut interior = 0.0;
    for b in 0..n {
        let wb = path.width(b);
        // same piece: 2∫_0^w d^{-1-2s} ∫_0^{w-d} (v(x+d) - v(x))² dx dd
        let same = tanh_sinh(0.0, wb, tol, |_, d, _| {
            let inner = gauss_kronrod(0.0, wb - d, tol, |x| {
                let q = path.divided(b, x / wb, (x + d) / wb) / wb;
                q * q
            })
            .unwrap_or(f64::NAN);
            d.powf(1.0 - two_s) * inner
        })?;
        interior += 2.0 * same;
        for a in 0..b {
            let wa = path.width(a);
            let gap = path.nodes[b] - path.nodes[a + 1];
            let adjacent = a + 1 == b;
            let jump = if smooth || !adjacent { 0.0 } else { jumps[b - 1] };
            let mut failure = None;
            let cross = tanh_sinh(0.0, wb, tol, |_, u, _| {
                let eps = gap + u;
                let top = (1.0 + wa / eps).ln();
                let rise_b = u * path.divided(b, 0.0, u / wb) / wb;
                let f = |sigma: f64| {
                    let v = eps * sigma.exp_m1();
                    let drop_a = v * path.divided(a, 1.0 - v / wa, 1.0) / wa;
                    let diff = if adjacent {
                        rise_b + jump + drop_a
                    } else {
                        path.local(b, u / wb) - path.local(a, 1.0 - v / wa)
                    };
                    (-two_s * sigma).exp() * diff * diff
                };
                let mut acc = 0.0;
                let mut lo = 0.0;
                let mut hi = 1.0f64.min(top);
                while lo < top {
                    match gauss_kronrod(lo, hi, tol * 1e-2, &f) {
                        Ok(v) => acc += v,
                        Err(e) => failure = Some(e),
                    }
                    lo = hi;
                    hi = (2.0 * hi).min(top);
                    if top - hi < 1.0 {
                        hi = top;
                    }
                }
                eps.powf(-two_s) * acc
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            interior += 2.0 * cross;
        }
    }
    if interior.is_nan() {
        return Err(Error::NoConvergence { what: "seminorm inner quadrature", achieved: f64::NAN, requested: tol });
    }
    // exterior: 2∫ v² [x^{-2s} + (t-x)^{-2s}] / (2s)
    let t = path.end();
    let mut exterior = 0.0;
    for j in 0..n {
        let w = path.width(j);
        let x0 = path.nodes[j];
        let right_gap = t - path.nodes[j + 1];
        exterior += tanh_sinh(0.0, w, tol, |_, dl, dr| {
            let y = dl / w;
            let v = if smooth && j == 0 {
                dl * path.divided(0, 0.0, y) / w
            } else if smooth && j == n - 1 {
                -dr * path.divided(j, y, 1.0) / w
            } else {
                path.local(j, y)
            };
            let left = x0 + dl;
            let right = right_gap + dr;
            v * v * (left.powf(-two_s) + right.powf(-two_s))
        })?;
    }
    exterior *= 2.0 / two_s;
    Ok(SeminormEstimate { interior, exterior, value: (interior + exterior).sqrt() })
}
