//! Gaussian quadrature rules on the unit interval.

use super::special::beta_pos;
use crate::error::{domain, Result};
use nalgebra::{DMatrix, SymmetricEigen};

pub const MAX_POINTS: usize = 64;

/// Which endpoint carries the weakly singular Jacobi weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// weight `x^{-γ}`
    Left,
    /// weight `(1-x)^{-γ}`
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadKind {
    Legendre,
    /// `∫₀¹ (1-x)^right x^left g(x) dx`
    Jacobi { left: f64, right: f64 },
}

/// A quadrature rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub kind: QuadKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn count(&self) -> usize {
        self.nodes.len()
    }

    /// Applies the rule to `g` on `[0, 1]` (the weight, if any, is implicit).
    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }

    /// Applies the rule on `[a, b]`. Only meaningful for the Legendre kind.
    pub fn integrate_on(&self, a: f64, b: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
        let h = b - a;
        h * self.integrate(|x| g(a + h * x))
    }
}

fn check_count(k: usize) -> Result<()> {
    if k == 0 || k > MAX_POINTS {
        return Err(domain(
            "k",
            format!("point count must be in 1..={MAX_POINTS}, got {k}"),
        ));
    }
    Ok(())
}

/// Gauss-Legendre rule with `k` points mapped to `[0, 1]`.
pub fn gauss_legendre(k: usize) -> Result<QuadRule> {
    check_count(k)?;
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let n = k as f64;
    for i in 0..k.div_ceil(2) {
        // Tricomi initial guess, then Newton on the three-term recurrence
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(k, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map from [-1, 1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[k - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[k - 1 - i] = 0.5 * w;
    }
    Ok(QuadRule {
        kind: QuadKind::Legendre,
        nodes,
        weights,
    })
}

fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Jacobi rule with `k` points for `∫₀¹ x^{-γ} g` (`Side::Left`) or
/// `∫₀¹ (1-x)^{-γ} g` (`Side::Right`), `0 < γ < 1`.
pub fn gauss_jacobi(k: usize, gamma: f64, side: Side) -> Result<QuadRule> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain("gamma", format!("must lie in (0, 1), got {gamma}")));
    }
    match side {
        Side::Left => gauss_jacobi_general(k, -gamma, 0.0),
        Side::Right => gauss_jacobi_general(k, 0.0, -gamma),
    }
}

/// Gauss-Jacobi rule with `k` points for `∫₀¹ x^left (1-x)^right g(x) dx`,
/// exponents `> -1`.
pub fn gauss_jacobi_general(k: usize, left: f64, right: f64) -> Result<QuadRule> {
    check_count(k)?;
    if !(left > -1.0 && right > -1.0) {
        return Err(domain(
            "exponents",
            format!("Jacobi exponents must exceed -1, got ({left}, {right})"),
        ));
    }
    // On [-1, 1] the weight is (1-ξ)^a (1+ξ)^b with x = (1+ξ)/2.
    let (a, b) = (right, left);
    let ab = a + b;

    // Golub-Welsch for starting values
    let mut jac = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        let n = i as f64;
        let diag = if i == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * n + ab) * (2.0 * n + ab + 2.0))
        };
        jac[(i, i)] = diag;
        if i + 1 < k {
            let n = n + 1.0;
            let num = 4.0 * n * (n + a) * (n + b) * (n + ab);
            let den = (2.0 * n + ab).powi(2) * (2.0 * n + ab + 1.0) * (2.0 * n + ab - 1.0);
            let off = (num / den).sqrt();
            jac[(i, i + 1)] = off;
            jac[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut xs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());

    let mut nodes = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for mut x in xs {
        for _ in 0..8 {
            let (p, d) = jacobi_with_derivative(k, a, b, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = jacobi_with_derivative(k, a, b, x);
        nodes.push(0.5 * (1.0 + x));
        weights.push(1.0 / ((1.0 - x * x) * d * d));
    }
    // the common factor of the weights is fixed by the weight's total mass
    let mass = beta_pos(left + 1.0, right + 1.0);
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w *= mass / total);
    Ok(QuadRule {
        kind: QuadKind::Jacobi { left, right },
        nodes,
        weights,
    })
}

fn jacobi_with_derivative(k: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let ab = a + b;
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b + (ab + 2.0) * x);
    if k == 0 {
        return (1.0, 0.0);
    }
    for n in 2..=k {
        let n = n as f64;
        let c = 2.0 * n + ab;
        let a1 = 2.0 * n * (n + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
        let a3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * c;
        let p2 = (a2 * p1 - a3 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    let n = k as f64;
    let c = 2.0 * n + ab;
    let d = (n * (a - b - c * x) * p1 + 2.0 * (n + a) * (n + b) * p0) / (c * (1.0 - x * x));
    (p1, d)
}

/// `∫₀¹ g(y) dy` for `g` analytic on `[0, 1]` but singular at `y = -dist`.
///
/// Panels grow geometrically away from the singular point so that each
/// panel's width equals its distance to the singularity; a `rule` with
/// twelve or more points is then accurate to roughly machine precision.
pub fn integrate_away_from(rule: &QuadRule, dist: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
    debug_assert!(dist > 0.0);
    let mut a = 0.0;
    let mut total = 0.0;
    while a < 1.0 {
        let b = (a + (a + dist)).min(1.0);
        let b = if 1.0 - b < 0.25 * (b - a) { 1.0 } else { b };
        total += rule.integrate_on(a, b, &mut g);
        a = b;
    }
    total
}
