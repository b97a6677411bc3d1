use crate::error::{domain, Result};

/// Largest supported temporal degree. Kernel integrals go through the
/// monomial form of the basis, whose conditioning degrades past this.
pub const MAX_TIME_DEGREE: usize = 4;

/// Shifted Legendre polynomials `φ_p(x) = P_p(2x - 1)` on `[0, 1]`,
/// `p = 0..=m`. Orthogonal with `∫φ_p φ_q = δ_pq / (2p + 1)`,
/// `φ_p(1) = 1`, `φ_p(0) = (-1)^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeBasis {
    m: usize,
    monomials: Vec<Vec<f64>>,
}

impl TimeBasis {
    pub fn new(m: usize) -> Result<Self> {
        if m > MAX_TIME_DEGREE {
            return Err(domain(
                "m",
                format!("time degree must be at most {MAX_TIME_DEGREE}, got {m}"),
            ));
        }
        let monomials = (0..=m).map(shifted_legendre_monomials).collect();
        Ok(Self { m, monomials })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval(&self, p: usize, x: f64) -> f64 {
        legendre(p, 2.0 * x - 1.0).0
    }

    pub fn deriv(&self, p: usize, x: f64) -> f64 {
        2.0 * legendre(p, 2.0 * x - 1.0).1
    }

    /// Coefficients `c_k` with `φ_p(x) = Σ_k c_k x^k`.
    pub fn monomial_expansion(&self, p: usize) -> &[f64] {
        &self.monomials[p]
    }

    /// Values at the left endpoint, `(-1)^p`.
    pub fn left_value(&self, p: usize) -> f64 {
        if p.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// `P_p(ξ)` and `P_p'(ξ)` by the three-term recurrence.
fn legendre(p: usize, xi: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, xi);
    let (mut d0, mut d1) = (0.0, 1.0);
    if p == 0 {
        return (1.0, 0.0);
    }
    for n in 1..p {
        let nf = n as f64;
        let p2 = ((2.0 * nf + 1.0) * xi * p1 - nf * p0) / (nf + 1.0);
        let d2 = d0 + (2.0 * nf + 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn shifted_legendre_monomials(p: usize) -> Vec<f64> {
    (0..=p)
        .map(|k| {
            let sign = if (p + k).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * binomial(p, k) * binomial(p + k, k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polybasis::quad::gauss_legendre;

    #[test]
    fn orthogonality() {
        let b = TimeBasis::new(4).unwrap();
        let q = gauss_legendre(10).unwrap();
        for p in 0..=4 {
            for r in 0..=4 {
                let v = q.integrate(|x| b.eval(p, x) * b.eval(r, x));
                let exact = if p == r { 1.0 / (2 * p + 1) as f64 } else { 0.0 };
                assert!((v - exact).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn endpoint_values() {
        let b = TimeBasis::new(4).unwrap();
        for p in 0..=4 {
            assert!((b.eval(p, 1.0) - 1.0).abs() < 1e-15);
            assert!((b.eval(p, 0.0) - b.left_value(p)).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let b = TimeBasis::new(4).unwrap();
        let h = 1e-6;
        for p in 0..=4 {
            for &x in &[0.1, 0.37, 0.5, 0.93] {
                let fd = (b.eval(p, x + h) - b.eval(p, x - h)) / (2.0 * h);
                assert!((fd - b.deriv(p, x)).abs() < 1e-7);
            }
        }
        assert_eq!(b.deriv(1, 0.3), 2.0);
    }

    #[test]
    fn rejects_high_degree() {
        assert!(TimeBasis::new(5).is_err());
    }
}
