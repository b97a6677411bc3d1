//! Eigenfunction expansion of the exact solution on `Ω = (0, 1)` for data
//! given by finitely many sine modes.

use super::quadrature::tanh_sinh;
use super::series::{w_value, ModeParams};
use crate::dgsolver::ProblemSpec;
use crate::error::{domain, Result};
use std::f64::consts::PI;
use std::sync::Arc;

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `u₀ = Σ a_k sin(kπx)` and `f = Σ sin(kπx) g_k(t)`.
#[derive(Clone, Default)]
pub struct SineModes {
    pub initial: Vec<(usize, f64)>,
    pub forcing: Vec<(usize, TimeFn)>,
}

impl SineModes {
    pub fn initial_mode(mut self, k: usize, amplitude: f64) -> Self {
        self.initial.push((k, amplitude));
        self
    }

    pub fn forcing_mode(mut self, k: usize, g: TimeFn) -> Self {
        self.forcing.push((k, g));
        self
    }
}

const SERIES_TOL: f64 = 1e-13;
const CONVOLUTION_TOL: f64 = 1e-10;

/// Reference solution built from [`SineModes`].
#[derive(Clone)]
pub struct SpectralReference {
    alpha: f64,
    beta: f64,
    kappa1: f64,
    kappa2: f64,
    modes: SineModes,
    max_mode: usize,
}

/// Mode amplitudes frozen at one time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub amplitudes: Vec<(usize, f64)>,
}

impl Snapshot {
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitudes.iter().map(|&(k, a)| a * (k as f64 * PI * x).sin()).sum()
    }
}

impl SpectralReference {
    fn params(&self, k: usize) -> ModeParams {
        ModeParams {
            lambda: (k as f64 * PI).powi(2),
            kappa1: self.kappa1,
            kappa2: self.kappa2,
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    /// Sine coefficient of mode `k` at time `t`.
    pub fn mode_amplitude(&self, k: usize, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(domain("t", "time must be non-negative"));
        }
        if k == 0 || k > self.max_mode {
            return Ok(0.0);
        }
        let params = self.params(k);
        let mut acc = 0.0;
        let initial: f64 = self.modes.initial.iter().filter(|e| e.0 == k).map(|e| e.1).sum();
        if initial != 0.0 {
            acc += initial * w_value(params, t, SERIES_TOL)?;
        }
        for (_, g) in self.modes.forcing.iter().filter(|e| e.0 == k) {
            let mut failure = None;
            let conv = tanh_sinh(0.0, t, CONVOLUTION_TOL, |s, _, lag| match w_value(params, lag, SERIES_TOL) {
                Ok(w) => w * g(s),
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            acc += conv;
        }
        Ok(acc)
    }

    pub fn snapshot(&self, t: f64) -> Result<Snapshot> {
        let mut ks: Vec<usize> = self
            .modes
            .initial
            .iter()
            .map(|e| e.0)
            .chain(self.modes.forcing.iter().map(|e| e.0))
            .filter(|&k| k >= 1 && k <= self.max_mode)
            .collect();
        ks.sort_unstable();
        ks.dedup();
        let amplitudes = ks
            .into_iter()
            .map(|k| self.mode_amplitude(k, t).map(|a| (k, a)))
            .collect::<Result<_>>()?;
        Ok(Snapshot { t, amplitudes })
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.snapshot(t)?.eval(x))
    }
}

/// Builds the eigenfunction reference for the orders and diffusivities of
/// `spec`, keeping modes `1..=max_mode`.
pub fn spectral_reference(spec: &ProblemSpec, modes: &SineModes, max_mode: usize) -> Result<SpectralReference> {
    if max_mode == 0 {
        return Err(domain("max_mode", "at least one mode is required"));
    }
    Ok(SpectralReference {
        alpha: spec.alpha.value(),
        beta: spec.beta.value(),
        kappa1: spec.kappa1,
        kappa2: spec.kappa2,
        modes: modes.clone(),
        max_mode,
    })
}
