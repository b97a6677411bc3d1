use crate::error::{Error, Result};
use crate::mesh::{sigma_star, sigma_star_star};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use super::metrics::ErrorMetric;

/// Environment variable overriding the Gauss point counts of the solver.
pub const QUAD_POINTS_ENV: &str = "FRACDG_QUAD_POINTS";

/// One family of runs sharing `(r, m, σ)`; orders are taken along `slabs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGroup {
    pub r: f64,
    pub m: usize,
    pub sigma: f64,
    #[serde(rename = "J", default)]
    pub slabs: Vec<usize>,
}

/// A full experiment: problem data, discretization and the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub name: String,
    pub alpha: f64,
    pub beta: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub cells: usize,
    pub n: usize,
    pub metric: ErrorMetric,
    pub out: Option<PathBuf>,
    #[serde(rename = "group")]
    pub groups: Vec<SweepGroup>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            alpha: 0.2,
            beta: 0.8,
            kappa1: 1.0,
            kappa2: 1.0,
            t_final: 1.0,
            cells: 32,
            n: 3,
            metric: ErrorMetric::Exact,
            out: None,
            groups: Vec::new(),
        }
    }
}

/// Command-line style overrides; `None` keeps the configured value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub kappa1: Option<f64>,
    pub kappa2: Option<f64>,
    pub t_final: Option<f64>,
    pub slabs: Option<Vec<usize>>,
    pub sigma: Option<f64>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub cells: Option<usize>,
    pub r: Option<f64>,
    pub metric: Option<ErrorMetric>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    /// Experiment 1: smooth solution `r = 4` on uniform meshes.
    pub fn experiment1() -> Self {
        let slabs = vec![64, 128, 256, 512, 1024];
        Self {
            name: "experiment1".into(),
            groups: (0..=1).map(|m| SweepGroup { r: 4.0, m, sigma: 1.0, slabs: slabs.clone() }).collect(),
            ..Self::default()
        }
    }

    /// Experiment 2: singular solutions on uniform meshes. Uses the nodal
    /// interpolant metric, which is what the published tables report.
    pub fn experiment2() -> Self {
        let slabs = vec![16, 32, 64, 128, 256];
        let mut groups = Vec::new();
        for r in [0.2, 0.5, 0.8] {
            groups.push(SweepGroup { r, m: 0, sigma: 1.0, slabs: slabs.clone() });
        }
        for r in [0.5, 0.8, 1.5] {
            groups.push(SweepGroup { r, m: 1, sigma: 1.0, slabs: slabs.clone() });
        }
        Self { name: "experiment2".into(), metric: ErrorMetric::Interpolant, groups, ..Self::default() }
    }

    /// Experiment 3: graded meshes, including `σ*` and `σ**`.
    pub fn experiment3() -> Self {
        let base = Self::default();
        let mut groups = Vec::new();
        for (r, m, extra) in [(0.2, 0, 1.5), (0.2, 1, 3.0), (0.4, 0, 1.1), (0.4, 1, 2.0)] {
            let slabs: Vec<usize> = if m == 0 { vec![16, 32, 64, 128, 256] } else { vec![4, 8, 16, 32, 64] };
            let star = sigma_star(m, r, base.beta).expect("preset parameters are valid");
            let star2 = sigma_star_star(m, r, base.beta).expect("preset parameters are valid");
            for sigma in [extra, star, star2] {
                groups.push(SweepGroup { r, m, sigma, slabs: slabs.clone() });
            }
        }
        Self { name: "experiment3".into(), groups, ..base }
    }

    pub fn preset(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Self::experiment1()),
            2 => Ok(Self::experiment2()),
            3 => Ok(Self::experiment3()),
            _ => Err(Error::Config(format!("unknown experiment {k}; expected 1, 2 or 3"))),
        }
    }

    /// Applies overrides. Sweep fields (`J`, `σ`, `m`, `r`) replace the
    /// value in every group; with no groups, one group with `r = 4`, `m = 1`,
    /// `σ = 1` and an empty `J` list is created first.
    pub fn apply(&mut self, o: &Overrides) {
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut self.alpha, o.alpha);
        set(&mut self.beta, o.beta);
        set(&mut self.kappa1, o.kappa1);
        set(&mut self.kappa2, o.kappa2);
        set(&mut self.t_final, o.t_final);
        if let Some(n) = o.n {
            self.n = n;
        }
        if let Some(c) = o.cells {
            self.cells = c;
        }
        if let Some(metric) = o.metric {
            self.metric = metric;
        }
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        let sweep = o.slabs.is_some() || o.sigma.is_some() || o.m.is_some() || o.r.is_some();
        if sweep && self.groups.is_empty() {
            self.groups.push(SweepGroup { r: 4.0, m: 1, sigma: 1.0, slabs: Vec::new() });
        }
        for g in &mut self.groups {
            if let Some(s) = &o.slabs {
                g.slabs = s.clone();
            }
            set(&mut g.sigma, o.sigma);
            set(&mut g.r, o.r);
            if let Some(m) = o.m {
                g.m = m;
            }
        }
    }

    /// Checks everything that can be checked without solving.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.alpha > 0.0 && self.alpha < self.beta && self.beta < 1.0) {
            return bad(format!("need 0 < alpha < beta < 1, got alpha = {}, beta = {}", self.alpha, self.beta));
        }
        if !(self.kappa1 > 0.0 && self.kappa2 > 0.0) {
            return bad("kappa1 and kappa2 must be positive".into());
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad("T must be positive".into());
        }
        if !(1..=3).contains(&self.n) {
            return bad(format!("spatial degree n must be 1, 2 or 3, got {}", self.n));
        }
        if self.cells < 2 {
            return bad("at least two spatial cells are required".into());
        }
        for g in &self.groups {
            if g.m > crate::polybasis::MAX_TIME_DEGREE {
                return bad(format!("time degree m = {} exceeds {}", g.m, crate::polybasis::MAX_TIME_DEGREE));
            }
            if !(g.sigma >= 1.0 && g.sigma.is_finite()) {
                return bad(format!("grading sigma must be >= 1, got {}", g.sigma));
            }
            if !(g.r > 0.0_f64.max(self.beta - 1.0)) {
                return bad(format!("exponent r must be positive, got {}", g.r));
            }
            if g.slabs.contains(&0) {
                return bad("J must be positive".into());
            }
        }
        Ok(())
    }

    /// Solver point-count override from [`QUAD_POINTS_ENV`].
    pub fn quad_points_from_env() -> Result<Option<usize>> {
        match std::env::var(QUAD_POINTS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&k| (2..=crate::polybasis::MAX_POINTS).contains(&k))
                .map(Some)
                .ok_or_else(|| Error::Config(format!("{QUAD_POINTS_ENV} must be an integer in 2..=64, got {v:?}"))),
            Err(_) => Ok(None),
        }
    }
}
