use super::config::{ExperimentConfig, SweepGroup};
use super::metrics::{error_metrics, observed_order};
use crate::dgsolver::{manufactured_problem, solve_with, SolverOptions};
use crate::error::{Error, Result};
use crate::fem1d::SpatialFem;
use crate::mesh::{GradedMesh, SpatialPartition};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// One `(J, σ, m, r)` cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub group: usize,
    #[serde(rename = "J")]
    pub slabs: usize,
    pub sigma: f64,
    pub m: usize,
    pub r: f64,
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    pub order1: Option<f64>,
    pub order2: Option<f64>,
    /// Set when the cell failed; the sweep carries on.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub config: ExperimentConfig,
    /// SHA-256 of the canonical configuration text.
    pub config_hash: String,
    pub runtime_seconds: f64,
    pub rows: Vec<ReportRow>,
    pub warnings: Vec<String>,
}

/// Paths written by [`ConvergenceReport::write_tables`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFiles {
    pub csv: PathBuf,
    pub text: PathBuf,
    pub meta: PathBuf,
}

pub const CSV_HEADER: &str = "J,sigma,m,r,E1,order1,E2,order2";

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn fmt_err(x: Option<f64>, failed: bool) -> String {
    match x {
        Some(v) => format!("{v:.2e}"),
        None if failed => "failed".into(),
        None => "--".into(),
    }
}

fn fmt_order(x: Option<f64>) -> String {
    x.map_or_else(|| "--".into(), |v| format!("{v:.2}"))
}

impl ReportRow {
    fn cells(&self) -> [String; 8] {
        let failed = self.failure.is_some();
        [
            self.slabs.to_string(),
            fmt_num(self.sigma),
            self.m.to_string(),
            fmt_num(self.r),
            fmt_err(self.e1, failed),
            fmt_order(self.order1),
            fmt_err(self.e2, failed),
            fmt_order(self.order2),
        ]
    }
}

impl ConvergenceReport {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.failure.is_some())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.cells().join(","));
            out.push('\n');
        }
        out
    }

    /// Aligned table, one block per sweep group.
    pub fn to_text(&self) -> String {
        let header: Vec<String> = CSV_HEADER.split(',').map(String::from).collect();
        let body: Vec<[String; 8]> = self.rows.iter().map(ReportRow::cells).collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for cells in &body {
            for (w, c) in widths.iter_mut().zip(cells) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = String::new();
        let _ = writeln!(out, "{}", line(&header));
        let rule = "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1));
        let _ = writeln!(out, "{rule}");
        let mut last_group = None;
        for (row, cells) in self.rows.iter().zip(&body) {
            if last_group.is_some() && last_group != Some(row.group) {
                out.push('\n');
            }
            last_group = Some(row.group);
            let _ = writeln!(out, "{}", line(cells));
        }
        for row in self.rows.iter().filter(|r| r.failure.is_some()) {
            let _ = writeln!(out, "# J={} sigma={} m={} r={}: {}", row.slabs, fmt_num(row.sigma), row.m, fmt_num(row.r), row.failure.as_deref().unwrap_or(""));
        }
        out
    }

    /// Run metadata kept out of the tables so those stay byte-identical.
    pub fn meta_toml(&self) -> String {
        #[derive(Serialize)]
        struct Meta<'a> {
            config_hash: &'a str,
            runtime_seconds: f64,
            rows: usize,
            failed_rows: usize,
            warnings: &'a [String],
            config: &'a ExperimentConfig,
        }
        let meta = Meta {
            config_hash: &self.config_hash,
            runtime_seconds: self.runtime_seconds,
            rows: self.rows.len(),
            failed_rows: self.rows.iter().filter(|r| r.failure.is_some()).count(),
            warnings: &self.warnings,
            config: &self.config,
        };
        toml::to_string(&meta).expect("metadata is always representable")
    }

    /// Writes `<name>.csv`, `<name>.txt` and `<name>.meta.toml` into `dir`.
    pub fn write_tables(&self, dir: &Path) -> Result<TableFiles> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let files = TableFiles {
            csv: dir.join(format!("{}.csv", self.config.name)),
            text: dir.join(format!("{}.txt", self.config.name)),
            meta: dir.join(format!("{}.meta.toml", self.config.name)),
        };
        for (path, body) in [(&files.csv, self.to_csv()), (&files.text, self.to_text()), (&files.meta, self.meta_toml())] {
            std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(files)
    }
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    Sha256::digest(config.to_toml_string().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn run_cell(
    config: &ExperimentConfig,
    fem: &SpatialFem,
    group: &SweepGroup,
    slabs: usize,
    opts: SolverOptions,
) -> Result<(f64, f64)> {
    let spec = manufactured_problem(group.r, config.alpha, config.beta, config.kappa1, config.kappa2, config.t_final)?;
    let mesh = GradedMesh::new(config.t_final, slabs, group.sigma)?;
    let solution = solve_with(&spec, &mesh, fem, group.m, opts)?;
    let exact = spec.exact.as_ref().expect("manufactured problems carry their solution");
    Ok(error_metrics(&solution, exact.as_ref(), config.metric))
}

/// Runs every cell of the sweep in parallel and assembles the report.
///
/// A failing cell is recorded in its row; the other cells still run.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let start = Instant::now();
    let points = ExperimentConfig::quad_points_from_env()?;
    let opts = SolverOptions { time_points: points, kernel_points: points };
    let fem = SpatialFem::assemble(SpatialPartition::unit(config.cells)?, config.n)?;
    let mut warnings = Vec::new();
    let cells: Vec<(usize, usize)> = config
        .groups
        .iter()
        .enumerate()
        .flat_map(|(g, group)| group.slabs.iter().map(move |&j| (g, j)))
        .collect();
    for &(g, j) in &cells {
        let sigma = config.groups[g].sigma;
        let first = (1.0 / j as f64).powf(sigma);
        if first < 1e-14 {
            warnings.push(format!(
                "J={j}, sigma={}: first slab width tau_1/T = {first:e} is below 1e-14",
                fmt_num(sigma)
            ));
        }
    }
    let results: Vec<Result<(f64, f64)>> = cells
        .par_iter()
        .map(|&(g, j)| run_cell(config, &fem, &config.groups[g], j, opts))
        .collect();
    let mut rows: Vec<ReportRow> = cells
        .iter()
        .zip(results)
        .map(|(&(g, j), res)| {
            let group = &config.groups[g];
            let (e1, e2, failure) = match res {
                Ok((a, b)) => (Some(a), Some(b), None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            ReportRow { group: g, slabs: j, sigma: group.sigma, m: group.m, r: group.r, e1, e2, order1: None, order2: None, failure }
        })
        .collect();
    // orders against the row with half as many slabs in the same group
    let snapshot = rows.clone();
    for row in &mut rows {
        if row.slabs % 2 != 0 {
            continue;
        }
        let Some(coarse) = snapshot.iter().find(|c| c.group == row.group && 2 * c.slabs == row.slabs) else {
            continue;
        };
        let order = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => observed_order(a, b).ok(),
            _ => None,
        };
        row.order1 = order(coarse.e1, row.e1);
        row.order2 = order(coarse.e2, row.e2);
    }
    Ok(ConvergenceReport {
        config: config.clone(),
        config_hash: config_hash(config),
        runtime_seconds: start.elapsed().as_secs_f64(),
        rows,
        warnings,
    })
}
