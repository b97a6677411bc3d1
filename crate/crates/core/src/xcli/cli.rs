use super::config::{ExperimentConfig, Overrides};
use super::metrics::ErrorMetric;
use super::report::run_experiment;
use clap::Parser;
use std::ffi::OsString;
use std::path::PathBuf;

/// Convergence experiments for the fractional subdiffusion DG solver.
#[derive(Debug, Parser)]
#[command(name = "fracdg", version)]
pub struct Cli {
    /// Configuration file (TOML); presets and flags are applied on top.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Start from a built-in experiment.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub experiment: Option<u8>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub kappa1: Option<f64>,
    #[arg(long)]
    pub kappa2: Option<f64>,
    /// Final time.
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    /// Slab counts, comma separated.
    #[arg(long = "J", value_delimiter = ',')]
    pub slabs: Option<Vec<usize>>,
    /// Grading exponent.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Time degree.
    #[arg(long)]
    pub m: Option<usize>,
    /// Spatial degree.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of spatial cells.
    #[arg(long)]
    pub cells: Option<usize>,
    /// Exponent of the manufactured solution `t^r sin(πx)`.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, value_enum)]
    pub metric: Option<ErrorMetric>,
    /// Directory for the table files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Cli {
    /// Resolves file, preset and flags into one configuration. A preset
    /// replaces the file's sweep; flags override both.
    pub fn resolve(&self) -> crate::Result<ExperimentConfig> {
        let mut config = match (&self.config, self.experiment) {
            (Some(path), None) => ExperimentConfig::load(path)?,
            (None, Some(k)) => ExperimentConfig::preset(k)?,
            (Some(path), Some(k)) => {
                let file = ExperimentConfig::load(path)?;
                ExperimentConfig { groups: ExperimentConfig::preset(k)?.groups, ..file }
            }
            (None, None) => ExperimentConfig::default(),
        };
        config.apply(&Overrides {
            alpha: self.alpha,
            beta: self.beta,
            kappa1: self.kappa1,
            kappa2: self.kappa2,
            t_final: self.t_final,
            slabs: self.slabs.clone(),
            sigma: self.sigma,
            m: self.m,
            n: self.n,
            cells: self.cells,
            r: self.r,
            metric: self.metric,
            out: self.out.clone(),
        });
        config.validate()?;
        Ok(config)
    }
}

/// Parses arguments, runs the sweep, prints the table and writes files.
/// Returns the process exit code: 0 on success, 1 if any cell failed, 2 on
/// a usage or configuration error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let config = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = match run_experiment(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", report.to_text());
    if let Some(dir) = &config.out {
        match report.write_tables(dir) {
            Ok(files) => eprintln!("wrote {}", files.csv.display()),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    i32::from(report.any_failed())
}
