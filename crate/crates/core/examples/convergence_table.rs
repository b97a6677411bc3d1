//! Running a convergence sweep and writing the tables.
//!
//! `cargo run --release --example convergence_table -- 3` runs the third
//! built-in experiment; without an argument a short custom sweep is used.

use fracdg::xcli::{run_experiment, ExperimentConfig, SweepGroup};

fn main() -> fracdg::Result<()> {
    let config = match std::env::args().nth(1) {
        Some(k) => ExperimentConfig::preset(k.parse().unwrap_or(0))?,
        None => ExperimentConfig {
            name: "short".into(),
            groups: vec![SweepGroup { r: 0.5, m: 1, sigma: 1.0, slabs: vec![16, 32, 64] }],
            ..ExperimentConfig::default()
        },
    };
    let report = run_experiment(&config)?;
    print!("{}", report.to_text());
    let dir = std::env::temp_dir().join("fracdg-tables");
    let files = report.write_tables(&dir)?;
    println!("\ncsv: {}\nconfig hash: {}", files.csv.display(), report.config_hash);
    Ok(())
}
