//! The scalar mode solution `w` by its Picard series, by Laplace inversion,
//! and in the single-term limit by the Mittag-Leffler function.

use fracdg::oracle::{mittag_leffler, w_laplace, w_value, ModeParams, ModeSolution};

fn main() -> fracdg::Result<()> {
    let params = ModeParams { lambda: 1.0, kappa1: 1.0, kappa2: 1.0, alpha: 0.2, beta: 0.8 };
    for t in [0.1, 0.5, 1.0] {
        let series = ModeSolution::compute(params, t, 1e-11)?;
        let inverted = w_laplace(params, t)?;
        println!(
            "t = {t}: series {:.12} (order {}, tail {:.1e}, residual {:.1e}), Laplace {:.12}",
            series.value,
            series.truncation,
            series.tail,
            series.defining_residual(),
            inverted
        );
    }

    let single = ModeParams { kappa2: 0.0, ..params };
    let t: f64 = 0.8;
    let w = ModeSolution::compute(single, t, 1e-14)?.value;
    let ml = mittag_leffler(0.8, -t.powf(0.8))?;
    println!("single term: series {w:.14}, Mittag-Leffler {ml:.14}");

    let stiff = ModeParams { lambda: std::f64::consts::PI.powi(2), ..params };
    println!("lambda = pi^2: series gives {:?}", ModeSolution::compute(stiff, 1.0, 1e-12).map(|s| s.value));
    println!("lambda = pi^2: w(1) = {:.12} via fallback", w_value(stiff, 1.0, 1e-12)?);
    Ok(())
}
