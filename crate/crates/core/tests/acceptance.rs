//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown; exits non-zero on any failure.

use fracdg::frackernel::KernelCache;
use fracdg::oracle::{brute_force_kernel_entry, spectral_reference, ModeParams, ModeSolution, SineModes};
use fracdg::polybasis::{gamma_fn, gauss_legendre, TimeBasis};
use fracdg::xcli::{run_experiment, ConvergenceReport, ErrorMetric, ExperimentConfig, SweepGroup};
use fracdg::{
    history_block, solve, FracOrder, Forcing, GradedMesh, KernelEvaluator, PowerTerm, ProblemSpec, SeparableTerm,
    SpatialFem, SpatialPartition,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, TestRunner};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

struct Verdict {
    ok: bool,
    summary: String,
}

fn verdict(ok: bool, summary: impl Into<String>) -> Verdict {
    Verdict { ok, summary: summary.into() }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("--".into(), |x| format!("{x:.3}"))
}

fn group_rows(report: &ConvergenceReport, g: usize) -> Vec<&fracdg::xcli::ReportRow> {
    report.rows.iter().filter(|r| r.group == g).collect()
}

fn print_report(report: &ConvergenceReport) {
    for line in report.to_text().lines() {
        println!("    {line}");
    }
}

fn criterion1() -> Verdict {
    const PUBLISHED: [[f64; 5]; 2] = [
        [1.43e-2, 7.56e-3, 3.95e-3, 2.05e-3, 1.06e-3],
        [3.02e-5, 7.20e-6, 1.71e-6, 4.08e-7, 9.69e-8],
    ];
    let config = ExperimentConfig { metric: ErrorMetric::Exact, ..ExperimentConfig::experiment1() };
    let report = match run_experiment(&config) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("experiment 1 did not run: {e}")),
    };
    print_report(&report);
    let mut ok = !report.any_failed();
    let mut notes = Vec::new();
    for (m, published) in PUBLISHED.iter().enumerate() {
        let rows = group_rows(&report, m);
        let (lo, hi) = if m == 0 { (0.87, 1.01) } else { (2.00, 2.14) };
        for row in &rows[1..] {
            let order = row.order1.unwrap_or(f64::NAN);
            if !(lo..=hi).contains(&order) {
                ok = false;
                notes.push(format!("m={m} J={} order {order:.3} outside [{lo}, {hi}]", row.slabs));
            }
        }
        for (row, &reference) in rows.iter().zip(published) {
            let e = row.e1.unwrap_or(f64::NAN);
            let rel = (e - reference).abs() / reference;
            if rel.is_nan() || rel > 0.2 {
                ok = false;
                notes.push(format!("m={m} J={} E1 {e:.3e} is {:.0}% off {reference:.2e}", row.slabs, rel * 100.0));
            }
        }
    }
    // one column at J = 1024, timed on a single thread
    let mut slowest: f64 = 0.0;
    for m in 0..=1 {
        let single = ExperimentConfig {
            groups: vec![SweepGroup { r: 4.0, m, sigma: 1.0, slabs: vec![1024] }],
            ..config.clone()
        };
        let start = Instant::now();
        let res = run_experiment(&single);
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        if res.is_err() {
            ok = false;
        }
        println!("    J=1024 m={m}: {secs:.2} s");
    }
    if slowest > 300.0 {
        ok = false;
        notes.push(format!("J=1024 took {slowest:.1} s"));
    }
    let orders = |m| {
        group_rows(&report, m)[1..].iter().map(|r| fmt_opt(r.order1)).collect::<Vec<_>>().join(" ")
    };
    let mut summary = format!(
        "experiment 1, m=0 orders [{}], m=1 orders [{}], E1 within 20% of the published values, J=1024 in {slowest:.1} s",
        orders(0),
        orders(1)
    );
    if !notes.is_empty() {
        summary = format!("{summary}; {}", notes.join("; "));
    }
    verdict(ok, summary)
}

fn criterion2() -> Verdict {
    let config = ExperimentConfig::experiment2();
    let report = match run_experiment(&config) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("experiment 2 did not run: {e}")),
    };
    print_report(&report);
    // (E1 target, E1 tol, E2 target, E2 tol) per group, in preset order
    let targets = [
        (0.29, 0.07, 1.0, 0.05),
        (0.59, 0.07, 1.0, 0.05),
        (0.90, 0.07, 1.0, 0.05),
        (0.58, 0.07, 2.11, 0.08),
        (0.88, 0.07, 2.10, 0.08),
        (1.58, 0.07, 2.08, 0.08),
    ];
    let mut ok = !report.any_failed();
    let mut cells = Vec::new();
    for (g, (t1, tol1, t2, tol2)) in targets.into_iter().enumerate() {
        let rows = group_rows(&report, g);
        let last = rows.last().unwrap();
        let (o1, o2) = (last.order1.unwrap_or(f64::NAN), last.order2.unwrap_or(f64::NAN));
        let good = (o1 - t1).abs() <= tol1 && (o2 - t2).abs() <= tol2;
        ok &= good;
        cells.push(format!("m={} r={}: {o1:.2}/{o2:.2}{}", last.m, last.r, if good { "" } else { " (off)" }));
    }
    let literal = ExperimentConfig { metric: ErrorMetric::Exact, ..config };
    if let Ok(lit) = run_experiment(&literal) {
        let orders: Vec<String> = (0..6)
            .map(|g| {
                let last = *group_rows(&lit, g).last().unwrap();
                format!("{}/{}", fmt_opt(last.order1), fmt_opt(last.order2))
            })
            .collect();
        println!("    with the exact-solution metric the J=256 orders are {}", orders.join(", "));
    }
    verdict(ok, format!("experiment 2, J=256 orders E1/E2 (interpolant metric): {}", cells.join(", ")))
}

fn criterion3() -> Verdict {
    let report = match run_experiment(&ExperimentConfig::experiment3()) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("experiment 3 did not run: {e}")),
    };
    print_report(&report);
    // (r, m, σ, published final-row order)
    let targets = [
        (0.2, 0, 1.5, 0.41),
        (0.2, 0, 2.0, 0.55),
        (0.2, 0, 10.0 / 3.0, 0.96),
        (0.2, 1, 16.0 / 3.0, 1.73),
        (0.2, 1, 20.0 / 3.0, 1.97),
        (0.4, 0, 1.2, 0.57),
        (0.4, 0, 2.0, 0.97),
        (0.4, 1, 3.2, 1.61),
        (0.4, 1, 4.0, 1.93),
    ];
    let mut ok = !report.any_failed();
    let mut cells = Vec::new();
    for (r, m, sigma, reference) in targets {
        let group = report
            .rows
            .iter()
            .find(|row| row.m == m && (row.r - r).abs() < 1e-12 && (row.sigma - sigma).abs() < 1e-9)
            .map(|row| row.group);
        let Some(g) = group else {
            ok = false;
            cells.push(format!("r={r} m={m} σ={sigma:.3}: missing"));
            continue;
        };
        let last = *group_rows(&report, g).last().unwrap();
        let o = last.order1.unwrap_or(f64::NAN);
        let good = (o - reference).abs() <= 0.1;
        ok &= good;
        cells.push(format!("r={r} m={m} σ={sigma:.3}: {o:.2} vs {reference}{}", if good { "" } else { " (off)" }));
    }
    verdict(ok, format!("experiment 3 final-row E1 orders: {}", cells.join(", ")))
}

fn criterion4() -> Verdict {
    let mut jobs = Vec::new();
    for gamma in [0.2, 0.5, 0.8] {
        for sigma in [1.0, 2.0] {
            for slabs in 1..=8 {
                for m in 0..=2 {
                    jobs.push((gamma, sigma, slabs, m));
                }
            }
        }
    }
    let results: Vec<(f64, usize)> = jobs
        .par_iter()
        .map(|&(gamma, sigma, slabs, m)| {
            let mesh = GradedMesh::new(1.0, slabs, sigma).unwrap();
            let order = FracOrder::new(gamma).unwrap();
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for j in 1..=slabs {
                for i in 1..=j {
                    let block = history_block(order, &mesh, m, j, i).unwrap().entries;
                    for q in 0..=m {
                        for p in 0..=m {
                            let brute = brute_force_kernel_entry(gamma, &mesh, m, j, i, q, p, 1e-13);
                            let dev = brute.map_or(f64::INFINITY, |b| (block[(q, p)] - b).abs());
                            worst = worst.max(dev);
                            count += 1;
                        }
                    }
                }
            }
            (worst, count)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let count: usize = results.iter().map(|r| r.1).sum();

    // m = 0: diagonal τ^{1-γ}/Γ(2-γ); off-diagonal from the jump of I^{1-γ}χ
    let mut closed_worst: f64 = 0.0;
    for gamma in [0.2, 0.5, 0.8] {
        let g = gamma_fn(2.0 - gamma).unwrap();
        let order = FracOrder::new(gamma).unwrap();
        for sigma in [1.0, 2.0] {
            let mesh = GradedMesh::new(1.0, 8, sigma).unwrap();
            for j in 1..=8 {
                for i in 1..=j {
                    let (a, b) = (mesh.node(i - 1), mesh.node(i));
                    let f = |t: f64| ((t - a).max(0.0).powf(1.0 - gamma) - (t - b).max(0.0).powf(1.0 - gamma)) / g;
                    let closed = f(mesh.node(j)) - f(mesh.node(j - 1));
                    let lib = history_block(order, &mesh, 0, j, i).unwrap().entries[(0, 0)];
                    closed_worst = closed_worst.max((lib - closed).abs());
                }
            }
        }
    }
    verdict(
        worst <= 1e-10 && closed_worst <= 1e-12,
        format!(
            "history blocks vs brute-force quadrature over {count} entries: max deviation {worst:.2e} (limit 1e-10); m=0 closed forms {closed_worst:.2e} (limit 1e-12)"
        ),
    )
}

fn criterion5() -> Verdict {
    let spec = ProblemSpec::new(0.2, 0.8, 1.0, 1.0, 1.0, Arc::new(|x: f64| (PI * x).sin()), Forcing::Zero).unwrap();
    let reference = spectral_reference(&spec, &SineModes::default().initial_mode(1, 1.0), 1).unwrap();
    let at_end = reference.snapshot(1.0).unwrap();
    let mut errors = Vec::new();
    for (slabs, cells) in [(16, 4), (32, 8), (64, 16), (256, 32)] {
        let mesh = GradedMesh::new(1.0, slabs, 1.0).unwrap();
        let fem = SpatialFem::assemble(SpatialPartition::unit(cells).unwrap(), 3).unwrap();
        let sol = solve(&spec, &mesh, &fem, 1).unwrap();
        let err = fem.l2_error(&sol.trace(slabs), |x| at_end.eval(x));
        println!("    J={slabs:>3} h=1/{cells:<2} m=1 n=3: ‖U(T) - u(T)‖ = {err:.3e}");
        errors.push(err);
    }
    let monotone = errors[0] > errors[1] && errors[1] > errors[2];
    let ok = monotone && errors[3] <= 1e-3;
    verdict(
        ok,
        format!(
            "spectral reference: errors {:.2e} > {:.2e} > {:.2e} over three refinements, {:.2e} at J=256, h=1/32 (limit 1e-3)",
            errors[0], errors[1], errors[2], errors[3]
        ),
    )
}

fn legendre_orthogonality() -> Result<String, String> {
    let rule = gauss_legendre(8).unwrap();
    let mut worst: f64 = 0.0;
    for m in 0..=4 {
        let basis = TimeBasis::new(m).unwrap();
        for p in 0..=m {
            for q in 0..=m {
                let g = rule.integrate(|x| basis.eval(p, x) * basis.eval(q, x));
                let want = if p == q { 1.0 / (2 * p + 1) as f64 } else { 0.0 };
                worst = worst.max((g - want).abs());
            }
        }
    }
    if worst < 1e-14 {
        Ok(format!("Legendre Gram error {worst:.1e}"))
    } else {
        Err(format!("Legendre Gram error {worst:.1e}"))
    }
}

fn mesh_properties() -> Result<String, String> {
    let mut worst_sum: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for slabs in [2, 3, 7, 16, 64, 256, 1024] {
        for sigma in [1.0, 1.2, 1.5, 2.0, 3.2, 16.0 / 3.0, 20.0 / 3.0] {
            let mesh = GradedMesh::new(1.0, slabs, sigma).map_err(|e| e.to_string())?;
            let total: f64 = mesh.widths().iter().sum();
            worst_sum = worst_sum.max((total - 1.0).abs() / f64::EPSILON);
            let c = sigma * 2f64.powf(sigma - 1.0) / slabs as f64;
            for i in 2..=slabs {
                worst_ratio = worst_ratio.max(mesh.width(i) / (c * mesh.node(i - 1).powf(1.0 - 1.0 / sigma)));
            }
        }
    }
    let msg = format!("telescoping within {worst_sum:.1} ulp, width bound ratio ≤ {worst_ratio:.3}");
    if worst_sum <= 4.0 && worst_ratio <= 1.0 + 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ritz_properties() -> Result<String, String> {
    let mut nodal: f64 = 0.0;
    let mut rates = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let mut prev: Option<f64> = None;
        for cells in [4, 8, 16, 32] {
            let fem = SpatialFem::assemble(SpatialPartition::unit(cells).unwrap(), n).unwrap();
            let v = |x: f64| (PI * x).sin() + x * (1.0 - x) * x.exp();
            let proj = fem.ritz_project(v).unwrap();
            for k in 0..=cells {
                let x = fem.partition().vertex(k);
                nodal = nodal.max((fem.eval(&proj, x) - v(x)).abs());
            }
            let l2 = fem.l2_error(&proj, v);
            if let Some(c) = prev {
                let rate = (c / l2).log2();
                ok &= (rate - (n + 1) as f64).abs() <= 0.1;
                if cells == 32 {
                    rates.push(format!("n={n}: {rate:.2}"));
                }
            }
            prev = Some(l2);
        }
    }
    ok &= nodal < 1e-11;
    let msg = format!("Ritz nodal error {nodal:.1e}, L2 rates {}", rates.join(" "));
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn positive_form() -> Result<String, String> {
    let (slabs, m) = (8, 2);
    let b = m + 1;
    let mesh = GradedMesh::new(1.0, slabs, 2.0).unwrap();
    let mut forms = Vec::new();
    for gamma in [0.2, 0.5, 0.8] {
        let mut cache = KernelCache::new(KernelEvaluator::new(FracOrder::new(gamma).unwrap(), m).unwrap(), &mesh);
        let mut g = DMatrix::zeros(slabs * b, slabs * b);
        for j in 1..=slabs {
            for i in 1..=j {
                g.view_mut(((j - 1) * b, (i - 1) * b), (b, b)).copy_from(&cache.block(j, i).unwrap());
            }
        }
        forms.push((gamma, g));
    }
    let mut runner = TestRunner::new(RunnerConfig { cases: 1000, failure_persistence: None, ..RunnerConfig::default() });
    let strategy = prop::collection::vec(-1.0f64..1.0, slabs * b);
    let mut smallest = f64::INFINITY;
    let result = runner.run(&strategy, |c| {
        let v = DVector::from_vec(c);
        let norm2 = v.norm_squared();
        if norm2 < 1e-12 {
            return Ok(());
        }
        for (gamma, g) in &forms {
            let q = v.dot(&(g * &v));
            prop_assert!(q > 0.0, "gamma={} form {}", gamma, q);
        }
        Ok(())
    });
    for (_, g) in &forms {
        let sym = (g + g.transpose()) * 0.5;
        smallest = smallest.min(sym.symmetric_eigenvalues().min());
    }
    match result {
        Ok(()) if smallest > 0.0 => Ok(format!(
            "fractional form positive on 1000 random paths per order, smallest symmetric eigenvalue {smallest:.2e}"
        )),
        Ok(()) => Err(format!("smallest symmetric eigenvalue {smallest:.2e}")),
        Err(e) => Err(format!("fractional form: {e}")),
    }
}

fn classical_reduction() -> Result<String, String> {
    let time = vec![PowerTerm { coeff: 1.0, exponent: 0.0 }, PowerTerm { coeff: -2.0, exponent: 1.0 }];
    let forcing = Forcing::Separable(vec![SeparableTerm { space: Arc::new(|x: f64| (PI * x).sin()), time: time.clone() }]);
    let spec = ProblemSpec::new(0.2, 0.8, 1e-14, 1e-14, 1.0, Arc::new(|x: f64| (PI * x).sin()), forcing).unwrap();
    let fem = SpatialFem::assemble(SpatialPartition::unit(8).unwrap(), 2).unwrap();
    let ritz = fem.ritz_project(|x| (PI * x).sin()).unwrap();
    let l2proj = fem.mass().cholesky().unwrap().solve(&fem.load_vector(|x| (PI * x).sin()));
    let mut worst: f64 = 0.0;
    for (m, sigma) in [(0, 1.0), (1, 2.0), (2, 3.0)] {
        let mesh = GradedMesh::new(1.0, 12, sigma).unwrap();
        let sol = solve(&spec, &mesh, &fem, m).unwrap();
        // classical DG for y' = 1 - 2t, y(0) = 0: the nodal values are exact
        for j in 1..=12 {
            let t = mesh.node(j);
            let y = t - t * t;
            let want = &ritz + &l2proj * y;
            worst = worst.max((sol.trace(j) - want).amax());
        }
    }
    if worst <= 1e-6 {
        Ok(format!("κ→0 reduction deviation {worst:.1e}"))
    } else {
        Err(format!("κ→0 reduction deviation {worst:.1e}"))
    }
}

fn series_residuals() -> Result<String, String> {
    let tol = 1e-10;
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for lambda in [0.25, 0.5, 1.0] {
        for (kappa1, kappa2) in [(1.0, 1.0), (0.5, 1.0), (2.0, 0.5)] {
            for (alpha, beta) in [(0.2, 0.8), (0.3, 0.5), (0.4, 0.7)] {
                let params = ModeParams { lambda, kappa1, kappa2, alpha, beta };
                for t in [0.1, 0.5, 1.0] {
                    let sol = ModeSolution::compute(params, t, tol).map_err(|e| format!("{params:?}: {e}"))?;
                    worst = worst.max(sol.defining_residual().abs() / tol);
                    points += 1;
                }
            }
        }
    }
    let msg = format!("mode series residual ≤ {worst:.2}·tol over {points} grid points");
    if worst <= 10.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion6() -> Verdict {
    let checks: [fn() -> Result<String, String>; 6] = [
        legendre_orthogonality,
        mesh_properties,
        ritz_properties,
        positive_form,
        classical_reduction,
        series_residuals,
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for check in checks {
        match check() {
            Ok(msg) => println!("    ok: {msg}"),
            Err(msg) => {
                ok = false;
                println!("    failed: {msg}");
                parts.push(msg);
            }
        }
    }
    let summary = if ok {
        "property suites: orthogonality, mesh, Ritz, positivity, κ→0 reduction and series residual all hold".to_string()
    } else {
        format!("property suites: {}", parts.join("; "))
    };
    verdict(ok, summary)
}

fn main() {
    // `cargo test -- --list` and similar harness flags are not meaningful here
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [(u32, fn() -> Verdict); 6] =
        [(1, criterion1), (2, criterion2), (3, criterion3), (4, criterion4), (5, criterion5), (6, criterion6)];
    let mut failed = 0;
    for (k, run) in criteria {
        let start = Instant::now();
        let v = run();
        let status = if v.ok { "PASS" } else { "FAIL" };
        println!("{status} criterion {k}: {} [{:.1} s]", v.summary, start.elapsed().as_secs_f64());
        if !v.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
