use fracdg::oracle::quadrature::tanh_sinh;
use fracdg::oracle::{seminorm_estimate, w_laplace, w_value, ModeParams, ModeSolution, PiecewisePath};
use fracdg::{manufactured_problem, solve, Forcing, GradedMesh, ProblemSpec, SpatialFem, SpatialPartition};
use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

// Double-precision summation is only reliable while the largest series term
// stays moderate; that term grows like exp((λκ t^{1-γ})^{1/(1-γ)}).
const LAMBDAS: [f64; 3] = [0.25, 0.5, 1.0];
const KAPPAS: [(f64, f64); 3] = [(1.0, 1.0), (0.5, 1.0), (2.0, 0.5)];
const ORDERS: [(f64, f64); 3] = [(0.2, 0.8), (0.3, 0.5), (0.4, 0.7)];
const TOL: f64 = 1e-10;

fn grid() -> impl Iterator<Item = ModeParams> {
    LAMBDAS.into_iter().flat_map(|lambda| {
        KAPPAS.into_iter().flat_map(move |(kappa1, kappa2)| {
            ORDERS.into_iter().map(move |(alpha, beta)| ModeParams { lambda, kappa1, kappa2, alpha, beta })
        })
    })
}

#[test]
fn mode_series_satisfies_its_defining_equation() {
    for params in grid() {
        for t in [0.1, 0.5, 1.0] {
            let sol = ModeSolution::compute(params, t, TOL).unwrap();
            let res = sol.defining_residual().abs();
            assert!(res <= 10.0 * TOL, "{params:?} t={t}: residual {res:e}");
        }
    }
}

#[test]
fn ill_conditioned_series_is_rejected() {
    let params = ModeParams { lambda: 8.0, kappa1: 1.0, kappa2: 1.0, alpha: 0.2, beta: 0.8 };
    assert!(ModeSolution::compute(params, 1.0, TOL).is_err());
    // the combined evaluator falls back to Laplace inversion
    let w = w_value(params, 1.0, TOL).unwrap();
    assert!(w > 0.0 && w < 1.0);
}

#[test]
fn mode_decays_from_one() {
    for params in grid() {
        assert_eq!(w_value(params, 0.0, 1e-10).unwrap(), 1.0);
        let mut prev = 1.0;
        for k in 1..=10 {
            let w = w_value(params, k as f64 / 10.0, 1e-9).unwrap();
            assert!(w < prev && w > 0.0, "{params:?} t={}: {w} after {prev}", k as f64 / 10.0);
            prev = w;
        }
    }
}

#[test]
fn series_and_laplace_inversion_agree() {
    for params in grid() {
        for t in [0.2, 1.0] {
            let sol = ModeSolution::compute(params, t, TOL).unwrap();
            let lap = w_laplace(params, t).unwrap();
            assert!((sol.value - lap).abs() < 1e-9, "{params:?} t={t}: {} {lap}", sol.value);
        }
    }
}

#[test]
fn linear_path_seminorm_closed_form() {
    let s: f64 = 0.4;
    let interior = 2.0 / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
    let exterior = (1.0 / s) * (1.0 / (3.0 - 2.0 * s) + 2.0 / ((1.0 - 2.0 * s) * (2.0 - 2.0 * s) * (3.0 - 2.0 * s)));
    let one = PiecewisePath::from_legendre(&[0.0, 1.0], &[vec![0.5, 0.5]]).unwrap();
    let two = PiecewisePath::from_legendre(&[0.0, 0.5, 1.0], &[vec![0.25, 0.25], vec![0.75, 0.25]]).unwrap();
    for path in [one, two] {
        let est = seminorm_estimate(s, &path).unwrap();
        assert!((est.interior - interior).abs() < 1e-9, "{} {interior}", est.interior);
        assert!((est.exterior - exterior).abs() < 1e-9, "{} {exterior}", est.exterior);
        assert!((est.value - (interior + exterior).sqrt()).abs() < 1e-9);
    }
}

/// `∫₀^t s^β g(s)² ds` for `g = Σ c s^e`.
fn weighted_time_norm_sq(beta: f64, t: f64, g: &dyn Fn(f64) -> f64) -> f64 {
    tanh_sinh(0.0, t, 1e-12, |s, _, _| s.powf(beta) * g(s).powi(2)).unwrap()
}

struct Case {
    spec: ProblemSpec,
    /// `‖u₀‖_{H₀¹}`
    u0_norm: f64,
    /// time profile `g` of `f = g(t) sin(πx)`
    profile: Box<dyn Fn(f64) -> f64>,
}

fn cases() -> Vec<Case> {
    let mut out = Vec::new();
    for (r, alpha, beta, k1, k2) in [(0.5, 0.2, 0.8, 1.0, 1.0), (1.5, 0.3, 0.6, 0.5, 2.0), (0.8, 0.4, 0.9, 3.0, 0.5)] {
        let spec = manufactured_problem(r, alpha, beta, k1, k2, 1.0).unwrap();
        let Forcing::Separable(terms) = spec.forcing.clone() else { unreachable!() };
        let time = terms[0].time.clone();
        out.push(Case {
            spec,
            u0_norm: 0.0,
            profile: Box::new(move |t| time.iter().map(|p| p.coeff * t.powf(p.exponent)).sum()),
        });
    }
    let spec = ProblemSpec::new(0.2, 0.8, 1.0, 1.0, 1.0, Arc::new(|x| (PI * x).sin()), Forcing::Zero).unwrap();
    out.push(Case { spec, u0_norm: PI / SQRT_2, profile: Box::new(|_| 0.0) });
    out
}

#[test]
fn discrete_stability_bound_holds_with_a_moderate_constant() {
    let fem = SpatialFem::assemble(SpatialPartition::unit(8).unwrap(), 2).unwrap();
    // ‖sin(πx)‖_{H⁻¹} = 1/(π√2), ‖a sin(πx)‖_{H₀¹} = π|a|/√2
    let dual = 1.0 / (PI * SQRT_2);
    for case in cases() {
        let spec = &case.spec;
        let (alpha, beta) = (spec.alpha.value(), spec.beta.value());
        for (m, slabs, sigma) in [(0, 8, 1.0), (1, 8, 2.0), (0, 16, 2.0), (1, 16, 1.0)] {
            let mesh = GradedMesh::new(1.0, slabs, sigma).unwrap();
            let sol = solve(spec, &mesh, &fem, m).unwrap();
            let mut peak: f64 = 0.0;
            for j in 1..=slabs {
                peak = peak.max(fem.l2_norm(&sol.trace(j)));
                let path = PiecewisePath::from_solution_mode(&sol, j, 1).unwrap();
                let sa = seminorm_estimate(alpha / 2.0, &path).unwrap().value;
                let sb = seminorm_estimate(beta / 2.0, &path).unwrap().value;
                let lhs = peak + (PI / SQRT_2) * (spec.kappa1.sqrt() * sa + spec.kappa2.sqrt() * sb);
                let data = dual * weighted_time_norm_sq(beta, mesh.node(j), &case.profile).sqrt();
                let rhs = case.u0_norm + data / spec.kappa2.sqrt();
                assert!(lhs.is_finite() && lhs <= 50.0 * rhs, "m={m} J={slabs} j={j}: {lhs} vs {rhs}");
            }
        }
    }
}
