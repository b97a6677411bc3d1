//! Slab-by-slab DG(m) time stepping with fractional history.
//!
//! On slab `j` the unknowns `u_{j,p,k}` solve
//!
//! ```text
//! [C ⊗ M + (κ₁ G^α_jj + κ₂ G^β_jj) ⊗ A] u_j
//!     = F_j + φ_q(0) M U_{j-1} - Σ_{i<j} (κ₁ G^α_ji + κ₂ G^β_ji) ⊗ A u_i
//! ```
//!
//! with `U_0 = R_h u₀`, `C` the DG time matrix and `G` the history blocks.

use crate::error::{domain, Error, Result};
use crate::fem1d::{SpaceVec, SpatialFem};
use crate::frackernel::{power_rule_coefficient, FracOrder, KernelCache, KernelEvaluator};
use crate::mesh::GradedMesh;
use crate::polybasis::{
    default_points, gauss_jacobi_general, gauss_legendre, integrate_away_from, QuadRule, TimeBasis,
};
use nalgebra::{DMatrix, DVector, LU};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `coeff · t^exponent`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

/// `g(x) · Σ c t^e`
#[derive(Clone)]
pub struct SeparableTerm {
    pub space: SpaceFn,
    pub time: Vec<PowerTerm>,
}

/// Right-hand side `f(x, t)`.
#[derive(Clone)]
pub enum Forcing {
    Zero,
    /// Sums of products of a spatial profile and powers of `t`; the time
    /// integrals against the DG basis are then done in closed form on the
    /// first slab and with singularity-aware panels elsewhere.
    Separable(Vec<SeparableTerm>),
    /// A general field. `t0_exponent`, when negative, is the leading power
    /// of a `t^e` blow-up at `t = 0` and selects a Gauss-Jacobi rule on the
    /// first slab.
    Field { f: FieldFn, t0_exponent: Option<f64> },
}

impl Forcing {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            Forcing::Zero => 0.0,
            Forcing::Separable(terms) => terms
                .iter()
                .map(|term| {
                    (term.space)(x)
                        * term
                            .time
                            .iter()
                            .map(|p| p.coeff * t.powf(p.exponent))
                            .sum::<f64>()
                })
                .sum(),
            Forcing::Field { f, .. } => f(x, t),
        }
    }
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Zero => write!(f, "Zero"),
            Forcing::Separable(terms) => f
                .debug_list()
                .entries(terms.iter().map(|t| &t.time))
                .finish(),
            Forcing::Field { t0_exponent, .. } => {
                write!(f, "Field {{ t0_exponent: {t0_exponent:?} }}")
            }
        }
    }
}

/// The model problem
/// `∂_t u - (κ₁ D^α + κ₂ D^β) ∂²_x u = f` on `Ω × (0, T)`, `u = 0` on `∂Ω`,
/// `u(·, 0) = u₀`.
#[derive(Clone)]
pub struct ProblemSpec {
    pub alpha: FracOrder,
    pub beta: FracOrder,
    pub kappa1: f64,
    pub kappa2: f64,
    pub t_final: f64,
    pub u0: SpaceFn,
    pub forcing: Forcing,
    pub exact: Option<FieldFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("kappa1", &self.kappa1)
            .field("kappa2", &self.kappa2)
            .field("t_final", &self.t_final)
            .field("forcing", &self.forcing)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn new(
        alpha: f64,
        beta: f64,
        kappa1: f64,
        kappa2: f64,
        t_final: f64,
        u0: SpaceFn,
        forcing: Forcing,
    ) -> Result<Self> {
        let a = FracOrder::new(alpha)?;
        let b = FracOrder::new(beta)?;
        if !(alpha < beta) {
            return Err(domain("alpha, beta", format!("need alpha < beta, got ({alpha}, {beta})")));
        }
        if !(kappa1 > 0.0 && kappa2 > 0.0) {
            return Err(domain("kappa", format!("diffusivities must be positive, got ({kappa1}, {kappa2})")));
        }
        if !(t_final > 0.0) {
            return Err(domain("T", format!("final time must be positive, got {t_final}")));
        }
        Ok(Self {
            alpha: a,
            beta: b,
            kappa1,
            kappa2,
            t_final,
            u0,
            forcing,
            exact: None,
        })
    }

    pub fn with_exact(mut self, exact: FieldFn) -> Self {
        self.exact = Some(exact);
        self
    }
}

/// Forcing for which `u = t^r sin(πx)` solves the model problem.
pub fn manufactured_forcing(r: f64, alpha: f64, beta: f64, kappa1: f64, kappa2: f64) -> Result<Forcing> {
    if !(r > beta - 1.0) || !(r > 0.0) {
        return Err(domain("r", format!("need r > max(0, beta - 1), got {r}")));
    }
    FracOrder::new(alpha)?;
    FracOrder::new(beta)?;
    let pi2 = PI * PI;
    let time = vec![
        PowerTerm {
            coeff: r,
            exponent: r - 1.0,
        },
        PowerTerm {
            coeff: pi2 * kappa1 * power_rule_coefficient(alpha, r),
            exponent: r - alpha,
        },
        PowerTerm {
            coeff: pi2 * kappa2 * power_rule_coefficient(beta, r),
            exponent: r - beta,
        },
    ];
    Ok(Forcing::Separable(vec![SeparableTerm {
        space: Arc::new(|x: f64| (PI * x).sin()),
        time,
    }]))
}

/// The manufactured problem `u = t^r sin(πx)` on `Ω = (0, 1)`, with `u₀ = 0`.
pub fn manufactured_problem(
    r: f64,
    alpha: f64,
    beta: f64,
    kappa1: f64,
    kappa2: f64,
    t_final: f64,
) -> Result<ProblemSpec> {
    let forcing = manufactured_forcing(r, alpha, beta, kappa1, kappa2)?;
    let spec = ProblemSpec::new(alpha, beta, kappa1, kappa2, t_final, Arc::new(|_| 0.0), forcing)?;
    Ok(spec.with_exact(Arc::new(move |x: f64, t: f64| t.powf(r) * (PI * x).sin())))
}

/// `C[q, p] = ∫₀¹ φ_p' φ_q + φ_p(0) φ_q(0)`, rows indexed by the test
/// function.
pub fn slab_time_matrix(m: usize) -> Result<DMatrix<f64>> {
    let basis = TimeBasis::new(m)?;
    let rule = gauss_legendre(m + 1)?;
    Ok(DMatrix::from_fn(m + 1, m + 1, |q, p| {
        rule.integrate(|x| basis.deriv(p, x) * basis.eval(q, x)) + basis.left_value(p) * basis.left_value(q)
    }))
}

/// The discrete solution `U ∈ W_{h,τ}`.
#[derive(Debug, Clone)]
pub struct SpaceTimeSolution {
    pub mesh: GradedMesh,
    pub fem: SpatialFem,
    pub m: usize,
    /// per slab, `(m+1) × ndof` with row `p` the coefficients of `φ_p`
    pub coeffs: Vec<DMatrix<f64>>,
}

impl SpaceTimeSolution {
    /// Left trace `U(t_j)`; `U(t_0) = 0` by convention.
    pub fn trace(&self, j: usize) -> SpaceVec {
        if j == 0 {
            return DVector::zeros(self.fem.ndof());
        }
        let c = &self.coeffs[j - 1];
        DVector::from_fn(c.ncols(), |k, _| c.column(k).sum())
    }

    /// Right limit `U(t_{j-1}^+)` on slab `j`.
    pub fn start_value(&self, j: usize) -> SpaceVec {
        let basis = TimeBasis::new(self.m).unwrap();
        let c = &self.coeffs[j - 1];
        DVector::from_fn(c.ncols(), |k, _| {
            (0..=self.m).map(|p| basis.left_value(p) * c[(p, k)]).sum()
        })
    }

    /// `U(t)` for `t ∈ (t_{j-1}, t_j]`, as a spatial coefficient vector.
    pub fn at_time(&self, t: f64) -> SpaceVec {
        let j = self.mesh.slab_of(t);
        let y = (t - self.mesh.node(j - 1)) / self.mesh.width(j);
        let basis = TimeBasis::new(self.m).unwrap();
        let c = &self.coeffs[j - 1];
        DVector::from_fn(c.ncols(), |k, _| {
            (0..=self.m).map(|p| basis.eval(p, y) * c[(p, k)]).sum()
        })
    }
}

/// Numerical knobs; defaults follow the library-wide quadrature counts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolverOptions {
    /// Gauss points per slab for time integrals of the forcing.
    pub time_points: Option<usize>,
    /// Gauss points per panel for the history blocks.
    pub kernel_points: Option<usize>,
}

/// Stepper state for one `(spec, mesh, fem, m)`.
pub struct DgStepper<'a> {
    spec: &'a ProblemSpec,
    mesh: &'a GradedMesh,
    fem: &'a SpatialFem,
    basis: TimeBasis,
    time_matrix: DMatrix<f64>,
    kernels: [KernelCache<'a>; 2],
    mass: DMatrix<f64>,
    stiffness: DMatrix<f64>,
    factor: Option<LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
    time_rule: QuadRule,
    panel_rule: QuadRule,
    separable_loads: Vec<SpaceVec>,
    initial: SpaceVec,
    last_residual: f64,
}

impl<'a> DgStepper<'a> {
    pub fn new(
        spec: &'a ProblemSpec,
        mesh: &'a GradedMesh,
        fem: &'a SpatialFem,
        m: usize,
        opts: SolverOptions,
    ) -> Result<Self> {
        if (mesh.t_final() - spec.t_final).abs() > 1e-12 * spec.t_final {
            return Err(domain("mesh", "mesh final time differs from the problem's"));
        }
        let basis = TimeBasis::new(m)?;
        let kp = opts.kernel_points.unwrap_or_else(|| default_points(m));
        let tp = opts.time_points.unwrap_or((m + 3).max(8));
        let ka = KernelEvaluator::with_points(spec.alpha, m, kp)?;
        let kb = KernelEvaluator::with_points(spec.beta, m, kp)?;
        let separable_loads = match &spec.forcing {
            Forcing::Separable(terms) => terms.iter().map(|t| fem.load_vector(&*t.space)).collect(),
            _ => Vec::new(),
        };
        let initial = fem.ritz_project(&*spec.u0)?;
        Ok(Self {
            spec,
            mesh,
            fem,
            time_matrix: slab_time_matrix(m)?,
            basis,
            kernels: [KernelCache::new(ka, mesh), KernelCache::new(kb, mesh)],
            mass: fem.mass().to_dense(),
            stiffness: fem.stiffness().to_dense(),
            factor: None,
            time_rule: gauss_legendre(tp)?,
            panel_rule: gauss_legendre(default_points(m))?,
            separable_loads,
            initial,
            last_residual: 0.0,
        })
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    /// `R_h u₀`
    pub fn initial_trace(&self) -> &SpaceVec {
        &self.initial
    }

    /// Relative residual of the most recent slab solve.
    pub fn last_residual(&self) -> f64 {
        self.last_residual
    }

    /// `κ₁ G^α_{j,i} + κ₂ G^β_{j,i}`.
    pub fn combined_block(&mut self, j: usize, i: usize) -> Result<DMatrix<f64>> {
        let ga = self.kernels[0].block(j, i)?;
        let gb = self.kernels[1].block(j, i)?;
        Ok(ga * self.spec.kappa1 + gb * self.spec.kappa2)
    }

    /// `Σ_{i<j} (κ₁ G^α_{j,i} + κ₂ G^β_{j,i}) u_i`, before applying `A`.
    pub fn history(&mut self, j: usize, solved: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
        let n = self.basis.len();
        let mut acc = DMatrix::zeros(n, self.fem.ndof());
        for (idx, ui) in solved.iter().enumerate().take(j - 1) {
            let block = self.combined_block(j, idx + 1)?;
            acc += block * ui;
        }
        Ok(acc)
    }

    /// `∫_{I_j} φ_q ⟨f(t), ψ_l⟩ dt`, rows `q`.
    pub fn forcing_rhs(&self, j: usize) -> DMatrix<f64> {
        let n = self.basis.len();
        let ndof = self.fem.ndof();
        let mut out = DMatrix::zeros(n, ndof);
        let t0 = self.mesh.node(j - 1);
        let tau = self.mesh.width(j);
        match &self.spec.forcing {
            Forcing::Zero => {}
            Forcing::Separable(terms) => {
                for (term, load) in terms.iter().zip(&self.separable_loads) {
                    for q in 0..n {
                        let w: f64 = term
                            .time
                            .iter()
                            .filter(|p| p.coeff != 0.0)
                            .map(|p| p.coeff * self.power_moment(q, p.exponent, t0, tau))
                            .sum();
                        for k in 0..ndof {
                            out[(q, k)] += w * load[k];
                        }
                    }
                }
            }
            Forcing::Field { f, t0_exponent } => {
                let singular = match t0_exponent {
                    Some(e) if j == 1 && *e < 0.0 && *e > -1.0 => {
                        Some((*e, gauss_jacobi_general(self.time_rule.count(), *e, 0.0).unwrap()))
                    }
                    _ => None,
                };
                let (rule, e) = match &singular {
                    Some((e, r)) => (r, *e),
                    None => (&self.time_rule, 0.0),
                };
                for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let t = t0 + tau * y;
                    let scale = if e != 0.0 { y.powf(-e) } else { 1.0 };
                    let load = self.fem.load_vector(|x| f(x, t) * scale);
                    for q in 0..n {
                        let c = w * tau * self.basis.eval(q, y);
                        for k in 0..ndof {
                            out[(q, k)] += c * load[k];
                        }
                    }
                }
            }
        }
        out
    }

    /// `∫_{t0}^{t0+τ} φ_q((t - t0)/τ) t^e dt`
    fn power_moment(&self, q: usize, e: f64, t0: f64, tau: f64) -> f64 {
        if t0 == 0.0 {
            let c = self.basis.monomial_expansion(q);
            return tau.powf(e + 1.0)
                * c.iter()
                    .enumerate()
                    .map(|(k, &ck)| ck / (k as f64 + e + 1.0))
                    .sum::<f64>();
        }
        tau * integrate_away_from(&self.panel_rule, t0 / tau, |y| {
            self.basis.eval(q, y) * (t0 + tau * y).powf(e)
        })
    }

    fn slab_matrix(&mut self, j: usize) -> Result<DMatrix<f64>> {
        let n = self.basis.len();
        let ndof = self.fem.ndof();
        let g = self.combined_block(j, j)?;
        let mut mat = DMatrix::zeros(n * ndof, n * ndof);
        for q in 0..n {
            for p in 0..n {
                let block = &self.mass * self.time_matrix[(q, p)] + &self.stiffness * g[(q, p)];
                mat.view_mut((q * ndof, p * ndof), (ndof, ndof)).copy_from(&block);
            }
        }
        Ok(mat)
    }

    /// Solves slab `j` given the history term and `U_{j-1}` (for `j = 1`,
    /// pass [`Self::initial_trace`]).
    pub fn step_slab(
        &mut self,
        j: usize,
        history: &DMatrix<f64>,
        prev_trace: &SpaceVec,
    ) -> Result<DMatrix<f64>> {
        if j == 0 || j > self.mesh.slabs() {
            return Err(Error::Index(format!("slab {j} outside 1..={}", self.mesh.slabs())));
        }
        let n = self.basis.len();
        let ndof = self.fem.ndof();
        let mut rhs = self.forcing_rhs(j);
        let m_prev = self.fem.mass().mul_vec(prev_trace);
        for q in 0..n {
            let hq = self.fem.stiffness().mul_vec(&history.row(q).transpose());
            let phi0 = self.basis.left_value(q);
            for k in 0..ndof {
                rhs[(q, k)] += phi0 * m_prev[k] - hq[k];
            }
        }
        let b = DVector::from_iterator(n * ndof, rhs.transpose().iter().copied());

        let reuse = self.mesh.is_uniform() && self.factor.is_some();
        let mat = if reuse && j > 1 { None } else { Some(self.slab_matrix(j)?) };
        if let Some(mat) = &mat {
            self.factor = Some(mat.clone().lu());
        }
        let lu = self.factor.as_ref().unwrap();
        let x = lu.solve(&b).ok_or_else(|| {
            Error::Singular(format!("slab {j} system matrix is singular (τ_j = {:e})", self.mesh.width(j)))
        })?;
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Singular(format!("slab {j} produced non-finite coefficients")));
        }
        let bn = b.norm();
        if let Some(mat) = &mat {
            let r = mat * &x - &b;
            self.last_residual = if bn > 0.0 { r.norm() / bn } else { r.norm() };
        }
        Ok(DMatrix::from_fn(n, ndof, |p, k| x[p * ndof + k]))
    }
}

/// Runs the scheme over all slabs.
pub fn solve(spec: &ProblemSpec, mesh: &GradedMesh, fem: &SpatialFem, m: usize) -> Result<SpaceTimeSolution> {
    solve_with(spec, mesh, fem, m, SolverOptions::default())
}

pub fn solve_with(
    spec: &ProblemSpec,
    mesh: &GradedMesh,
    fem: &SpatialFem,
    m: usize,
    opts: SolverOptions,
) -> Result<SpaceTimeSolution> {
    let mut stepper = DgStepper::new(spec, mesh, fem, m, opts)?;
    let mut coeffs: Vec<DMatrix<f64>> = Vec::with_capacity(mesh.slabs());
    let mut prev = stepper.initial_trace().clone();
    for j in 1..=mesh.slabs() {
        let hist = stepper.history(j, &coeffs)?;
        let u = stepper.step_slab(j, &hist, &prev)?;
        prev = DVector::from_fn(u.ncols(), |k, _| u.column(k).sum());
        coeffs.push(u);
    }
    Ok(SpaceTimeSolution {
        mesh: mesh.clone(),
        fem: fem.clone(),
        m,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::SpatialPartition;
    use crate::polybasis::gamma_fn;

    #[test]
    fn time_matrix_small() {
        assert_eq!(slab_time_matrix(0).unwrap()[(0, 0)], 1.0);
        let c = slab_time_matrix(1).unwrap();
        // rows are test functions: C[q=1, p=0] = φ_0(0) φ_1(0) = -1
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, -1.0, 1.0]);
        assert!((c - expected).amax() < 1e-14);
        for m in 0..=4 {
            assert!(slab_time_matrix(m).unwrap().determinant().abs() > 1e-8);
        }
    }

    #[test]
    fn homogeneous_problem_stays_zero() {
        let spec = ProblemSpec::new(0.2, 0.8, 1.0, 1.0, 1.0, Arc::new(|_| 0.0), Forcing::Zero).unwrap();
        let mesh = GradedMesh::new(1.0, 5, 2.0).unwrap();
        let fem = SpatialFem::assemble(SpatialPartition::unit(4).unwrap(), 2).unwrap();
        let sol = solve(&spec, &mesh, &fem, 1).unwrap();
        assert!(sol.coeffs.iter().all(|c| c.amax() == 0.0));
    }

    #[test]
    fn single_slab_constant_in_time() {
        // [M + (κ₁τ^{1-α}/Γ(2-α) + κ₂τ^{1-β}/Γ(2-β)) A] u = M R_h u₀ + ∫₀^τ load(f)
        let (alpha, beta, k1, k2, tau) = (0.3, 0.6, 0.7, 1.3, 0.5);
        let u0: SpaceFn = Arc::new(|x| (PI * x).sin());
        let forcing = Forcing::Field {
            f: Arc::new(|x, t| x * (1.0 - x) * (1.0 + t)),
            t0_exponent: None,
        };
        let spec = ProblemSpec::new(alpha, beta, k1, k2, tau, u0.clone(), forcing).unwrap();
        let mesh = GradedMesh::new(tau, 1, 1.0).unwrap();
        let fem = SpatialFem::assemble(SpatialPartition::unit(6).unwrap(), 1).unwrap();
        let sol = solve(&spec, &mesh, &fem, 0).unwrap();

        let g = k1 * tau.powf(1.0 - alpha) / gamma_fn(2.0 - alpha).unwrap()
            + k2 * tau.powf(1.0 - beta) / gamma_fn(2.0 - beta).unwrap();
        let mat = fem.mass().to_dense() + fem.stiffness().to_dense() * g;
        let rh = fem.ritz_project(&*u0).unwrap();
        // ∫₀^τ (1 + t) dt = τ + τ²/2
        let rhs = fem.mass().mul_vec(&rh) + fem.load_vector(|x| x * (1.0 - x)) * (tau + 0.5 * tau * tau);
        let expected = mat.lu().solve(&rhs).unwrap();
        assert!((sol.trace(1) - expected).amax() < 1e-13);
    }

    #[test]
    fn manufactured_forcing_value() {
        let (alpha, beta, k1, k2) = (0.2, 0.8, 1.5, 0.5);
        let f = manufactured_forcing(1.0, alpha, beta, k1, k2).unwrap();
        let expected = 1.0
            + PI * PI * (k1 / gamma_fn(2.0 - alpha).unwrap() + k2 / gamma_fn(2.0 - beta).unwrap());
        assert!((f.eval(0.5, 1.0) - expected).abs() < 1e-12);
        for &t in &[0.1, 0.5, 1.0] {
            assert_eq!(f.eval(0.0, t), 0.0);
            assert!(f.eval(1.0, t).abs() < 1e-12);
        }
        assert!(manufactured_forcing(-0.3, alpha, beta, k1, k2).is_err());
    }

    #[test]
    fn rejects_bad_spec() {
        let z: SpaceFn = Arc::new(|_| 0.0);
        assert!(ProblemSpec::new(0.8, 0.2, 1.0, 1.0, 1.0, z.clone(), Forcing::Zero).is_err());
        assert!(ProblemSpec::new(0.2, 0.8, 0.0, 1.0, 1.0, z.clone(), Forcing::Zero).is_err());
        assert!(ProblemSpec::new(0.2, 0.8, 1.0, 1.0, -1.0, z, Forcing::Zero).is_err());
    }
}
