//! Conforming P_n finite elements on a uniform 1D partition with
//! homogeneous Dirichlet conditions.

use crate::error::{domain, Error, Result};
use crate::mesh::SpatialPartition;
use crate::polybasis::{gauss_legendre, QuadRule};
use nalgebra::{DMatrix, DVector};

/// Coefficients over the interior nodal basis.
pub type SpaceVec = DVector<f64>;

/// Symmetric banded matrix storing the diagonal and `bw` sub-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSym {
    n: usize,
    bw: usize,
    /// `bands[d][i] = A[i + d][i]`
    bands: Vec<Vec<f64>>,
}

impl BandedSym {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bands = (0..=bw).map(|d| vec![0.0; n.saturating_sub(d)]).collect();
        Self { n, bw, bands }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.bw {
            0.0
        } else {
            self.bands[d][c]
        }
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.bands[r - c][c] += v;
    }

    pub fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n);
        for i in 0..self.n {
            y[i] += self.bands[0][i] * x[i];
        }
        for d in 1..=self.bw {
            for (c, &a) in self.bands[d].iter().enumerate() {
                y[c + d] += a * x[c];
                y[c] += a * x[c + d];
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Banded Cholesky factor `L` with `A = L Lᵀ`.
    pub fn cholesky(&self) -> Result<BandedCholesky> {
        let n = self.n;
        let bw = self.bw;
        let mut l = vec![vec![0.0; bw + 1]; n]; // l[i][d] = L[i][i-d]
        for i in 0..n {
            for d in (0..=bw.min(i)).rev() {
                let j = i - d;
                let mut s = self.get(i, j);
                for k in 1..=(bw - d).min(j) {
                    // L[i][j-k] L[j][j-k]
                    s -= l[i][d + k] * l[j][k];
                }
                if d == 0 {
                    if !(s > 0.0) {
                        return Err(Error::Singular(format!(
                            "banded matrix not positive definite at row {i}"
                        )));
                    }
                    l[i][0] = s.sqrt();
                } else {
                    l[i][d] = s / l[j][0];
                }
            }
        }
        Ok(BandedCholesky { bw, l })
    }
}

#[derive(Debug, Clone)]
pub struct BandedCholesky {
    bw: usize,
    l: Vec<Vec<f64>>,
}

impl BandedCholesky {
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.l.len();
        let mut y = b.clone();
        for i in 0..n {
            let mut s = y[i];
            for d in 1..=self.bw.min(i) {
                s -= self.l[i][d] * y[i - d];
            }
            y[i] = s / self.l[i][0];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for d in 1..=self.bw.min(n - 1 - i) {
                s -= self.l[i + d][d] * y[i + d];
            }
            y[i] = s / self.l[i][0];
        }
        y
    }
}

/// Lagrange basis on the Gauss-Lobatto points of `[0, 1]`.
#[derive(Debug, Clone)]
struct LocalBasis {
    nodes: Vec<f64>,
}

impl LocalBasis {
    fn new(n: usize) -> Self {
        let interior: Vec<f64> = match n {
            1 => vec![],
            2 => vec![0.0],
            3 => {
                let s = 1.0 / 5f64.sqrt();
                vec![-s, s]
            }
            _ => unreachable!(),
        };
        let mut nodes = vec![0.0];
        nodes.extend(interior.iter().map(|x| 0.5 * (1.0 + x)));
        nodes.push(1.0);
        Self { nodes }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn eval(&self, a: usize, x: f64) -> f64 {
        let xa = self.nodes[a];
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != a)
            .map(|(_, &xb)| (x - xb) / (xa - xb))
            .product()
    }

    fn deriv(&self, a: usize, x: f64) -> f64 {
        let xa = self.nodes[a];
        let others: Vec<f64> = (0..self.len()).filter(|&b| b != a).map(|b| self.nodes[b]).collect();
        let den: f64 = others.iter().map(|&xb| xa - xb).product();
        let mut s = 0.0;
        for skip in 0..others.len() {
            s += others
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &xb)| x - xb)
                .product::<f64>();
        }
        s / den
    }

    fn second_deriv(&self, a: usize, x: f64) -> f64 {
        let xa = self.nodes[a];
        let others: Vec<f64> = (0..self.len()).filter(|&b| b != a).map(|b| self.nodes[b]).collect();
        let den: f64 = others.iter().map(|&xb| xa - xb).product();
        let mut s = 0.0;
        for s1 in 0..others.len() {
            for s2 in 0..others.len() {
                if s1 == s2 {
                    continue;
                }
                s += others
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != s1 && k != s2)
                    .map(|(_, &xb)| x - xb)
                    .product::<f64>();
            }
        }
        s / den
    }
}

/// The discrete space `S_h` with its mass and stiffness matrices.
#[derive(Debug, Clone)]
pub struct SpatialFem {
    partition: SpatialPartition,
    n: usize,
    ndof: usize,
    mass: BandedSym,
    stiffness: BandedSym,
    local: LocalBasis,
    accurate: QuadRule,
}

impl SpatialFem {
    pub fn assemble(partition: SpatialPartition, n: usize) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(domain("n", format!("element degree must be 1, 2 or 3, got {n}")));
        }
        let local = LocalBasis::new(n);
        let ndof = partition.cells() * n - 1;
        let h = partition.h();
        let rule = gauss_legendre(n + 1)?;
        let mut mass = BandedSym::zeros(ndof, n);
        let mut stiffness = BandedSym::zeros(ndof, n);
        let nl = n + 1;
        let mut me = vec![vec![0.0; nl]; nl];
        let mut ke = vec![vec![0.0; nl]; nl];
        for a in 0..nl {
            for b in 0..nl {
                me[a][b] = h * rule.integrate(|x| local.eval(a, x) * local.eval(b, x));
                ke[a][b] = rule.integrate(|x| local.deriv(a, x) * local.deriv(b, x)) / h;
            }
        }
        let fem = Self {
            partition,
            n,
            ndof,
            mass: BandedSym::zeros(0, 0),
            stiffness: BandedSym::zeros(0, 0),
            local,
            accurate: gauss_legendre((n + 6).max(12))?,
        };
        for e in 0..partition.cells() {
            for a in 0..nl {
                let Some(ga) = fem.dof(e, a) else { continue };
                for b in 0..=a {
                    let Some(gb) = fem.dof(e, b) else { continue };
                    mass.add(ga, gb, me[a][b]);
                    stiffness.add(ga, gb, ke[a][b]);
                }
            }
        }
        Ok(Self {
            mass,
            stiffness,
            ..fem
        })
    }

    /// Interior dof of local node `a` on element `e`, `None` on `∂Ω`.
    fn dof(&self, e: usize, a: usize) -> Option<usize> {
        let g = e * self.n + a;
        if g == 0 || g == self.partition.cells() * self.n {
            None
        } else {
            Some(g - 1)
        }
    }

    pub fn partition(&self) -> &SpatialPartition {
        &self.partition
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn ndof(&self) -> usize {
        self.ndof
    }

    pub fn mass(&self) -> &BandedSym {
        &self.mass
    }

    pub fn stiffness(&self) -> &BandedSym {
        &self.stiffness
    }

    /// Coordinate of the node carrying dof `k`.
    pub fn dof_coordinate(&self, k: usize) -> f64 {
        let g = k + 1;
        let (e, a) = (g / self.n, g % self.n);
        self.partition.vertex(e) + self.partition.h() * self.local.nodes[a]
    }

    fn element_of(&self, x: f64) -> (usize, f64) {
        let h = self.partition.h();
        let s = ((x - self.partition.a()) / h).floor();
        let e = (s.max(0.0) as usize).min(self.partition.cells() - 1);
        (e, (x - self.partition.vertex(e)) / h)
    }

    /// Value of `Σ c_k ψ_k` at `x`.
    pub fn eval(&self, c: &SpaceVec, x: f64) -> f64 {
        let (e, xi) = self.element_of(x);
        (0..=self.n)
            .filter_map(|a| self.dof(e, a).map(|g| c[g] * self.local.eval(a, xi)))
            .sum()
    }

    fn eval_local(&self, c: &SpaceVec, e: usize, xi: f64) -> f64 {
        (0..=self.n)
            .filter_map(|a| self.dof(e, a).map(|g| c[g] * self.local.eval(a, xi)))
            .sum()
    }

    fn deriv_local(&self, c: &SpaceVec, e: usize, xi: f64) -> f64 {
        (0..=self.n)
            .filter_map(|a| self.dof(e, a).map(|g| c[g] * self.local.deriv(a, xi)))
            .sum::<f64>()
            / self.partition.h()
    }

    /// `∫_Ω g ψ_l` for every dof `l`.
    pub fn load_vector(&self, g: impl Fn(f64) -> f64) -> SpaceVec {
        let h = self.partition.h();
        let mut out = DVector::zeros(self.ndof);
        for e in 0..self.partition.cells() {
            let x0 = self.partition.vertex(e);
            for (&xi, &w) in self.accurate.nodes.iter().zip(&self.accurate.weights) {
                let gv = g(x0 + h * xi) * w * h;
                for a in 0..=self.n {
                    if let Some(l) = self.dof(e, a) {
                        out[l] += gv * self.local.eval(a, xi);
                    }
                }
            }
        }
        out
    }

    /// Ritz projection `R_h v`, defined by `(∂(v - R_h v), ∂ψ) = 0`.
    ///
    /// The right side `(v', ψ_l')` is integrated by parts element by element,
    /// `[v ψ_l']_K - ∫_K v ψ_l''`, so only values of `v` are needed.
    pub fn ritz_project(&self, v: impl Fn(f64) -> f64) -> Result<SpaceVec> {
        let h = self.partition.h();
        let mut rhs = DVector::zeros(self.ndof);
        for e in 0..self.partition.cells() {
            let x0 = self.partition.vertex(e);
            let x1 = self.partition.vertex(e + 1);
            let (v0, v1) = (v(x0), v(x1));
            for a in 0..=self.n {
                let Some(l) = self.dof(e, a) else { continue };
                let boundary = (v1 * self.local.deriv(a, 1.0) - v0 * self.local.deriv(a, 0.0)) / h;
                let interior = self
                    .accurate
                    .integrate(|xi| v(x0 + h * xi) * self.local.second_deriv(a, xi))
                    / h;
                rhs[l] += boundary - interior;
            }
        }
        Ok(self.stiffness.cholesky()?.solve(&rhs))
    }

    /// `‖Σ c_k ψ_k - v‖_{L²(Ω)}`.
    pub fn l2_error(&self, c: &SpaceVec, v: impl Fn(f64) -> f64) -> f64 {
        let h = self.partition.h();
        let mut s = 0.0;
        for e in 0..self.partition.cells() {
            let x0 = self.partition.vertex(e);
            s += h * self.accurate.integrate(|xi| {
                let d = self.eval_local(c, e, xi) - v(x0 + h * xi);
                d * d
            });
        }
        s.sqrt()
    }

    /// `|Σ c_k ψ_k - v|_{H¹(Ω)}` given the derivative `dv`.
    pub fn h1_seminorm_error(&self, c: &SpaceVec, dv: impl Fn(f64) -> f64) -> f64 {
        let h = self.partition.h();
        let mut s = 0.0;
        for e in 0..self.partition.cells() {
            let x0 = self.partition.vertex(e);
            s += h * self.accurate.integrate(|xi| {
                let d = self.deriv_local(c, e, xi) - dv(x0 + h * xi);
                d * d
            });
        }
        s.sqrt()
    }

    /// `(cᵀ M c)^{1/2}`.
    pub fn l2_norm(&self, c: &SpaceVec) -> f64 {
        c.dot(&self.mass.mul_vec(c)).max(0.0).sqrt()
    }

    /// `(cᵀ A c)^{1/2}`.
    pub fn h1_seminorm(&self, c: &SpaceVec) -> f64 {
        c.dot(&self.stiffness.mul_vec(c)).max(0.0).sqrt()
    }
}
