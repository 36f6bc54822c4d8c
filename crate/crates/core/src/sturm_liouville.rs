//! The axial eigenproblem on `[-ε, 0]` with Dirichlet ends, in self-adjoint form
//!
//! ```text
//! (λⁿ g')' + c(n+1) λⁿ g + δ λ^{n-2} g = 0
//! ```
//!
//! with coefficient `p = λⁿ`, potential `q = c(n+1)λⁿ` and weight `w = λ^{n-2}`.
//! Two independent solvers are provided: a conservative finite-difference
//! discretization (symmetric tridiagonal) with one Richardson step, and a
//! modified Prüfer shooting method that certifies each eigenvalue by its
//! oscillation count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axial::{AxialFn, DirichletSine, PolySine, Polynomial};
use crate::error::{Error, Result};
use crate::model::{ConeDensity, WarpedModel};
use crate::numerics::ode::{self, OdeTolerance};
use crate::numerics::quadrature;
use crate::numerics::richardson_h2;
use crate::numerics::tridiag::SymTridiagonal;

pub const DEFAULT_GRID: usize = 1024;
pub const MIN_GRID: usize = 16;
pub const DEFAULT_SHOOTING_TOL: f64 = 1e-10;
/// Interior grid points required per requested eigenvalue.
const POINTS_PER_MODE: usize = 16;

#[derive(Debug, Clone)]
pub struct SturmLiouvilleProblem {
    density: ConeDensity,
    n: usize,
    c: f64,
    eps: f64,
    num_eigen: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FiniteDifference,
    Shooting,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::FiniteDifference => "finite_difference",
            Method::Shooting => "shooting",
        }
    }

    /// Short provenance tag used in reports.
    pub fn source_tag(self) -> &'static str {
        match self {
            Method::FiniteDifference => "fd",
            Method::Shooting => "shooting",
        }
    }
}

/// Eigenpairs sampled on a uniform grid over `[-ε, 0]` (endpoints included).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub model: String,
    pub n: usize,
    pub c: f64,
    pub eps: f64,
    pub method: Method,
    /// Interior points of the sampling grid.
    pub grid_size: usize,
    /// Ascending; Richardson-extrapolated for finite differences.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues of the base discretization before extrapolation.
    pub raw_eigenvalues: Vec<f64>,
    pub grid: Vec<f64>,
    /// Weighted-L² normalized, first nonzero interior sample positive.
    pub eigenfunctions: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

#[derive(Serialize)]
struct SpectralJson<'a> {
    model: &'a str,
    n: usize,
    c: f64,
    eps: f64,
    method: Method,
    grid_size: usize,
    eigenvalues: Vec<f64>,
    residuals: Vec<f64>,
}

impl SpectralResult {
    pub fn to_json(&self) -> String {
        let view = SpectralJson {
            model: &self.model,
            n: self.n,
            c: self.c,
            eps: crate::report::round_sig(self.eps),
            method: self.method,
            grid_size: self.grid_size,
            eigenvalues: self
                .eigenvalues
                .iter()
                .map(|&v| crate::report::round_sig(v))
                .collect(),
            residuals: self
                .residuals
                .iter()
                .map(|&v| crate::report::round_sig(v))
                .collect(),
        };
        serde_json::to_string_pretty(&view).expect("spectral result serializes")
    }

    /// `t,g1,g2,...` with one row per grid point.
    pub fn eigenfunctions_csv(&self) -> String {
        let mut out = String::from("t");
        for j in 1..=self.eigenfunctions.len() {
            out.push_str(&format!(",g{j}"));
        }
        out.push('\n');
        for (i, t) in self.grid.iter().enumerate() {
            out.push_str(&crate::report::fmt_sig(*t));
            for g in &self.eigenfunctions {
                out.push(',');
                out.push_str(&crate::report::fmt_sig(g[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn first(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `∫ gᵢ gⱼ λ^{n-2} dt` by the trapezoid rule on the sampling grid.
    pub fn weighted_inner(&self, problem: &SturmLiouvilleProblem, i: usize, j: usize) -> f64 {
        weighted_inner(
            problem,
            &self.grid,
            &self.eigenfunctions[i],
            &self.eigenfunctions[j],
        )
    }
}

fn weighted_inner(problem: &SturmLiouvilleProblem, grid: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let h = grid[1] - grid[0];
    let last = grid.len() - 1;
    grid.iter()
        .enumerate()
        .map(|(i, &t)| {
            let end = if i == 0 || i == last { 0.5 } else { 1.0 };
            end * problem.weight(t) * a[i] * b[i]
        })
        .sum::<f64>()
        * h
}

impl SturmLiouvilleProblem {
    pub fn new(model: &WarpedModel, eps: f64, num_eigen: usize) -> Result<Self> {
        model.check_depth(eps)?;
        if num_eigen == 0 {
            return Err(Error::InvalidArgument(
                "at least one eigenvalue must be requested".into(),
            ));
        }
        Ok(SturmLiouvilleProblem {
            density: model.density(),
            n: model.n(),
            c: model.c(),
            eps,
            num_eigen,
        })
    }

    pub fn model(&self) -> &WarpedModel {
        self.density.model()
    }

    pub fn density(&self) -> &ConeDensity {
        &self.density
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn num_eigen(&self) -> usize {
        self.num_eigen
    }

    pub fn with_num_eigen(&self, num_eigen: usize) -> Self {
        SturmLiouvilleProblem {
            num_eigen: num_eigen.max(1),
            ..self.clone()
        }
    }

    /// `λⁿ`
    pub fn coefficient(&self, t: f64) -> f64 {
        self.density.lambda(t).powi(self.n as i32)
    }

    /// `c(n+1)λⁿ`
    pub fn potential(&self, t: f64) -> f64 {
        self.c * (self.n + 1) as f64 * self.coefficient(t)
    }

    /// `λ^{n-2}`
    pub fn weight(&self, t: f64) -> f64 {
        self.density.lambda(t).powi(self.n as i32 - 2)
    }

    /// Uniform grid with `interior` points strictly inside, endpoints included.
    pub fn grid(&self, interior: usize) -> Vec<f64> {
        let h = self.eps / (interior + 1) as f64;
        (0..interior + 2)
            .map(|i| {
                if i == interior + 1 {
                    0.0
                } else {
                    -self.eps + i as f64 * h
                }
            })
            .collect()
    }

    /// Discretized operator `W^{-1/2} A W^{-1/2}` on `interior` points,
    /// together with the weights `w` at those points.
    fn discretize(&self, interior: usize) -> Result<(SymTridiagonal, Vec<f64>)> {
        let h = self.eps / (interior + 1) as f64;
        let h2 = h * h;
        let mid: Vec<f64> = (0..=interior)
            .map(|i| self.coefficient(-self.eps + (i as f64 + 0.5) * h))
            .collect();
        let mut diag = Vec::with_capacity(interior);
        let mut weights = Vec::with_capacity(interior);
        for i in 0..interior {
            let t = -self.eps + (i + 1) as f64 * h;
            let w = self.weight(t);
            let q = self.potential(t);
            let d = (mid[i] + mid[i + 1]) / h2 - q;
            if !(w > 0.0) || !w.is_finite() || !d.is_finite() {
                return Err(Error::NonFiniteCoefficient { t });
            }
            diag.push(d / w);
            weights.push(w);
        }
        let off = (0..interior.saturating_sub(1))
            .map(|i| -mid[i + 1] / h2 / (weights[i] * weights[i + 1]).sqrt())
            .collect();
        Ok((SymTridiagonal::new(diag, off), weights))
    }

    /// Points `t(s_k)` for `s_k = kS/m`, `k = 0..=m`, in the coordinate
    /// `s = ∫_{-ε}^t dτ/λ(τ)`, together with `S = s(0)`.
    fn conformal_nodes(&self, m: usize) -> Result<(f64, Vec<f64>)> {
        let span = quadrature::integrate_default(|t| 1.0 / self.density.lambda(t), -self.eps, 0.0)?;
        let ds = span / m as f64;
        let tol = OdeTolerance {
            rel: 1e-13,
            abs: 1e-15,
            ..OdeTolerance::default()
        };
        let mut nodes = Vec::with_capacity(m + 1);
        let mut t = -self.eps;
        nodes.push(t);
        for _ in 1..m {
            t = ode::integrate(
                |_, y: &[f64; 1]| [self.density.lambda(y[0])],
                0.0,
                ds,
                [t],
                tol,
            )?[0];
            nodes.push(t);
        }
        nodes.push(0.0);
        Ok((span, nodes))
    }

    /// The operator in the coordinate `s`, where it reads
    /// `-(λ^{n-1} g_s)_s - c(n+1)λ^{n+1} g = δ λ^{n-1} g`, on the grid with
    /// nodes `nodes[2·stride·i]` and step `hs`.
    fn discretize_conformal(
        &self,
        nodes: &[f64],
        stride: usize,
        hs: f64,
    ) -> Result<SymTridiagonal> {
        let intervals = (nodes.len() - 1) / (2 * stride);
        let interior = intervals - 1;
        let h2 = hs * hs;
        let n = self.n as i32;
        let cn1 = self.c * (self.n + 1) as f64;
        let mid: Vec<f64> = (0..intervals)
            .map(|i| {
                self.density
                    .lambda(nodes[2 * stride * i + stride])
                    .powi(n - 1)
            })
            .collect();
        let mut diag = Vec::with_capacity(interior);
        let mut weights = Vec::with_capacity(interior);
        for i in 0..interior {
            let t = nodes[2 * stride * (i + 1)];
            let lam = self.density.lambda(t);
            let w = lam.powi(n - 1);
            let d = (mid[i] + mid[i + 1]) / h2 - cn1 * lam.powi(n + 1);
            if !(w > 0.0) || !w.is_finite() || !d.is_finite() {
                return Err(Error::NonFiniteCoefficient { t });
            }
            diag.push(d / w);
            weights.push(w);
        }
        let off = (0..interior.saturating_sub(1))
            .map(|i| -mid[i + 1] / h2 / (weights[i] * weights[i + 1]).sqrt())
            .collect();
        Ok(SymTridiagonal::new(diag, off))
    }

    /// Largest `λ²` on a coarse grid over `[-ε, 0]`.
    fn max_lambda_sq(&self) -> f64 {
        (0..=256)
            .map(|i| self.density.lambda(-self.eps * i as f64 / 256.0).powi(2))
            .fold(0.0, f64::max)
    }

    /// Eigenvalues below this value have no zeros to count.
    fn eigenvalue_floor(&self) -> f64 {
        -self.c.max(0.0) * (self.n + 1) as f64 * self.max_lambda_sq() - 1.0
    }

    /// Safety ceiling for the shooting bracket search.
    pub fn eigenvalue_ceiling(&self) -> f64 {
        let lam2 = self.max_lambda_sq();
        self.c.abs() * (self.n + 1) as f64 * lam2 + lam2.max(1.0) * (50.0 * PI / self.eps).powi(2)
    }
}

/// Finite-difference eigensolve. Eigenvalues come from a uniform grid in
/// `s = ∫dt/λ` with one Richardson step (`N` and `2N+1` interior points);
/// eigenfunctions are sampled on the uniform `t` grid with `N` interior points.
pub fn solve_fd(problem: &SturmLiouvilleProblem, grid_size: usize) -> Result<SpectralResult> {
    if grid_size < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid_size {grid_size} below minimum {MIN_GRID}"
        )));
    }
    let count = problem.num_eigen;
    if count * POINTS_PER_MODE > grid_size {
        return Err(Error::GridTooCoarse {
            grid_size,
            requested: count,
        });
    }
    // eigenvalues from the conformal coordinate with steps H and H/2
    let (span, nodes) = problem.conformal_nodes(4 * (grid_size + 1))?;
    let h_coarse = span / (grid_size + 1) as f64;
    let h_fine = 0.5 * h_coarse;
    let raw = problem
        .discretize_conformal(&nodes, 2, h_coarse)?
        .lowest_eigenvalues(count);
    let fine = problem
        .discretize_conformal(&nodes, 1, h_fine)?
        .lowest_eigenvalues(count);
    let eigenvalues: Vec<f64> = raw
        .iter()
        .zip(&fine)
        .map(|(&a, &b)| richardson_h2(a, b, h_coarse, h_fine))
        .collect();

    // eigenvectors sampled on the uniform grid in t
    let (coarse_op, weights) = problem.discretize(grid_size)?;
    let shifts = coarse_op.lowest_eigenvalues(count);

    let grid = problem.grid(grid_size);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut eigenfunctions = Vec::with_capacity(count);
    for &value in &shifts {
        let v = coarse_op.eigenvector(value, &vectors);
        let mut g = vec![0.0; grid_size + 2];
        for i in 0..grid_size {
            g[i + 1] = v[i] / weights[i].sqrt();
        }
        vectors.push(v);
        normalize_eigenfunction(problem, &grid, &mut g);
        eigenfunctions.push(g);
    }
    let residuals = eigenvalues
        .iter()
        .zip(&eigenfunctions)
        .map(|(&d, g)| residual(problem, d, g))
        .collect();

    Ok(SpectralResult {
        model: problem.model().name().to_string(),
        n: problem.n,
        c: problem.c,
        eps: problem.eps,
        method: Method::FiniteDifference,
        grid_size,
        eigenvalues,
        raw_eigenvalues: raw,
        grid,
        eigenfunctions,
        residuals,
    })
}

fn normalize_eigenfunction(problem: &SturmLiouvilleProblem, grid: &[f64], g: &mut [f64]) {
    let norm = weighted_inner(problem, grid, g, g).sqrt();
    let peak = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let first = g
        .iter()
        .copied()
        .find(|v| v.abs() > 1e-12 * peak)
        .unwrap_or(1.0);
    let scale = first.signum() / norm;
    g.iter_mut().for_each(|v| *v *= scale);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Bisection stops once the bracket is narrower than this.
    pub tol: f64,
    /// Interior points of the grid the eigenfunctions are sampled on.
    pub sample_points: usize,
    pub ode: OdeTolerance,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        ShootingOptions {
            tol: DEFAULT_SHOOTING_TOL,
            sample_points: DEFAULT_GRID,
            ode: OdeTolerance::default(),
        }
    }
}

/// Modified Prüfer variables with scale `S = λ^{n-1}`: with `y₁ = g`,
/// `y₂ = λⁿ g'`, set `S y₁ = ρ sin θ`, `y₂ = ρ cos θ`. Returns `(θ', (ln ρ)')`.
fn prufer_rhs(problem: &SturmLiouvilleProblem, delta: f64, t: f64, theta: f64) -> (f64, f64) {
    let (lam, lam_p) = problem.density.eval(t);
    let (s, c) = theta.sin_cos();
    let log_scale_rate = (problem.n as f64 - 1.0) * lam_p / lam;
    let stiffness = problem.c * (problem.n + 1) as f64 * lam + delta / lam;
    let d_theta = log_scale_rate * s * c + c * c / lam + stiffness * s * s;
    let d_log_rho = (1.0 / lam - stiffness) * s * c + log_scale_rate * s * s;
    (d_theta, d_log_rho)
}

fn prufer_angle_at_zero(
    problem: &SturmLiouvilleProblem,
    delta: f64,
    tol: OdeTolerance,
) -> Result<f64> {
    let y = ode::integrate(
        |t, y: &[f64; 1]| [prufer_rhs(problem, delta, t, y[0]).0],
        -problem.eps,
        0.0,
        [0.0],
        tol,
    )?;
    Ok(y[0])
}

/// Shooting eigensolve: eigenvalue `δⱼ` is the unique `δ` with `θ(0; δ) = jπ`,
/// i.e. the eigenfunction has `j - 1` interior zeros.
pub fn solve_shooting(problem: &SturmLiouvilleProblem, tol: f64) -> Result<SpectralResult> {
    solve_shooting_with(
        problem,
        ShootingOptions {
            tol,
            ..ShootingOptions::default()
        },
    )
}

pub fn solve_shooting_with(
    problem: &SturmLiouvilleProblem,
    opts: ShootingOptions,
) -> Result<SpectralResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "shooting tolerance {} must be positive",
            opts.tol
        )));
    }
    if opts.sample_points < 2 {
        return Err(Error::InvalidArgument(
            "need at least two sample points".into(),
        ));
    }
    let ceiling = problem.eigenvalue_ceiling();
    let mut lower = problem.eigenvalue_floor();
    let mut eigenvalues = Vec::with_capacity(problem.num_eigen);

    for j in 1..=problem.num_eigen {
        let target = j as f64 * PI;
        let mut step = 1.0f64.max(0.5 * lower.abs());
        let mut hi = lower + step;
        let mut lo = lower;
        loop {
            if hi > ceiling {
                return Err(Error::BracketNotFound { index: j, ceiling });
            }
            if prufer_angle_at_zero(problem, hi, opts.ode)? > target {
                break;
            }
            lo = hi;
            step *= 2.0;
            hi += step;
        }
        while hi - lo > opts.tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if prufer_angle_at_zero(problem, mid, opts.ode)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let delta = 0.5 * (lo + hi);
        eigenvalues.push(delta);
        lower = delta;
    }

    let grid = problem.grid(opts.sample_points);
    let mut eigenfunctions = Vec::with_capacity(eigenvalues.len());
    for &delta in &eigenvalues {
        let mut g = sample_eigenfunction(problem, delta, &grid, opts.ode)?;
        normalize_eigenfunction(problem, &grid, &mut g);
        eigenfunctions.push(g);
    }
    let residuals = eigenvalues
        .iter()
        .zip(&eigenfunctions)
        .map(|(&d, g)| residual(problem, d, g))
        .collect();

    Ok(SpectralResult {
        model: problem.model().name().to_string(),
        n: problem.n,
        c: problem.c,
        eps: problem.eps,
        method: Method::Shooting,
        grid_size: opts.sample_points,
        raw_eigenvalues: eigenvalues.clone(),
        eigenvalues,
        grid,
        eigenfunctions,
        residuals,
    })
}

/// Integrates `(θ, ln ρ)` from `g(-ε) = 0, g'(-ε) = 1` across the grid and
/// recovers `g = ρ sin θ / λ^{n-1}`. The right endpoint is set to the
/// Dirichlet value.
fn sample_eigenfunction(
    problem: &SturmLiouvilleProblem,
    delta: f64,
    grid: &[f64],
    tol: OdeTolerance,
) -> Result<Vec<f64>> {
    let lam0 = problem.density.lambda(grid[0]);
    let mut state = [0.0, problem.n as f64 * lam0.ln()];
    let mut g = vec![0.0; grid.len()];
    for i in 1..grid.len() {
        state = ode::integrate(
            |t, y: &[f64; 2]| {
                let (a, b) = prufer_rhs(problem, delta, t, y[0]);
                [a, b]
            },
            grid[i - 1],
            grid[i],
            state,
            tol,
        )?;
        let lam = problem.density.lambda(grid[i]);
        g[i] = (state[1] - (problem.n as f64 - 1.0) * lam.ln()).exp() * state[0].sin();
    }
    let last = grid.len() - 1;
    g[last] = 0.0;
    Ok(g)
}

/// Max over interior grid points of the conservative second-order residual
/// `|(λⁿg')' + c(n+1)λⁿg + δλ^{n-2}g|`, normalized by `max|g|·max w`.
/// `g` is sampled on the uniform grid over `[-ε, 0]` including both ends.
pub fn residual(problem: &SturmLiouvilleProblem, delta: f64, g: &[f64]) -> f64 {
    let points = g.len();
    if points < 3 {
        return 0.0;
    }
    let h = problem.eps / (points - 1) as f64;
    let t_at = |i: usize| -problem.eps + i as f64 * h;
    let mut worst = 0.0f64;
    let mut max_w = 0.0f64;
    for i in 1..points - 1 {
        let t = t_at(i);
        let p_left = problem.coefficient(t - 0.5 * h);
        let p_right = problem.coefficient(t + 0.5 * h);
        let flux = (p_right * (g[i + 1] - g[i]) - p_left * (g[i] - g[i - 1])) / (h * h);
        let w = problem.weight(t);
        max_w = max_w.max(w);
        let r = flux + problem.potential(t) * g[i] + delta * w * g[i];
        worst = worst.max(r.abs());
    }
    let peak = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 || max_w == 0.0 {
        return 0.0;
    }
    worst / (peak * max_w)
}

/// `∫λⁿ((g')² − c(n+1)g²) dt / ∫λ^{n−2}g² dt` by adaptive quadrature.
pub fn rayleigh_quotient_axial(problem: &SturmLiouvilleProblem, g: &dyn AxialFn) -> Result<f64> {
    let eps = problem.eps;
    let peak = (0..=64)
        .map(|i| g.value(-eps * i as f64 / 64.0).abs())
        .fold(0.0f64, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    for t in [-eps, 0.0] {
        let v = g.value(t);
        if v.abs() > 1e-9 * peak {
            return Err(Error::BoundaryViolation { t, value: v.abs() });
        }
    }
    let cn1 = problem.c * (problem.n + 1) as f64;
    let numerator = quadrature::integrate_default(
        |t| {
            let gv = g.value(t);
            let gp = g.derivative(t);
            problem.coefficient(t) * (gp * gp - cn1 * gv * gv)
        },
        -eps,
        0.0,
    )?;
    let denominator = quadrature::integrate_default(
        |t| {
            let gv = g.value(t);
            problem.weight(t) * gv * gv
        },
        -eps,
        0.0,
    )?;
    if !(denominator > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    Ok(numerator / denominator)
}

/// Random admissible test function `P(t)·sin(mπt/ε)` with `deg P ≤ 3`,
/// coefficients in `[−1, 1]` and `m ∈ {1, 2, 3}`.
pub fn random_test_function<R: Rng>(rng: &mut R, eps: f64) -> PolySine {
    let degree = rng.gen_range(0..=3);
    let mut coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    // keep P away from the zero polynomial
    coeffs[0] += if coeffs[0] >= 0.0 { 0.5 } else { -0.5 };
    PolySine {
        poly: Polynomial::new(coeffs),
        sine: DirichletSine::new(eps, rng.gen_range(1..=3)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationalCheck {
    pub samples: usize,
    pub seed: u64,
    pub delta1: f64,
    pub min_quotient: f64,
    /// `min RQ − δ₁`; negative beyond the tolerance flags a failure.
    pub min_gap: f64,
    pub passed: bool,
}

/// Rayleigh quotients of `samples` seeded random test functions compared
/// against `delta1`.
pub fn variational_check(
    problem: &SturmLiouvilleProblem,
    delta1: f64,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VariationalCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_quotient = f64::INFINITY;
    for _ in 0..samples {
        let g = random_test_function(&mut rng, problem.eps);
        min_quotient = min_quotient.min(rayleigh_quotient_axial(problem, &g)?);
    }
    let min_gap = min_quotient - delta1;
    Ok(VariationalCheck {
        samples,
        seed,
        delta1,
        min_quotient,
        min_gap,
        passed: samples == 0 || min_gap >= -tol,
    })
}

/// Closed-form Dirichlet spectrum of the Euclidean cone model (`f = 1 + t`,
/// `c = 0`): the equation becomes `s²g'' + nsg' + δg = 0` in `s = 1 + t`,
/// whose solutions `s^{-(n-1)/2} sin(β ln s)` give
/// `δⱼ = (n−1)²/4 + (jπ / ln(1/(1−ε)))²`.
pub fn euclidean_eigenvalue(n: usize, eps: f64, j: usize) -> f64 {
    let log_span = (1.0 / (1.0 - eps)).ln();
    (n as f64 - 1.0).powi(2) / 4.0 + (j as f64 * PI / log_span).powi(2)
}
