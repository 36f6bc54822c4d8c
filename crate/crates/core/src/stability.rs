//! Stability of truncated cones: index form on separable variations, the
//! `λ₁ + δ₁ < 0` verdict, the explicit spherical test-function estimate and
//! parameter sweeps.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::axial::AxialFn;
use crate::error::{Error, Result};
use crate::model::{builtin_model, WarpedModel};
use crate::numerics::quadrature;
use crate::report::{fmt_sig, round_sig};
use crate::sturm_liouville::{
    rayleigh_quotient_axial, solve_fd, solve_shooting, SpectralResult, SturmLiouvilleProblem,
    DEFAULT_GRID, DEFAULT_SHOOTING_TOL,
};
use crate::surfaces::{family_member, l1_spectrum, simons_lambda1_bound, MinimalHypersurface};

/// Largest dimension covered by the closed-form spherical estimate.
pub const THEOREM_MAX_N: usize = 14;
pub const CSV_HEADER: &str =
    "model,surface,n,eps,lambda1,lambda1_source,delta1,sum,verdict,paper_bound";
pub const PLOT_HEADER: &str = "n,eps,lambda1,delta1,sum,verdict";

/// Axial factor of a separable term.
pub enum AxialFactor<'a> {
    /// Samples on a uniform grid over `[−ε, 0]`, endpoints included.
    Sampled {
        grid: &'a [f64],
        values: &'a [f64],
    },
    Closed(&'a dyn AxialFn),
}

impl<'a> AxialFactor<'a> {
    /// The `index`-th (0-based) eigenfunction of a spectral result.
    pub fn eigenfunction(spectrum: &'a SpectralResult, index: usize) -> Self {
        AxialFactor::Sampled {
            grid: &spectrum.grid,
            values: &spectrum.eigenfunctions[index],
        }
    }
}

pub struct VariationTerm<'a> {
    /// 0-based index into the `L₁` eigenbasis (L²-normalized, volume 1).
    pub surface_index: usize,
    pub axial: AxialFactor<'a>,
    pub coefficient: f64,
}

/// `F(p, t) = Σ a_ij f_i(p) g_j(t)`.
#[derive(Default)]
pub struct SeparableVariation<'a> {
    pub terms: Vec<VariationTerm<'a>>,
}

impl<'a> SeparableVariation<'a> {
    pub fn new() -> Self {
        SeparableVariation { terms: Vec::new() }
    }

    pub fn term(mut self, surface_index: usize, axial: AxialFactor<'a>, coefficient: f64) -> Self {
        self.terms.push(VariationTerm {
            surface_index,
            axial,
            coefficient,
        });
        self
    }
}

/// Composite Simpson on a uniform grid; the last three panels use the 3/8
/// rule when the panel count is odd.
fn simpson(h: f64, y: &[f64]) -> f64 {
    let panels = y.len() - 1;
    match panels {
        0 => 0.0,
        1 => 0.5 * h * (y[0] + y[1]),
        2 => h / 3.0 * (y[0] + 4.0 * y[1] + y[2]),
        3 => 3.0 * h / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3]),
        _ => {
            let even = if panels % 2 == 0 { panels } else { panels - 3 };
            let mut s = y[0] + y[even];
            for i in 1..even {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * y[i];
            }
            let mut total = h / 3.0 * s;
            if even < panels {
                let t = &y[even..];
                total += 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
            }
            total
        }
    }
}

/// Fourth-order central first and second differences, second order next to the ends.
fn sampled_derivatives(h: f64, g: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = g.len();
    let mut d1 = vec![0.0; m];
    let mut d2 = vec![0.0; m];
    for i in 1..m - 1 {
        if i >= 2 && i + 2 < m {
            d1[i] = (-g[i + 2] + 8.0 * g[i + 1] - 8.0 * g[i - 1] + g[i - 2]) / (12.0 * h);
            d2[i] = (-g[i + 2] + 16.0 * g[i + 1] - 30.0 * g[i] + 16.0 * g[i - 1] - g[i - 2])
                / (12.0 * h * h);
        } else {
            d1[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
            d2[i] = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (h * h);
        }
    }
    (d1, d2)
}

/// Index form `I(F)` by direct quadrature of
/// `∫ f^{n−2} G_i (λ_i G_i − n f f' G_i' − f² G_i'' − c(n+1) f² G_i) dt`
/// summed over surface modes, `G_i = Σ_j a_ij g_j`.
pub fn index_form(
    v: &SeparableVariation<'_>,
    model: &WarpedModel,
    surface: &MinimalHypersurface,
    eps: f64,
) -> Result<f64> {
    model.check_depth(eps)?;
    if v.terms.is_empty() {
        return Ok(0.0);
    }
    let top = v.terms.iter().map(|t| t.surface_index).max().unwrap_or(0);
    let lambdas = l1_spectrum(surface, top + 1)?.eigenvalues;
    let n = model.n() as f64;
    let cn1 = model.c() * (n + 1.0);

    let mut groups: BTreeMap<usize, Vec<&VariationTerm<'_>>> = BTreeMap::new();
    for term in &v.terms {
        if term.coefficient != 0.0 {
            groups.entry(term.surface_index).or_default().push(term);
        }
    }

    let mut total = 0.0;
    for (i, terms) in groups {
        let lambda_i = lambdas[i];
        let integrand = |t: f64, g: f64, gp: f64, gpp: f64| {
            let f = model.f(t);
            f.powi(model.n() as i32 - 2)
                * g
                * (lambda_i * g - n * f * model.f_prime(t) * gp - f * f * gpp - cn1 * f * f * g)
        };
        let sampled_grid = terms.iter().find_map(|t| match t.axial {
            AxialFactor::Sampled { grid, .. } => Some(grid),
            AxialFactor::Closed(_) => None,
        });
        let value = match sampled_grid {
            None => {
                let combo = |t: f64, k: u8| -> f64 {
                    terms
                        .iter()
                        .map(|term| match term.axial {
                            AxialFactor::Closed(g) => {
                                term.coefficient
                                    * match k {
                                        0 => g.value(t),
                                        1 => g.derivative(t),
                                        _ => g.second_derivative(t),
                                    }
                            }
                            AxialFactor::Sampled { .. } => {
                                unreachable!("all terms are closed-form")
                            }
                        })
                        .sum()
                };
                check_boundary(eps, combo(-eps, 0), combo(0.0, 0), |t| combo(t, 0))?;
                quadrature::integrate_default(
                    |t| integrand(t, combo(t, 0), combo(t, 1), combo(t, 2)),
                    -eps,
                    0.0,
                )?
            }
            Some(grid) => {
                check_grid(grid, eps)?;
                let mut g = vec![0.0; grid.len()];
                for term in &terms {
                    match term.axial {
                        AxialFactor::Sampled {
                            grid: other,
                            values,
                        } => {
                            if other.len() != grid.len() || values.len() != grid.len() {
                                return Err(Error::InvalidArgument(
                                    "sampled axial factors must share one grid".into(),
                                ));
                            }
                            for (gi, vi) in g.iter_mut().zip(values) {
                                *gi += term.coefficient * vi;
                            }
                        }
                        AxialFactor::Closed(f) => {
                            for (gi, &t) in g.iter_mut().zip(grid.iter()) {
                                *gi += term.coefficient * f.value(t);
                            }
                        }
                    }
                }
                let last = g.len() - 1;
                check_boundary(eps, g[0], g[last], |t| {
                    let idx = (((t + eps) / eps) * last as f64).round() as usize;
                    g[idx.min(last)]
                })?;
                let h = grid[1] - grid[0];
                let (d1, d2) = sampled_derivatives(h, &g);
                let y: Vec<f64> = (0..g.len())
                    .map(|k| {
                        if k == 0 || k == last {
                            0.0
                        } else {
                            integrand(grid[k], g[k], d1[k], d2[k])
                        }
                    })
                    .collect();
                simpson(h, &y)
            }
        };
        total += value;
    }
    Ok(total)
}

fn check_grid(grid: &[f64], eps: f64) -> Result<()> {
    if grid.len() < 5 {
        return Err(Error::InvalidArgument(
            "sampled axial factor needs at least 5 points".into(),
        ));
    }
    let span_ok =
        (grid[0] + eps).abs() <= 1e-12 * eps.max(1.0) && grid[grid.len() - 1].abs() <= 1e-12;
    if !span_ok {
        return Err(Error::InvalidArgument(format!(
            "sampled axial factor spans [{}, {}], expected [{}, 0]",
            grid[0],
            grid[grid.len() - 1],
            -eps
        )));
    }
    Ok(())
}

fn check_boundary(eps: f64, left: f64, right: f64, g: impl Fn(f64) -> f64) -> Result<()> {
    let peak = (0..=64)
        .map(|k| g(-eps * k as f64 / 64.0).abs())
        .fold(0.0f64, f64::max);
    let tol = 1e-9 * peak.max(f64::MIN_POSITIVE);
    if left.abs() > tol {
        return Err(Error::BoundaryViolation {
            t: -eps,
            value: left.abs(),
        });
    }
    if right.abs() > tol {
        return Err(Error::BoundaryViolation {
            t: 0.0,
            value: right.abs(),
        });
    }
    Ok(())
}

/// `Σ a_ij² (λ_i + δ_j) ‖f_i‖² ‖g_j‖²_w` for coefficients `(i, j, a_ij)`
/// (0-based), with `‖f_i‖ = 1` and the weighted norms measured on the
/// sampled eigenfunctions.
pub fn index_form_factored(
    surface: &MinimalHypersurface,
    problem: &SturmLiouvilleProblem,
    axial: &SpectralResult,
    coefficients: &[(usize, usize, f64)],
) -> Result<f64> {
    let top = coefficients.iter().map(|c| c.0).max().unwrap_or(0);
    let lambdas = l1_spectrum(surface, top + 1)?.eigenvalues;
    let mut total = 0.0;
    for &(i, j, a) in coefficients {
        if j >= axial.eigenvalues.len() {
            return Err(Error::InvalidArgument(format!(
                "axial eigenfunction {j} was not computed"
            )));
        }
        let norm_w = axial.weighted_inner(problem, j, j);
        total += a * a * (lambdas[i] + axial.eigenvalues[j]) * norm_w;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unstable,
    /// `λ₁ + δ₁ ≥ 0` with exact `λ₁`: no destabilizing fixed-boundary
    /// normal variation exists.
    StableUnderFixedBoundaryNormalVariations,
    /// `λ₁` is only an upper bound and the sum is nonnegative.
    NotDecidedByCriterion,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Unstable => "unstable",
            Verdict::StableUnderFixedBoundaryNormalVariations => {
                "stable_under_fixed_boundary_normal_variations"
            }
            Verdict::NotDecidedByCriterion => "not_decided_by_criterion",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Verdict::Unstable => "unstable, sum<0",
            Verdict::StableUnderFixedBoundaryNormalVariations => {
                "no destabilizing normal variation with fixed boundary exists (sum>=0)"
            }
            Verdict::NotDecidedByCriterion => {
                "not decided by criterion (lambda1 is a bound, sum>=0)"
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Lambda1Mode {
    Exact,
    /// Upper estimate from the test function `(‖A‖²+τ)^{1/2}`.
    Bound {
        tau: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictOptions {
    pub grid_size: usize,
    pub shooting_tol: f64,
    /// Solve by shooting as well and refuse the report on disagreement.
    pub cross_check: bool,
    pub lambda1_mode: Lambda1Mode,
    /// Also evaluate the explicit test-function estimate when it applies.
    pub test_function_bound: bool,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            grid_size: DEFAULT_GRID,
            shooting_tol: DEFAULT_SHOOTING_TOL,
            cross_check: true,
            lambda1_mode: Lambda1Mode::Exact,
            test_function_bound: false,
        }
    }
}

/// A number together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sourced {
    pub value: f64,
    pub source: &'static str,
}

impl Sourced {
    fn new(value: f64, source: &'static str) -> Self {
        Sourced { value, source }
    }

    fn rounded(self) -> Self {
        Sourced {
            value: round_sig(self.value),
            source: self.source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub grid_size: usize,
    pub fd_residual: f64,
    pub delta1_shooting: Option<f64>,
    pub solver_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub model: String,
    pub surface: String,
    pub n: usize,
    pub eps: f64,
    pub lambda1: Sourced,
    pub delta1: Sourced,
    pub sum: f64,
    pub verdict: Verdict,
    /// Closed-form estimate `n²/8 − 2n + 2`, for spherical models over
    /// non-totally-geodesic bases.
    pub paper_bound: Option<Sourced>,
    /// `−n + RQ[h]` with the explicit spherical test function at this `ε`.
    pub test_function_bound: Option<Sourced>,
    /// Set when `n` exceeds the range covered by the closed-form estimate.
    pub beyond_theorem: bool,
    pub diagnostics: Diagnostics,
}

impl StabilityReport {
    pub fn csv_row(&self) -> String {
        crate::report::csv_line(&[
            self.model.clone(),
            self.surface.clone(),
            self.n.to_string(),
            fmt_sig(self.eps),
            fmt_sig(self.lambda1.value),
            self.lambda1.source.to_string(),
            fmt_sig(self.delta1.value),
            fmt_sig(self.sum),
            self.verdict.as_str().to_string(),
            self.paper_bound
                .map(|b| fmt_sig(b.value))
                .unwrap_or_default(),
        ])
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut copy = self.clone();
        copy.lambda1 = copy.lambda1.rounded();
        copy.delta1 = copy.delta1.rounded();
        copy.paper_bound = copy.paper_bound.map(Sourced::rounded);
        copy.test_function_bound = copy.test_function_bound.map(Sourced::rounded);
        let mut value =
            crate::report::rounded_json(serde_json::to_value(&copy).expect("report serializes"));
        value["sum"] =
            serde_json::json!({"value": round_sig(self.sum), "source": self.sum_source()});
        value
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes")
    }

    fn sum_source(&self) -> &'static str {
        match self.lambda1.source {
            "exact" => self.delta1.source,
            _ => "bound",
        }
    }
}

fn is_sphere_model(model: &WarpedModel) -> bool {
    model.name() == "sphere"
}

/// `λ₁ + δ₁` verdict for the cone over `surface` truncated at depth `eps`.
pub fn verdict(
    model: &WarpedModel,
    surface: &MinimalHypersurface,
    eps: f64,
    options: &VerdictOptions,
) -> Result<StabilityReport> {
    if model.k() != surface.fiber_k {
        return Err(Error::IncompatibleFiber {
            surface: surface.fiber_k,
            model: model.k(),
        });
    }
    let model = if model.n() == surface.n {
        model.clone()
    } else {
        model.with_dimension(surface.n)?
    };
    let lambda1 = match options.lambda1_mode {
        Lambda1Mode::Exact => Sourced::new(l1_spectrum(surface, 1)?.lambda1(), "exact"),
        Lambda1Mode::Bound { tau } => Sourced::new(simons_lambda1_bound(surface, tau)?, "bound"),
    };

    let problem = SturmLiouvilleProblem::new(&model, eps, 1)?;
    let fd = solve_fd(&problem, options.grid_size)?;
    let delta1 = fd.first();
    let (delta1_shooting, solver_gap) = if options.cross_check {
        let shot = solve_shooting(&problem, options.shooting_tol)?.first();
        let gap = (delta1 - shot).abs();
        if gap > agreement_tolerance(shot) {
            return Err(Error::SolverDisagreement {
                index: 1,
                fd: delta1,
                shooting: shot,
            });
        }
        (Some(shot), Some(gap))
    } else {
        (None, None)
    };

    let sum = lambda1.value + delta1;
    let verdict = if sum < 0.0 {
        Verdict::Unstable
    } else if lambda1.source == "exact" {
        Verdict::StableUnderFixedBoundaryNormalVariations
    } else {
        Verdict::NotDecidedByCriterion
    };

    let spherical_estimate = is_sphere_model(&model) && !surface.totally_geodesic;
    let paper_bound =
        spherical_estimate.then(|| Sourced::new(paper_bound(surface.n), "closed_form"));
    let test_function_bound = if spherical_estimate && options.test_function_bound {
        let h = paper_h(eps, surface.n)?;
        Some(Sourced::new(
            -(surface.n as f64) + rayleigh_quotient_axial(&problem, &h)?,
            "quadrature",
        ))
    } else {
        None
    };

    Ok(StabilityReport {
        model: model.name().to_string(),
        surface: surface.name.clone(),
        n: surface.n,
        eps,
        lambda1,
        delta1: Sourced::new(delta1, "fd"),
        sum,
        verdict,
        paper_bound,
        test_function_bound,
        beyond_theorem: is_sphere_model(&model) && surface.n > THEOREM_MAX_N,
        diagnostics: Diagnostics {
            grid_size: options.grid_size,
            fd_residual: fd.residuals[0],
            delta1_shooting,
            solver_gap,
        },
    })
}

/// Allowed gap between the finite-difference and shooting eigenvalues.
pub fn agreement_tolerance(delta: f64) -> f64 {
    1e-6f64.max(1e-6 * delta.abs())
}

/// `h(t) = sin(πt/ε) / √(cos^{n−2} t)` on `[−ε, 0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperTestFunction {
    pub eps: f64,
    pub n: usize,
}

pub fn paper_h(eps: f64, n: usize) -> Result<PaperTestFunction> {
    if !(eps > 0.0 && eps < FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!(
            "eps = {eps} must lie in (0, π/2)"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be at least 2"
        )));
    }
    Ok(PaperTestFunction { eps, n })
}

impl PaperTestFunction {
    fn exponent(&self) -> f64 {
        (self.n as f64 - 2.0) / 2.0
    }

    /// `(P, P', P'')` for `P = cos^{−a} t`.
    fn envelope(&self, t: f64) -> (f64, f64, f64) {
        let a = self.exponent();
        let p = t.cos().powf(-a);
        let tan = t.tan();
        let p1 = a * p * tan;
        let p2 = a * p * (a * tan * tan + 1.0 + tan * tan);
        (p, p1, p2)
    }

    fn freq(&self) -> f64 {
        PI / self.eps
    }

    /// `(sin kt, cos kt)` measured from the nearer endpoint, so that the
    /// sine vanishes exactly at both ends.
    fn phase(&self, t: f64) -> (f64, f64) {
        let k = self.freq();
        if t < -0.5 * self.eps {
            let (s, c) = (k * (t + self.eps)).sin_cos();
            (-s, -c)
        } else {
            (k * t).sin_cos()
        }
    }
}

impl AxialFn for PaperTestFunction {
    fn value(&self, t: f64) -> f64 {
        self.phase(t).0 * self.envelope(t).0
    }

    fn derivative(&self, t: f64) -> f64 {
        let k = self.freq();
        let (p, p1, _) = self.envelope(t);
        let (s, c) = self.phase(t);
        k * c * p + s * p1
    }

    fn second_derivative(&self, t: f64) -> f64 {
        let k = self.freq();
        let (p, p1, p2) = self.envelope(t);
        let (s, c) = self.phase(t);
        -k * k * s * p + 2.0 * k * c * p1 + s * p2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaperIntegrals {
    pub eps: f64,
    pub n: usize,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
}

impl PaperIntegrals {
    /// `(I₁ − I₂)/I₃`, the Rayleigh quotient of the test function.
    pub fn quotient(&self) -> f64 {
        (self.i1 - self.i2) / self.i3
    }

    /// `−n + (I₁ − I₂)/I₃`
    pub fn estimate(&self) -> f64 {
        -(self.n as f64) + self.quotient()
    }
}

/// Values of the three integrals at `ε = π/2`.
pub fn paper_integral_limits(n: usize) -> (f64, f64, f64) {
    let a = (n as f64 - 2.0) / 4.0;
    (
        FRAC_PI_2 * (1.0 + a * a),
        (n as f64 + 1.0) * PI / 8.0,
        PI / 4.0,
    )
}

/// `I₁ = ∫cosⁿ(h')²`, `I₂ = (n+1)∫cosⁿh²`, `I₃ = ∫cos^{n−2}h²` written out
/// for `h = sin(πt/ε)/√(cos^{n−2}t)`.
pub fn paper_integrals(eps: f64, n: usize) -> Result<PaperIntegrals> {
    if !(eps > 0.0 && eps <= FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!(
            "eps = {eps} must lie in (0, π/2]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be at least 2"
        )));
    }
    let k = PI / eps;
    let a2 = (n as f64 - 2.0).powi(2) / 4.0;
    let cross = k * (n as f64 - 2.0) / 4.0;
    let i1 = quadrature::integrate_default(
        |t| {
            let (s, c) = (k * t).sin_cos();
            k * k * c * c * t.cos().powi(2)
                + a2 * s * s * t.sin().powi(2)
                + cross * (2.0 * k * t).sin() * (2.0 * t).sin()
        },
        -eps,
        0.0,
    )?;
    let i2 = (n as f64 + 1.0)
        * quadrature::integrate_default(|t| t.cos().powi(2) * (k * t).sin().powi(2), -eps, 0.0)?;
    let i3 = quadrature::integrate_default(|t| (k * t).sin().powi(2), -eps, 0.0)?;
    Ok(PaperIntegrals { eps, n, i1, i2, i3 })
}

/// `n²/8 − 2n + 2`
pub fn paper_bound(n: usize) -> f64 {
    let n = n as f64;
    n * n / 8.0 - 2.0 * n + 2.0
}

/// Sign of `n²/8 − 2n + 2` in exact integer arithmetic (`8×` the bound).
pub fn paper_bound_sign(n: usize) -> std::cmp::Ordering {
    let n = n as i128;
    (n * n - 16 * n + 16).cmp(&0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: String,
    /// `clifford`, `equator`, `flat_subtorus`, or a fixed surface such as `clifford:2,1`.
    pub surface_family: String,
    pub n_values: Vec<usize>,
    pub eps_values: Vec<f64>,
    pub options: VerdictOptions,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub n: usize,
    pub eps: f64,
    pub outcome: std::result::Result<StabilityReport, Error>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub eps: Option<f64>,
    /// Unstable dimensions at the largest `ε`.
    pub unstable_n: Vec<usize>,
    pub contiguous: bool,
    /// Smallest tested `ε` with an unstable verdict, per `n`.
    pub thresholds: Vec<(usize, Option<f64>)>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Ordered by `(n, ε)`.
    pub cells: Vec<SweepCell>,
}

fn sweep_cell(config: &SweepConfig, n: usize, eps: f64) -> Result<StabilityReport> {
    let model = builtin_model(&config.model, n)?;
    let surface = family_member(&config.surface_family, n)?;
    verdict(&model, &surface, eps, &config.options)
}

/// Runs every `(n, ε)` cell; failures are recorded per cell.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    if config.jobs == 0 {
        return Err(Error::InvalidArgument("jobs must be at least 1".into()));
    }
    builtin_model(&config.model, 2)?;
    let mut n_values = config.n_values.clone();
    n_values.sort_unstable();
    n_values.dedup();
    let mut eps_values = config.eps_values.clone();
    eps_values.sort_by(f64::total_cmp);
    eps_values.dedup();
    let grid: Vec<(usize, f64)> = n_values
        .iter()
        .flat_map(|&n| eps_values.iter().map(move |&e| (n, e)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let cells = pool.install(|| {
        grid.par_iter()
            .map(|&(n, eps)| SweepCell {
                n,
                eps,
                outcome: sweep_cell(config, n, eps),
            })
            .collect()
    });
    Ok(SweepResult {
        config: SweepConfig {
            n_values,
            eps_values,
            ..config.clone()
        },
        cells,
    })
}

impl SweepResult {
    pub fn summary(&self) -> SweepSummary {
        let eps = self.config.eps_values.last().copied();
        let unstable_n: Vec<usize> = self
            .cells
            .iter()
            .filter(|c| Some(c.eps) == eps)
            .filter(|c| matches!(&c.outcome, Ok(r) if r.verdict == Verdict::Unstable))
            .map(|c| c.n)
            .collect();
        let tested: Vec<usize> = self.config.n_values.clone();
        let contiguous = match (unstable_n.first(), unstable_n.last()) {
            (Some(&lo), Some(&hi)) => {
                tested.iter().filter(|&&n| n >= lo && n <= hi).count() == unstable_n.len()
            }
            _ => true,
        };
        let thresholds = tested
            .iter()
            .map(|&n| {
                let first = self
                    .cells
                    .iter()
                    .filter(|c| c.n == n)
                    .find(|c| matches!(&c.outcome, Ok(r) if r.verdict == Verdict::Unstable))
                    .map(|c| c.eps);
                (n, first)
            })
            .collect();
        SweepSummary {
            eps,
            unstable_n,
            contiguous,
            thresholds,
            failures: self.cells.iter().filter(|c| c.outcome.is_err()).count(),
        }
    }

    /// One line describing the instability window at the largest `ε`.
    pub fn summary_line(&self) -> String {
        let s = self.summary();
        let eps = s.eps.map(fmt_sig).unwrap_or_else(|| "-".into());
        let window = match (s.unstable_n.first(), s.unstable_n.last()) {
            (Some(lo), Some(hi)) if s.contiguous => format!("unstable for n in {lo}..={hi}"),
            (Some(_), Some(_)) => format!(
                "unstable for n in {{{}}} (not contiguous)",
                s.unstable_n
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            _ => "no unstable cells".to_string(),
        };
        let beyond: Vec<String> = s
            .unstable_n
            .iter()
            .filter(|&&n| self.config.model == "sphere" && n > THEOREM_MAX_N)
            .map(ToString::to_string)
            .collect();
        let mut line = format!(
            "model={} surface={} eps={eps}: {window}",
            self.config.model, self.config.surface_family
        );
        if !beyond.is_empty() {
            line.push_str(&format!("; n={} beyond paper's theorem", beyond.join(",")));
        }
        if s.failures > 0 {
            line.push_str(&format!("; {} failed cells", s.failures));
        }
        line
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for cell in &self.cells {
            match &cell.outcome {
                Ok(r) => out.push_str(&r.csv_row()),
                Err(e) => {
                    let surface = family_member(&self.config.surface_family, cell.n)
                        .map(|s| s.name)
                        .unwrap_or_else(|_| self.config.surface_family.clone());
                    let kind = if e.is_solver_failure() {
                        "solver_failure"
                    } else {
                        "error"
                    };
                    out.push_str(&crate::report::csv_line(&[
                        self.config.model.clone(),
                        surface,
                        cell.n.to_string(),
                        fmt_sig(cell.eps),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        kind.to_string(),
                        String::new(),
                    ]));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .cells
            .iter()
            .map(|cell| match &cell.outcome {
                Ok(r) => r.to_json_value(),
                Err(e) => serde_json::json!({
                    "model": self.config.model,
                    "n": cell.n,
                    "eps": round_sig(cell.eps),
                    "error": e.to_string(),
                }),
            })
            .collect();
        let summary = crate::report::rounded_json(
            serde_json::to_value(self.summary()).expect("summary serializes"),
        );
        serde_json::to_string_pretty(&serde_json::json!({
            "reports": rows,
            "summary": summary,
            "summary_line": self.summary_line(),
        }))
        .expect("sweep serializes")
    }

    /// `n,eps,lambda1,delta1,sum,verdict`, one row per successful cell.
    pub fn plot_data(&self) -> String {
        let mut out = String::from(PLOT_HEADER);
        out.push('\n');
        for cell in &self.cells {
            if let Ok(r) = &cell.outcome {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    fmt_sig(r.eps),
                    fmt_sig(r.lambda1.value),
                    fmt_sig(r.delta1.value),
                    fmt_sig(r.sum),
                    r.verdict.as_str()
                ));
            }
        }
        out
    }
}

pub fn emit_plot_data(result: &SweepResult, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, result.plot_data())?;
    Ok(())
}
