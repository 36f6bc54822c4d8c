//! Finite-difference checks of the cone `Φ(t, u) = (cos t·x(u), sin t)` in
//! `S^{n+2} ⊂ ℝ^{n+3}` over a parametrized base `x: ℝⁿ → S^{n+1}`.
//!
//! Each sphere factor of the base is charted by inverse stereographic
//! projection, so central differences carry a genuine `O(h²)` error.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::axial::AxialFn;
use crate::error::{Error, Result};
use crate::model::WarpedModel;
use crate::surfaces::{MinimalHypersurface, SurfaceKind};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const NORM_TOL: f64 = 1e-4;
pub const MEAN_CURVATURE_TOL: f64 = 1e-4;
pub const VOLUME_TOL: f64 = 1e-5;
pub const AXIAL_TOL: f64 = 1e-4;
pub const BLOCK_TOL: f64 = 1e-10;
pub const MIN_HALVING_RATIO: f64 = 3.5;
const MAX_CONDITION: f64 = 1e10;

/// Base hypersurface of `S^{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BaseSurface {
    /// Great sphere `Sⁿ`.
    GreatSphere { n: usize },
    /// `Sᵖ(r) × S^q(√(1−r²))`; minimal iff `r² = p/(p+q)`.
    SphereProduct { p: usize, q: usize, r: f64 },
}

fn stereographic(v: &[f64]) -> Vec<f64> {
    let r2: f64 = v.iter().map(|x| x * x).sum();
    let s = r2 + 1.0;
    let mut out: Vec<f64> = v.iter().map(|x| 2.0 * x / s).collect();
    out.push((r2 - 1.0) / s);
    out
}

/// Column `j` is `∂σ/∂v_j`.
fn stereographic_jacobian(v: &[f64]) -> Vec<Vec<f64>> {
    let r2: f64 = v.iter().map(|x| x * x).sum();
    let s = r2 + 1.0;
    (0..v.len())
        .map(|j| {
            let mut col: Vec<f64> = (0..v.len())
                .map(|i| {
                    let delta = if i == j { 2.0 / s } else { 0.0 };
                    delta - 4.0 * v[i] * v[j] / (s * s)
                })
                .collect();
            col.push(4.0 * v[j] / (s * s));
            col
        })
        .collect()
}

impl BaseSurface {
    pub fn dim(&self) -> usize {
        match *self {
            BaseSurface::GreatSphere { n } => n,
            BaseSurface::SphereProduct { p, q, .. } => p + q,
        }
    }

    /// Dimension of the Euclidean space containing `S^{n+1}`.
    pub fn ambient_dim(&self) -> usize {
        self.dim() + 2
    }

    pub fn point(&self, u: &[f64]) -> Vec<f64> {
        match *self {
            BaseSurface::GreatSphere { .. } => {
                let mut x = stereographic(u);
                x.push(0.0);
                x
            }
            BaseSurface::SphereProduct { p, r, .. } => {
                let s = (1.0 - r * r).sqrt();
                let mut x: Vec<f64> = stereographic(&u[..p]).into_iter().map(|v| r * v).collect();
                x.extend(stereographic(&u[p..]).into_iter().map(|v| s * v));
                x
            }
        }
    }

    /// Analytic `∂x/∂u_j`, one vector per coordinate.
    pub fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let dim = self.ambient_dim();
        match *self {
            BaseSurface::GreatSphere { .. } => stereographic_jacobian(u)
                .into_iter()
                .map(|mut col| {
                    col.push(0.0);
                    col
                })
                .collect(),
            BaseSurface::SphereProduct { p, r, .. } => {
                let s = (1.0 - r * r).sqrt();
                let mut cols = Vec::with_capacity(self.dim());
                for col in stereographic_jacobian(&u[..p]) {
                    let mut full: Vec<f64> = col.into_iter().map(|v| r * v).collect();
                    full.resize(dim, 0.0);
                    cols.push(full);
                }
                for col in stereographic_jacobian(&u[p..]) {
                    let mut full = vec![0.0; p + 1];
                    full.extend(col.into_iter().map(|v| s * v));
                    cols.push(full);
                }
                cols
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeImmersion {
    pub name: String,
    pub base: BaseSurface,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

impl ConeImmersion {
    pub fn from_surface(s: &MinimalHypersurface) -> Result<Self> {
        let base = match s.kind {
            SurfaceKind::Equator => BaseSurface::GreatSphere { n: s.n },
            SurfaceKind::Clifford { p, q } => BaseSurface::SphereProduct {
                p,
                q,
                r: (p as f64 / s.n as f64).sqrt(),
            },
            SurfaceKind::FlatSubtorus => {
                return Err(Error::Unsupported(format!(
                    "geometric checks need a spherical base, {} lies in a flat fiber",
                    s.name
                )))
            }
        };
        Ok(ConeImmersion {
            name: s.name.clone(),
            base,
        })
    }

    /// Cone over `Sᵖ(r) × S^q(√(1−r²))` for any `0 < r < 1`.
    pub fn sphere_product(p: usize, q: usize, r: f64) -> Result<Self> {
        if p < 1 || q < 1 || !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "invalid sphere product p = {p}, q = {q}, r = {r}"
            )));
        }
        Ok(ConeImmersion {
            name: format!("sphere_product:{p},{q},{r}"),
            base: BaseSurface::SphereProduct { p, q, r },
        })
    }

    pub fn n(&self) -> usize {
        self.base.dim()
    }

    /// A generic chart point away from the chart centre.
    pub fn default_chart_point(&self) -> Vec<f64> {
        (0..self.n()).map(|i| 0.37 - 0.23 * i as f64).collect()
    }

    pub fn map(&self, t: f64, u: &[f64]) -> Vec<f64> {
        let (s, c) = t.sin_cos();
        let mut phi: Vec<f64> = self.base.point(u).into_iter().map(|x| c * x).collect();
        phi.push(s);
        phi
    }

    /// `[∂_tΦ, ∂_{u_1}Φ, …]` in closed form.
    pub fn analytic_tangents(&self, t: f64, u: &[f64]) -> Vec<Vec<f64>> {
        let (s, c) = t.sin_cos();
        let mut axial: Vec<f64> = self.base.point(u).into_iter().map(|x| -s * x).collect();
        axial.push(c);
        let mut out = vec![axial];
        for col in self.base.jacobian(u) {
            let mut v: Vec<f64> = col.into_iter().map(|x| c * x).collect();
            v.push(0.0);
            out.push(v);
        }
        out
    }

    fn shifted(t: f64, u: &[f64], coord: usize, delta: f64) -> (f64, Vec<f64>) {
        let mut u = u.to_vec();
        if coord == 0 {
            (t + delta, u)
        } else {
            u[coord - 1] += delta;
            (t, u)
        }
    }

    /// Central-difference tangents `[∂_tΦ, ∂_{u_i}Φ]`.
    pub fn fd_tangents(&self, t: f64, u: &[f64], h: f64) -> Vec<Vec<f64>> {
        (0..=self.n())
            .map(|a| {
                let (tp, up) = Self::shifted(t, u, a, h);
                let (tm, um) = Self::shifted(t, u, a, -h);
                let plus = self.map(tp, &up);
                let minus = self.map(tm, &um);
                plus.iter()
                    .zip(&minus)
                    .map(|(p, m)| (p - m) / (2.0 * h))
                    .collect()
            })
            .collect()
    }

    /// Unit normal to the cone inside `S^{n+2}`, from Gram–Schmidt of the
    /// position and FD tangents; sign aligned with `reference` if given.
    fn unit_normal(
        &self,
        t: f64,
        u: &[f64],
        h: f64,
        reference: Option<&[f64]>,
    ) -> Result<Vec<f64>> {
        let mut frame = vec![self.map(t, u)];
        frame.extend(self.fd_tangents(t, u, h));
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(frame.len());
        for v in frame {
            let scale = dot(&v, &v).sqrt();
            let mut w = v;
            for _ in 0..2 {
                for q in &basis {
                    let d = dot(&w, q);
                    axpy(-d, q, &mut w);
                }
            }
            let norm = dot(&w, &w).sqrt();
            if !(norm > 1e-8 * scale.max(1e-300)) {
                return Err(Error::DegenerateFrame);
            }
            w.iter_mut().for_each(|x| *x /= norm);
            basis.push(w);
        }
        let dim = self.base.ambient_dim() + 1;
        let mut best: Option<(f64, Vec<f64>)> = None;
        for k in 0..dim {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            for _ in 0..2 {
                for q in &basis {
                    let d = dot(&e, q);
                    axpy(-d, q, &mut e);
                }
            }
            let norm = dot(&e, &e).sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, e));
            }
        }
        let (norm, mut nu) = best.expect("ambient dimension is positive");
        nu.iter_mut().for_each(|x| *x /= norm);
        if let Some(r) = reference {
            if dot(&nu, r) < 0.0 {
                nu.iter_mut().for_each(|x| *x = -*x);
            }
        }
        Ok(nu)
    }

    fn check_stencil(&self, t: f64, u: &[f64], h: f64) -> Result<()> {
        if !(h > 0.0 && h <= 0.1) {
            return Err(Error::InvalidArgument(format!(
                "step h = {h} must lie in (0, 0.1]"
            )));
        }
        if u.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "chart point has {} coordinates, expected {}",
                u.len(),
                self.n()
            )));
        }
        if !(t.abs() + 2.0 * h < FRAC_PI_2) {
            return Err(Error::StencilOutsideChart { coordinate: t });
        }
        if let Some(&x) = u.iter().find(|x| !x.is_finite()) {
            return Err(Error::StencilOutsideChart { coordinate: x });
        }
        Ok(())
    }
}

fn to_matrix(rows: usize, f: impl Fn(usize, usize) -> f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, rows, f)
}

fn gram(vectors: &[Vec<f64>]) -> DMatrix<f64> {
    to_matrix(vectors.len(), |a, b| dot(&vectors[a], &vectors[b]))
}

fn check_conditioning(g: &DMatrix<f64>) -> Result<()> {
    let eig = SymmetricEigen::new(g.clone());
    let lo = eig.eigenvalues.min();
    let hi = eig.eigenvalues.max();
    if !(lo > 0.0) || hi / lo > MAX_CONDITION {
        return Err(Error::DegenerateFrame);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdShapeOperator {
    pub t: f64,
    pub u: Vec<f64>,
    pub h: f64,
    /// Shape operator in the orthonormalized coordinate frame (axial first).
    pub matrix: Vec<Vec<f64>>,
    pub norm: f64,
    pub mean_curvature: f64,
    /// Largest `|B_ab − B_ba|` of the raw second fundamental form.
    pub asymmetry: f64,
    /// `|A(∂_t)|` for the unit axial vector.
    pub axial_image_norm: f64,
}

pub fn fd_shape_operator(c: &ConeImmersion, t: f64, u: &[f64], h: f64) -> Result<FdShapeOperator> {
    c.check_stencil(t, u, h)?;
    let dim = c.n() + 1;
    let tangents = c.fd_tangents(t, u, h);
    let g = gram(&tangents);
    check_conditioning(&g)?;
    let nu = c.unit_normal(t, u, h, None)?;
    let mut dnu = Vec::with_capacity(dim);
    for a in 0..dim {
        let (tp, up) = ConeImmersion::shifted(t, u, a, h);
        let (tm, um) = ConeImmersion::shifted(t, u, a, -h);
        let plus = c.unit_normal(tp, &up, h, Some(&nu))?;
        let minus = c.unit_normal(tm, &um, h, Some(&nu))?;
        dnu.push(
            plus.iter()
                .zip(&minus)
                .map(|(p, m)| (p - m) / (2.0 * h))
                .collect::<Vec<f64>>(),
        );
    }
    let raw = to_matrix(dim, |a, b| -dot(&dnu[a], &tangents[b]));
    let asymmetry = (0..dim)
        .flat_map(|a| (0..dim).map(move |b| (a, b)))
        .map(|(a, b)| (raw[(a, b)] - raw[(b, a)]).abs())
        .fold(0.0, f64::max);
    let b = (&raw + raw.transpose()) * 0.5;
    let chol = g.clone().cholesky().ok_or(Error::DegenerateFrame)?;
    let l_inv = chol.l().try_inverse().ok_or(Error::DegenerateFrame)?;
    let s = &l_inv * b * l_inv.transpose();
    let norm = s.norm();
    let mean_curvature = s.trace();
    let axial_image_norm = s.column(0).norm();
    Ok(FdShapeOperator {
        t,
        u: u.to_vec(),
        h,
        matrix: (0..dim)
            .map(|i| s.row(i).iter().copied().collect())
            .collect(),
        norm,
        mean_curvature,
        asymmetry,
        axial_image_norm,
    })
}

pub fn fd_mean_curvature(c: &ConeImmersion, t: f64, u: &[f64], h: f64) -> Result<f64> {
    fd_shape_operator(c, t, u, h).map(|s| s.mean_curvature)
}

/// `√det` of the FD induced metric of `Φ` over `√det` of the FD base metric;
/// equals `cosⁿt` up to `O(h²)`.
pub fn fd_volume_density(c: &ConeImmersion, t: f64, u: &[f64], h: f64) -> Result<f64> {
    c.check_stencil(t, u, h)?;
    let g = gram(&c.fd_tangents(t, u, h));
    check_conditioning(&g)?;
    let base_tangents: Vec<Vec<f64>> = (0..c.n())
        .map(|i| {
            let mut up = u.to_vec();
            let mut um = u.to_vec();
            up[i] += h;
            um[i] -= h;
            let plus = c.base.point(&up);
            let minus = c.base.point(&um);
            plus.iter()
                .zip(&minus)
                .map(|(p, m)| (p - m) / (2.0 * h))
                .collect()
        })
        .collect();
    let g_base = gram(&base_tangents);
    check_conditioning(&g_base)?;
    Ok((g.determinant() / g_base.determinant()).sqrt())
}

/// Largest `|⟨∂_tΦ, ∂_{u_i}Φ⟩|` with analytic tangents.
pub fn metric_block_defect(c: &ConeImmersion, t: f64, u: &[f64]) -> f64 {
    let tangents = c.analytic_tangents(t, u);
    tangents[1..]
        .iter()
        .map(|v| dot(&tangents[0], v).abs())
        .fold(0.0, f64::max)
}

/// Compares, for `L = φ·g` with `−Δφ = μφ`, the conservative finite-difference
/// Laplacian `(fⁿg')'/fⁿ − μg/f²` (one Richardson step) with the split form
/// `−μg/f² + n(f'/f)g' + g''`. Returns the largest difference over the
/// interior of a uniform grid on `[−ε, 0]`.
pub fn laplacian_splitting_check(
    model: &WarpedModel,
    mu: f64,
    g: &dyn AxialFn,
    eps: f64,
    grid: usize,
) -> Result<f64> {
    model.check_depth(eps)?;
    if grid < 4 {
        return Err(Error::InvalidArgument(format!("grid {grid} too small")));
    }
    let n = model.n() as i32;
    let step = eps / grid as f64;
    let fd = |t: f64, h: f64| {
        let p = |s: f64| model.f(s).powi(n);
        let flux = p(t + 0.5 * h) * (g.value(t + h) - g.value(t))
            - p(t - 0.5 * h) * (g.value(t) - g.value(t - h));
        flux / (h * h) / p(t) - mu * g.value(t) / model.f(t).powi(2)
    };
    let mut worst = 0.0f64;
    for i in 1..grid {
        let t = -eps + i as f64 * step;
        let lhs = crate::numerics::richardson_h2(fd(t, step), fd(t, 0.5 * step), step, 0.5 * step);
        let f = model.f(t);
        let rhs = -mu * g.value(t) / (f * f)
            + model.n() as f64 * model.f_prime(t) / f * g.derivative(t)
            + g.second_derivative(t);
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(Error::NonFiniteCoefficient { t });
        }
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, value: f64, expected: f64, tolerance: f64) -> Self {
        let residual = (value - expected).abs();
        Check {
            name,
            value,
            expected,
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

/// Residual reduction when the step is halved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub name: &'static str,
    pub residual_h: f64,
    pub residual_half_h: f64,
    pub ratio: f64,
    pub passed: bool,
}

impl Convergence {
    fn new(name: &'static str, residual_h: f64, residual_half_h: f64) -> Self {
        let ratio = residual_h / residual_half_h;
        // residuals already at roundoff level cannot show a rate
        let negligible = residual_h < 1e-12;
        Convergence {
            name,
            residual_h,
            residual_half_h,
            ratio,
            passed: negligible || ratio >= MIN_HALVING_RATIO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    pub surface: String,
    pub n: usize,
    pub t: f64,
    pub u: Vec<f64>,
    pub h: f64,
    pub shape_operator: FdShapeOperator,
    pub checks: Vec<Check>,
    pub convergence: Vec<Convergence>,
    pub passed: bool,
}

impl GeometryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&crate::report::rounded_json(
            serde_json::to_value(self).expect("serializable"),
        ))
        .expect("report serializes")
    }
}

/// Runs the shape-operator, mean-curvature, volume and metric checks at
/// `(t, u)` with steps `h` and `h/2`.
pub fn verify_geometry(
    s: &MinimalHypersurface,
    t: f64,
    u: Option<&[f64]>,
    h: f64,
) -> Result<GeometryReport> {
    let cone = ConeImmersion::from_surface(s)?;
    let u = u
        .map(<[f64]>::to_vec)
        .unwrap_or_else(|| cone.default_chart_point());
    let shape = fd_shape_operator(&cone, t, &u, h)?;
    let shape_half = fd_shape_operator(&cone, t, &u, 0.5 * h)?;
    let density = fd_volume_density(&cone, t, &u, h)?;
    let density_half = fd_volume_density(&cone, t, &u, 0.5 * h)?;
    let expected_density = t.cos().powi(s.n as i32);
    let base_norm = s.norm_a2.sqrt();

    let norm_check = Check::new("norm_times_cos", shape.norm * t.cos(), base_norm, NORM_TOL);
    let norm_half = (shape_half.norm * t.cos() - base_norm).abs();
    let density_check = Check::new("volume_density", density, expected_density, VOLUME_TOL);
    let density_half_res = (density_half - expected_density).abs();
    let checks = vec![
        norm_check.clone(),
        Check::new(
            "mean_curvature",
            shape.mean_curvature,
            0.0,
            MEAN_CURVATURE_TOL,
        ),
        Check::new("axial_image", shape.axial_image_norm, 0.0, AXIAL_TOL),
        density_check.clone(),
        Check::new(
            "metric_block",
            metric_block_defect(&cone, t, &u),
            0.0,
            BLOCK_TOL,
        ),
    ];
    let convergence = vec![
        Convergence::new("norm_times_cos", norm_check.residual, norm_half),
        Convergence::new("volume_density", density_check.residual, density_half_res),
    ];
    let passed = checks.iter().all(|c| c.passed) && convergence.iter().all(|c| c.passed);
    Ok(GeometryReport {
        surface: s.name.clone(),
        n: s.n,
        t,
        u,
        h,
        shape_operator: shape,
        checks,
        convergence,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axial::{Cosine, DirichletSine, Polynomial};
    use crate::model::builtin_model;
    use crate::surfaces::parse_surface;
    use std::f64::consts::SQRT_2;

    fn clifford11() -> ConeImmersion {
        ConeImmersion::from_surface(&parse_surface("clifford:1,1").unwrap()).unwrap()
    }

    #[test]
    fn immersion_lies_on_sphere_and_jacobian_matches() {
        for cone in [
            clifford11(),
            ConeImmersion::from_surface(&parse_surface("equator:3").unwrap()).unwrap(),
        ] {
            let u = cone.default_chart_point();
            for t in [-1.0, -0.3, 0.0] {
                let phi = cone.map(t, &u);
                assert!((dot(&phi, &phi) - 1.0).abs() < 1e-14);
                let analytic = cone.analytic_tangents(t, &u);
                let fd = cone.fd_tangents(t, &u, 1e-5);
                for (a, b) in analytic.iter().zip(&fd) {
                    for (x, y) in a.iter().zip(b) {
                        assert!((x - y).abs() < 1e-8);
                    }
                }
                assert!(metric_block_defect(&cone, t, &u) <= BLOCK_TOL);
            }
        }
    }

    #[test]
    fn clifford_cone_shape_operator() {
        let cone = clifford11();
        let u = cone.default_chart_point();
        let s = fd_shape_operator(&cone, 0.0, &u, 1e-3).unwrap();
        assert!((s.norm * s.norm - 2.0).abs() < 1e-4);
        for t in [-0.3, -0.6] {
            let s = fd_shape_operator(&cone, t, &u, 1e-3).unwrap();
            assert!((s.norm * t.cos() - SQRT_2).abs() < 1e-4, "t={t}");
            assert!(s.mean_curvature.abs() < 1e-4);
            assert!(s.axial_image_norm < 1e-4);
            assert!(s.asymmetry < 1e-4);
        }
    }

    #[test]
    fn equator_cone_is_totally_geodesic() {
        let cone = ConeImmersion::from_surface(&parse_surface("equator:2").unwrap()).unwrap();
        let u = cone.default_chart_point();
        let s = fd_shape_operator(&cone, -0.5, &u, 1e-3).unwrap();
        assert!(s.norm <= 1e-5);
        assert!(s.mean_curvature.abs() <= 1e-5);
    }

    #[test]
    fn non_minimal_base_has_mean_curvature() {
        let cone = ConeImmersion::sphere_product(1, 1, 0.5).unwrap();
        let h = fd_mean_curvature(&cone, 0.0, &[0.2, -0.1], 1e-3).unwrap();
        // cot r-type curvatures: (1 − 2r²)/(r√(1−r²)) for r = 1/2
        let expected = (1.0 - 2.0 * 0.25) / (0.5 * 0.75f64.sqrt());
        assert!((h.abs() - expected).abs() < 1e-4, "{h}");
    }

    #[test]
    fn volume_density_matches_cone_weight() {
        let cone = clifford11();
        let u = cone.default_chart_point();
        assert!((fd_volume_density(&cone, 0.0, &u, 1e-3).unwrap() - 1.0).abs() < 1e-5);
        let d = fd_volume_density(&cone, -0.5, &u, 1e-3).unwrap();
        assert!((d - 0.5f64.cos().powi(2)).abs() < 1e-5);
        let eq = ConeImmersion::from_surface(&parse_surface("equator:3").unwrap()).unwrap();
        let d = fd_volume_density(&eq, -1.0, &eq.default_chart_point(), 1e-3).unwrap();
        assert!((d - 1.0f64.cos().powi(3)).abs() < 1e-5);
    }

    #[test]
    fn stencil_errors() {
        let cone = clifford11();
        let u = cone.default_chart_point();
        assert!(matches!(
            fd_shape_operator(&cone, -1.5705, &u, 1e-3),
            Err(Error::StencilOutsideChart { .. })
        ));
        assert!(fd_shape_operator(&cone, 0.0, &u, 0.0).is_err());
        assert!(fd_shape_operator(&cone, 0.0, &[0.1], 1e-3).is_err());
        assert!(ConeImmersion::from_surface(&parse_surface("flat_subtorus:2").unwrap()).is_err());
    }

    #[test]
    fn laplacian_splitting() {
        let eps = 1.0;
        let flat = builtin_model("flat", 3).unwrap();
        let r =
            laplacian_splitting_check(&flat, 0.0, &DirichletSine::new(eps, 1), eps, 512).unwrap();
        assert!(r <= 1e-8, "{r}");
        let sphere2 = builtin_model("sphere", 2).unwrap();
        let r = laplacian_splitting_check(&sphere2, 2.0, &Cosine, 1.2, 512).unwrap();
        assert!(r <= 1e-6, "{r}");
        let sphere3 = builtin_model("sphere", 3).unwrap();
        let r =
            laplacian_splitting_check(&sphere3, 0.0, &Polynomial::bubble(1.2), 1.2, 512).unwrap();
        assert!(r <= 1e-6, "{r}");
    }

    #[test]
    fn report_passes_for_clifford() {
        let s = parse_surface("clifford:1,1").unwrap();
        let r = verify_geometry(&s, -0.6, None, 1e-3).unwrap();
        assert!(r.passed, "{r:#?}");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["checks"].as_array().unwrap().len(), 5);
    }
}
