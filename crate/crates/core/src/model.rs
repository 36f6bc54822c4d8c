//! Constant-curvature warped products `I ×_f F^{n+1}` and the cone density.
//!
//! A model is admissible when `f(0) = 1`, `f > 0` on the interval, and the
//! warping function is compatible with constant ambient curvature `c` over a
//! fiber of constant curvature `k`:
//!
//! ```text
//! f''/f = -c = ((f')² - k)/f²
//! ```

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// Distance kept from a singular endpoint of the interval (where `f → 0`).
pub const SINGULAR_CLAMP: f64 = 1e-6;
pub const DEFAULT_MODEL_TOL: f64 = 1e-8;
pub const DEFAULT_VALIDATION_GRID: usize = 201;
/// Validation span used when the interval is unbounded below.
pub const UNBOUNDED_VALIDATION_SPAN: f64 = 10.0;

pub const BUILTIN_MODELS: [&str; 5] = [
    "sphere",
    "euclidean",
    "hyperbolic_cosh",
    "hyperbolic_exp",
    "flat",
];

/// Open interval `(lower, upper)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn contains(&self, t: f64) -> bool {
        self.lower < t && t < self.upper
    }
}

#[derive(Debug, Clone)]
pub enum Warping {
    /// `cos t`
    Cosine,
    /// `1 + t`
    Affine,
    /// `cosh t`
    HyperbolicCosine,
    /// `e^t`
    Exponential,
    /// `1`
    Constant,
    Custom(CustomWarping),
}

#[derive(Debug, Clone)]
pub struct CustomWarping {
    pub f: Expr,
    pub f_prime: Expr,
    pub f_second: Expr,
}

impl Warping {
    /// `(f, f', f'')` at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Warping::Cosine => {
                let (s, c) = t.sin_cos();
                (c, -s, -c)
            }
            Warping::Affine => (1.0 + t, 1.0, 0.0),
            Warping::HyperbolicCosine => (t.cosh(), t.sinh(), t.cosh()),
            Warping::Exponential => {
                let e = t.exp();
                (e, e, e)
            }
            Warping::Constant => (1.0, 0.0, 0.0),
            Warping::Custom(w) => (w.f.eval(t), w.f_prime.eval(t), w.f_second.eval(t)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Warping::Cosine => "cos(t)".into(),
            Warping::Affine => "1 + t".into(),
            Warping::HyperbolicCosine => "cosh(t)".into(),
            Warping::Exponential => "exp(t)".into(),
            Warping::Constant => "1".into(),
            Warping::Custom(w) => w.f.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WarpedModel {
    name: String,
    n: usize,
    c: f64,
    k: f64,
    warping: Warping,
    interval: Interval,
    eps_max: f64,
}

impl fmt::Display for WarpedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (n = {}, c = {}, k = {}, f = {})",
            self.name,
            self.n,
            self.c,
            self.k,
            self.warping.describe()
        )
    }
}

impl WarpedModel {
    /// Catalog entry by name; see [`BUILTIN_MODELS`].
    pub fn builtin(name: &str, n: usize) -> Result<Self> {
        let (warping, c, k, interval, eps_max) = match name {
            "sphere" => (
                Warping::Cosine,
                1.0,
                1.0,
                Interval {
                    lower: -FRAC_PI_2,
                    upper: FRAC_PI_2,
                },
                FRAC_PI_2,
            ),
            "euclidean" => (
                Warping::Affine,
                0.0,
                1.0,
                Interval {
                    lower: -1.0,
                    upper: f64::INFINITY,
                },
                1.0,
            ),
            "hyperbolic_cosh" => (
                Warping::HyperbolicCosine,
                -1.0,
                -1.0,
                Interval::REAL_LINE,
                f64::INFINITY,
            ),
            "hyperbolic_exp" => (
                Warping::Exponential,
                -1.0,
                0.0,
                Interval::REAL_LINE,
                f64::INFINITY,
            ),
            "flat" => (
                Warping::Constant,
                0.0,
                0.0,
                Interval::REAL_LINE,
                f64::INFINITY,
            ),
            other => return Err(Error::UnknownModel(other.to_string())),
        };
        Self::checked(name.to_string(), n, c, k, warping, interval, eps_max)
    }

    /// A user model; `f`, `f'`, `f''` are expressions in `t`.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        name: &str,
        n: usize,
        c: f64,
        k: f64,
        f: &str,
        f_prime: &str,
        f_second: &str,
        interval: Interval,
        eps_max: f64,
    ) -> Result<Self> {
        let warping = Warping::Custom(CustomWarping {
            f: Expr::parse(f)?,
            f_prime: Expr::parse(f_prime)?,
            f_second: Expr::parse(f_second)?,
        });
        Self::checked(name.to_string(), n, c, k, warping, interval, eps_max)
    }

    fn checked(
        name: String,
        n: usize,
        c: f64,
        k: f64,
        warping: Warping,
        interval: Interval,
        eps_max: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "dimension n = {n} must be at least 2"
            )));
        }
        let reject = |reason: String| Error::ModelRejected {
            name: name.clone(),
            reason,
        };
        if !c.is_finite() || !k.is_finite() {
            return Err(reject("curvatures must be finite".into()));
        }
        if !interval.contains(0.0) {
            return Err(reject(format!(
                "interval ({}, {}) does not contain 0",
                interval.lower, interval.upper
            )));
        }
        if eps_max.is_nan() || eps_max <= 0.0 {
            return Err(reject(format!(
                "degenerate truncation range eps_max = {eps_max}"
            )));
        }
        if eps_max > -interval.lower {
            return Err(reject(format!(
                "eps_max = {eps_max} reaches beyond the interval end {}",
                interval.lower
            )));
        }
        let (f0, _, _) = warping.eval(0.0);
        if (f0 - 1.0).abs() > 1e-12 {
            return Err(reject(format!("f(0) = {f0}, expected 1")));
        }
        Ok(WarpedModel {
            name,
            n,
            c,
            k,
            warping,
            interval,
            eps_max,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient sectional curvature.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Fiber sectional curvature.
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn warping(&self) -> &Warping {
        &self.warping
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }

    pub fn f(&self, t: f64) -> f64 {
        self.warping.eval(t).0
    }

    pub fn f_prime(&self, t: f64) -> f64 {
        self.warping.eval(t).1
    }

    pub fn f_second(&self, t: f64) -> f64 {
        self.warping.eval(t).2
    }

    /// Same ambient, different hypersurface dimension.
    pub fn with_dimension(&self, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "dimension n = {n} must be at least 2"
            )));
        }
        Ok(WarpedModel { n, ..self.clone() })
    }

    /// Largest admissible truncation depth, `eps_max` less the singular clamp.
    pub fn max_depth(&self) -> f64 {
        if self.eps_max.is_finite() {
            self.eps_max - SINGULAR_CLAMP
        } else {
            f64::INFINITY
        }
    }

    pub fn check_depth(&self, eps: f64) -> Result<()> {
        if !(eps.is_finite() && eps > 0.0 && eps <= self.max_depth()) {
            return Err(Error::InvalidArgument(format!(
                "truncation depth eps = {eps} outside (0, {}] for model `{}`",
                self.max_depth(),
                self.name
            )));
        }
        Ok(())
    }

    /// Checks both curvature identities on a uniform grid over
    /// `[-0.9·eps_max, 0]`.
    pub fn validate(&self, grid_size: usize, tol: f64) -> Result<ValidationReport> {
        if grid_size < 3 {
            return Err(Error::InvalidArgument(format!(
                "validation grid of {grid_size} points, need at least 3"
            )));
        }
        let span = if self.eps_max.is_finite() {
            self.eps_max
        } else {
            UNBOUNDED_VALIDATION_SPAN
        };
        let lower = -0.9 * span;
        let mut max_f = 0.0f64;
        let mut max_k = 0.0f64;
        for i in 0..grid_size {
            let t = lower + (0.0 - lower) * i as f64 / (grid_size - 1) as f64;
            let (f, fp, fpp) = self.warping.eval(t);
            if !(f > 0.0) || !f.is_finite() {
                return Err(Error::ModelRejected {
                    name: self.name.clone(),
                    reason: format!("f({t}) = {f} is not positive"),
                });
            }
            let r_f = (fpp / f + self.c).abs();
            let r_k = ((fp * fp - self.k) / (f * f) + self.c).abs();
            if !r_f.is_finite() || !r_k.is_finite() {
                return Err(Error::NonFiniteCoefficient { t });
            }
            max_f = max_f.max(r_f);
            max_k = max_k.max(r_k);
        }
        Ok(ValidationReport {
            model: self.name.clone(),
            grid_size,
            lower,
            tol,
            max_second_derivative_residual: max_f,
            max_first_derivative_residual: max_k,
            passed: max_f <= tol && max_k <= tol,
        })
    }

    pub fn density(&self) -> ConeDensity {
        ConeDensity {
            model: self.clone(),
        }
    }
}

pub fn builtin_model(name: &str, n: usize) -> Result<WarpedModel> {
    WarpedModel::builtin(name, n)
}

pub fn validate_model(model: &WarpedModel, grid_size: usize, tol: f64) -> Result<ValidationReport> {
    model.validate(grid_size, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub grid_size: usize,
    pub lower: f64,
    pub tol: f64,
    /// max |f''/f + c|
    pub max_second_derivative_residual: f64,
    /// max |((f')² − k)/f² + c|
    pub max_first_derivative_residual: f64,
    pub passed: bool,
}

/// The cone density `λ(t) = f(t)`.
#[derive(Debug, Clone)]
pub struct ConeDensity {
    model: WarpedModel,
}

impl ConeDensity {
    pub fn model(&self) -> &WarpedModel {
        &self.model
    }

    pub fn lambda(&self, t: f64) -> f64 {
        self.model.f(t)
    }

    pub fn lambda_prime(&self, t: f64) -> f64 {
        self.model.f_prime(t)
    }

    /// `(λ, λ')` in one evaluation.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let (f, fp, _) = self.model.warping.eval(t);
        (f, fp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_matches_curvature_at_origin() {
        let m = builtin_model("sphere", 3).unwrap();
        assert_eq!(m.f(0.0), 1.0);
        assert_eq!(m.f_second(0.0) / m.f(0.0), -1.0);
        assert_eq!(m.c(), 1.0);
        assert_eq!(m.eps_max(), PI / 2.0);
    }

    #[test]
    fn flat_and_euclidean_residuals_vanish() {
        let flat = builtin_model("flat", 2).unwrap();
        let (f, fp, fpp) = flat.warping().eval(-0.3);
        assert_eq!(fpp / f, 0.0);
        assert_eq!((fp * fp - flat.k()) / (f * f), 0.0);

        let euc = builtin_model("euclidean", 5).unwrap();
        let (f, fp, _) = euc.warping().eval(-0.5);
        assert_eq!((fp * fp - euc.k()) / (f * f), -euc.c());
    }

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_MODELS {
            for n in [2, 4, 9] {
                let m = builtin_model(name, n).unwrap();
                let r = m.validate(101, 1e-10).unwrap();
                assert!(r.passed, "{name}: {r:?}");
                assert!(r.max_first_derivative_residual <= 1e-10);
                assert!(r.max_second_derivative_residual <= 1e-10);
            }
        }
        let r = builtin_model("sphere", 2)
            .unwrap()
            .validate(101, 1e-10)
            .unwrap();
        assert!(
            r.max_first_derivative_residual <= 1e-12 && r.max_second_derivative_residual <= 1e-12
        );
    }

    #[test]
    fn wrong_fiber_curvature_fails_validation() {
        let m = WarpedModel::custom(
            "affine_k0",
            3,
            0.0,
            0.0,
            "1 + t",
            "1",
            "0",
            Interval {
                lower: -1.0,
                upper: f64::INFINITY,
            },
            1.0,
        )
        .unwrap();
        let r = m.validate(101, 1e-10).unwrap();
        assert!(!r.passed);
        // the second identity residual is 1/(1+t)², largest at the grid's left end t = -0.9
        let oracle = 1.0 / (1.0f64 - 0.9).powi(2);
        assert!((r.max_first_derivative_residual - oracle).abs() < 1e-9 * oracle);
        assert_eq!(r.max_second_derivative_residual, 0.0);
    }

    #[test]
    fn nonpositive_warping_is_rejected() {
        let m = WarpedModel::custom(
            "bad",
            2,
            0.0,
            0.0,
            "1 + 2*t",
            "2",
            "0",
            Interval::REAL_LINE,
            1.0,
        )
        .unwrap();
        assert!(matches!(
            m.validate(11, 1e-8),
            Err(Error::ModelRejected { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            builtin_model("torus", 3),
            Err(Error::UnknownModel(_))
        ));
        assert!(matches!(
            builtin_model("sphere", 1),
            Err(Error::InvalidArgument(_))
        ));
        let no_zero = Interval {
            lower: 0.5,
            upper: 2.0,
        };
        assert!(WarpedModel::custom("x", 2, 0.0, 0.0, "1", "0", "0", no_zero, 0.1).is_err());
        assert!(
            WarpedModel::custom("x", 2, 0.0, 0.0, "1", "0", "0", Interval::REAL_LINE, 0.0).is_err()
        );
        assert!(
            WarpedModel::custom("x", 2, 0.0, 0.0, "2", "0", "0", Interval::REAL_LINE, 1.0).is_err()
        );
        let short = Interval {
            lower: -0.5,
            upper: 1.0,
        };
        assert!(WarpedModel::custom("x", 2, 0.0, 0.0, "1", "0", "0", short, 0.6).is_err());
    }

    #[test]
    fn density_is_the_warping_function() {
        let sphere = builtin_model("sphere", 2).unwrap().density();
        assert!((sphere.lambda(-PI / 4.0) - 2f64.sqrt() / 2.0).abs() < 1e-15);
        let flat = builtin_model("flat", 2).unwrap().density();
        assert_eq!(flat.eval(-0.7), (1.0, 0.0));
        let euc = builtin_model("euclidean", 3).unwrap().density();
        assert_eq!(euc.eval(-0.5), (0.5, 1.0));
        for name in BUILTIN_MODELS {
            assert_eq!(builtin_model(name, 3).unwrap().density().lambda(0.0), 1.0);
        }
    }

    #[test]
    fn depth_clamp() {
        let m = builtin_model("sphere", 2).unwrap();
        assert!(m.check_depth(PI / 2.0 - 1e-6).is_ok());
        assert!(m.check_depth(PI / 2.0 - 1e-7).is_err());
        assert!(m.check_depth(0.0).is_err());
        assert!(builtin_model("flat", 2).unwrap().check_depth(100.0).is_ok());
    }
}
