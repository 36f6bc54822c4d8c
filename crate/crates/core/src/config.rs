//! TOML documents for custom models and for run settings.
//!
//! A model file:
//!
//! ```toml
//! name = "round"
//! n = 3
//! c = 1
//! k = 1
//! f = "cos(t)"
//! f_prime = "-sin(t)"
//! f_second = "-cos(t)"
//! interval = ["-pi/2", "pi/2"]
//! eps_max = "pi/2"
//! ```
//!
//! Scalars may be numbers or constant expressions; interval ends also accept
//! `"inf"` and `"-inf"`. `eps_max` defaults to `-interval[0]`.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::model::{Interval, WarpedModel};

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Integer(i64),
    Expression(String),
}

impl Scalar {
    pub fn value(&self) -> Result<f64> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Integer(i) => Ok(*i as f64),
            Scalar::Expression(s) => match s.trim() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                src => {
                    let expr = Expr::parse(src)?;
                    if expr.depends_on_t() {
                        return Err(Error::Config(format!("`{src}` must be a constant")));
                    }
                    Ok(expr.eval(0.0))
                }
            },
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub n: usize,
    pub c: Scalar,
    pub k: Scalar,
    pub f: String,
    pub f_prime: String,
    pub f_second: String,
    pub interval: [Scalar; 2],
    pub eps_max: Option<Scalar>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<WarpedModel> {
        let interval = Interval {
            lower: self.interval[0].value()?,
            upper: self.interval[1].value()?,
        };
        let eps_max = match &self.eps_max {
            Some(s) => s.value()?,
            None => -interval.lower,
        };
        WarpedModel::custom(
            &self.name,
            self.n,
            self.c.value()?,
            self.k.value()?,
            &self.f,
            &self.f_prime,
            &self.f_second,
            interval,
            eps_max,
        )
    }
}

pub fn load_model(path: &Path) -> Result<WarpedModel> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ModelFile::parse(&text)?.build()
}

/// True when a `--model` argument names a file rather than a catalog entry.
pub fn looks_like_path(spec: &str) -> bool {
    spec.ends_with(".toml") || spec.contains('/') || spec.contains('\\')
}

/// Builtin name or model file, with the dimension overridden when given.
pub fn resolve_model(spec: &str, n: Option<usize>) -> Result<WarpedModel> {
    if looks_like_path(spec) {
        let model = load_model(Path::new(spec))?;
        match n {
            Some(n) if n != model.n() => model.with_dimension(n),
            _ => Ok(model),
        }
    } else {
        crate::model::builtin_model(spec, n.unwrap_or(2))
    }
}

/// Run settings; every field is optional and command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<String>,
    pub surface: Option<String>,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub num_eigen: Option<usize>,
    pub method: Option<String>,
    pub format: Option<String>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub rq_samples: Option<usize>,
    pub jobs: Option<usize>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub eps_values: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub h: Option<f64>,
    pub tau: Option<f64>,
    pub count: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn check(&self) -> Result<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0) || !x.is_finite() => {
                Err(Error::Config(format!("{name} must be positive")))
            }
            _ => Ok(()),
        };
        positive("eps", self.eps)?;
        positive("tol", self.tol)?;
        positive("h", self.h)?;
        positive("tau", self.tau)?;
        for (name, v) in [
            ("grid", self.grid),
            ("num_eigen", self.num_eigen),
            ("jobs", self.jobs),
            ("count", self.count),
        ] {
            if v == Some(0) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if let Some(values) = &self.eps_values {
            for &e in values {
                positive("eps_values", Some(e))?;
            }
        }
        Ok(())
    }
}
