//! Closed-form functions of the axial variable `t`, used as test functions
//! in Rayleigh quotients and as axial factors of separable variations.

use std::f64::consts::PI;

pub trait AxialFn: Send + Sync {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
    fn second_derivative(&self, t: f64) -> f64;
}

/// `amplitude · sin(mode·π·t/ε)`, vanishing at `-ε` and `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletSine {
    pub eps: f64,
    pub mode: u32,
    pub amplitude: f64,
}

impl DirichletSine {
    pub fn new(eps: f64, mode: u32) -> Self {
        DirichletSine {
            eps,
            mode,
            amplitude: 1.0,
        }
    }

    /// Unit norm in `L²[-ε, 0]`.
    pub fn normalized(eps: f64, mode: u32) -> Self {
        DirichletSine {
            eps,
            mode,
            amplitude: (2.0 / eps).sqrt(),
        }
    }

    fn freq(&self) -> f64 {
        self.mode as f64 * PI / self.eps
    }
}

impl AxialFn for DirichletSine {
    fn value(&self, t: f64) -> f64 {
        self.amplitude * (self.freq() * t).sin()
    }

    fn derivative(&self, t: f64) -> f64 {
        self.amplitude * self.freq() * (self.freq() * t).cos()
    }

    fn second_derivative(&self, t: f64) -> f64 {
        -self.amplitude * self.freq().powi(2) * (self.freq() * t).sin()
    }
}

/// Polynomial with coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    /// `t (t + ε)`
    pub fn bubble(eps: f64) -> Self {
        Polynomial::new(vec![0.0, eps, 1.0])
    }

    fn horner(coeffs: &[f64], t: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    fn derived(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect()
    }
}

impl AxialFn for Polynomial {
    fn value(&self, t: f64) -> f64 {
        Self::horner(&self.coeffs, t)
    }

    fn derivative(&self, t: f64) -> f64 {
        Self::horner(&self.derived(), t)
    }

    fn second_derivative(&self, t: f64) -> f64 {
        let d = Polynomial::new(self.derived());
        Self::horner(&d.derived(), t)
    }
}

/// `P(t) · sin(mode·π·t/ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySine {
    pub poly: Polynomial,
    pub sine: DirichletSine,
}

impl AxialFn for PolySine {
    fn value(&self, t: f64) -> f64 {
        self.poly.value(t) * self.sine.value(t)
    }

    fn derivative(&self, t: f64) -> f64 {
        self.poly.derivative(t) * self.sine.value(t) + self.poly.value(t) * self.sine.derivative(t)
    }

    fn second_derivative(&self, t: f64) -> f64 {
        self.poly.second_derivative(t) * self.sine.value(t)
            + 2.0 * self.poly.derivative(t) * self.sine.derivative(t)
            + self.poly.value(t) * self.sine.second_derivative(t)
    }
}

/// `cos t`; not a Dirichlet function, used for the Laplacian splitting check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cosine;

impl AxialFn for Cosine {
    fn value(&self, t: f64) -> f64 {
        t.cos()
    }

    fn derivative(&self, t: f64) -> f64 {
        -t.sin()
    }

    fn second_derivative(&self, t: f64) -> f64 {
        -t.cos()
    }
}

/// Linear combination `Σ aᵢ gᵢ(t)`.
pub struct Combination {
    pub terms: Vec<(f64, Box<dyn AxialFn>)>,
}

impl AxialFn for Combination {
    fn value(&self, t: f64) -> f64 {
        self.terms.iter().map(|(a, g)| a * g.value(t)).sum()
    }

    fn derivative(&self, t: f64) -> f64 {
        self.terms.iter().map(|(a, g)| a * g.derivative(t)).sum()
    }

    fn second_derivative(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(a, g)| a * g.second_derivative(t))
            .sum()
    }
}
