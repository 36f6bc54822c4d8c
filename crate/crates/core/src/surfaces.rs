//! Catalog of closed minimal hypersurfaces with constant `‖A‖²` and
//! closed-form Laplace spectra, and the spectrum of `L₁ = −Δ − ‖A‖²`.

use serde::Serialize;

use crate::error::{Error, Result};

pub const SURFACE_FAMILIES: [&str; 3] = ["equator", "clifford", "flat_subtorus"];
/// Largest spherical-harmonic degree enumerated per Clifford factor.
pub const CLIFFORD_DEGREE_LIMIT: usize = 50;
pub const MAX_SPECTRUM_COUNT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum SurfaceKind {
    /// Totally geodesic `Sⁿ ⊂ Sⁿ⁺¹`.
    Equator,
    /// `Sᵖ(√(p/n)) × S^q(√(q/n)) ⊂ Sⁿ⁺¹`.
    Clifford { p: usize, q: usize },
    /// Totally geodesic square torus `Tⁿ = ℝⁿ/(2πℤ)ⁿ ⊂ Tⁿ⁺¹`.
    FlatSubtorus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalHypersurface {
    pub name: String,
    pub kind: SurfaceKind,
    pub n: usize,
    pub fiber_k: f64,
    /// `‖A‖²`, constant for every catalog entry.
    pub norm_a2: f64,
    pub totally_geodesic: bool,
}

/// Eigenvalue of `−Δ` with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceLevel {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    ExactConstantA,
    CatalogFormula,
    UpperBoundOnly,
}

impl SpectrumSource {
    pub fn tag(self) -> &'static str {
        match self {
            SpectrumSource::ExactConstantA | SpectrumSource::CatalogFormula => "exact",
            SpectrumSource::UpperBoundOnly => "bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypersurfaceSpectrum {
    pub surface: String,
    pub n: usize,
    /// Repeated according to multiplicity, ascending.
    pub eigenvalues: Vec<f64>,
    pub source: SpectrumSource,
}

impl HypersurfaceSpectrum {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `{surface, n, eigenvalues}`
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "surface": self.surface,
            "n": self.n,
            "eigenvalues": self.eigenvalues.iter().map(|&v| crate::report::round_sig(v)).collect::<Vec<_>>(),
        })
        .to_string()
    }
}

pub fn catalog_surface(name: &str, params: &[usize]) -> Result<MinimalHypersurface> {
    let bad = |msg: String| Error::InvalidArgument(msg);
    match name {
        "equator" => {
            let [n] = params else {
                return Err(bad("equator takes one parameter n".into()));
            };
            if *n < 2 {
                return Err(bad(format!("equator dimension {n} must be at least 2")));
            }
            Ok(MinimalHypersurface {
                name: format!("equator:{n}"),
                kind: SurfaceKind::Equator,
                n: *n,
                fiber_k: 1.0,
                norm_a2: 0.0,
                totally_geodesic: true,
            })
        }
        "clifford" => {
            let [p, q] = params else {
                return Err(bad("clifford takes two parameters p,q".into()));
            };
            if *p < 1 || *q < 1 {
                return Err(bad(format!(
                    "clifford factors p = {p}, q = {q} must be at least 1"
                )));
            }
            let n = p + q;
            Ok(MinimalHypersurface {
                name: format!("clifford:{p},{q}"),
                kind: SurfaceKind::Clifford { p: *p, q: *q },
                n,
                fiber_k: 1.0,
                norm_a2: n as f64,
                totally_geodesic: false,
            })
        }
        "flat_subtorus" => {
            let [n] = params else {
                return Err(bad("flat_subtorus takes one parameter n".into()));
            };
            if *n < 2 {
                return Err(bad(format!(
                    "flat_subtorus dimension {n} must be at least 2"
                )));
            }
            Ok(MinimalHypersurface {
                name: format!("flat_subtorus:{n}"),
                kind: SurfaceKind::FlatSubtorus,
                n: *n,
                fiber_k: 0.0,
                norm_a2: 0.0,
                totally_geodesic: true,
            })
        }
        other => Err(Error::UnknownSurface(other.to_string())),
    }
}

/// Parses `family:params`, e.g. `clifford:1,1`, `equator:5`, `flat_subtorus:3`.
pub fn parse_surface(spec: &str) -> Result<MinimalHypersurface> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    if !SURFACE_FAMILIES.contains(&name) {
        return Err(Error::UnknownSurface(name.to_string()));
    }
    let params = rest
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| {
                Error::InvalidArgument(format!("bad surface parameter `{s}` in `{spec}`"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    catalog_surface(name, &params)
}

/// The Clifford split used by sweeps: `clifford(⌈n/2⌉, ⌊n/2⌋)`.
pub fn balanced_clifford(n: usize) -> Result<MinimalHypersurface> {
    catalog_surface("clifford", &[n.div_ceil(2), n / 2])
}

/// Surface of the same family with dimension `n`.
pub fn family_member(family: &str, n: usize) -> Result<MinimalHypersurface> {
    match family {
        "clifford" => balanced_clifford(n),
        "equator" | "flat_subtorus" => catalog_surface(family, &[n]),
        other => parse_surface(other).and_then(|s| {
            if s.n == n {
                Ok(s)
            } else {
                Err(Error::InvalidArgument(format!(
                    "surface {} has dimension {}, not {n}",
                    s.name, s.n
                )))
            }
        }),
    }
}

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < k || n < 0 {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Dimension of degree-`a` spherical harmonics on `Sᵖ`.
fn harmonic_multiplicity(p: usize, a: usize) -> usize {
    let (p, a) = (p as i64, a as i64);
    (binomial(p + a, a) - binomial(p + a - 2, a - 2)).round() as usize
}

fn expand(levels: &[LaplaceLevel], count: usize) -> Vec<f64> {
    levels
        .iter()
        .flat_map(|l| std::iter::repeat(l.value).take(l.multiplicity))
        .take(count)
        .collect()
}

impl MinimalHypersurface {
    /// Distinct eigenvalues of `−Δ` below an enumeration cutoff, enough to
    /// supply at least `count` eigenvalues with multiplicity.
    pub fn laplace_levels(&self, count: usize) -> Result<Vec<LaplaceLevel>> {
        if count > MAX_SPECTRUM_COUNT {
            return Err(Error::InvalidArgument(format!(
                "at most {MAX_SPECTRUM_COUNT} eigenvalues are available, {count} requested"
            )));
        }
        let levels = match self.kind {
            SurfaceKind::Equator => {
                let n = self.n;
                let mut levels = Vec::new();
                let mut total = 0;
                let mut a = 0;
                while total < count.max(1) {
                    let m = harmonic_multiplicity(n, a);
                    levels.push(LaplaceLevel {
                        value: (a * (a + n - 1)) as f64,
                        multiplicity: m,
                    });
                    total += m;
                    a += 1;
                }
                levels
            }
            SurfaceKind::Clifford { p, q } => clifford_levels(p, q),
            SurfaceKind::FlatSubtorus => torus_levels(self.n, count.max(1)),
        };
        let available = levels
            .iter()
            .fold(0usize, |a, l| a.saturating_add(l.multiplicity));
        assert!(
            available >= count,
            "enumeration bound too small for {count} eigenvalues"
        );
        Ok(levels)
    }

    /// First `count` eigenvalues of `−Δ`, with multiplicity.
    pub fn laplace_spectrum(&self, count: usize) -> Result<Vec<f64>> {
        Ok(expand(&self.laplace_levels(count)?, count))
    }
}

fn clifford_levels(p: usize, q: usize) -> Vec<LaplaceLevel> {
    let n = (p + q) as f64;
    let factor = |dim: usize, a: usize| (a * (a + dim - 1)) as f64 / (dim as f64 / n);
    // every eigenvalue below the first omitted degree is complete
    let cutoff = factor(p, CLIFFORD_DEGREE_LIMIT + 1).min(factor(q, CLIFFORD_DEGREE_LIMIT + 1));
    let mut raw: Vec<(f64, usize)> = Vec::new();
    for a in 0..=CLIFFORD_DEGREE_LIMIT {
        for b in 0..=CLIFFORD_DEGREE_LIMIT {
            let value = factor(p, a) + factor(q, b);
            if value < cutoff {
                let m = harmonic_multiplicity(p, a).saturating_mul(harmonic_multiplicity(q, b));
                raw.push((value, m));
            }
        }
    }
    merge_levels(raw)
}

fn merge_levels(mut raw: Vec<(f64, usize)>) -> Vec<LaplaceLevel> {
    raw.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut levels: Vec<LaplaceLevel> = Vec::new();
    for (value, m) in raw {
        match levels.last_mut() {
            Some(last) if (last.value - value).abs() <= 1e-9 * value.abs().max(1.0) => {
                last.multiplicity = last.multiplicity.saturating_add(m);
            }
            _ => levels.push(LaplaceLevel {
                value,
                multiplicity: m,
            }),
        }
    }
    levels
}

/// Levels `|m|²` of the square torus, with multiplicity the number of
/// lattice points on the sphere of that radius.
fn torus_levels(n: usize, count: usize) -> Vec<LaplaceLevel> {
    let mut radius2 = 1usize;
    loop {
        // representation counts r_n(k) for k ≤ radius2 by convolution over coordinates
        let mut reps = vec![0usize; radius2 + 1];
        reps[0] = 1;
        for _ in 0..n {
            let mut next = vec![0usize; radius2 + 1];
            for (k, &r) in reps.iter().enumerate() {
                if r == 0 {
                    continue;
                }
                let mut j = 0usize;
                while k + j * j <= radius2 {
                    let ways = if j == 0 { 1 } else { 2 };
                    next[k + j * j] = next[k + j * j].saturating_add(r.saturating_mul(ways));
                    j += 1;
                }
            }
            reps = next;
        }
        let total: usize = reps.iter().fold(0usize, |a, &r| a.saturating_add(r));
        if total >= count {
            return reps
                .into_iter()
                .enumerate()
                .filter(|&(_, r)| r > 0)
                .map(|(k, r)| LaplaceLevel {
                    value: k as f64,
                    multiplicity: r,
                })
                .collect();
        }
        radius2 *= 2;
    }
}

/// Eigenvalues `μᵢ − ‖A‖²` of `L₁`, ascending.
pub fn l1_spectrum(s: &MinimalHypersurface, count: usize) -> Result<HypersurfaceSpectrum> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let eigenvalues = s
        .laplace_spectrum(count)?
        .into_iter()
        .map(|mu| mu - s.norm_a2)
        .collect();
    Ok(HypersurfaceSpectrum {
        surface: s.name.clone(),
        n: s.n,
        eigenvalues,
        source: if s.totally_geodesic {
            SpectrumSource::CatalogFormula
        } else {
            SpectrumSource::ExactConstantA
        },
    })
}

/// Upper estimate `λ₁ ≤ −(n+τ)∫‖A‖² / ∫(‖A‖²+τ)` from the test function
/// `(‖A‖²+τ)^{1/2}`. Volume is normalized to 1.
pub fn simons_lambda1_bound(s: &MinimalHypersurface, tau: f64) -> Result<f64> {
    if s.fiber_k != 1.0 {
        return Err(Error::Unsupported(format!(
            "the estimate is only available for spherical fibers, {} has k = {}",
            s.name, s.fiber_k
        )));
    }
    if s.totally_geodesic {
        return Err(Error::InvalidArgument(format!(
            "{} is totally geodesic; the estimate is vacuous",
            s.name
        )));
    }
    simons_bound_from_integrals(s.n, s.norm_a2, 1.0, tau)
}

/// The same estimate in terms of `∫‖A‖²` and the volume `V`.
pub fn simons_bound_from_integrals(
    n: usize,
    integral_a2: f64,
    volume: f64,
    tau: f64,
) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tau = {tau} must be positive"
        )));
    }
    if !(integral_a2 > 0.0) || !(volume > 0.0) {
        return Err(Error::InvalidArgument("integrals must be positive".into()));
    }
    Ok(-(n as f64 + tau) * integral_a2 / (integral_a2 + tau * volume))
}

/// Rayleigh quotient of `g = Σ aᵢ φᵢ` where `φᵢ` is the `i`-th
/// L²-normalized eigenfunction of `−Δ` (ordered with multiplicity).
pub fn rayleigh_quotient_surface(s: &MinimalHypersurface, coefficients: &[f64]) -> Result<f64> {
    let norm2: f64 = coefficients.iter().map(|a| a * a).sum();
    if norm2 == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let mu = s.laplace_spectrum(coefficients.len())?;
    let energy: f64 = coefficients.iter().zip(&mu).map(|(a, m)| a * a * m).sum();
    Ok(energy / norm2 - s.norm_a2)
}
