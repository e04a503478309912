//! The cyclic long-range-dependent covariance model and its spectral density.
//!
//! A model is a list of components `(A_j, κ_j, w_j)` with `Σ A_j = 1`, `w_0 = 0` and
//! distinct `w_j > 0` for `j ≥ 1`. Its covariance is
//!
//! ```text
//! r(x) = Σ_j A_j cos(w_j x) / (1 + x²)^{κ_j / 2}
//! ```
//!
//! and its spectral density is a sum of Bessel-K bumps, singular like
//! `|λ ∓ w_j|^{κ_j - 1}` at every frequency carrying positive weight.

use crate::error::{Error, Result};
use crate::numerics::{Abscissa, SingularityMark};
use crate::special::{bessel_k_unchecked, gamma};
use std::f64::consts::PI;

/// Tolerance on `Σ A_j = 1`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Distance to a singular frequency below which the density refuses to evaluate.
pub const SINGULAR_RADIUS: f64 = 1e-12;

/// One term `A cos(w x) / (1 + x²)^{κ/2}` of the covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityComponent {
    pub weight: f64,
    pub kappa: f64,
    pub omega: f64,
}

impl SingularityComponent {
    pub fn new(weight: f64, kappa: f64, omega: f64) -> Result<Self> {
        let c = SingularityComponent {
            weight,
            kappa,
            omega,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if !(self.weight >= 0.0 && self.weight <= 1.0) {
            return Err(Error::InvalidSpectrum(format!(
                "weight {} outside [0, 1]",
                self.weight
            )));
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::InvalidSpectrum(format!(
                "kappa {} outside (0, 1)",
                self.kappa
            )));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidSpectrum(format!(
                "omega {} must be finite and non-negative",
                self.omega
            )));
        }
        Ok(())
    }
}

/// Whether the zero-frequency component carries weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `A_0 = 0`: only cyclic singularities.
    Cyclic,
    /// `A_0 > 0`: a long-range singularity at the origin as well.
    ZeroFrequency,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Cyclic => "cyclic",
            Regime::ZeroFrequency => "zero-frequency",
        }
    }
}

/// A validated covariance model. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec {
    components: Vec<SingularityComponent>,
}

impl SpectrumSpec {
    /// Validates `components`; index 0 must be the `omega = 0` component.
    pub fn new(components: Vec<SingularityComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidSpectrum("no components".into()));
        }
        for c in &components {
            c.validate()?;
        }
        if components[0].omega != 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "component 0 must have omega = 0, got {}",
                components[0].omega
            )));
        }
        for (j, c) in components.iter().enumerate().skip(1) {
            if c.omega == 0.0 {
                return Err(Error::InvalidSpectrum(format!(
                    "component {j} has omega = 0; only component 0 may"
                )));
            }
            if components[1..j].iter().any(|d| d.omega == c.omega) {
                return Err(Error::InvalidSpectrum(format!(
                    "omega {} appears twice",
                    c.omega
                )));
            }
        }
        let sum: f64 = components.iter().map(|c| c.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidSpectrum(format!(
                "weights must sum to 1 (within {WEIGHT_SUM_TOLERANCE:e}), got {sum}"
            )));
        }
        Ok(SpectrumSpec { components })
    }

    /// Builds a spec from `(weight, kappa, omega)` triples.
    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        let comps = triples
            .iter()
            .map(|&(a, k, w)| SingularityComponent::new(a, k, w))
            .collect::<Result<Vec<_>>>()?;
        SpectrumSpec::new(comps)
    }

    /// `A = (0.20, 0.20, 0.35, 0.25)`, `κ = (0.2, 0.4, 0.6, 0.8)`, `w = (0, 0.8, 1.2, 2.0)`.
    pub fn four_component() -> Self {
        SpectrumSpec::from_triples(&[
            (0.20, 0.2, 0.0),
            (0.20, 0.4, 0.8),
            (0.35, 0.6, 1.2),
            (0.25, 0.8, 2.0),
        ])
        .expect("preset is valid")
    }

    /// The cyclic variant of [`SpectrumSpec::four_component`]: `A_0 = 0`, `A_1 = 0.4`.
    pub fn three_cyclic() -> Self {
        SpectrumSpec::from_triples(&[
            (0.0, 0.2, 0.0),
            (0.40, 0.4, 0.8),
            (0.35, 0.6, 1.2),
            (0.25, 0.8, 2.0),
        ])
        .expect("preset is valid")
    }

    pub fn components(&self) -> &[SingularityComponent] {
        &self.components
    }

    /// Number of components with non-zero frequency.
    pub fn cyclic_count(&self) -> usize {
        self.components.len() - 1
    }

    pub fn zero_weight(&self) -> f64 {
        self.components[0].weight
    }

    pub fn zero_kappa(&self) -> f64 {
        self.components[0].kappa
    }

    pub fn regime(&self) -> Regime {
        if self.zero_weight() > 0.0 {
            Regime::ZeroFrequency
        } else {
            Regime::Cyclic
        }
    }

    /// Fails unless the spectrum is in `expected`.
    pub fn require_regime(&self, expected: Regime) -> Result<()> {
        let actual = self.regime();
        if actual != expected {
            return Err(Error::RegimeMismatch(format!(
                "operation needs the {} regime, but A_0 = {} puts the spectrum in the {} regime",
                expected.name(),
                self.zero_weight(),
                actual.name()
            )));
        }
        Ok(())
    }
}

/// `r(x) = Σ A_j cos(w_j x) / (1 + x²)^{κ_j/2}`.
pub fn covariance_r(spec: &SpectrumSpec, x: f64) -> f64 {
    let base = 1.0 + x * x;
    spec.components
        .iter()
        .map(|c| c.weight * (c.omega * x).cos() * base.powf(-0.5 * c.kappa))
        .sum()
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Domain(format!("kappa {kappa} outside (0, 1)")));
    }
    Ok(())
}

/// `c₁(κ) = 2^{(1-κ)/2} / (√π Γ(κ/2))`.
pub fn c1(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(2f64.powf(0.5 * (1.0 - kappa)) / (PI.sqrt() * gamma(0.5 * kappa)?))
}

/// `c₂(κ) = 1 / (2 Γ(κ) cos(κπ/2))`.
pub fn c2(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(1.0 / (2.0 * gamma(kappa)? * (0.5 * kappa * PI).cos()))
}

/// `1 - θ_κ(u) = (c₁/c₂) K_{(κ-1)/2}(u) u^{(1-κ)/2}`, equal to 1 at `u = 0`.
///
/// Evaluated directly rather than through [`theta_kappa`] so no digits cancel for small
/// `u`.
pub fn one_minus_theta(kappa: f64, u: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("theta argument {u} is negative")));
    }
    if u == 0.0 {
        return Ok(1.0);
    }
    let ratio = c1(kappa)? / c2(kappa)?;
    Ok(ratio * bessel_k_unchecked(0.5 * (kappa - 1.0), u) * u.powf(0.5 * (1.0 - kappa)))
}

/// `θ_κ(u) = 1 - (c₁(κ)/c₂(κ)) K_{(κ-1)/2}(u) u^{(1-κ)/2}`, with `θ_κ(0) = 0`.
pub fn theta_kappa(kappa: f64, u: f64) -> Result<f64> {
    Ok(1.0 - one_minus_theta(kappa, u)?)
}

/// `|c₁ K_{(κ-1)/2}(λ) λ^{(κ-1)/2} - c₂ (1 - θ_κ(λ)) / λ^{1-κ}|` for `λ > 0`.
///
/// The left side is a density term, the right side goes through [`theta_kappa`].
pub fn bessel_theta_identity_residual(kappa: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!(
            "identity needs lambda > 0, got {lambda}"
        )));
    }
    let lhs = c1(kappa)?
        * bessel_k_unchecked(0.5 * (kappa - 1.0), lambda)
        * lambda.powf(0.5 * (kappa - 1.0));
    let rhs = c2(kappa)? * (1.0 - theta_kappa(kappa, lambda)?) / lambda.powf(1.0 - kappa);
    Ok((lhs - rhs).abs())
}

/// One singular frequency of the density with the constant of its power law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub location: f64,
    pub kappa: f64,
    /// Multiplies `K_{(1-κ)/2}(d) d^{(κ-1)/2}` at distance `d` from `location`.
    pub coefficient: f64,
}

/// The spectral density of a [`SpectrumSpec`] with its constants precomputed.
///
/// `f(λ) = Σ_j (c₁(κ_j)/2) A_j [φ_j(|λ + w_j|) + φ_j(|λ - w_j|)]` with
/// `φ_κ(d) = K_{(1-κ)/2}(d) d^{(κ-1)/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    poles: Vec<Pole>,
}

impl SpectralDensity {
    pub fn new(spec: &SpectrumSpec) -> Self {
        let mut poles = Vec::new();
        for (j, c) in spec.components.iter().enumerate() {
            if c.weight == 0.0 {
                continue;
            }
            let k1 = c1(c.kappa).expect("kappa validated");
            if j == 0 {
                poles.push(Pole {
                    location: 0.0,
                    kappa: c.kappa,
                    coefficient: k1 * c.weight,
                });
            } else {
                for location in [-c.omega, c.omega] {
                    poles.push(Pole {
                        location,
                        kappa: c.kappa,
                        coefficient: 0.5 * k1 * c.weight,
                    });
                }
            }
        }
        SpectralDensity { poles }
    }

    /// Singular frequencies, sorted by location.
    pub fn poles(&self) -> Vec<Pole> {
        let mut p = self.poles.clone();
        p.sort_by(|a, b| a.location.total_cmp(&b.location));
        p
    }

    /// `f(λ)`; fails within [`SINGULAR_RADIUS`] of a pole.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        for p in &self.poles {
            if (lambda - p.location).abs() < SINGULAR_RADIUS {
                return Err(Error::SingularPoint {
                    lambda,
                    location: p.location,
                });
            }
        }
        Ok(self.eval_scaled(Abscissa::at(lambda), 1.0))
    }

    /// `f(scale · λ)` where distances to the poles are taken from the abscissa, so
    /// `λ` may sit closer to a pole `p / scale` than its floating-point spacing.
    ///
    /// Marks for integrands built on this must use locations [`SpectralDensity::marks`]
    /// returns for the same `scale`.
    pub fn eval_scaled(&self, lambda: Abscissa, scale: f64) -> f64 {
        self.poles
            .iter()
            .map(|p| {
                let d = scale * lambda.distance_to(p.location / scale).abs();
                p.coefficient * density_kernel(p.kappa, d)
            })
            .sum()
    }

    /// Marks at `p / scale` for every pole, each with exponent `κ - 1`.
    pub fn marks(&self, scale: f64) -> Vec<SingularityMark> {
        self.poles()
            .iter()
            .map(|p| {
                SingularityMark::new(p.location / scale, p.kappa - 1.0).expect("kappa in (0, 1)")
            })
            .collect()
    }

    /// `f(0)` for a cyclic spectrum: `Σ_{j≥1} c₁(κ_j) A_j K_{(κ_j-1)/2}(w_j) w_j^{(κ_j-1)/2}`.
    pub fn value_at_origin(&self) -> Result<f64> {
        self.eval(0.0)
    }
}

/// `φ_κ(d) = K_{(1-κ)/2}(d) d^{(κ-1)/2}`, infinite at `d = 0`.
pub(crate) fn density_kernel(kappa: f64, d: f64) -> f64 {
    if d == 0.0 {
        return f64::INFINITY;
    }
    bessel_k_unchecked(0.5 * (1.0 - kappa), d) * d.powf(0.5 * (kappa - 1.0))
}

/// `f(λ)` for `spec`; see [`SpectralDensity`].
pub fn spectral_density_f(spec: &SpectrumSpec, lambda: f64) -> Result<f64> {
    SpectralDensity::new(spec).eval(lambda)
}

/// `Σ_{j≥1} c₁(κ_j) A_j K_{(κ_j-1)/2}(w_j) w_j^{(κ_j-1)/2}`, the value `f(0)` of a cyclic
/// spectrum evaluated from the cyclic components alone.
pub fn origin_constant(spec: &SpectrumSpec) -> Result<f64> {
    let mut total = 0.0;
    for c in &spec.components[1..] {
        total += c1(c.kappa)? * c.weight * density_kernel(c.kappa, c.omega);
    }
    Ok(total)
}
