//! Spectral variance densities `|a(λ)|²` of the simulated fields.

use crate::numerics::{Abscissa, SingularityMark};
use crate::spectral::{c2, origin_constant, Regime, SpectralDensity, SpectrumSpec};
use crate::Result;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Base {
    /// `f(scale · λ)`.
    Density {
        density: SpectralDensity,
        scale: f64,
    },
    /// `1`.
    Flat,
    /// `|λ|^{κ - 1}`.
    PowerAtOrigin { kappa: f64 },
}

/// `prefactor · base(λ) · (e^{-λ²/2} if gaussian)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SpectralWeight {
    pub base: Base,
    pub prefactor: f64,
    pub gaussian: bool,
}

/// Normalization exponent `e` in `ε^{-e}`: `1/4` without, `κ₀/4` with a zero-frequency pole.
pub(crate) fn normalization_exponent(spec: &SpectrumSpec) -> f64 {
    match spec.regime() {
        Regime::Cyclic => 0.25,
        Regime::ZeroFrequency => 0.25 * spec.zero_kappa(),
    }
}

/// The constant that replaces `f` in the limit: `f(0)` or `A₀ c₂(κ₀)`.
pub(crate) fn limit_constant(spec: &SpectrumSpec) -> Result<f64> {
    match spec.regime() {
        Regime::Cyclic => origin_constant(spec),
        Regime::ZeroFrequency => Ok(spec.zero_weight() * c2(spec.zero_kappa())?),
    }
}

impl SpectralWeight {
    /// `f(λ)`.
    pub fn solution(spec: &SpectrumSpec) -> Self {
        SpectralWeight {
            base: Base::Density {
                density: SpectralDensity::new(spec),
                scale: 1.0,
            },
            prefactor: 1.0,
            gaussian: false,
        }
    }

    /// `ε^{1/2 - 2e} f(λ√ε)`.
    pub fn rescaled(spec: &SpectrumSpec, eps: f64) -> Self {
        let e = normalization_exponent(spec);
        SpectralWeight {
            base: Base::Density {
                density: SpectralDensity::new(spec),
                scale: eps.sqrt(),
            },
            prefactor: eps.powf(0.5 - 2.0 * e),
            gaussian: false,
        }
    }

    /// The limit of [`SpectralWeight::rescaled`] as `ε → 0`.
    pub fn limit(spec: &SpectrumSpec) -> Result<Self> {
        let base = match spec.regime() {
            Regime::Cyclic => Base::Flat,
            Regime::ZeroFrequency => Base::PowerAtOrigin {
                kappa: spec.zero_kappa(),
            },
        };
        Ok(SpectralWeight {
            base,
            prefactor: limit_constant(spec)?,
            gaussian: false,
        })
    }

    /// Adds the Gaussian averaging factor `e^{-λ²/2} / (4π)`.
    pub fn smoothed(mut self) -> Self {
        self.prefactor /= 4.0 * PI;
        self.gaussian = true;
        self
    }

    pub fn eval(&self, x: Abscissa) -> f64 {
        let base = match &self.base {
            Base::Density { density, scale } => density.eval_scaled(x, *scale),
            Base::Flat => 1.0,
            Base::PowerAtOrigin { kappa } => x.distance_to(0.0).abs().powf(kappa - 1.0),
        };
        let damping = if self.gaussian {
            let v = x.value();
            (-0.5 * v * v).exp()
        } else {
            1.0
        };
        self.prefactor * base * damping
    }

    pub fn marks(&self) -> Vec<SingularityMark> {
        match &self.base {
            Base::Density { density, scale } => density.marks(*scale),
            Base::Flat => Vec::new(),
            Base::PowerAtOrigin { kappa } => {
                vec![SingularityMark::new(0.0, kappa - 1.0).expect("kappa in (0, 1)")]
            }
        }
    }

    /// Whether `|a(λ)|²` decays on its own, without the Gaussian factor.
    pub fn decays(&self) -> bool {
        self.gaussian || matches!(self.base, Base::Density { .. })
    }

    /// A length beyond which `|a(λ)|²` is negligible next to its mass near the origin.
    pub fn effective_support(&self) -> f64 {
        let density_reach = match &self.base {
            Base::Density { density, scale } => {
                let far = density
                    .poles()
                    .iter()
                    .map(|p| p.location.abs())
                    .fold(0.0, f64::max);
                (far + 60.0) / scale
            }
            _ => f64::INFINITY,
        };
        if self.gaussian {
            density_reach.min(12.0)
        } else {
            density_reach
        }
    }
}
