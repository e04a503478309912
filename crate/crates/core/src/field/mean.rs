use super::EquationSpec;
use crate::error::{Error, Result};
use crate::numerics::Integrator;
use crate::special::stable_signed_kernel;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Deterministic initial mean `M(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanProfile {
    Zero,
    /// `mass · e^{-(x-center)²/(2 width²)} / (width √(2π))`.
    GaussianBump {
        center: f64,
        width: f64,
        mass: f64,
    },
}

impl MeanProfile {
    pub fn eval(&self, y: f64) -> f64 {
        match *self {
            MeanProfile::Zero => 0.0,
            MeanProfile::GaussianBump {
                center,
                width,
                mass,
            } => {
                let z = (y - center) / width;
                mass * (-0.5 * z * z).exp() / (width * (2.0 * PI).sqrt())
            }
        }
    }
}

/// `E u(t, x) = ∫ M(y) g_m((x - y)/(mt)^{1/m}) / (mt)^{1/m} dy`.
pub fn mean_convolution(eq: &EquationSpec, profile: MeanProfile, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "mean convolution needs t > 0, got {t}"
        )));
    }
    let (center, width) = match profile {
        MeanProfile::Zero => return Ok(0.0),
        MeanProfile::GaussianBump {
            center,
            width,
            mass: _,
        } => (center, width),
    };
    if !(width > 0.0) {
        return Err(Error::Domain(format!(
            "bump width {width} must be positive"
        )));
    }
    let m = eq.order();
    let scale = (m as f64 * t).powf(1.0 / m as f64);
    let (lo, hi) = (center - 12.0 * width, center + 12.0 * width);
    let failure = std::cell::Cell::new(None);
    let r = Integrator::new(1e-7).finite(
        |y| match stable_signed_kernel(m, eq.mu(), (x - y) / scale) {
            Ok(g) => profile.eval(y) * g / scale,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        },
        lo,
        hi,
        &[],
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(r.value)
}

/// `∫ e^{-(y-x)²} e^{iλy} dy = √π e^{iλx} e^{-λ²/4}`.
pub fn smoothing_factor(lambda: f64, x: f64) -> Complex64 {
    let (s, c) = (lambda * x).sin_cos();
    Complex64::new(c, s) * (PI.sqrt() * (-0.25 * lambda * lambda).exp())
}
