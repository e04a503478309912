//! Deterministic `L²` residuals `E(U_ε(t, x) - U_0(t, x))²` between rescaled fields and
//! their limits, computed with both fields driven by the same noise.
//!
//! Writing the rescaled variance density as a multiple `Q_ε` of the limit one, every
//! residual has the form `∫ D(λ) w_0(λ) (√Q_ε(λ) - 1)² dλ` (or `(√Q_ε - √f(0))²` in the
//! cyclic case), where `D` is `e^{-2λ^m t}` for even `m` and `e^{-λ²/2}/(4π)` for the
//! smoothed odd-order fields. `Q_ε` is singular at `±w_j/√ε`, points that leave any bounded
//! range as `ε → 0`.

use crate::covariance::GAUSSIAN_CUTOFF;
use crate::error::{Error, Result};
use crate::field::weight::limit_constant;
use crate::field::{EquationSpec, Parity};
use crate::numerics::{Abscissa, Integrator, QuadratureResult, SingularityMark};
use crate::spectral::{c2, one_minus_theta, Regime, SpectrumSpec};
use rayon::prelude::*;
use std::f64::consts::PI;

/// `ε = 1, 10⁻¹, ..., 10⁻⁴`.
pub const DEFAULT_LADDER: [f64; 5] = [1.0, 1e-1, 1e-2, 1e-3, 1e-4];

const RESIDUAL_REL_TOL: f64 = 1e-8;
const RESIDUAL_ABS_TOL: f64 = 1e-300;

/// Which residual integral a curve follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidualRegime {
    EvenCyclic,
    EvenZeroFrequency,
    OddCyclic,
    OddZeroFrequency,
}

impl ResidualRegime {
    pub fn of(spec: &SpectrumSpec, eq: &EquationSpec) -> Self {
        match (eq.parity(), spec.regime()) {
            (Parity::Even, Regime::Cyclic) => ResidualRegime::EvenCyclic,
            (Parity::Even, Regime::ZeroFrequency) => ResidualRegime::EvenZeroFrequency,
            (Parity::Odd, Regime::Cyclic) => ResidualRegime::OddCyclic,
            (Parity::Odd, Regime::ZeroFrequency) => ResidualRegime::OddZeroFrequency,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResidualRegime::EvenCyclic => "even-cyclic",
            ResidualRegime::EvenZeroFrequency => "even-zero-frequency",
            ResidualRegime::OddCyclic => "odd-cyclic",
            ResidualRegime::OddZeroFrequency => "odd-zero-frequency",
        }
    }
}

/// Residuals along a decreasing ladder of `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualCurve {
    pub eps_ladder: Vec<f64>,
    pub residuals: Vec<f64>,
    pub quadrature_errors: Vec<f64>,
    pub regime: ResidualRegime,
}

impl ResidualCurve {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.residuals.windows(2).all(|w| w[1] < w[0])
    }

    /// Last residual over first.
    pub fn final_ratio(&self) -> f64 {
        self.residuals[self.residuals.len() - 1] / self.residuals[0]
    }
}

/// The rescaled density relative to its limit, `Q_ε(λ)`.
///
/// For `A₀ = 0` this is `f(λ√ε)`. For `A₀ > 0` it is
/// `ε^{(1-κ₀)/2} f(λ√ε) / (A₀c₂(κ₀)|λ|^{κ₀-1})`. Both are assembled from `1 - θ_κ` at the
/// shifted distances `√ε|λ ± w_j/√ε|`, taken from the abscissa so they stay exact near the
/// singular points.
pub fn q_epsilon(spec: &SpectrumSpec, eps: f64, lambda: Abscissa) -> Result<f64> {
    check_eps(eps)?;
    let root = eps.sqrt();
    let mut cyclic = 0.0;
    for c in &spec.components()[1..] {
        if c.weight == 0.0 {
            continue;
        }
        let k2 = c2(c.kappa)?;
        for pole in [-c.omega, c.omega] {
            let d = root * lambda.distance_to(pole / root).abs();
            cyclic += 0.5 * c.weight * k2 * one_minus_theta(c.kappa, d)? / d.powf(1.0 - c.kappa);
        }
    }
    match spec.regime() {
        Regime::Cyclic => Ok(cyclic),
        Regime::ZeroFrequency => {
            let k0 = spec.zero_kappa();
            let scale = spec.zero_weight() * c2(k0)?;
            let u = root * lambda.distance_to(0.0).abs();
            Ok(one_minus_theta(k0, u)? + cyclic * u.powf(1.0 - k0) / scale)
        }
    }
}

/// Marks at `±w_j/√ε` (and at 0 when `A₀ > 0`) for the residual integrands.
fn residual_marks(spec: &SpectrumSpec, eps: f64) -> Vec<SingularityMark> {
    let root = eps.sqrt();
    let mut marks = Vec::new();
    for c in &spec.components()[1..] {
        if c.weight > 0.0 {
            for pole in [-c.omega, c.omega] {
                marks.push(SingularityMark::new(pole / root, c.kappa - 1.0).expect("kappa"));
            }
        }
    }
    if spec.regime() == Regime::ZeroFrequency {
        marks.push(SingularityMark::new(0.0, spec.zero_kappa() - 1.0).expect("kappa"));
    }
    marks
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!(
            "scaling parameter {eps} outside (0, 1]"
        )));
    }
    Ok(())
}

/// `2 ∫₀^L D(λ) w₀(λ) (√Q(λ) - √q∞)² dλ` with a user-supplied `Q`.
///
/// `w₀` is `1` for cyclic spectra and `A₀c₂(κ₀)λ^{κ₀-1}` otherwise, with `q∞` equal to
/// `f(0)` or `1` respectively.
fn residual_with<Q>(
    spec: &SpectrumSpec,
    damping: &dyn Fn(f64) -> f64,
    upper: f64,
    marks: &[SingularityMark],
    q: Q,
) -> Result<QuadratureResult>
where
    Q: Fn(Abscissa) -> Result<f64>,
{
    let (base_scale, kappa0, limit) = match spec.regime() {
        Regime::Cyclic => (1.0, None, limit_constant(spec)?),
        Regime::ZeroFrequency => (limit_constant(spec)?, Some(spec.zero_kappa()), 1.0),
    };
    let sqrt_limit = limit.sqrt();
    let failure = std::cell::Cell::new(None);
    let integrand = |x: Abscissa| {
        let qv = match q(x) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                return 0.0;
            }
        };
        let l = x.value();
        let base = match kappa0 {
            None => 1.0,
            Some(k) => x.distance_to(0.0).abs().powf(k - 1.0),
        };
        let gap = qv.sqrt() - sqrt_limit;
        damping(l) * base * gap * gap
    };
    let r = Integrator::new(RESIDUAL_ABS_TOL)
        .with_rel_tol(RESIDUAL_REL_TOL)
        .finite_anchored(integrand, 0.0, upper, marks)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(r.scaled(2.0 * base_scale))
}

fn even_upper(m: u32, t: f64) -> f64 {
    // e^{-2λ^m t} ≤ e^{-60} beyond.
    (30.0 / t).powf(1.0 / m as f64)
}

fn even_residual(spec: &SpectrumSpec, m: u32, t: f64, eps: f64) -> Result<QuadratureResult> {
    EquationSpec::even(m)?;
    check_eps(eps)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("residual needs t > 0, got {t}")));
    }
    let mi = m as i32;
    residual_with(
        spec,
        &|l: f64| (-2.0 * l.powi(mi) * t).exp(),
        even_upper(m, t),
        &residual_marks(spec, eps),
        |x| q_epsilon(spec, eps, x),
    )
}

/// `∫ e^{-2λ^m t} (√Q_ε(λ) - √f(0))² dλ` for a cyclic spectrum; independent of `x`.
pub fn residual_even_a0_zero(
    spec: &SpectrumSpec,
    m: u32,
    t: f64,
    eps: f64,
) -> Result<QuadratureResult> {
    spec.require_regime(Regime::Cyclic)?;
    even_residual(spec, m, t, eps)
}

/// `A₀c₂(κ₀) ∫ e^{-2λ^m t} |λ|^{κ₀-1} (√Q_ε(λ) - 1)² dλ` when `A₀ > 0`.
pub fn residual_even_a0_nonzero(
    spec: &SpectrumSpec,
    m: u32,
    t: f64,
    eps: f64,
) -> Result<QuadratureResult> {
    spec.require_regime(Regime::ZeroFrequency)?;
    even_residual(spec, m, t, eps)
}

/// The smoothed odd-order residual, `(1/(4π)) ∫ e^{-λ²/2} w₀(λ)(√Q_ε - √q∞)² dλ`.
///
/// The damping carries no time, so the value does not depend on `t`; it is accepted for
/// symmetry with the even-order residuals.
pub fn residual_odd_smoothed(
    spec: &SpectrumSpec,
    eq: &EquationSpec,
    regime: Regime,
    _t: f64,
    eps: f64,
) -> Result<QuadratureResult> {
    spec.require_regime(regime)?;
    if eq.parity() != Parity::Odd {
        return Err(Error::RegimeMismatch(format!(
            "the smoothed residual needs odd m, got {}",
            eq.order()
        )));
    }
    check_eps(eps)?;
    residual_with(
        spec,
        &|l: f64| (-0.5 * l * l).exp() / (4.0 * PI),
        GAUSSIAN_CUTOFF,
        &residual_marks(spec, eps),
        |x| q_epsilon(spec, eps, x),
    )
}

/// The residual that matches `spec` and `eq`.
pub fn residual(
    spec: &SpectrumSpec,
    eq: &EquationSpec,
    t: f64,
    eps: f64,
) -> Result<QuadratureResult> {
    match eq.parity() {
        Parity::Even => even_residual(spec, eq.order(), t, eps),
        Parity::Odd => residual_odd_smoothed(spec, eq, spec.regime(), t, eps),
    }
}

/// [`residual`] at every point of `ladder`, evaluated in parallel.
pub fn residual_ladder(
    spec: &SpectrumSpec,
    eq: &EquationSpec,
    t: f64,
    ladder: &[f64],
) -> Result<ResidualCurve> {
    if ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Domain("ladder must be strictly decreasing".into()));
    }
    let points: Vec<QuadratureResult> = ladder
        .par_iter()
        .map(|&eps| residual(spec, eq, t, eps))
        .collect::<Result<_>>()?;
    Ok(ResidualCurve {
        eps_ladder: ladder.to_vec(),
        residuals: points.iter().map(|p| p.value).collect(),
        quadrature_errors: points.iter().map(|p| p.error_estimate).collect(),
        regime: ResidualRegime::of(spec, eq),
    })
}

/// Truncated variance `c² ∫_{-L}^{L} dλ = 2c²L` of the unsmoothed odd-order limit, which
/// grows without bound in `L`.
pub fn naive_odd_variance(cutoff: f64, constant: f64) -> Result<f64> {
    check_cutoff(cutoff)?;
    let r = Integrator::new(1e-300).with_rel_tol(1e-13).finite(
        |_| constant * constant,
        -cutoff,
        cutoff,
        &[],
    )?;
    Ok(r.value)
}

/// `c² ∫_{-L}^{L} |λ|^{κ₀-1} dλ = 2c²L^{κ₀}/κ₀`, the zero-frequency analogue.
pub fn naive_odd_variance_zero_frequency(cutoff: f64, constant: f64, kappa0: f64) -> Result<f64> {
    check_cutoff(cutoff)?;
    if !(kappa0 > 0.0 && kappa0 < 1.0) {
        return Err(Error::Domain(format!("kappa {kappa0} outside (0, 1)")));
    }
    let mark = SingularityMark::new(0.0, kappa0 - 1.0)?;
    let c2 = constant * constant;
    let r = Integrator::new(1e-300)
        .with_rel_tol(1e-13)
        .finite_anchored(
            |x: Abscissa| c2 * x.distance_to(0.0).abs().powf(kappa0 - 1.0),
            -cutoff,
            cutoff,
            &[mark],
        )?;
    Ok(r.value)
}

fn check_cutoff(cutoff: f64) -> Result<()> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::Domain(format!("cutoff {cutoff} must be positive")));
    }
    Ok(())
}
