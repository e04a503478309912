use super::CovarianceQuery;
use crate::error::{Error, Result};
use crate::field::weight::{limit_constant, SpectralWeight};
use crate::field::{EquationSpec, FieldKind, FieldModel, Parity};
use crate::numerics::{
    Abscissa, Integrator, OscillatoryIntegrand, QuadratureResult, SingularityMark,
};
use crate::special::{fox_wright_11, FoxWrightParams};
use crate::spectral::{c2, Regime, SpectrumSpec};
use std::f64::consts::PI;

/// Below this Fox-Wright argument the closed forms switch to quadrature.
pub const SERIES_ARGUMENT_FLOOR: f64 = -25.0;

/// Half-width of the quadrature range under the `e^{-λ²/2}` envelope.
pub const GAUSSIAN_CUTOFF: f64 = 9.0;

const QUAD_ABS_TOL: f64 = 1e-11;
const QUAD_REL_TOL: f64 = 1e-10;

/// Largest total phase `|τ| L^m` integrated directly; beyond it the tail is summed over
/// half-periods of the phase.
const DIRECT_PHASE_LIMIT: f64 = 2000.0;

/// Where a covariance value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    FoxWright,
    Quadrature,
}

/// `∫₀^∞ w(λ) cos(λd + τλ^m) dλ` for a large `|τ|`, with the sign of `τ` folded into the
/// phase so that it increases beyond its last turning point.
fn odd_oscillatory(
    weight: &SpectralWeight,
    m: i32,
    d: f64,
    tau: f64,
    marks: &[SingularityMark],
) -> Result<QuadratureResult> {
    let sign = tau.signum();
    let (a, b) = (sign * d, tau.abs());
    let turning = if a >= 0.0 {
        0.0
    } else {
        (-a / (m as f64 * b)).powf(1.0 / (m - 1) as f64) * 1.0001
    };
    let last_mark = marks.iter().map(|k| k.location()).fold(0.0, f64::max);
    let g = OscillatoryIntegrand {
        amplitude: |x: Abscissa| weight.eval(x),
        phase: |l: f64| a * l + b * l.powi(m),
        phase_rate: |l: f64| a + m as f64 * b * l.powi(m - 1),
        monotone_from: turning.max(last_mark),
        marks: marks.to_vec(),
    };
    Integrator::new(QUAD_ABS_TOL).oscillatory(&g)
}

/// `∫ w(λ) cos(λd) e^{-λ^m (t+t')} dλ` (even `m`) or
/// `∫ w(λ) cos(λd + sλ^m (t-t')) dλ` (odd `m`), by symmetric quadrature.
pub(crate) fn spectral_covariance(
    weight: &SpectralWeight,
    eq: &EquationSpec,
    q: &CovarianceQuery,
) -> Result<QuadratureResult> {
    let m = eq.order() as i32;
    let d = q.lag();
    let upper = match eq.parity() {
        Parity::Even => (60.0 / q.time_sum()).powf(1.0 / m as f64),
        Parity::Odd => f64::INFINITY,
    };
    let envelope = if weight.gaussian {
        GAUSSIAN_CUTOFF
    } else {
        weight.effective_support()
    };
    let upper = upper.min(envelope);
    if !upper.is_finite() {
        return Err(Error::Domain(
            "covariance integrand has no decaying envelope".into(),
        ));
    }
    let marks = weight.marks();
    let quad = Integrator::new(QUAD_ABS_TOL).with_rel_tol(QUAD_REL_TOL);
    let r = match eq.parity() {
        Parity::Even => {
            let s = q.time_sum();
            quad.finite_anchored(
                |x: Abscissa| {
                    let l = x.value();
                    weight.eval(x) * (l * d).cos() * (-l.powi(m) * s).exp()
                },
                0.0,
                upper,
                &marks,
            )?
        }
        Parity::Odd => {
            let tau = eq.phase_sign() * q.time_lag();
            if tau.abs() * upper.powi(m) <= DIRECT_PHASE_LIMIT {
                quad.finite_anchored(
                    |x: Abscissa| {
                        let l = x.value();
                        weight.eval(x) * (l * d + tau * l.powi(m)).cos()
                    },
                    0.0,
                    upper,
                    &marks,
                )?
            } else {
                odd_oscillatory(weight, m, d, tau, &marks)?
            }
        }
    };
    Ok(r.scaled(2.0))
}

/// Theoretical covariance of the continuum field a [`FieldModel`] discretizes.
pub fn cov_field(model: &FieldModel, q: &CovarianceQuery) -> Result<f64> {
    Ok(spectral_covariance(model.weight(), model.equation(), q)?.value)
}

/// `Cov(u(t, x), u(t', x')) = ∫ cos(λ(x-x')) e^{-λ^m(t+t')} f(λ) dλ` for even `m`, and the
/// time-stationary analogue for odd `m`.
pub fn cov_solution(spec: &SpectrumSpec, eq: &EquationSpec, q: &CovarianceQuery) -> Result<f64> {
    Ok(spectral_covariance(&SpectralWeight::solution(spec), eq, q)?.value)
}

fn check_even_order(m: u32) -> Result<EquationSpec> {
    EquationSpec::even(m).map_err(|_| {
        Error::RegimeMismatch(format!(
            "the even-order limit covariance needs even m, got {m}"
        ))
    })
}

/// Closed form of the even-order limit covariance.
///
/// With `s = t + t'`, `d = x - x'` and `z = -d²/(4 s^{2/m})`:
/// `f(0) · 2√π / (m s^{1/m}) · ₁Ψ₁[(1/m, 2/m); (1/2, 1); z]` for a cyclic spectrum.
pub fn cov_limit_even_a0_zero(spec: &SpectrumSpec, m: u32, q: &CovarianceQuery) -> Result<f64> {
    spec.require_regime(Regime::Cyclic)?;
    Ok(cov_limit_even_with_path(spec, m, q)?.0)
}

/// `A₀c₂(κ₀) · 2√π / (m s^{κ₀/m}) · ₁Ψ₁[(κ₀/m, 2/m); (1/2, 1); z]` when `A₀ > 0`.
pub fn cov_limit_even_a0_nonzero(spec: &SpectrumSpec, m: u32, q: &CovarianceQuery) -> Result<f64> {
    spec.require_regime(Regime::ZeroFrequency)?;
    Ok(cov_limit_even_with_path(spec, m, q)?.0)
}

/// The even-order limit covariance for either regime, reporting which path produced it.
pub fn cov_limit_even_with_path(
    spec: &SpectrumSpec,
    m: u32,
    q: &CovarianceQuery,
) -> Result<(f64, Evaluation)> {
    check_even_order(m)?;
    let mf = m as f64;
    let s = q.time_sum();
    let d = q.lag();
    let z = -d * d / (4.0 * s.powf(2.0 / mf));
    let (prefactor, alpha, power) = match spec.regime() {
        Regime::Cyclic => (limit_constant(spec)?, 1.0 / mf, 1.0 / mf),
        Regime::ZeroFrequency => {
            let k0 = spec.zero_kappa();
            (spec.zero_weight() * c2(k0)?, k0 / mf, k0 / mf)
        }
    };
    if z >= SERIES_ARGUMENT_FLOOR {
        let p = FoxWrightParams::new(alpha, 2.0 / mf, 0.5, 1.0)?;
        match fox_wright_11(p, z) {
            Ok(psi) => {
                let v = prefactor * 2.0 * PI.sqrt() / (mf * s.powf(power)) * psi;
                return Ok((v, Evaluation::FoxWright));
            }
            Err(Error::PrecisionLoss { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((
        cov_limit_even_quadrature(spec, m, q)?,
        Evaluation::Quadrature,
    ))
}

/// The even-order limit covariance from its cosine-transform definition.
pub fn cov_limit_even_quadrature(spec: &SpectrumSpec, m: u32, q: &CovarianceQuery) -> Result<f64> {
    let eq = check_even_order(m)?;
    Ok(spectral_covariance(&SpectralWeight::limit(spec)?, &eq, q)?.value)
}

/// Covariance of the smoothed odd-order limit field:
/// `(C/(4π)) ∫ w(λ) cos(λ(x-x') + sλ^m(t-t')) e^{-λ²/2} dλ`, with `C w(λ)` equal to `f(0)`
/// or `A₀c₂(κ₀)|λ|^{κ₀-1}` according to `regime`.
pub fn cov_limit_odd_smoothed(
    spec: &SpectrumSpec,
    eq: &EquationSpec,
    regime: Regime,
    q: &CovarianceQuery,
) -> Result<f64> {
    spec.require_regime(regime)?;
    if eq.parity() != Parity::Odd {
        return Err(Error::RegimeMismatch(format!(
            "the smoothed limit covariance needs odd m, got {}",
            eq.order()
        )));
    }
    let weight = SpectralWeight::limit(spec)?.smoothed();
    Ok(spectral_covariance(&weight, eq, q)?.value)
}

/// Covariance of the field of `kind` without building a simulation grid.
pub fn cov_kind(
    kind: FieldKind,
    spec: &SpectrumSpec,
    eq: &EquationSpec,
    q: &CovarianceQuery,
) -> Result<f64> {
    let weight = match kind {
        FieldKind::Solution => SpectralWeight::solution(spec),
        FieldKind::Rescaled { eps } => SpectralWeight::rescaled(spec, eps),
        FieldKind::LimitEven => {
            return cov_limit_even_with_path(spec, eq.order(), q).map(|r| r.0);
        }
        FieldKind::KernelAverage { eps } => SpectralWeight::rescaled(spec, eps).smoothed(),
        FieldKind::LimitOddSmoothed => return cov_limit_odd_smoothed(spec, eq, spec.regime(), q),
    };
    let needs = match kind {
        FieldKind::Rescaled { .. } => Some(Parity::Even),
        FieldKind::KernelAverage { .. } => Some(Parity::Odd),
        _ => None,
    };
    if let Some(p) = needs {
        if eq.parity() != p {
            return Err(Error::RegimeMismatch(format!(
                "{} field is not defined for m = {}",
                kind.name(),
                eq.order()
            )));
        }
    }
    Ok(spectral_covariance(&weight, eq, q)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{one_minus_theta, SpectralDensity};

    fn q(t: f64, tp: f64, x: f64, xp: f64) -> CovarianceQuery {
        CovarianceQuery::new(t, tp, x, xp).unwrap()
    }

    #[test]
    fn oscillatory_odd_path_matches_direct_quadrature() {
        // Phase 5·9³ ≈ 3600 rad takes the half-period path; a brute-force direct integral
        // with a large evaluation budget is the reference.
        for spec in [SpectrumSpec::three_cyclic(), SpectrumSpec::four_component()] {
            let weight = SpectralWeight::limit(&spec).unwrap().smoothed();
            let eq = EquationSpec::odd(3, 1).unwrap();
            for &(tau, d) in &[(5.0, 1.5), (-5.0, 1.5), (5.0, -4.0)] {
                let v = spectral_covariance(&weight, &eq, &q(6.0 + tau, 6.0, d, 0.0)).unwrap();
                let s = eq.phase_sign() * tau;
                let direct = Integrator::new(1e-13)
                    .with_max_evaluations(50_000_000)
                    .finite_anchored(
                        |x: Abscissa| {
                            let l = x.value();
                            weight.eval(x) * (l * d + s * l.powi(3)).cos()
                        },
                        0.0,
                        GAUSSIAN_CUTOFF,
                        &weight.marks(),
                    )
                    .unwrap();
                assert!(
                    (v.value - 2.0 * direct.value).abs() < 1e-9,
                    "{} vs {}",
                    v.value,
                    2.0 * direct.value
                );
            }
        }
    }

    #[test]
    fn order_two_is_gaussian_kernel() {
        let spec = SpectrumSpec::from_triples(&[(0.0, 0.5, 0.0), (1.0, 0.5, 1.0)]).unwrap();
        let constant = c2(0.5).unwrap() * one_minus_theta(0.5, 1.0).unwrap();
        for &(s, d) in &[(0.5, 0.0), (1.0, 1.3), (2.0, -2.5), (7.0, 4.0)] {
            let v = cov_limit_even_a0_zero(&spec, 2, &q(0.5 * s, 0.5 * s, d, 0.0)).unwrap();
            let exact = constant * PI.sqrt() * (-d * d / (4.0 * s)).exp() / s.sqrt();
            assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
        }
    }

    #[test]
    fn zero_lag_values() {
        let cyc = SpectrumSpec::three_cyclic();
        let f0 = SpectralDensity::new(&cyc).value_at_origin().unwrap();
        let v = cov_limit_even_a0_zero(&cyc, 4, &q(1.0, 1.5, 0.3, 0.3)).unwrap();
        let expect = f0 * 2.0 * PI.sqrt() * crate::special::gamma(0.25).unwrap()
            / (4.0 * 2.5f64.powf(0.25) * PI.sqrt());
        assert!((v - expect).abs() < 1e-14 * expect);

        let zf = SpectrumSpec::four_component();
        let v = cov_limit_even_a0_nonzero(&zf, 4, &q(1.0, 1.5, 0.3, 0.3)).unwrap();
        let k0: f64 = 0.2;
        let expect =
            0.2 * c2(k0).unwrap() * 2.0 * PI.sqrt() * crate::special::gamma(k0 / 4.0).unwrap()
                / (4.0 * 2.5f64.powf(k0 / 4.0) * PI.sqrt());
        assert!((v - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn closed_form_matches_quadrature_at_reference_points() {
        let cyc = SpectrumSpec::three_cyclic();
        let query = q(2.5, 2.5, 1.5, 0.0);
        let a = cov_limit_even_a0_zero(&cyc, 4, &query).unwrap();
        let b = cov_limit_even_quadrature(&cyc, 4, &query).unwrap();
        assert!((a - b).abs() < 1e-7);
        let zf = SpectrumSpec::four_component();
        let a = cov_limit_even_a0_nonzero(&zf, 4, &query).unwrap();
        let b = cov_limit_even_quadrature(&zf, 4, &query).unwrap();
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn far_lags_use_quadrature() {
        let cyc = SpectrumSpec::three_cyclic();
        let (_, path) = cov_limit_even_with_path(&cyc, 4, &q(0.1, 0.1, 12.0, 0.0)).unwrap();
        assert_eq!(path, Evaluation::Quadrature);
        let (_, path) = cov_limit_even_with_path(&cyc, 4, &q(1.0, 1.0, 1.0, 0.0)).unwrap();
        assert_eq!(path, Evaluation::FoxWright);
    }

    #[test]
    fn regime_is_checked() {
        let zf = SpectrumSpec::four_component();
        assert!(matches!(
            cov_limit_even_a0_zero(&zf, 4, &q(1.0, 1.0, 0.0, 0.0)),
            Err(Error::RegimeMismatch(_))
        ));
        let eq = EquationSpec::odd(3, 1).unwrap();
        assert!(cov_limit_odd_smoothed(&zf, &eq, Regime::Cyclic, &q(1.0, 1.0, 0.0, 0.0)).is_err());
        assert!(cov_limit_even_a0_nonzero(&zf, 3, &q(1.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn odd_limit_at_zero_lag() {
        let cyc = SpectrumSpec::three_cyclic();
        let eq = EquationSpec::odd(3, 1).unwrap();
        let f0 = SpectralDensity::new(&cyc).value_at_origin().unwrap();
        let v = cov_limit_odd_smoothed(&cyc, &eq, Regime::Cyclic, &q(2.0, 2.0, 1.0, 1.0)).unwrap();
        let expect = f0 / (4.0 * PI) * (2.0 * PI).sqrt();
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn odd_limit_joint_sign_flip() {
        let spec = SpectrumSpec::four_component();
        let eq = EquationSpec::odd(3, 1).unwrap();
        let a = cov_limit_odd_smoothed(&spec, &eq, Regime::ZeroFrequency, &q(6.0, 1.0, 0.5, 2.0))
            .unwrap();
        let b = cov_limit_odd_smoothed(&spec, &eq, Regime::ZeroFrequency, &q(1.0, 6.0, 2.0, 0.5))
            .unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn solution_covariance_decreases_in_time() {
        let spec = SpectrumSpec::four_component();
        let eq = EquationSpec::even(2).unwrap();
        let v: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&s| cov_solution(&spec, &eq, &q(0.5 * s, 0.5 * s, 0.4, 0.0)).unwrap())
            .collect();
        assert!(v[0] > v[1] && v[1] > v[2] && v[2] > 0.0);
    }
}
