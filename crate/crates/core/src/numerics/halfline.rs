//! Semi-infinite integrals by progressive truncation.

use super::{Integrator, QuadratureResult};
use crate::error::{Error, Result};

/// How the integrand is expected to decay, which fixes the shape of the tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayHint {
    /// `|f(α)| ≲ C e^{-rα}`.
    Exponential,
    /// `|f(α)| ≲ C e^{-cα²}` or faster.
    Gaussian,
    /// An oscillating integrand whose envelope decays at least exponentially.
    OscillatoryDamped,
}

const MAX_PANELS: usize = 64;
const ENVELOPE_SAMPLES: usize = 32;

/// Integrates panels `[0,1], [1,2], [2,4], ...`; after each panel the envelope of the last
/// two is fitted to the hinted decay law and the remaining tail is bounded by the fit.
pub(super) fn integrate<F: Fn(f64) -> f64>(
    integrator: &Integrator,
    f: &F,
    hint: DecayHint,
) -> Result<QuadratureResult> {
    let tol = integrator.abs_tol;
    let mut total = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    let mut previous: Option<(f64, f64)> = None;
    let (mut lo, mut width) = (0.0f64, 1.0f64);

    for panel in 0..MAX_PANELS {
        let hi = lo + width;
        let share = tol * 0.5f64.powi(panel as i32 + 2);
        let part = Integrator {
            abs_tol: share,
            rel_tol: 0.0,
            max_evaluations: integrator.max_evaluations.saturating_sub(total.evaluations),
        }
        .finite(f, lo, hi, &[])?;
        total = total.plus(part);

        // Envelope over the upper half of the panel.
        let mut envelope = 0.0f64;
        for i in 0..=ENVELOPE_SAMPLES {
            let x = lo + width * (0.5 + 0.5 * i as f64 / ENVELOPE_SAMPLES as f64);
            envelope = envelope.max(f(x).abs());
        }
        total.evaluations += ENVELOPE_SAMPLES + 1;
        let centre = lo + 0.75 * width;

        if envelope == 0.0 && panel >= 1 {
            return Ok(total);
        }
        if let Some((prev_centre, prev_envelope)) = previous {
            if let Some(tail) = tail_bound(hint, prev_centre, prev_envelope, centre, envelope, hi) {
                if tail <= 0.5 * tol {
                    total.error_estimate += tail;
                    return Ok(total);
                }
            }
        }
        previous = Some((centre, envelope));
        lo = hi;
        if panel >= 1 {
            width *= 2.0;
        }
    }
    Err(Error::TailBoundUnavailable(format!(
        "integrand shows no {hint:?} decay up to {lo:e}"
    )))
}

fn tail_bound(hint: DecayHint, c0: f64, m0: f64, c1: f64, m1: f64, end: f64) -> Option<f64> {
    if !(m0 > 0.0 && m1 > 0.0 && m1 < m0) {
        return None;
    }
    let drop = (m0 / m1).ln();
    match hint {
        DecayHint::Exponential | DecayHint::OscillatoryDamped => {
            let rate = drop / (c1 - c0);
            Some(m1 / rate)
        }
        DecayHint::Gaussian => {
            let c = drop / (c1 * c1 - c0 * c0);
            // Mills-ratio bound from the panel end.
            Some(m1 / (2.0 * c * end))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::integrate_halfline;
    use super::*;

    #[test]
    fn exponential() {
        let r = integrate_halfline(|a: f64| (-a).exp(), DecayHint::Exponential, 1e-11).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10, "{}", r.value);
    }

    #[test]
    fn gaussian() {
        let r =
            integrate_halfline(|a: f64| (-a * a / 2.0).exp(), DecayHint::Gaussian, 1e-11).unwrap();
        let exact = (std::f64::consts::PI / 2.0).sqrt();
        assert!((r.value - exact).abs() <= 1e-10);
    }

    #[test]
    fn oscillatory_quartic_against_simpson() {
        let f = |a: f64| a.cos() * (-a.powi(4) / 4.0).exp();
        let r = integrate_halfline(f, DecayHint::OscillatoryDamped, 1e-11).unwrap();
        // Composite Simpson on [0, 8] with 10^6 intervals; the tail beyond 8 is below e^-1024.
        let n = 1_000_000;
        let h = 8.0 / n as f64;
        let mut s = f(0.0) + f(8.0);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let simpson = s * h / 3.0;
        assert!(
            (r.value - simpson).abs() < 1e-10,
            "{} vs {simpson}",
            r.value
        );
    }

    #[test]
    fn non_decaying_integrand_has_no_tail_bound() {
        let r = integrate_halfline(|a: f64| 1.0 / (1.0 + a), DecayHint::Exponential, 1e-8);
        assert!(r.is_err());
    }
}
