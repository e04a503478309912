//! `∫₀^∞ a(λ) cos φ(λ) dλ` for a phase that increases without bound.

use super::{Abscissa, Integrator, QuadratureResult, SingularityMark};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Integrand `amplitude(λ) · cos(phase(λ))` on `[0, ∞)`.
///
/// Beyond `monotone_from` the phase must be strictly increasing with `phase_rate > 0`, so
/// its zeros `(k + ½)π` partition the tail into half-periods of alternating sign.
/// `marks` may flag amplitude singularities inside the head interval.
pub struct OscillatoryIntegrand<A, P, D> {
    pub amplitude: A,
    pub phase: P,
    pub phase_rate: D,
    pub monotone_from: f64,
    pub marks: Vec<SingularityMark>,
}

const MAX_HALF_PERIODS: usize = 4000;
const MAX_AVERAGING_DEPTH: usize = 60;

pub(super) fn integrate<A, P, D>(
    integrator: &Integrator,
    g: &OscillatoryIntegrand<A, P, D>,
) -> Result<QuadratureResult>
where
    A: Fn(Abscissa) -> f64,
    P: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let tol = integrator.abs_tol;
    let start = g.monotone_from.max(0.0);
    let mut k = ((g.phase)(start) / PI - 0.5).floor() + 1.0;
    let mut zero = next_zero(g, start, (k + 0.5) * PI)?;

    let integrand = |x: Abscissa| (g.amplitude)(x) * (g.phase)(x.value()).cos();
    let piece = |lo: f64, hi: f64, share: f64| -> Result<QuadratureResult> {
        Integrator {
            abs_tol: share,
            rel_tol: 0.0,
            max_evaluations: integrator.max_evaluations,
        }
        .finite_anchored(integrand, lo, hi, &g.marks)
    };

    let head = if zero > 0.0 {
        piece(0.0, zero, 0.25 * tol)?
    } else {
        QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        }
    };

    let term_tol = 1e-3 * tol;
    let mut sums = vec![head.value];
    let mut evaluations = head.evaluations;
    let mut piece_error = head.error_estimate;
    let mut last_estimate: Option<f64> = None;
    let mut settled = 0usize;
    let mut small_terms = 0usize;

    for n in 1..=MAX_HALF_PERIODS {
        k += 1.0;
        let next = next_zero(g, zero, (k + 0.5) * PI)?;
        let term = piece(zero, next, term_tol)?;
        zero = next;
        evaluations += term.evaluations;
        piece_error += term.error_estimate;
        if evaluations > integrator.max_evaluations {
            break;
        }
        sums.push(sums[n - 1] + term.value);

        // A damped amplitude can make the tail negligible outright.
        small_terms = if term.value.abs() < 1e-3 * tol {
            small_terms + 1
        } else {
            0
        };
        if small_terms >= 4 {
            return Ok(QuadratureResult {
                value: sums[n],
                error_estimate: piece_error + 4.0 * 1e-3 * tol,
                evaluations,
            });
        }

        if n >= 6 {
            let estimate = iterated_average(&sums);
            if let Some(prev) = last_estimate {
                let change = (estimate - prev).abs();
                if change < 0.25 * tol {
                    settled += 1;
                    if settled >= 2 {
                        return Ok(QuadratureResult {
                            value: estimate,
                            error_estimate: change + piece_error,
                            evaluations,
                        });
                    }
                } else {
                    settled = 0;
                }
            }
            last_estimate = Some(estimate);
        }
    }
    Err(Error::NonConvergence {
        tolerance: tol,
        error_estimate: f64::INFINITY,
        evaluations,
    })
}

/// Repeated pairwise averaging over the later half of the partial sums.
fn iterated_average(sums: &[f64]) -> f64 {
    let depth = (sums.len() / 2).min(MAX_AVERAGING_DEPTH);
    let mut row: Vec<f64> = sums[sums.len() - depth - 1..].to_vec();
    for level in 0..depth {
        for i in 0..row.len() - 1 - level {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
    }
    row[0]
}

/// Smallest λ > `from` with φ(λ) = target, assuming φ increasing beyond `from`.
fn next_zero<A, P, D>(g: &OscillatoryIntegrand<A, P, D>, from: f64, target: f64) -> Result<f64>
where
    P: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let phi = |x: f64| (g.phase)(x) - target;
    let mut lo = from;
    let rate = (g.phase_rate)(lo).max(1e-3);
    let mut step = (target - (g.phase)(lo)).max(0.0) / rate + 1e-12 * (1.0 + lo.abs());
    let mut hi = lo + step;
    let mut guard = 0;
    while phi(hi) < 0.0 {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        guard += 1;
        if guard > 200 || !hi.is_finite() {
            return Err(Error::Domain(format!(
                "phase does not reach {target} beyond {from}"
            )));
        }
    }
    // Safeguarded Newton on the bracket [lo, hi].
    let mut x = hi;
    for _ in 0..100 {
        let fx = phi(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = (g.phase_rate)(x);
        let mut candidate = x - fx / d;
        if !(candidate > lo && candidate < hi) || !candidate.is_finite() {
            candidate = 0.5 * (lo + hi);
        }
        if (candidate - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            return Ok(candidate);
        }
        x = candidate;
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs() {
            return Ok(x);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn damped_cosine_matches_closed_form() {
        // ∫₀^∞ e^{-λ} cos(λ²) dλ has no elementary form; compare against a long finite integral.
        let g = OscillatoryIntegrand {
            amplitude: |x: Abscissa| (-x.value()).exp(),
            phase: |x: f64| x * x,
            phase_rate: |x: f64| 2.0 * x,
            monotone_from: 0.0,
            marks: vec![],
        };
        let r = Integrator::new(1e-11).oscillatory(&g).unwrap();
        let direct = Integrator::new(1e-12)
            .finite(|x: f64| (-x).exp() * (x * x).cos(), 0.0, 40.0, &[])
            .unwrap();
        assert!((r.value - direct.value).abs() < 1e-10);
    }

    #[test]
    fn fresnel_integral() {
        // ∫₀^∞ cos(λ²) dλ = √(π/8)
        let g = OscillatoryIntegrand {
            amplitude: |_x: Abscissa| 1.0,
            phase: |x: f64| x * x,
            phase_rate: |x: f64| 2.0 * x,
            monotone_from: 0.0,
            marks: vec![],
        };
        let r = Integrator::new(1e-10).oscillatory(&g).unwrap();
        let exact = (PI / 8.0).sqrt();
        assert!((r.value - exact).abs() < 1e-9, "{} vs {exact}", r.value);
    }
}
