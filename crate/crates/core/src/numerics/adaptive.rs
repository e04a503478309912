//! Globally adaptive bisection driven by a max-error heap.

use super::kronrod::{self, RULE_POINTS};
use super::QuadratureResult;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy)]
struct Panel {
    segment: usize,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `g(segment, u)` over every `segments[segment]` and sums the results.
///
/// All segments share one heap, so the tolerance budget flows to wherever the error is.
/// `locate` maps a segment coordinate back to the caller's abscissa for diagnostics.
pub(crate) fn integrate_segments<G, L>(
    g: G,
    locate: L,
    segments: &[(f64, f64)],
    abs_tol: f64,
    rel_tol: f64,
    max_evaluations: usize,
) -> Result<QuadratureResult>
where
    G: Fn(usize, f64) -> f64,
    L: Fn(usize, f64) -> f64,
{
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut evaluations = 0usize;

    let rule = |segment: usize, lo: f64, hi: f64, evaluations: &mut usize| -> Result<Panel> {
        let est = kronrod::apply(&|u| g(segment, u), lo, hi);
        *evaluations += RULE_POINTS;
        if let Some(u) = est.non_finite_at {
            return Err(Error::NonFiniteIntegrand {
                at: locate(segment, u),
            });
        }
        Ok(Panel {
            segment,
            lo,
            hi,
            value: est.value,
            error: est.error,
        })
    };

    let mut total_value = 0.0;
    let mut total_error = 0.0;
    for (i, &(lo, hi)) in segments.iter().enumerate() {
        if hi <= lo {
            continue;
        }
        let p = rule(i, lo, hi, &mut evaluations)?;
        total_value += p.value;
        total_error += p.error;
        heap.push(p);
    }

    let tolerance = |value: f64| abs_tol.max(rel_tol * value.abs());
    let mut since_resum = 0usize;

    while total_error > tolerance(total_value) {
        let Some(worst) = heap.pop() else { break };
        let width = worst.hi - worst.lo;
        let scale = worst.lo.abs().max(worst.hi.abs());
        if width <= 8.0 * f64::EPSILON * scale || width < 1e-280 {
            frozen.push(worst);
            continue;
        }
        if evaluations + 2 * RULE_POINTS > max_evaluations {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = rule(worst.segment, worst.lo, mid, &mut evaluations)?;
        let right = rule(worst.segment, mid, worst.hi, &mut evaluations)?;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        since_resum += 1;
        if since_resum == 128 {
            since_resum = 0;
            (total_value, total_error) = resum(heap.iter().chain(frozen.iter()));
        }
    }

    let (value, error_estimate) = resum(heap.iter().chain(frozen.iter()));
    if !value.is_finite() {
        return Err(Error::NonFiniteIntegrand { at: f64::NAN });
    }
    if error_estimate > tolerance(value) {
        return Err(Error::NonConvergence {
            tolerance: tolerance(value),
            error_estimate,
            evaluations,
        });
    }
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations: evaluations.max(1),
    })
}

/// Compensated sums of panel values and errors.
fn resum<'a>(panels: impl Iterator<Item = &'a Panel>) -> (f64, f64) {
    let mut value = Neumaier::default();
    let mut error = 0.0;
    for p in panels {
        value.add(p.value);
        error += p.error;
    }
    (value.total(), error)
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
