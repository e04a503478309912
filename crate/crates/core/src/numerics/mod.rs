//! Quadrature infrastructure.
//!
//! Everything here is built on one embedded Gauss-Kronrod pair driven by global adaptive
//! bisection. Three front ends sit on top of it:
//!
//! * [`Integrator::finite`] for bounded intervals, with [`SingularityMark`]s for integrable
//!   power-law singularities;
//! * [`Integrator::halfline`] for `[0, inf)` by progressive truncation under a
//!   [`DecayHint`];
//! * [`Integrator::oscillatory`] for `∫₀^∞ a(λ) cos φ(λ) dλ` with a monotone phase, summed
//!   between phase zeros and accelerated by iterated averaging.
//!
//! Integrands that are singular at a marked point receive an [`Abscissa`] instead of a bare
//! `f64`, so the distance to the mark survives even when it is far below the spacing of
//! floating-point numbers near the mark.

mod adaptive;
mod halfline;
mod kronrod;
mod oscillatory;

pub use halfline::DecayHint;
pub use oscillatory::OscillatoryIntegrand;

use crate::error::{Error, Result};

/// Default evaluation budget per call.
pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;

/// Outcome of a successful integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// Estimated integral.
    pub value: f64,
    /// Estimated absolute error, always non-negative.
    pub error_estimate: f64,
    /// Number of integrand evaluations spent.
    pub evaluations: usize,
}

impl QuadratureResult {
    pub(crate) fn scaled(self, factor: f64) -> Self {
        QuadratureResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }

    pub(crate) fn plus(self, other: QuadratureResult) -> Self {
        QuadratureResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

/// An integrable singularity `|λ - location|^exponent` of the integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityMark {
    location: f64,
    exponent: f64,
}

impl SingularityMark {
    /// Creates a mark; the exponent must lie in `(-1, 0]`.
    pub fn new(location: f64, exponent: f64) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::Domain(format!(
                "mark location {location} is not finite"
            )));
        }
        if !(exponent > -1.0 && exponent <= 0.0) {
            return Err(Error::Domain(format!(
                "mark exponent {exponent} is outside (-1, 0]"
            )));
        }
        Ok(SingularityMark { location, exponent })
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }
}

/// A quadrature node written as `anchor + offset`.
///
/// Near a mark the anchor is the mark itself and the offset is exact, so
/// [`Abscissa::distance_to`] the mark is exact too.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub anchor: f64,
    pub offset: f64,
}

impl Abscissa {
    /// A node with no special anchor.
    pub fn at(x: f64) -> Self {
        Abscissa {
            anchor: x,
            offset: 0.0,
        }
    }

    /// The node as a plain number.
    pub fn value(&self) -> f64 {
        self.anchor + self.offset
    }

    /// Signed distance `self - point`, exact when `point` equals the anchor.
    pub fn distance_to(&self, point: f64) -> f64 {
        (self.anchor - point) + self.offset
    }

    /// The node scaled by `factor`, keeping the anchor/offset split.
    pub fn scaled(&self, factor: f64) -> Self {
        Abscissa {
            anchor: self.anchor * factor,
            offset: self.offset * factor,
        }
    }
}

/// Tolerances and budget shared by every front end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Integrator {
    /// Absolute tolerance only, default budget.
    pub fn new(abs_tol: f64) -> Self {
        Integrator {
            abs_tol,
            rel_tol: 0.0,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }

    /// Also accept an error up to `rel_tol · |value|`.
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evaluations(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || self.rel_tol < 0.0 {
            return Err(Error::Domain(format!(
                "tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        Ok(())
    }

    /// `∫ₐᵇ f`, with marked singularities removed by substitution.
    pub fn finite<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        marks: &[SingularityMark],
    ) -> Result<QuadratureResult> {
        self.finite_anchored(|x: Abscissa| f(x.value()), a, b, marks)
    }

    /// Like [`Integrator::finite`], but hands the integrand an [`Abscissa`].
    ///
    /// `[a, b]` is cut at every mark inside it. A piece touching a mark at `p` with exponent
    /// `e` is integrated in `u = |λ - p|^(1+e)`, which turns a `|λ - p|^e` factor into a
    /// bounded one.
    pub fn finite_anchored<F: Fn(Abscissa) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        marks: &[SingularityMark],
    ) -> Result<QuadratureResult> {
        self.check()?;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        let pieces = split_at_marks(a, b, marks);
        let mut maps = Vec::with_capacity(pieces.len());
        let mut segments = Vec::with_capacity(pieces.len());
        for piece in pieces {
            let (map, seg) = piece.mapped();
            maps.push(map);
            segments.push(seg);
        }
        adaptive::integrate_segments(
            |i, u| maps[i].eval(&f, u),
            |i, u| maps[i].node(u).value(),
            &segments,
            self.abs_tol,
            self.rel_tol,
            self.max_evaluations,
        )
    }

    /// `∫₀^∞ f` by progressive truncation.
    pub fn halfline<F: Fn(f64) -> f64>(&self, f: F, hint: DecayHint) -> Result<QuadratureResult> {
        self.check()?;
        halfline::integrate(self, &f, hint)
    }

    /// `∫₀^∞ a(λ) cos φ(λ) dλ` for an eventually monotone phase.
    pub fn oscillatory<A, P, D>(
        &self,
        integrand: &OscillatoryIntegrand<A, P, D>,
    ) -> Result<QuadratureResult>
    where
        A: Fn(Abscissa) -> f64,
        P: Fn(f64) -> f64,
        D: Fn(f64) -> f64,
    {
        self.check()?;
        oscillatory::integrate(self, integrand)
    }
}

/// `∫ₐᵇ f` to `abs_tol`, with marked singularities.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    marks: &[SingularityMark],
    abs_tol: f64,
) -> Result<QuadratureResult> {
    Integrator::new(abs_tol).finite(f, a, b, marks)
}

/// `∫₀^∞ f` to `abs_tol` under a decay hint.
pub fn integrate_halfline<F: Fn(f64) -> f64>(
    f: F,
    decay_hint: DecayHint,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    Integrator::new(abs_tol).halfline(f, decay_hint)
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Plain,
    /// λ = anchor + u^beta
    Left {
        anchor: f64,
        beta: f64,
    },
    /// λ = anchor - u^beta
    Right {
        anchor: f64,
        beta: f64,
    },
}

impl Map {
    fn node(&self, u: f64) -> Abscissa {
        match *self {
            Map::Plain => Abscissa::at(u),
            Map::Left { anchor, beta } => Abscissa {
                anchor,
                offset: u.powf(beta),
            },
            Map::Right { anchor, beta } => Abscissa {
                anchor,
                offset: -u.powf(beta),
            },
        }
    }

    fn eval<F: Fn(Abscissa) -> f64>(&self, f: &F, u: f64) -> f64 {
        match *self {
            Map::Plain => f(Abscissa::at(u)),
            Map::Left { beta, .. } | Map::Right { beta, .. } => {
                let node = self.node(u);
                let jacobian = beta * node.offset.abs() / u;
                f(node) * jacobian
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    left_exponent: Option<f64>,
    right_exponent: Option<f64>,
}

impl Piece {
    fn mapped(&self) -> (Map, (f64, f64)) {
        let width = self.hi - self.lo;
        match (self.left_exponent, self.right_exponent) {
            (Some(e), None) => {
                let beta = 1.0 / (1.0 + e);
                (
                    Map::Left {
                        anchor: self.lo,
                        beta,
                    },
                    (0.0, width.powf(1.0 / beta)),
                )
            }
            (None, Some(e)) => {
                let beta = 1.0 / (1.0 + e);
                (
                    Map::Right {
                        anchor: self.hi,
                        beta,
                    },
                    (0.0, width.powf(1.0 / beta)),
                )
            }
            _ => (Map::Plain, (self.lo, self.hi)),
        }
    }
}

/// Cuts `[a, b]` at the marks so each piece has at most one singular end.
fn split_at_marks(a: f64, b: f64, marks: &[SingularityMark]) -> Vec<Piece> {
    let mut points: Vec<(f64, f64)> = marks
        .iter()
        .filter(|m| m.location >= a && m.location <= b && m.exponent < 0.0)
        .map(|m| (m.location, m.exponent))
        .collect();
    points.sort_by(|x, y| x.0.total_cmp(&y.0));
    // Coincident marks keep the strongest singularity.
    points.dedup_by(|later, earlier| {
        if later.0 == earlier.0 {
            earlier.1 = earlier.1.min(later.1);
            true
        } else {
            false
        }
    });

    let exponent_at = |x: f64| points.iter().find(|p| p.0 == x).map(|p| p.1);
    let mut knots = vec![a];
    knots.extend(points.iter().map(|p| p.0).filter(|&x| x > a && x < b));
    knots.push(b);

    let mut pieces = Vec::new();
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (le, re) = (exponent_at(lo), exponent_at(hi));
        if le.is_some() && re.is_some() {
            let mid = 0.5 * (lo + hi);
            pieces.push(Piece {
                lo,
                hi: mid,
                left_exponent: le,
                right_exponent: None,
            });
            pieces.push(Piece {
                lo: mid,
                hi,
                left_exponent: None,
                right_exponent: re,
            });
        } else {
            pieces.push(Piece {
                lo,
                hi,
                left_exponent: le,
                right_exponent: re,
            });
        }
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_on_unit_interval() {
        let r = integrate_finite(|_| 1.0, 0.0, 1.0, &[], 1e-12).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-12);
        assert!(r.error_estimate <= 1e-12);
        assert!(r.evaluations >= 1);
    }

    #[test]
    fn inverse_square_root_at_left_end() {
        let mark = SingularityMark::new(0.0, -0.5).unwrap();
        let r = integrate_finite(|x: f64| x.abs().powf(-0.5), 0.0, 1.0, &[mark], 1e-12).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-10, "{}", r.value);
    }

    #[test]
    fn interior_power_singularity() {
        let mark = SingularityMark::new(0.8, -0.6).unwrap();
        let r = integrate_finite(
            |x: f64| (x - 0.8).abs().powf(-0.6),
            0.0,
            2.0,
            &[mark],
            1e-11,
        )
        .unwrap();
        let exact = (0.8f64.powf(0.4) + 1.2f64.powf(0.4)) / 0.4;
        assert!((r.value - exact).abs() <= 1e-10, "{} vs {exact}", r.value);
    }

    #[test]
    fn anchored_distance_survives_below_ulp() {
        // Mass within 1e-20 of the mark: invisible in absolute coordinates near 0.8.
        let mark = SingularityMark::new(0.8, -0.9).unwrap();
        let b: f64 = 0.8 + 1e-10;
        let r = Integrator::new(1e-12)
            .finite_anchored(
                |x: Abscissa| x.distance_to(0.8).abs().powf(-0.9),
                0.8,
                b,
                &[mark],
            )
            .unwrap();
        let exact = (b - 0.8).powf(0.1) / 0.1;
        assert!(
            (r.value - exact).abs() < 1e-9 * exact,
            "{} vs {exact}",
            r.value
        );
    }

    #[test]
    fn both_ends_singular() {
        let marks = [
            SingularityMark::new(0.0, -0.5).unwrap(),
            SingularityMark::new(1.0, -0.5).unwrap(),
        ];
        // ∫₀¹ (x(1-x))^{-1/2} dx = π
        let r =
            integrate_finite(|x: f64| (x * (1.0 - x)).powf(-0.5), 0.0, 1.0, &marks, 1e-11).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_intervals_and_marks() {
        assert!(matches!(
            integrate_finite(|_| 1.0, 1.0, 0.0, &[], 1e-9),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(SingularityMark::new(0.0, -1.0).is_err());
        assert!(SingularityMark::new(0.0, 0.5).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = Integrator::new(1e-14).with_max_evaluations(200).finite(
            |x: f64| (50.0 * x).sin().abs(),
            0.0,
            10.0,
            &[],
        );
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn odd_integrand_on_symmetric_interval() {
        let r =
            integrate_finite(|x: f64| x.powi(3) * (-x * x).exp(), -3.0, 3.0, &[], 1e-10).unwrap();
        assert!(r.value.abs() <= 1e-10);
    }
}
