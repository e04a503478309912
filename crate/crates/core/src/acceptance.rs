//! Reproducible acceptance checks, one per numbered criterion, shared by the integration
//! suite and `hheat selftest`.
//!
//! Every check returns its measured value next to the pinned threshold, so a failure
//! reports by how much it missed.

use crate::convergence::{
    naive_odd_variance, naive_odd_variance_zero_frequency, residual_ladder, ResidualCurve,
    DEFAULT_LADDER,
};
use crate::covariance::{
    cov_limit_even_a0_nonzero, cov_limit_even_a0_zero, cov_limit_even_quadrature,
    cov_limit_even_with_path, cov_limit_odd_smoothed, empirical_covariance_at, CovarianceQuery,
    Evaluation,
};
use crate::error::Result;
use crate::field::smoothing_factor;
use crate::field::weight::limit_constant;
use crate::field::{EquationSpec, FieldKind, FieldModel, SpectralGrid, DEFAULT_REPLICATES};
use crate::numerics::{Abscissa, Integrator};
use crate::spectral::{
    bessel_theta_identity_residual, c2, covariance_r, one_minus_theta, Regime, SpectralDensity,
    SpectrumSpec,
};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::fmt;
use std::time::{Duration, Instant};

/// Seed for the random queries and noise of the stochastic criteria.
pub const ACCEPTANCE_SEED: u64 = 20_240_917;

/// Identifiers and short names of the criteria, in order.
pub const CRITERIA: [(u8, &str); 10] = [
    (1, "bessel-theta identity"),
    (2, "fourier pair"),
    (3, "second-order reduction"),
    (4, "fox-wright dual path"),
    (5, "monte-carlo covariance"),
    (6, "residual ladders"),
    (7, "naive odd variance"),
    (8, "smoothing identity"),
    (9, "stationarity dichotomy"),
    (10, "figure regimes"),
];

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    /// The headline number compared against `threshold`.
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    pub elapsed: Duration,
    pub budget: Duration,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<24} {} measured={:.3e} threshold={:.3e} time={:.2}s/{}s  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.measured,
            self.threshold,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

struct Outcome {
    measured: f64,
    threshold: f64,
    passed: bool,
    detail: String,
}

/// Run criterion `id` (1 to 10).
pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    let (_, name) = *CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .ok_or_else(|| crate::Error::Domain(format!("no criterion {id}")))?;
    let (budget, check): (u64, fn() -> Result<Outcome>) = match id {
        1 => (5, bessel_theta),
        2 => (30, fourier_pair),
        3 => (1, second_order_reduction),
        4 => (60, dual_path),
        5 => (600, monte_carlo),
        6 => (300, residual_ladders),
        7 => (1, naive_variance),
        8 => (5, smoothing_identity),
        9 => (5, stationarity),
        _ => (120, figure_regimes),
    };
    let start = Instant::now();
    let out = check()?;
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget);
    Ok(CriterionReport {
        id,
        name,
        measured: out.measured,
        threshold: out.threshold,
        passed: out.passed && elapsed <= budget,
        elapsed,
        budget,
        detail: out.detail,
    })
}

/// Every criterion in order. A criterion that errors is reported as `Err`.
pub fn run_all() -> Vec<Result<CriterionReport>> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id)).collect()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn at_most(measured: f64, threshold: f64, detail: String) -> Outcome {
    Outcome {
        measured,
        threshold,
        passed: measured <= threshold,
        detail,
    }
}

fn bessel_theta() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for kappa in linspace(0.1, 0.9, 9) {
        for i in 0..9 {
            // Logarithmic in λ: 0.1, ..., 10.
            let lambda = 10f64.powf(-1.0 + 0.25 * i as f64);
            let rhs = c2(kappa)? * one_minus_theta(kappa, lambda)? / lambda.powf(1.0 - kappa);
            worst = worst.max(bessel_theta_identity_residual(kappa, lambda)? / rhs.abs());
        }
    }
    Ok(at_most(
        worst,
        1e-9,
        "max relative residual over 81 points".into(),
    ))
}

fn fourier_pair() -> Result<Outcome> {
    let spec = SpectrumSpec::four_component();
    let density = SpectralDensity::new(&spec);
    let marks = density.marks(1.0);
    let upper = density.poles().last().map_or(0.0, |p| p.location) + 60.0;
    let mut worst: f64 = 0.0;
    for x in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let r = Integrator::new(1e-9).with_rel_tol(1e-9).finite_anchored(
            |l: Abscissa| density.eval_scaled(l, 1.0) * (l.value() * x).cos(),
            0.0,
            upper,
            &marks,
        )?;
        worst = worst.max((2.0 * r.value - covariance_r(&spec, x)).abs());
    }
    Ok(at_most(
        worst,
        1e-4,
        "max abs error at x in {0, 0.5, 1, 2, 5}".into(),
    ))
}

fn second_order_reduction() -> Result<Outcome> {
    // Sum over the cyclic components of the single-frequency Gaussian-kernel form.
    let spec = SpectrumSpec::three_cyclic();
    let mut constant = 0.0;
    for c in &spec.components()[1..] {
        constant += c.weight
            * c2(c.kappa)?
            * std::f64::consts::PI.sqrt()
            * one_minus_theta(c.kappa, c.omega)?
            / c.omega.powf(1.0 - c.kappa);
    }
    let mut worst: f64 = 0.0;
    for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
        for d in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let q = CovarianceQuery::new(t, t, d, 0.0)?;
            let s = q.time_sum();
            let expected = constant * (-d * d / (4.0 * s)).exp() / s.sqrt();
            let got = cov_limit_even_a0_zero(&spec, 2, &q)?;
            worst = worst.max(((got - expected) / expected).abs());
        }
    }
    Ok(at_most(
        worst,
        1e-10,
        "max relative error on a 5x5 (t, x - x') grid".into(),
    ))
}

fn dual_path() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut series_count = 0;
    for spec in [SpectrumSpec::three_cyclic(), SpectrumSpec::four_component()] {
        for m in [2, 4, 6] {
            for s in [0.5, 1.0, 2.0, 5.0, 10.0] {
                let scale = cov_limit_even_quadrature(
                    &spec,
                    m,
                    &CovarianceQuery::new(0.5 * s, 0.5 * s, 0.0, 0.0)?,
                )?;
                for d in [0.0, 0.5, 1.0, 1.5, 3.0] {
                    let q = CovarianceQuery::new(0.5 * s, 0.5 * s, d, 0.0)?;
                    let (series, path) = cov_limit_even_with_path(&spec, m, &q)?;
                    series_count += (path == Evaluation::FoxWright) as usize;
                    let quad = cov_limit_even_quadrature(&spec, m, &q)?;
                    worst = worst.max((series - quad).abs() / scale.abs());
                }
            }
        }
    }
    Ok(at_most(
        worst,
        1e-6,
        format!(
            "max |series - quadrature| / variance, m in {{2, 4, 6}}, both regimes; \
             {series_count}/150 via the series"
        ),
    ))
}

struct McRegime {
    label: &'static str,
    kind: FieldKind,
    spec: SpectrumSpec,
    eq: EquationSpec,
    grid: SpectralGrid,
    t_grid: [f64; 4],
}

fn monte_carlo() -> Result<Outcome> {
    let even = EquationSpec::even(4)?;
    let odd = EquationSpec::odd(3, 1)?;
    let even_grid = SpectralGrid::new(0.05, 1000)?;
    let odd_grid = SpectralGrid::new(0.001, 4000)?;
    let regimes = [
        McRegime {
            label: "even-cyclic",
            kind: FieldKind::LimitEven,
            spec: SpectrumSpec::three_cyclic(),
            eq: even,
            grid: even_grid,
            t_grid: [0.1, 0.25, 0.5, 1.0],
        },
        McRegime {
            label: "even-zero-frequency",
            kind: FieldKind::LimitEven,
            spec: SpectrumSpec::four_component(),
            eq: even,
            grid: even_grid,
            t_grid: [0.1, 0.25, 0.5, 1.0],
        },
        McRegime {
            label: "odd-cyclic",
            kind: FieldKind::LimitOddSmoothed,
            spec: SpectrumSpec::three_cyclic(),
            eq: odd,
            grid: odd_grid,
            t_grid: [0.0, 0.5, 1.0, 2.0],
        },
        McRegime {
            label: "odd-zero-frequency",
            kind: FieldKind::LimitOddSmoothed,
            spec: SpectrumSpec::four_component(),
            eq: odd,
            grid: odd_grid,
            t_grid: [0.0, 0.5, 1.0, 2.0],
        },
    ];
    let x_grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED);
    let mut worst_fraction: f64 = 1.0;
    let mut detail = Vec::new();
    for (k, r) in regimes.iter().enumerate() {
        let model = FieldModel::new(r.kind, &r.spec, r.eq, r.grid)?;
        let ensemble = model.ensemble(
            ACCEPTANCE_SEED + k as u64,
            DEFAULT_REPLICATES,
            &r.t_grid,
            &x_grid,
        )?;
        let mut hits = 0;
        let queries = 20;
        for _ in 0..queries {
            let mut pick = || {
                let i = (rng.next_u64() % 20) as usize;
                (r.t_grid[i / 5], x_grid[i % 5])
            };
            let ((t, x), (tp, xp)) = (pick(), pick());
            // The odd-order fields are also defined at t = 0; shift the query so the
            // covariance helper, which needs positive times, sees the same lag.
            let shift = if r.eq.parity() == crate::field::Parity::Odd {
                1.0
            } else {
                0.0
            };
            let theory = match r.kind {
                FieldKind::LimitEven => match r.spec.regime() {
                    Regime::Cyclic => {
                        cov_limit_even_a0_zero(&r.spec, 4, &CovarianceQuery::new(t, tp, x, xp)?)?
                    }
                    Regime::ZeroFrequency => {
                        cov_limit_even_a0_nonzero(&r.spec, 4, &CovarianceQuery::new(t, tp, x, xp)?)?
                    }
                },
                _ => cov_limit_odd_smoothed(
                    &r.spec,
                    &r.eq,
                    r.spec.regime(),
                    &CovarianceQuery::new(t + shift, tp + shift, x, xp)?,
                )?,
            };
            let it = r.t_grid.iter().position(|&v| v == t).expect("lattice");
            let itp = r.t_grid.iter().position(|&v| v == tp).expect("lattice");
            let ix = x_grid.iter().position(|&v| v == x).expect("lattice");
            let ixp = x_grid.iter().position(|&v| v == xp).expect("lattice");
            let emp = empirical_covariance_at(&ensemble, (it, ix), (itp, ixp))?;
            if emp.within(theory, 3.0) {
                hits += 1;
            }
        }
        let fraction = hits as f64 / queries as f64;
        worst_fraction = worst_fraction.min(fraction);
        detail.push(format!("{} {hits}/{queries}", r.label));
    }
    Ok(Outcome {
        measured: worst_fraction,
        threshold: 0.95,
        passed: worst_fraction >= 0.95,
        detail: format!("within 3 SE: {}", detail.join(", ")),
    })
}

fn ladder_curves() -> Result<Vec<ResidualCurve>> {
    let even = EquationSpec::even(4)?;
    let odd = EquationSpec::odd(3, 1)?;
    let mut curves = Vec::new();
    for eq in [even, odd] {
        for spec in [SpectrumSpec::three_cyclic(), SpectrumSpec::four_component()] {
            curves.push(residual_ladder(&spec, &eq, 1.0, &DEFAULT_LADDER)?);
        }
    }
    Ok(curves)
}

fn residual_ladders() -> Result<Outcome> {
    let curves = ladder_curves()?;
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut detail = Vec::new();
    for c in &curves {
        let positive = c.residuals.iter().all(|&r| r > 0.0);
        let ratio = c.final_ratio();
        ok &= positive && c.is_strictly_decreasing() && ratio < 0.05;
        worst = worst.max(ratio);
        detail.push(format!(
            "{} ratio={ratio:.2e}{}",
            c.regime.name(),
            if c.is_strictly_decreasing() {
                ""
            } else {
                " not-decreasing"
            }
        ));
    }
    Ok(Outcome {
        measured: worst,
        threshold: 0.05,
        passed: ok && worst < 0.05,
        detail: detail.join(", "),
    })
}

fn naive_variance() -> Result<Outcome> {
    let cyclic = limit_constant(&SpectrumSpec::three_cyclic())?;
    let zf = SpectrumSpec::four_component();
    let k0 = zf.zero_kappa();
    let zf_constant = limit_constant(&zf)?;
    let mut worst: f64 = 0.0;
    let mut monotone = true;
    let (mut prev_a, mut prev_b) = (0.0, 0.0);
    for l in [10.0f64, 1e2, 1e3, 1e4] {
        let a = naive_odd_variance(l, cyclic.sqrt())?;
        let b = naive_odd_variance_zero_frequency(l, zf_constant.sqrt(), k0)?;
        worst = worst.max(((a - 2.0 * cyclic * l) / (2.0 * cyclic * l)).abs());
        let exact = 2.0 * zf_constant * l.powf(k0) / k0;
        worst = worst.max(((b - exact) / exact).abs());
        monotone &= a > prev_a && b > prev_b;
        prev_a = a;
        prev_b = b;
    }
    Ok(Outcome {
        measured: worst,
        threshold: 1e-14,
        passed: worst <= 1e-14 && monotone,
        detail: format!("max relative error, monotone in L: {monotone}"),
    })
}

fn smoothing_identity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED);
    let mut uniform =
        |lo: f64, hi: f64| lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut worst: f64 = 0.0;
    for _ in 0..25 {
        let x = uniform(-5.0, 5.0);
        let lambda = uniform(-10.0, 10.0);
        let integ = Integrator::new(1e-13);
        let g = |y: f64| (-(y - x) * (y - x)).exp();
        let re = integ.finite(|y| g(y) * (lambda * y).cos(), x - 12.0, x + 12.0, &[])?;
        let im = integ.finite(|y| g(y) * (lambda * y).sin(), x - 12.0, x + 12.0, &[])?;
        let exact = smoothing_factor(lambda, x);
        worst = worst.max((re.value - exact.re).hypot(im.value - exact.im));
    }
    Ok(at_most(
        worst,
        1e-8,
        "max |error| over 25 random (x, lambda)".into(),
    ))
}

fn stationarity() -> Result<Outcome> {
    let cyc = SpectrumSpec::three_cyclic();
    let base = CovarianceQuery::new(0.5, 0.5, 0.5, 0.0)?;
    let even = cov_limit_even_a0_zero(&cyc, 4, &base.shifted(1.0, 0.0)?)?
        / cov_limit_even_a0_zero(&cyc, 4, &base)?;
    let odd_eq = EquationSpec::odd(3, 1)?;
    let q = CovarianceQuery::new(1.0, 0.5, 0.5, 0.0)?;
    let mut worst: f64 = 0.0;
    for spec in [cyc.clone(), SpectrumSpec::four_component()] {
        let r = spec.regime();
        let a = cov_limit_odd_smoothed(&spec, &odd_eq, r, &q)?;
        let b = cov_limit_odd_smoothed(&spec, &odd_eq, r, &q.shifted(1.0, 0.7)?)?;
        worst = worst.max(((b - a) / a).abs());
    }
    let even_gap = (even - 1.0).abs();
    Ok(Outcome {
        measured: worst,
        threshold: 1e-8,
        passed: worst <= 1e-8 && even_gap > 0.1,
        detail: format!("even shift ratio={even:.4} (|1 - ratio| must exceed 0.1)"),
    })
}

fn figure_regimes() -> Result<Outcome> {
    let cyc = SpectrumSpec::three_cyclic();
    let q = CovarianceQuery::new(2.5, 2.5, 1.5, 0.0)?;
    let sweep: Vec<f64> = [2, 4, 6, 8]
        .iter()
        .map(|&m| cov_limit_even_a0_zero(&cyc, m, &q))
        .collect::<Result<_>>()?;
    let ordered = sweep.windows(2).all(|w| w[1] > w[0]);
    let zf = SpectrumSpec::four_component();
    let normalized = |spec: &SpectrumSpec, d: f64| -> Result<f64> {
        let at = |d| cov_limit_even_with_path(spec, 2, &CovarianceQuery::new(1.0, 1.0, d, 0.0)?);
        Ok(at(d)?.0 / at(0.0)?.0)
    };
    let mut margin = f64::INFINITY;
    for d in [1.0, 2.0, 3.0] {
        margin = margin.min(normalized(&zf, d)? - normalized(&cyc, d)?);
    }
    Ok(Outcome {
        measured: margin,
        threshold: 0.0,
        passed: ordered && margin > 0.0,
        detail: format!(
            "m-sweep at t+t'=5, x-x'=1.5: {:?} ordered={ordered}; measured is the smallest \
             gap in normalized spatial covariance (zero-frequency minus cyclic)",
            sweep.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    })
}
