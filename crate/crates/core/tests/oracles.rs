//! Library values against an independent composite-Simpson oracle, with the oracle's
//! output frozen so either side drifting is caught.

use hheat::convergence::residual_even_a0_zero;
use hheat::covariance::{
    cov_limit_even_a0_nonzero, cov_limit_even_a0_zero, cov_limit_odd_smoothed, CovarianceQuery,
};
use hheat::field::EquationSpec;
use hheat::spectral::{c2, Regime, SpectralDensity, SpectrumSpec};
use std::f64::consts::PI;

/// `f(0)` for the cyclic preset, computed separately with mpmath at 30 digits.
const CYCLIC_F0: f64 = 0.068_876_096_524_596_329_231_391_886_25;

const FROZEN_EVEN_CYCLIC: f64 = 9.29809782312209648e-2;
const FROZEN_EVEN_ZERO_FREQUENCY: f64 = 2.09270264530127592e-1;
const FROZEN_ODD_CYCLIC: f64 = 1.02199030222977130e-2;
const FROZEN_RESIDUAL: f64 = 1.31816624313044905e-4;

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

#[test]
fn origin_value_matches_high_precision_reference() {
    let f0 = SpectralDensity::new(&SpectrumSpec::three_cyclic())
        .value_at_origin()
        .unwrap();
    assert!(close(f0, CYCLIC_F0, 1e-14));
}

#[test]
fn even_cyclic_limit_covariance() {
    // 2 f(0) ∫₀^L cos(λd) e^{-λ⁴s} dλ at s = 2, d = 1.
    let (s, d) = (2.0, 1.0);
    let oracle = 2.0
        * CYCLIC_F0
        * simpson(
            |l| (l * d).cos() * (-l.powi(4) * s).exp(),
            0.0,
            (40.0f64 / s).powf(0.25),
            20_000,
        );
    assert!(close(oracle, FROZEN_EVEN_CYCLIC, 1e-12));
    let q = CovarianceQuery::new(1.0, 1.0, d, 0.0).unwrap();
    let lib = cov_limit_even_a0_zero(&SpectrumSpec::three_cyclic(), 4, &q).unwrap();
    assert!(close(lib, FROZEN_EVEN_CYCLIC, 1e-10));
}

#[test]
fn even_zero_frequency_limit_covariance() {
    // The substitution λ = u^{1/κ₀} removes the power singularity at the origin.
    let (s, d, k0) = (2.0, 1.0, 0.2);
    let scale = 0.2 * c2(k0).unwrap();
    let oracle = 2.0 * scale / k0
        * simpson(
            |u: f64| {
                let l = u.powf(1.0 / k0);
                (l * d).cos() * (-l.powi(4) * s).exp()
            },
            0.0,
            (40.0f64 / s).powf(0.25 * k0),
            20_000,
        );
    assert!(close(oracle, FROZEN_EVEN_ZERO_FREQUENCY, 1e-12));
    let q = CovarianceQuery::new(1.0, 1.0, d, 0.0).unwrap();
    let lib = cov_limit_even_a0_nonzero(&SpectrumSpec::four_component(), 4, &q).unwrap();
    assert!(close(lib, FROZEN_EVEN_ZERO_FREQUENCY, 1e-10));
}

#[test]
fn odd_smoothed_limit_covariance() {
    let eq = EquationSpec::odd(3, 1).unwrap();
    assert_eq!(eq.phase_sign(), -1.0);
    let (d, lag) = (1.0, 1.0);
    let oracle = CYCLIC_F0 / (4.0 * PI)
        * simpson(
            |l| (l * d - lag * l.powi(3)).cos() * (-0.5 * l * l).exp(),
            -9.0,
            9.0,
            40_000,
        );
    assert!(close(oracle, FROZEN_ODD_CYCLIC, 1e-12));
    let q = CovarianceQuery::new(1.5, 0.5, d, 0.0).unwrap();
    let lib =
        cov_limit_odd_smoothed(&SpectrumSpec::three_cyclic(), &eq, Regime::Cyclic, &q).unwrap();
    assert!(close(lib, FROZEN_ODD_CYCLIC, 1e-10));
}

#[test]
fn even_cyclic_residual_from_the_density() {
    // At ε = 0.1 the singular points w_j/√ε lie beyond the damping cutoff.
    let spec = SpectrumSpec::three_cyclic();
    let dens = SpectralDensity::new(&spec);
    let eps: f64 = 0.1;
    let oracle = 2.0
        * simpson(
            |l| {
                let gap = dens.eval(l * eps.sqrt()).unwrap().sqrt() - CYCLIC_F0.sqrt();
                (-2.0 * l.powi(4)).exp() * gap * gap
            },
            0.0,
            30.0f64.powf(0.25),
            20_000,
        );
    assert!(close(oracle, FROZEN_RESIDUAL, 1e-12));
    let lib = residual_even_a0_zero(&spec, 4, 1.0, eps).unwrap().value;
    assert!(close(lib, FROZEN_RESIDUAL, 1e-8));
}
