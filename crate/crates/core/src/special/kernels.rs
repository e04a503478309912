use crate::error::{Error, Result};
use crate::numerics::{Abscissa, DecayHint, Integrator, OscillatoryIntegrand};
use std::f64::consts::PI;

const KERNEL_TOL: f64 = 1e-10;

/// Fundamental-solution kernel `g_m`.
///
/// For even `m`, `g_m(x) = (1/π) ∫₀^∞ cos(xα) e^{-α^m/m} dα`, the symmetric signed stable
/// density with `∫ g_m = 1`. For odd `m`,
/// `g_m(x) = (1/π) ∫₀^∞ cos(αx + s α^m/m) dα` with `s = μ(-1)^{(m-1)/2}`, which equals
/// `Ai_m(s x)`. `mu` is ignored for even `m` and must be `±1` for odd `m`.
pub fn stable_signed_kernel(m: u32, mu: i32, x: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidEquation(format!("kernel order {m} below 2")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("kernel argument {x} is not finite")));
    }
    if m % 2 == 0 {
        let order = m as i32;
        let r = Integrator::new(KERNEL_TOL).halfline(
            |a: f64| (x * a).cos() * (-a.powi(order) / m as f64).exp(),
            DecayHint::Gaussian,
        )?;
        return Ok(r.value / PI);
    }
    if mu != 1 && mu != -1 {
        return Err(Error::InvalidEquation(format!(
            "sign mu must be +1 or -1, got {mu}"
        )));
    }
    let s = odd_phase_sign(m, mu);
    airy_m(m, s * x)
}

/// `μ(-1)^{(m-1)/2}` for odd `m`.
pub(crate) fn odd_phase_sign(m: u32, mu: i32) -> f64 {
    let flip = if ((m - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    mu as f64 * flip
}

/// Generalized Airy function `Ai_m(x) = (1/π) ∫₀^∞ cos(αx + α^m/m) dα` for odd `m ≥ 3`.
///
/// `Ai_3` is the classical Airy function.
pub fn airy_m(m: u32, x: f64) -> Result<f64> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidEquation(format!(
            "airy_m needs odd m >= 3, got {m}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("airy_m argument {x} is not finite")));
    }
    let order = m as i32;
    let mf = m as f64;
    // The phase is increasing once α^{m-1} > -x.
    let monotone_from = if x < 0.0 {
        (-x).powf(1.0 / (mf - 1.0)) * 1.0001
    } else {
        0.0
    };
    let integrand = OscillatoryIntegrand {
        amplitude: |_: Abscissa| 1.0,
        phase: move |a: f64| a * x + a.powi(order) / mf,
        phase_rate: move |a: f64| x + a.powi(order - 1),
        monotone_from,
        marks: vec![],
    };
    let r = Integrator::new(KERNEL_TOL).oscillatory(&integrand)?;
    Ok(r.value / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{bessel_k, gamma};

    fn airy_from_bessel(x: f64) -> f64 {
        (x / 3.0).sqrt() * bessel_k(1.0 / 3.0, 2.0 / 3.0 * x.powf(1.5)).unwrap() / PI
    }

    #[test]
    fn order_two_is_gaussian() {
        for x in [0.0f64, 0.7, -2.3, 5.0] {
            let exact = (-x * x / 2.0).exp() / (2.0 * PI).sqrt();
            assert!((stable_signed_kernel(2, 1, x).unwrap() - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn order_four_at_origin() {
        let exact = 4f64.powf(-0.75) * gamma(0.25).unwrap() / PI;
        assert!((stable_signed_kernel(4, 1, 0.0).unwrap() - exact).abs() < 1e-9);
    }

    #[test]
    fn even_kernels_are_even() {
        for m in [2, 4, 6] {
            for x in [0.3, 1.7, 4.1] {
                let a = stable_signed_kernel(m, 1, x).unwrap();
                let b = stable_signed_kernel(m, 1, -x).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn cubic_airy_matches_bessel_form() {
        for x in [0.2, 1.0, 2.5, 4.0] {
            let v = airy_m(3, x).unwrap();
            assert!((v - airy_from_bessel(x)).abs() < 1e-8, "x = {x}: {v}");
        }
        // Ai(1), Ai(-5) to 18 digits.
        assert!((airy_m(3, 1.0).unwrap() - 0.135_292_416_312_881_415).abs() < 1e-9);
        assert!((airy_m(3, -5.0).unwrap() - 0.350_761_009_024_114_320).abs() < 1e-8);
    }

    #[test]
    fn cubic_airy_decays_and_oscillates() {
        assert!(airy_m(3, 20.0).unwrap().abs() < 1e-8);
        let env = 1.2 * 5f64.powf(-0.25) / PI.sqrt();
        assert!(airy_m(3, -5.0).unwrap().abs() <= env);
    }

    #[test]
    fn odd_kernel_with_negative_mu_is_airy() {
        // m = 3, μ = -1: s = (-1)(-1) = 1.
        for x in [-3.0, -0.5, 0.0, 1.5] {
            let k = stable_signed_kernel(3, -1, x).unwrap();
            assert!((k - airy_m(3, x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(airy_m(4, 0.0).is_err());
        assert!(stable_signed_kernel(1, 1, 0.0).is_err());
        assert!(stable_signed_kernel(3, 0, 0.0).is_err());
    }
}
