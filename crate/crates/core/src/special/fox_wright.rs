use super::gamma::{gamma_unchecked, ln_gamma_unchecked};
use crate::error::{Error, Result};
use twofloat::TwoFloat;

/// Parameters `((α, A), (β, B))` of `₁Ψ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoxWrightParams {
    pub alpha: f64,
    pub a: f64,
    pub beta: f64,
    pub b: f64,
}

impl FoxWrightParams {
    /// Checks `A > 0`, `B > 0` and `1 + B - A > 0`.
    pub fn new(alpha: f64, a: f64, beta: f64, b: f64) -> Result<Self> {
        let p = FoxWrightParams { alpha, a, beta, b };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.alpha, self.a, self.beta, self.b]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.a > 0.0) || !(self.b > 0.0) || !(1.0 + self.b - self.a > 0.0) {
            return Err(Error::SeriesDivergence(format!(
                "1Psi1 needs A > 0, B > 0, 1 + B - A > 0; got A = {}, B = {}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// A series value with its rounding-error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub error_estimate: f64,
    pub terms: usize,
}

/// Relative accuracy assumed for one Gamma ratio in double precision.
const GAMMA_RATIO_ERROR: f64 = 1e-14;
const MAX_TERMS: usize = 100_000;

/// `₁Ψ₁[(α, A); (β, B); z] = Σ Γ(α + An) / Γ(β + Bn) · zⁿ / n!`.
///
/// Fails with [`Error::PrecisionLoss`] when cancellation between terms leaves less than
/// ten correct digits.
pub fn fox_wright_11(p: FoxWrightParams, z: f64) -> Result<f64> {
    let s = fox_wright_11_series(p, z)?;
    if s.error_estimate > 1e-10 * s.value.abs() && s.error_estimate > 1e-15 {
        return Err(Error::PrecisionLoss {
            value: s.value,
            error_estimate: s.error_estimate,
        });
    }
    Ok(s.value)
}

/// The raw series sum with its error bound, without the precision check.
///
/// Terms are accumulated in double-double, and `zⁿ/n!` is carried the same way. The error
/// bound is `Σ |tₙ|` times the Gamma-ratio accuracy, or zero when `(α, A) = (β, B)`.
pub fn fox_wright_11_series(p: FoxWrightParams, z: f64) -> Result<SeriesValue> {
    p.validate()?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("1Psi1 argument {z} is not finite")));
    }
    let exact_ratio = p.alpha == p.beta && p.a == p.b;
    let mut power = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(0.0);
    let mut abs_sum = 0.0f64;
    let mut previous = f64::INFINITY;

    for n in 0..MAX_TERMS {
        if n > 0 {
            power = power * z / n as f64;
        }
        let term = if exact_ratio {
            power
        } else {
            power * coefficient(p, n)?
        };
        let magnitude = term.hi().abs();
        sum += term;
        abs_sum += magnitude;

        if z == 0.0 || (magnitude <= previous && magnitude <= 1e-20 * sum.hi().abs()) {
            return Ok(finish(sum, abs_sum, exact_ratio, n + 1));
        }
        if magnitude == 0.0 && previous == 0.0 {
            return Ok(finish(sum, abs_sum, exact_ratio, n + 1));
        }
        previous = magnitude;
    }
    Err(Error::SeriesDivergence(format!(
        "1Psi1 series at z = {z} did not settle in {MAX_TERMS} terms"
    )))
}

fn finish(sum: TwoFloat, abs_sum: f64, exact_ratio: bool, terms: usize) -> SeriesValue {
    let ratio_error = if exact_ratio { 0.0 } else { GAMMA_RATIO_ERROR };
    SeriesValue {
        value: sum.hi() + sum.lo(),
        error_estimate: abs_sum * (ratio_error + 1e-30),
        terms,
    }
}

/// `Γ(α + An) / Γ(β + Bn)`, with `1/Γ` vanishing at its poles.
fn coefficient(p: FoxWrightParams, n: usize) -> Result<f64> {
    let top = p.alpha + p.a * n as f64;
    let bottom = p.beta + p.b * n as f64;
    if top <= 0.0 && top == top.floor() {
        return Err(Error::Pole(top));
    }
    if bottom <= 0.0 && bottom == bottom.floor() {
        return Ok(0.0);
    }
    if top < 170.0 && bottom < 170.0 {
        return Ok(gamma_unchecked(top) / gamma_unchecked(bottom));
    }
    let sign = gamma_sign(top) * gamma_sign(bottom);
    Ok(sign * (ln_gamma_unchecked(top) - ln_gamma_unchecked(bottom)).exp())
}

fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Σ Γ(1/4 + n/2) / Γ(1/2 + n) · zⁿ / n! in double-double from Gamma recurrences.
    fn quarter_half_oracle(z: f64, terms: usize) -> f64 {
        let g14 = TwoFloat::new_add(3.625609908221908, 1.0555907647086408e-16);
        let g34 = TwoFloat::new_add(1.2254167024651776, 2.151319998296141e-18);
        let sqrt_pi = TwoFloat::new_add(1.772453850905516, -7.666586499825799e-17);
        let mut sum = TwoFloat::from(0.0);
        let mut power = TwoFloat::from(1.0);
        // Γ(1/4 + n/2) / Γ(1/2 + n), stepped by two within each parity.
        let mut ratio = [g14 / sqrt_pi, g34 / (sqrt_pi * 0.5)];
        for n in 0..terms {
            if n > 0 {
                power = power * z / n as f64;
            }
            if n >= 2 {
                let k = n as f64;
                ratio[n % 2] = ratio[n % 2] * (0.25 + (k - 2.0) / 2.0) / ((k - 1.5) * (k - 0.5));
            }
            sum += power * ratio[n % 2];
        }
        sum.hi() + sum.lo()
    }

    #[test]
    fn zero_argument_is_gamma_ratio() {
        let p = FoxWrightParams::new(0.3, 0.7, 1.1, 0.4).unwrap();
        let expected = gamma_unchecked(0.3) / gamma_unchecked(1.1);
        assert!((fox_wright_11(p, 0.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn equal_parameters_give_exponential() {
        let p = FoxWrightParams::new(0.5, 1.0, 0.5, 1.0).unwrap();
        assert!((fox_wright_11(p, -0.7).unwrap() - (-0.7f64).exp()).abs() < 1e-16);
        // Terms up to e^{30} cancel down to e^{-30}, past double-double relative reach.
        let far = fox_wright_11(p, -30.0).unwrap();
        assert!((far - (-30.0f64).exp()).abs() < 1e-20, "{far:e}");
        let mid = fox_wright_11(p, -15.0).unwrap();
        assert!(((mid - (-15.0f64).exp()) / (-15.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn matches_double_double_recurrence() {
        let p = FoxWrightParams::new(0.25, 0.5, 0.5, 1.0).unwrap();
        let v = fox_wright_11(p, -1.0).unwrap();
        let oracle = quarter_half_oracle(-1.0, 200);
        assert!((v - oracle).abs() < 1e-13 * oracle.abs(), "{v} vs {oracle}");
        assert!((oracle - 0.961_441_776_940_088_2).abs() < 1e-15);
        for z in [-10.0, -4.0, 2.5] {
            let v = fox_wright_11(p, z).unwrap();
            let o = quarter_half_oracle(z, 400);
            assert!((v - o).abs() < 1e-10 * o.abs(), "z = {z}");
        }
    }

    #[test]
    fn divergent_parameters_are_rejected() {
        assert!(matches!(
            FoxWrightParams::new(0.5, 3.0, 0.5, 1.0),
            Err(Error::SeriesDivergence(_))
        ));
        assert!(FoxWrightParams::new(0.5, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn heavy_cancellation_is_reported() {
        let p = FoxWrightParams::new(0.25, 0.5, 0.5, 1.0).unwrap();
        assert!(matches!(
            fox_wright_11(p, -400.0),
            Err(Error::PrecisionLoss { .. })
        ));
    }
}
