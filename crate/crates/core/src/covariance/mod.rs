//! Theoretical covariances, in closed form and by quadrature, and their Monte-Carlo
//! estimates.

mod empirical;
mod theory;

pub use empirical::{
    empirical_covariance, empirical_covariance_at, sample_covariance, EmpiricalCovariance,
};
pub use theory::{
    cov_field, cov_kind, cov_limit_even_a0_nonzero, cov_limit_even_a0_zero,
    cov_limit_even_quadrature, cov_limit_even_with_path, cov_limit_odd_smoothed, cov_solution,
    Evaluation, GAUSSIAN_CUTOFF, SERIES_ARGUMENT_FLOOR,
};

use crate::error::{Error, Result};

/// The pair `(t, x)`, `(t', x')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceQuery {
    pub t: f64,
    pub t_prime: f64,
    pub x: f64,
    pub x_prime: f64,
}

impl CovarianceQuery {
    pub fn new(t: f64, t_prime: f64, x: f64, x_prime: f64) -> Result<Self> {
        if !(t > 0.0 && t_prime > 0.0) || !t.is_finite() || !t_prime.is_finite() {
            return Err(Error::Domain(format!(
                "times must be positive, got {t} and {t_prime}"
            )));
        }
        if !x.is_finite() || !x_prime.is_finite() {
            return Err(Error::Domain("positions must be finite".into()));
        }
        Ok(CovarianceQuery {
            t,
            t_prime,
            x,
            x_prime,
        })
    }

    /// `t + t'`.
    pub fn time_sum(&self) -> f64 {
        self.t + self.t_prime
    }

    /// `t - t'`.
    pub fn time_lag(&self) -> f64 {
        self.t - self.t_prime
    }

    /// `x - x'`.
    pub fn lag(&self) -> f64 {
        self.x - self.x_prime
    }

    /// Both points shifted by `h` in time and `c` in space.
    pub fn shifted(&self, h: f64, c: f64) -> Result<Self> {
        CovarianceQuery::new(self.t + h, self.t_prime + h, self.x + c, self.x_prime + c)
    }

    /// The primed and unprimed points exchanged.
    pub fn swapped(&self) -> Self {
        CovarianceQuery {
            t: self.t_prime,
            t_prime: self.t,
            x: self.x_prime,
            x_prime: self.x,
        }
    }
}
