//! Gamma, modified Bessel K, the Fox-Wright function and the fundamental-solution kernels.

mod bessel;
mod fox_wright;
mod gamma;
mod kernels;

pub(crate) use bessel::bessel_k_unchecked;
pub use bessel::{bessel_k, bessel_k_scaled};
pub use fox_wright::{fox_wright_11, fox_wright_11_series, FoxWrightParams, SeriesValue};
pub use gamma::{gamma, ln_gamma};
pub(crate) use kernels::odd_phase_sign;
pub use kernels::{airy_m, stable_signed_kernel};
