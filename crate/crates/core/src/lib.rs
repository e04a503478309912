pub mod acceptance;
pub mod convergence;
pub mod covariance;
pub mod error;
pub mod export;
pub mod field;
pub mod numerics;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    pub mod spectra {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/covariance.md")]
    pub mod covariance {}
    #[doc = include_str!("../../../book/src/convergence.md")]
    pub mod convergence {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
