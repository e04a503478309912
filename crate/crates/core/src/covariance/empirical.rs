use super::CovarianceQuery;
use crate::error::{Error, Result};
use crate::field::FieldRealization;

/// Monte-Carlo covariance estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalCovariance {
    pub estimate: f64,
    pub standard_error: f64,
    pub replicates: usize,
    /// Set when the standard error vanishes, e.g. for an ensemble of constant fields.
    pub degenerate: bool,
}

impl EmpiricalCovariance {
    /// `|estimate - theory| ≤ k · standard_error`.
    pub fn within(&self, theory: f64, k: f64) -> bool {
        (self.estimate - theory).abs() <= k * self.standard_error
    }
}

fn lattice_index(grid: &[f64], v: f64, what: &str) -> Result<usize> {
    grid.iter()
        .position(|&g| (g - v).abs() <= 1e-12 * (1.0 + v.abs()))
        .ok_or_else(|| Error::GridMismatch(format!("{what} = {v} is not on the lattice")))
}

/// Sample covariance between `(t, x)` and `(t', x')` across `ensemble`.
pub fn empirical_covariance(
    ensemble: &[FieldRealization],
    q: &CovarianceQuery,
) -> Result<EmpiricalCovariance> {
    let first = ensemble
        .first()
        .ok_or_else(|| Error::GridMismatch("empty ensemble".into()))?;
    let a = (
        lattice_index(&first.t_grid, q.t, "t")?,
        lattice_index(&first.x_grid, q.x, "x")?,
    );
    let b = (
        lattice_index(&first.t_grid, q.t_prime, "t'")?,
        lattice_index(&first.x_grid, q.x_prime, "x'")?,
    );
    empirical_covariance_at(ensemble, a, b)
}

/// Sample covariance between lattice points `a = (it, ix)` and `b`.
///
/// The estimate is the unbiased sample covariance. Its standard error is
/// `√((mean(p²) - ĉ²)/R)` with `p = (a - ā)(b - b̄)`.
pub fn empirical_covariance_at(
    ensemble: &[FieldRealization],
    a: (usize, usize),
    b: (usize, usize),
) -> Result<EmpiricalCovariance> {
    let r = ensemble.len();
    if r < 2 {
        return Err(Error::GridMismatch(format!(
            "covariance needs at least 2 replicates, got {r}"
        )));
    }
    let first = &ensemble[0];
    for f in ensemble {
        let same = f.t_grid == first.t_grid
            && f.x_grid == first.x_grid
            && f.provenance.kind == first.provenance.kind
            && f.provenance.grid == first.provenance.grid
            && f.provenance.equation == first.provenance.equation
            && f.provenance.spectrum == first.provenance.spectrum;
        if !same {
            return Err(Error::GridMismatch(
                "realizations differ in lattice or provenance".into(),
            ));
        }
    }
    let (nt, nx) = (first.t_grid.len(), first.x_grid.len());
    if a.0 >= nt || b.0 >= nt || a.1 >= nx || b.1 >= nx {
        return Err(Error::GridMismatch("lattice index out of range".into()));
    }
    let va: Vec<f64> = ensemble.iter().map(|f| f.value(a.0, a.1)).collect();
    let vb: Vec<f64> = ensemble.iter().map(|f| f.value(b.0, b.1)).collect();
    Ok(sample_covariance(&va, &vb))
}

/// Unbiased sample covariance of paired samples with its standard error.
pub fn sample_covariance(a: &[f64], b: &[f64]) -> EmpiricalCovariance {
    let r = a.len();
    let rf = r as f64;
    let ma = a.iter().sum::<f64>() / rf;
    let mb = b.iter().sum::<f64>() / rf;
    let products: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    let estimate = products.iter().sum::<f64>() / (rf - 1.0);
    let second = products.iter().map(|p| p * p).sum::<f64>() / rf;
    let standard_error = ((second - estimate * estimate).max(0.0) / rf).sqrt();
    EmpiricalCovariance {
        estimate,
        standard_error,
        replicates: r,
        degenerate: standard_error == 0.0,
    }
}
