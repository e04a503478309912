//! Spectral sums `Σ_j a_j D_j(t) e^{iλ_j x} W_j`.

use super::weight::SpectralWeight;
use super::{EquationSpec, NoiseDraw, Parity, SpectralGrid};
use crate::error::{Error, Result};
use crate::numerics::{Abscissa, Integrator};
use num_complex::Complex64;

/// Amplitudes on the non-negative nodes plus the time factor.
#[derive(Debug, Clone)]
pub(crate) struct Synthesizer {
    grid: SpectralGrid,
    amplitudes: Vec<f64>,
    order: u32,
    /// `None` for decay `e^{-λ^m t}`, `Some(s)` for the phase `e^{isλ^m t}`.
    dispersion: Option<f64>,
}

/// Precomputed `e^{iλ_j x}` and `a_j D_j(t)` for fixed query grids.
pub(crate) struct Tables {
    len: usize,
    times: usize,
    positions: usize,
    phase_re: Vec<f64>,
    phase_im: Vec<f64>,
    factor: Vec<Complex64>,
}

impl Synthesizer {
    /// Amplitude `√w(λ_j)` at each node, except cells `[λ_j - Δ/2, λ_j + Δ/2]` holding a
    /// singularity of `w`, which get `√(∫_cell w / Δ)`.
    pub fn new(grid: &SpectralGrid, weight: &SpectralWeight, eq: &EquationSpec) -> Result<Self> {
        let delta = grid.delta();
        let marks = weight.marks();
        let cell = Integrator::new(1e-300).with_rel_tol(1e-10);
        let mut amplitudes = Vec::with_capacity(grid.half_count());
        for j in 0..grid.half_count() {
            let node = grid.node(j as i64);
            let (lo, hi) = (node - 0.5 * delta, node + 0.5 * delta);
            let singular = marks
                .iter()
                .any(|m| m.location() >= lo && m.location() <= hi);
            let w = if singular {
                cell.finite_anchored(|x| weight.eval(x), lo, hi, &marks)?
                    .value
                    / delta
            } else {
                weight.eval(Abscissa::at(node))
            };
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::SingularPoint {
                    lambda: node,
                    location: node,
                });
            }
            amplitudes.push(w.sqrt());
        }
        let dispersion = match eq.parity() {
            Parity::Even => None,
            Parity::Odd => Some(eq.phase_sign()),
        };
        Ok(Synthesizer {
            grid: grid.clone(),
            amplitudes,
            order: eq.order(),
            dispersion,
        })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    fn time_factor(&self, lambda: f64, t: f64) -> Complex64 {
        let p = lambda.powi(self.order as i32) * t;
        match self.dispersion {
            None => Complex64::new((-p).exp(), 0.0),
            Some(s) => {
                let (sin, cos) = (s * p).sin_cos();
                Complex64::new(cos, sin)
            }
        }
    }

    pub fn tables(&self, t_grid: &[f64], x_grid: &[f64]) -> Tables {
        let n = self.grid.half_count();
        let mut phase_re = Vec::with_capacity(n * x_grid.len());
        let mut phase_im = Vec::with_capacity(n * x_grid.len());
        for &x in x_grid {
            for j in 0..n {
                let (s, c) = (self.grid.node(j as i64) * x).sin_cos();
                phase_re.push(c);
                phase_im.push(s);
            }
        }
        let mut factor = Vec::with_capacity(n * t_grid.len());
        for &t in t_grid {
            for j in 0..n {
                let lambda = self.grid.node(j as i64);
                factor.push(self.amplitudes[j] * self.time_factor(lambda, t));
            }
        }
        Tables {
            len: n,
            times: t_grid.len(),
            positions: x_grid.len(),
            phase_re,
            phase_im,
            factor,
        }
    }

    /// Field values, time-major, from the Hermitian pairing of `±j`.
    pub fn evaluate(&self, tables: &Tables, noise: &NoiseDraw) -> Vec<f64> {
        let n = tables.len;
        let w = noise.half();
        let mut out = Vec::with_capacity(tables.times * tables.positions);
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for it in 0..tables.times {
            let row = &tables.factor[it * n..(it + 1) * n];
            for j in 0..n {
                v[j] = row[j] * w[j];
            }
            for ix in 0..tables.positions {
                let re = &tables.phase_re[ix * n..(ix + 1) * n];
                let im = &tables.phase_im[ix * n..(ix + 1) * n];
                let mut acc = 0.0;
                for j in 1..n {
                    acc += v[j].re * re[j] - v[j].im * im[j];
                }
                out.push(v[0].re + 2.0 * acc);
            }
        }
        out
    }

    /// `Σ_{j=-N}^{N-1} a_j D_j(t) e^{iλ_j x} W_j` without pairing; real up to rounding.
    pub fn unpaired_sum(&self, noise: &NoiseDraw, t: f64, x: f64) -> Complex64 {
        let n = self.grid.half_count() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in -n..n {
            let lambda = self.grid.node(j);
            let a = self.amplitudes[j.unsigned_abs().min(n as u64 - 1) as usize];
            let a = if j == -n { 0.0 } else { a };
            let (s, c) = (lambda * x).sin_cos();
            acc += a * self.time_factor(lambda, t) * Complex64::new(c, s) * noise.increment(j);
        }
        acc
    }
}
