use super::SpectralGrid;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use std::f64::consts::PI;

/// Gaussian white-noise increments `W_j` on the cells of a [`SpectralGrid`].
///
/// Only `j = 0..N` is stored. `W_{-j} = conj(W_j)` is implied and `W_0` is real. The
/// leftmost node `-N` has no partner in the stored half, so its increment is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDraw {
    increments: Vec<Complex64>,
    delta: f64,
    seed: u64,
    replicate: u64,
}

impl NoiseDraw {
    /// All increments zero.
    pub fn zeros(grid: &SpectralGrid) -> Self {
        NoiseDraw {
            increments: vec![Complex64::new(0.0, 0.0); grid.half_count()],
            delta: grid.delta(),
            seed: 0,
            replicate: 0,
        }
    }

    /// Increments `W_0, ..., W_{N-1}`; the imaginary part of `W_0` is dropped.
    pub fn from_increments(grid: &SpectralGrid, mut increments: Vec<Complex64>) -> Result<Self> {
        if increments.len() != grid.half_count() {
            return Err(Error::GridMismatch(format!(
                "{} increments for a grid with N = {}",
                increments.len(),
                grid.half_count()
            )));
        }
        increments[0].im = 0.0;
        Ok(NoiseDraw {
            increments,
            delta: grid.delta(),
            seed: 0,
            replicate: 0,
        })
    }

    /// `W_j` for `-N ≤ j < N`.
    pub fn increment(&self, j: i64) -> Complex64 {
        let n = self.increments.len() as i64;
        assert!(j >= -n && j < n, "node {j} outside [-{n}, {n})");
        if j == -n {
            Complex64::new(0.0, 0.0)
        } else if j < 0 {
            self.increments[(-j) as usize].conj()
        } else {
            self.increments[j as usize]
        }
    }

    /// `W_0, ..., W_{N-1}`.
    pub fn half(&self) -> &[Complex64] {
        &self.increments
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicate(&self) -> u64 {
        self.replicate
    }

    /// Increment-wise sum of two draws on the same grid.
    pub fn add(&self, other: &NoiseDraw) -> Result<NoiseDraw> {
        if self.increments.len() != other.increments.len() || self.delta != other.delta {
            return Err(Error::GridMismatch("noise draws on different grids".into()));
        }
        Ok(NoiseDraw {
            increments: self
                .increments
                .iter()
                .zip(&other.increments)
                .map(|(a, b)| a + b)
                .collect(),
            delta: self.delta,
            seed: self.seed,
            replicate: self.replicate,
        })
    }
}

/// Draws `W_j = √Δ (G₁ + iG₂)/√2` for `j ≥ 1` and `W_0 = √Δ G`.
///
/// The normals for node `j` come from a ChaCha20 block stream selected by `replicate` and
/// positioned at word `4j`, so each increment depends only on `(seed, replicate, j)`.
pub fn draw_noise(grid: &SpectralGrid, seed: u64, replicate: u64) -> NoiseDraw {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    let sd = grid.delta().sqrt();
    let increments = (0..grid.half_count())
        .map(|j| {
            rng.set_word_pos(4 * j as u128);
            let (g1, g2) = normal_pair(rng.next_u64(), rng.next_u64());
            if j == 0 {
                Complex64::new(sd * g1, 0.0)
            } else {
                Complex64::new(g1, g2) * (sd / 2f64.sqrt())
            }
        })
        .collect();
    NoiseDraw {
        increments,
        delta: grid.delta(),
        seed,
        replicate,
    }
}

/// Box-Muller on two 53-bit uniforms, the first in `(0, 1]`.
fn normal_pair(a: u64, b: u64) -> (f64, f64) {
    let scale = 1.0 / (1u64 << 53) as f64;
    let u1 = ((a >> 11) + 1) as f64 * scale;
    let u2 = (b >> 11) as f64 * scale;
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * PI * u2).sin_cos();
    (r * c, r * s)
}
