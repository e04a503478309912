//! Spectral simulation of the solution fields and their scaling limits.
//!
//! Every field here is a stochastic integral `∫ a(λ) D(t, λ) e^{iλx} W(dλ)` against a
//! Hermitian white-noise measure, discretized on the nodes `λ_j = jΔ`, `-N ≤ j < N`.
//! The time factor `D` is `e^{-λ^m t}` for even `m` and `e^{isλ^m t}` for odd `m`, with
//! `s = μ(-1)^{(m-1)/2}`. The fields differ only in `|a(λ)|²`:
//!
//! | field | `|a(λ)|²` |
//! |---|---|
//! | solution `u` | `f(λ)` |
//! | rescaled `U_ε` (even `m`) | `ε^{1/2-2e} f(λ√ε)` |
//! | even limit | `f(0)`, or `A₀c₂(κ₀)|λ|^{κ₀-1}` when `A₀ > 0` |
//! | kernel average (odd `m`) | `ε^{1/2-2e} f(λ√ε) e^{-λ²/2}/(4π)` |
//! | smoothed odd limit | even-limit weight times `e^{-λ²/2}/(4π)` |
//!
//! where `e = 1/4` if `A₀ = 0` and `e = κ₀/4` otherwise.

mod mean;
mod noise;
mod synth;
pub(crate) mod weight;

pub use mean::{mean_convolution, smoothing_factor, MeanProfile};
pub use noise::{draw_noise, NoiseDraw};

use crate::error::{Error, Result};
use crate::numerics::Integrator;
use crate::spectral::SpectrumSpec;
use num_complex::Complex64;
use rayon::prelude::*;
use synth::{Synthesizer, Tables};
use weight::SpectralWeight;

/// Default Monte-Carlo ensemble size.
pub const DEFAULT_REPLICATES: usize = 2000;

/// For even `m` the grid must satisfy `e^{-(NΔ)^m t_min} < EVEN_CUTOFF_DAMPING`.
pub const EVEN_CUTOFF_DAMPING: f64 = 1e-8;

/// For odd `m` the variance beyond `NΔ` must stay below this fraction of the total.
pub const ODD_TRUNCATED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// The equation `∂u/∂t = (-1)^{m/2+1} ∂^m u/∂x^m` (even `m`) or `∂u/∂t = μ ∂^m u/∂x^m`
/// (odd `m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EquationSpec {
    order: u32,
    mu: i32,
}

impl EquationSpec {
    /// `mu` must be `±1`; it only matters for odd `order`.
    pub fn new(order: u32, mu: i32) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidEquation(format!("order {order} below 2")));
        }
        if mu != 1 && mu != -1 {
            return Err(Error::InvalidEquation(format!(
                "mu must be +1 or -1, got {mu}"
            )));
        }
        Ok(EquationSpec { order, mu })
    }

    pub fn even(order: u32) -> Result<Self> {
        let eq = EquationSpec::new(order, 1)?;
        if eq.parity() != Parity::Even {
            return Err(Error::InvalidEquation(format!("order {order} is odd")));
        }
        Ok(eq)
    }

    pub fn odd(order: u32, mu: i32) -> Result<Self> {
        let eq = EquationSpec::new(order, mu)?;
        if eq.parity() != Parity::Odd {
            return Err(Error::InvalidEquation(format!("order {order} is even")));
        }
        Ok(eq)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn mu(&self) -> i32 {
        self.mu
    }

    pub fn parity(&self) -> Parity {
        if self.order % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `s = μ(-1)^{(m-1)/2}` in the odd-order phase `e^{isλ^m t}`; zero for even `m`.
    pub fn phase_sign(&self) -> f64 {
        match self.parity() {
            Parity::Even => 0.0,
            Parity::Odd => crate::special::odd_phase_sign(self.order, self.mu),
        }
    }

    fn require(&self, parity: Parity, what: &str) -> Result<()> {
        if self.parity() != parity {
            return Err(Error::RegimeMismatch(format!(
                "{what} needs an {} order, got m = {}",
                if parity == Parity::Even {
                    "even"
                } else {
                    "odd"
                },
                self.order
            )));
        }
        Ok(())
    }
}

/// Frequency nodes `λ_j = jΔ`, `j = -N, ..., N-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    delta: f64,
    half_count: usize,
}

impl SpectralGrid {
    pub fn new(delta: f64, half_count: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidGrid(format!("step {delta} must be positive")));
        }
        if half_count < 2 {
            return Err(Error::InvalidGrid(format!(
                "half count {half_count} must be at least 2"
            )));
        }
        Ok(SpectralGrid { delta, half_count })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    /// `NΔ`.
    pub fn cutoff(&self) -> f64 {
        self.half_count as f64 * self.delta
    }

    pub fn node(&self, j: i64) -> f64 {
        j as f64 * self.delta
    }

    pub fn nodes(&self) -> Vec<f64> {
        let n = self.half_count as i64;
        (-n..n).map(|j| self.node(j)).collect()
    }
}

/// Which field a [`FieldModel`] realizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    /// The solution `u(t, x)` started from the stationary initial condition.
    Solution,
    /// `U_ε(t, x) = ε^{-e} u(t/ε^{m/2}, x/√ε)` for even `m`.
    Rescaled { eps: f64 },
    /// The `ε → 0` limit of `U_ε` for even `m`.
    LimitEven,
    /// The Gaussian-kernel average of the rescaled odd-order solution.
    KernelAverage { eps: f64 },
    /// The `ε → 0` limit of the kernel average for odd `m`.
    LimitOddSmoothed,
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::Solution => "solution",
            FieldKind::Rescaled { .. } => "rescaled",
            FieldKind::LimitEven => "limit",
            FieldKind::KernelAverage { .. } => "smoothed",
            FieldKind::LimitOddSmoothed => "smoothed-limit",
        }
    }
}

/// Inputs that fix a realization up to its noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub kind: FieldKind,
    pub spectrum: SpectrumSpec,
    pub equation: EquationSpec,
    pub grid: SpectralGrid,
    pub seed: u64,
    pub replicate: u64,
}

/// Field values on a `(t, x)` lattice, stored time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRealization {
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl FieldRealization {
    pub fn value(&self, it: usize, ix: usize) -> f64 {
        self.values[it * self.x_grid.len() + ix]
    }

    /// Largest `|value|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A field ready to be sampled: spectrum, equation, grid and amplitudes.
#[derive(Debug, Clone)]
pub struct FieldModel {
    kind: FieldKind,
    spectrum: SpectrumSpec,
    equation: EquationSpec,
    grid: SpectralGrid,
    weight: SpectralWeight,
    synth: Synthesizer,
}

impl FieldModel {
    pub fn new(
        kind: FieldKind,
        spectrum: &SpectrumSpec,
        equation: EquationSpec,
        grid: SpectralGrid,
    ) -> Result<Self> {
        let weight = match kind {
            FieldKind::Solution => SpectralWeight::solution(spectrum),
            FieldKind::Rescaled { eps } => {
                equation.require(Parity::Even, "the rescaled field")?;
                check_eps(eps)?;
                SpectralWeight::rescaled(spectrum, eps)
            }
            FieldKind::LimitEven => {
                equation.require(Parity::Even, "the even-order limit field")?;
                SpectralWeight::limit(spectrum)?
            }
            FieldKind::KernelAverage { eps } => {
                equation.require(Parity::Odd, "kernel averaging")?;
                check_eps(eps)?;
                SpectralWeight::rescaled(spectrum, eps).smoothed()
            }
            FieldKind::LimitOddSmoothed => {
                equation.require(Parity::Odd, "the smoothed odd-order limit field")?;
                SpectralWeight::limit(spectrum)?.smoothed()
            }
        };
        if equation.parity() == Parity::Odd {
            check_odd_truncation(&weight, &grid)?;
        }
        let synth = Synthesizer::new(&grid, &weight, &equation)?;
        Ok(FieldModel {
            kind,
            spectrum: spectrum.clone(),
            equation,
            grid,
            weight,
            synth,
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn equation(&self) -> &EquationSpec {
        &self.equation
    }

    pub fn spectrum(&self) -> &SpectrumSpec {
        &self.spectrum
    }

    pub(crate) fn weight(&self) -> &SpectralWeight {
        &self.weight
    }

    /// Node amplitudes `a_0, ..., a_{N-1}` after the singular-cell rule.
    pub fn amplitudes(&self) -> &[f64] {
        self.synth.amplitudes()
    }

    fn check_lattice(&self, t_grid: &[f64], x_grid: &[f64]) -> Result<()> {
        if t_grid.is_empty() || x_grid.is_empty() {
            return Err(Error::InvalidGrid("empty query lattice".into()));
        }
        if let Some(v) = t_grid.iter().chain(x_grid).find(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "lattice value {v} is not finite"
            )));
        }
        if self.equation.parity() == Parity::Even {
            let t_min = t_grid.iter().cloned().fold(f64::INFINITY, f64::min);
            if !(t_min > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "even-order fields need t > 0, got {t_min}"
                )));
            }
            let exponent = self.grid.cutoff().powi(self.equation.order as i32) * t_min;
            if (-exponent).exp() >= EVEN_CUTOFF_DAMPING {
                return Err(Error::InvalidGrid(format!(
                    "cutoff N*delta = {} leaves damping e^-{exponent:.3} >= {EVEN_CUTOFF_DAMPING:e} at t = {t_min}",
                    self.grid.cutoff()
                )));
            }
        }
        Ok(())
    }

    fn provenance(&self, seed: u64, replicate: u64) -> Provenance {
        Provenance {
            kind: self.kind,
            spectrum: self.spectrum.clone(),
            equation: self.equation,
            grid: self.grid,
            seed,
            replicate,
        }
    }

    /// One realization for the given noise.
    pub fn realize(
        &self,
        noise: &NoiseDraw,
        t_grid: &[f64],
        x_grid: &[f64],
    ) -> Result<FieldRealization> {
        self.check_lattice(t_grid, x_grid)?;
        self.check_noise(noise)?;
        let tables = self.synth.tables(t_grid, x_grid);
        Ok(self.assemble(&tables, noise, t_grid, x_grid))
    }

    fn check_noise(&self, noise: &NoiseDraw) -> Result<()> {
        if noise.half().len() != self.grid.half_count || noise.delta() != self.grid.delta {
            return Err(Error::GridMismatch(format!(
                "noise has N = {} and delta = {}, grid has N = {} and delta = {}",
                noise.half().len(),
                noise.delta(),
                self.grid.half_count,
                self.grid.delta
            )));
        }
        Ok(())
    }

    fn assemble(
        &self,
        tables: &Tables,
        noise: &NoiseDraw,
        t_grid: &[f64],
        x_grid: &[f64],
    ) -> FieldRealization {
        FieldRealization {
            t_grid: t_grid.to_vec(),
            x_grid: x_grid.to_vec(),
            values: self.synth.evaluate(tables, noise),
            provenance: self.provenance(noise.seed(), noise.replicate()),
        }
    }

    /// Replicates `0..replicates` drawn from `seed`, in replicate order.
    ///
    /// Work is spread over the current rayon pool; the result does not depend on its size.
    pub fn ensemble(
        &self,
        seed: u64,
        replicates: usize,
        t_grid: &[f64],
        x_grid: &[f64],
    ) -> Result<Vec<FieldRealization>> {
        self.check_lattice(t_grid, x_grid)?;
        let tables = self.synth.tables(t_grid, x_grid);
        Ok((0..replicates as u64)
            .into_par_iter()
            .map(|r| {
                let noise = draw_noise(&self.grid, seed, r);
                self.assemble(&tables, &noise, t_grid, x_grid)
            })
            .collect())
    }

    /// The unpaired sum over all `2N` nodes at one point; its imaginary part is rounding.
    pub fn unpaired_value(&self, noise: &NoiseDraw, t: f64, x: f64) -> Result<Complex64> {
        self.check_noise(noise)?;
        Ok(self.synth.unpaired_sum(noise, t, x))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!(
            "scaling parameter {eps} outside (0, 1]"
        )));
    }
    Ok(())
}

/// Share of `∫₀^∞ |a|²` lying beyond the grid cutoff.
fn truncated_fraction(weight: &SpectralWeight, grid: &SpectralGrid) -> Result<f64> {
    if !weight.decays() {
        return Ok(1.0);
    }
    let cutoff = grid.cutoff();
    let support = weight.effective_support();
    let marks = weight.marks();
    let quad = Integrator::new(1e-300).with_rel_tol(1e-8);
    let inner = quad
        .finite_anchored(|x| weight.eval(x), 0.0, cutoff, &marks)?
        .value;
    let outer = if support > cutoff {
        quad.finite_anchored(|x| weight.eval(x), cutoff, support, &marks)?
            .value
    } else {
        0.0
    };
    Ok(outer / (inner + outer))
}

fn check_odd_truncation(weight: &SpectralWeight, grid: &SpectralGrid) -> Result<()> {
    let fraction = truncated_fraction(weight, grid)?;
    if !(fraction < ODD_TRUNCATED_FRACTION) {
        return Err(Error::InvalidGrid(format!(
            "cutoff N*delta = {} drops a fraction {fraction:.3e} of the variance (limit {ODD_TRUNCATED_FRACTION:e})",
            grid.cutoff()
        )));
    }
    Ok(())
}

fn simulate(
    kind: FieldKind,
    spec: &SpectrumSpec,
    eq: EquationSpec,
    grid: &SpectralGrid,
    noise: &NoiseDraw,
    t_grid: &[f64],
    x_grid: &[f64],
) -> Result<FieldRealization> {
    FieldModel::new(kind, spec, eq, *grid)?.realize(noise, t_grid, x_grid)
}

/// The solution `u(t, x)` with zero initial mean.
pub fn simulate_solution(
    spec: &SpectrumSpec,
    eq: EquationSpec,
    grid: &SpectralGrid,
    noise: &NoiseDraw,
    t_grid: &[f64],
    x_grid: &[f64],
) -> Result<FieldRealization> {
    simulate(FieldKind::Solution, spec, eq, grid, noise, t_grid, x_grid)
}

/// `U_ε` for even `m`, built in the rescaled frequency `λ/√ε`.
pub fn simulate_rescaled(
    spec: &SpectrumSpec,
    eq: EquationSpec,
    grid: &SpectralGrid,
    noise: &NoiseDraw,
    eps: f64,
    t_grid: &[f64],
    x_grid: &[f64],
) -> Result<FieldRealization> {
    simulate(
        FieldKind::Rescaled { eps },
        spec,
        eq,
        grid,
        noise,
        t_grid,
        x_grid,
    )
}

/// The even-order limit field; the regime follows from `A₀`.
pub fn simulate_limit_even(
    spec: &SpectrumSpec,
    eq: EquationSpec,
    grid: &SpectralGrid,
    noise: &NoiseDraw,
    t_grid: &[f64],
    x_grid: &[f64],
) -> Result<FieldRealization> {
    simulate(FieldKind::LimitEven, spec, eq, grid, noise, t_grid, x_grid)
}

/// The Gaussian-kernel average `∫ e^{-(y-x)²} U_ε(t, y) dy / (2π)` of the rescaled
/// odd-order solution, built from the closed-form factor `√π e^{-λ²/4}`.
pub fn kernel_average(
    spec: &SpectrumSpec,
    eq: EquationSpec,
    grid: &SpectralGrid,
    noise: &NoiseDraw,
    eps: f64,
    t_grid: &[f64],
    x_grid: &[f64],
) -> Result<FieldRealization> {
    simulate(
        FieldKind::KernelAverage { eps },
        spec,
        eq,
        grid,
        noise,
        t_grid,
        x_grid,
    )
}

/// The limit of [`kernel_average`] as `ε → 0`.
pub fn simulate_limit_odd_smoothed(
    spec: &SpectrumSpec,
    eq: EquationSpec,
    grid: &SpectralGrid,
    noise: &NoiseDraw,
    t_grid: &[f64],
    x_grid: &[f64],
) -> Result<FieldRealization> {
    simulate(
        FieldKind::LimitOddSmoothed,
        spec,
        eq,
        grid,
        noise,
        t_grid,
        x_grid,
    )
}
