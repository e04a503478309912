use hheat::convergence::{residual_even_a0_nonzero, residual_even_a0_zero, residual_odd_smoothed};
use hheat::covariance::{cov_solution, empirical_covariance, CovarianceQuery};
use hheat::field::{draw_noise, EquationSpec, FieldKind, FieldModel, SpectralGrid};
use hheat::spectral::{Regime, SpectrumSpec};
use rayon::prelude::*;

const REPLICATES: u64 = 4000;

/// Mean of `(U_ε - U_0)²` at `(t, x)` over shared noise, with its standard error.
fn shared_noise_residual(
    rescaled: &FieldModel,
    limit: &FieldModel,
    grid: &SpectralGrid,
    t: f64,
    x: f64,
) -> (f64, f64) {
    let sq: Vec<f64> = (0..REPLICATES)
        .into_par_iter()
        .map(|r| {
            let noise = draw_noise(grid, 99, r);
            let a = rescaled.realize(&noise, &[t], &[x]).unwrap().values[0];
            let b = limit.realize(&noise, &[t], &[x]).unwrap().values[0];
            (a - b) * (a - b)
        })
        .collect();
    let n = sq.len() as f64;
    let mean = sq.iter().sum::<f64>() / n;
    let var = sq.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn even_residuals_match_shared_noise_simulation() {
    let eq = EquationSpec::even(4).unwrap();
    let grid = SpectralGrid::new(0.01, 2000).unwrap();
    let eps = 0.25;
    for spec in [SpectrumSpec::three_cyclic(), SpectrumSpec::four_component()] {
        let rescaled = FieldModel::new(FieldKind::Rescaled { eps }, &spec, eq, grid).unwrap();
        let limit = FieldModel::new(FieldKind::LimitEven, &spec, eq, grid).unwrap();
        let (mc, se) = shared_noise_residual(&rescaled, &limit, &grid, 1.0, 0.3);
        let theory = match spec.regime() {
            Regime::Cyclic => residual_even_a0_zero(&spec, 4, 1.0, eps),
            Regime::ZeroFrequency => residual_even_a0_nonzero(&spec, 4, 1.0, eps),
        }
        .unwrap()
        .value;
        assert!((mc - theory).abs() <= 3.0 * se, "{mc} ± {se} vs {theory}");
    }
}

#[test]
fn odd_residual_matches_shared_noise_simulation() {
    let eq = EquationSpec::odd(3, 1).unwrap();
    let grid = SpectralGrid::new(0.005, 1800).unwrap();
    let eps = 0.25;
    for spec in [SpectrumSpec::three_cyclic(), SpectrumSpec::four_component()] {
        let averaged = FieldModel::new(FieldKind::KernelAverage { eps }, &spec, eq, grid).unwrap();
        let limit = FieldModel::new(FieldKind::LimitOddSmoothed, &spec, eq, grid).unwrap();
        let (mc, se) = shared_noise_residual(&averaged, &limit, &grid, 0.5, -0.4);
        let theory = residual_odd_smoothed(&spec, &eq, spec.regime(), 0.5, eps)
            .unwrap()
            .value;
        assert!((mc - theory).abs() <= 3.0 * se, "{mc} ± {se} vs {theory}");
    }
}

#[test]
fn solution_covariance_matches_simulation() {
    let eq = EquationSpec::even(2).unwrap();
    let grid = SpectralGrid::new(0.03, 600).unwrap();
    let spec = SpectrumSpec::four_component();
    let model = FieldModel::new(FieldKind::Solution, &spec, eq, grid).unwrap();
    let t = [0.1, 0.3];
    let x = [0.0, 0.5, 1.5];
    let ens = model.ensemble(5, 3000, &t, &x).unwrap();
    let mut hits = 0;
    let mut total = 0;
    for &(a, b) in &[(0.1, 0.1), (0.1, 0.3), (0.3, 0.3)] {
        for &xx in &x {
            let q = CovarianceQuery::new(a, b, xx, 0.0).unwrap();
            let emp = empirical_covariance(&ens, &q).unwrap();
            total += 1;
            if emp.within(cov_solution(&spec, &eq, &q).unwrap(), 3.0) {
                hits += 1;
            }
        }
    }
    assert!(hits + 1 >= total, "{hits}/{total}");
}

#[test]
fn zero_mean_fields_have_zero_sample_mean() {
    let eq = EquationSpec::even(4).unwrap();
    let grid = SpectralGrid::new(0.05, 1000).unwrap();
    let model = FieldModel::new(
        FieldKind::LimitEven,
        &SpectrumSpec::four_component(),
        eq,
        grid,
    )
    .unwrap();
    let ens = model.ensemble(11, 2000, &[0.5], &[0.0, 1.0]).unwrap();
    for ix in 0..2 {
        let v: Vec<f64> = ens.iter().map(|f| f.value(0, ix)).collect();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() <= 3.5 * (var / n).sqrt());
    }
}
