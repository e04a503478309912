use hheat::covariance::{
    cov_limit_even_a0_nonzero, cov_limit_even_a0_zero, cov_limit_odd_smoothed, cov_solution,
    CovarianceQuery,
};
use hheat::field::{draw_noise, EquationSpec, FieldKind, FieldModel, SpectralGrid};
use hheat::special::{bessel_k, fox_wright_11, FoxWrightParams};
use hheat::spectral::{covariance_r, theta_kappa, Regime, SpectralDensity, SpectrumSpec};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn spectra() -> impl Strategy<Value = SpectrumSpec> {
    // Random weights on the simplex with A₀ either zero or positive.
    (
        prop::bool::ANY,
        prop::collection::vec((0.05f64..1.0, 0.1f64..0.9, 0.2f64..3.0), 1..4),
        0.1f64..0.9,
    )
        .prop_map(|(zero_freq, cyclic, k0)| {
            let a0 = if zero_freq { 0.3 } else { 0.0 };
            let total: f64 = cyclic.iter().map(|c| c.0).sum();
            let mut triples = vec![(a0, k0, 0.0)];
            let mut omega = 0.0;
            for (w, k, gap) in cyclic {
                omega += gap;
                triples.push(((1.0 - a0) * w / total, k, omega));
            }
            SpectrumSpec::from_triples(&triples).expect("valid by construction")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn covariance_is_even_and_bounded(spec in spectra(), x in -20.0f64..20.0) {
        let r = covariance_r(&spec, x);
        prop_assert_eq!(r, covariance_r(&spec, -x));
        prop_assert!(r.abs() <= 1.0 + 1e-12);
        prop_assert!((covariance_r(&spec, 0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_is_even_and_positive(spec in spectra(), lambda in 0.01f64..15.0) {
        let f = SpectralDensity::new(&spec);
        if let (Ok(a), Ok(b)) = (f.eval(lambda), f.eval(-lambda)) {
            prop_assert!(a > 0.0);
            prop_assert!(((a - b) / a).abs() < 1e-13);
        }
    }

    #[test]
    fn bessel_k_is_even_in_order(nu in 0.0f64..3.0, z in 0.05f64..40.0) {
        let a = bessel_k(nu, z).unwrap();
        let b = bessel_k(-nu, z).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() <= 1e-14 * a);
    }

    #[test]
    fn theta_is_increasing(kappa in 0.05f64..0.95, u in 0.01f64..20.0, step in 0.01f64..2.0) {
        let a = theta_kappa(kappa, u).unwrap();
        let b = theta_kappa(kappa, u + step).unwrap();
        prop_assert!((0.0..1.0).contains(&a));
        prop_assert!(b >= a);
    }

    #[test]
    fn fox_wright_equal_parameters_reduce_to_exp(a in 0.05f64..2.0, z in -15.0f64..5.0) {
        let p = FoxWrightParams::new(1.0, a, 1.0, a).unwrap();
        let v = fox_wright_11(p, z).unwrap();
        prop_assert!(((v - z.exp()) / z.exp()).abs() < 1e-10);
    }

    #[test]
    fn even_limit_covariance_symmetry_and_spatial_stationarity(
        spec in spectra(),
        m in prop::sample::select(vec![2u32, 4, 6]),
        t in 0.1f64..3.0,
        tp in 0.1f64..3.0,
        x in -3.0f64..3.0,
        c in -5.0f64..5.0,
    ) {
        let q = CovarianceQuery::new(t, tp, x, 0.0).unwrap();
        let cov = |q: &CovarianceQuery| match spec.regime() {
            Regime::Cyclic => cov_limit_even_a0_zero(&spec, m, q).unwrap(),
            Regime::ZeroFrequency => cov_limit_even_a0_nonzero(&spec, m, q).unwrap(),
        };
        let base = cov(&q);
        prop_assert!((cov(&q.swapped()) - base).abs() <= 1e-13 * base.abs().max(1e-3));
        prop_assert!((cov(&q.shifted(0.0, c).unwrap()) - base).abs() <= 1e-9 * base.abs().max(1e-3));
    }

    #[test]
    fn odd_limit_covariance_is_stationary(
        spec in spectra(),
        t in 0.1f64..3.0,
        tp in 0.1f64..3.0,
        x in -3.0f64..3.0,
        h in 0.0f64..5.0,
        c in -5.0f64..5.0,
    ) {
        let eq = EquationSpec::odd(3, 1).unwrap();
        let q = CovarianceQuery::new(t, tp, x, 0.0).unwrap();
        let a = cov_limit_odd_smoothed(&spec, &eq, spec.regime(), &q).unwrap();
        let b = cov_limit_odd_smoothed(&spec, &eq, spec.regime(), &q.shifted(h, c).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-3));
    }

    #[test]
    fn limit_covariance_matrices_are_positive_semidefinite(
        spec in spectra(),
        points in prop::collection::vec((0.1f64..2.0, -3.0f64..3.0), 3..8),
    ) {
        let n = points.len();
        let cov = |a: (f64, f64), b: (f64, f64)| {
            let q = CovarianceQuery::new(a.0, b.0, a.1, b.1).unwrap();
            match spec.regime() {
                Regime::Cyclic => cov_limit_even_a0_zero(&spec, 4, &q).unwrap(),
                Regime::ZeroFrequency => cov_limit_even_a0_nonzero(&spec, 4, &q).unwrap(),
            }
        };
        let gram = DMatrix::from_fn(n, n, |i, j| cov(points[i], points[j]));
        let gram = (&gram + gram.transpose()) * 0.5;
        let trace = gram.trace();
        let min = gram.symmetric_eigenvalues().min();
        prop_assert!(min >= -1e-9 * trace, "min eigenvalue {} trace {}", min, trace);
    }

    #[test]
    fn solution_covariance_decreases_in_time(
        spec in spectra(),
        t in 0.05f64..2.0,
        h in 0.1f64..2.0,
    ) {
        let eq = EquationSpec::even(2).unwrap();
        let a = cov_solution(&spec, &eq, &CovarianceQuery::new(t, t, 0.0, 0.0).unwrap()).unwrap();
        let b = cov_solution(&spec, &eq, &CovarianceQuery::new(t + h, t + h, 0.0, 0.0).unwrap()).unwrap();
        prop_assert!(a <= 1.0 + 1e-9);
        prop_assert!(b < a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fields_are_linear_in_the_noise(
        seed in any::<u64>(),
        kind in prop::sample::select(vec![
            FieldKind::Solution,
            FieldKind::Rescaled { eps: 0.1 },
            FieldKind::LimitEven,
        ]),
    ) {
        let grid = SpectralGrid::new(0.05, 300).unwrap();
        let model = FieldModel::new(kind, &SpectrumSpec::four_component(), EquationSpec::even(4).unwrap(), grid).unwrap();
        let n1 = draw_noise(&grid, seed, 0);
        let n2 = draw_noise(&grid, seed, 1);
        let t = [0.5, 1.0];
        let x = [-1.0, 0.0, 2.0];
        let u1 = model.realize(&n1, &t, &x).unwrap();
        let u2 = model.realize(&n2, &t, &x).unwrap();
        let sum = model.realize(&n1.add(&n2).unwrap(), &t, &x).unwrap();
        for i in 0..sum.values.len() {
            let expected = u1.values[i] + u2.values[i];
            prop_assert!((sum.values[i] - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
        }
    }
}
