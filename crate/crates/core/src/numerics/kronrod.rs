//! The 10-point Gauss / 21-point Kronrod embedded pair.

/// Kronrod abscissae on [-1, 1], descending; odd indices are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_606_280_330,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for `XGK[1], XGK[3], ..., XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub(crate) const RULE_POINTS: usize = 21;

/// Outcome of one rule application.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RuleEstimate {
    pub value: f64,
    pub error: f64,
    /// A node at which `f` was not finite, if any.
    pub non_finite_at: Option<f64>,
}

/// Applies the rule to `f` on `[lo, hi]` with the classical rescaled error estimate.
pub(crate) fn apply<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> RuleEstimate {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let dhalf = half.abs();

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut non_finite_at = None;
    let mut check = |x: f64, v: f64| {
        if !v.is_finite() && non_finite_at.is_none() {
            non_finite_at = Some(x);
        }
    };

    let fc = f(centre);
    check(centre, fc);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();

    for j in 0..5 {
        let idx = 2 * j + 1;
        let dx = half * XGK[idx];
        let (x1, x2) = (centre - dx, centre + dx);
        let (f1, f2) = (f(x1), f(x2));
        check(x1, f1);
        check(x2, f2);
        fv1[idx] = f1;
        fv2[idx] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[idx] * (f1 + f2);
        res_abs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let idx = 2 * j;
        let dx = half * XGK[idx];
        let (x1, x2) = (centre - dx, centre + dx);
        let (f1, f2) = (f(x1), f(x2));
        check(x1, f1);
        check(x2, f2);
        fv1[idx] = f1;
        fv2[idx] = f2;
        res_k += WGK[idx] * (f1 + f2);
        res_abs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= dhalf;
    res_asc *= dhalf;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    RuleEstimate {
        value,
        error,
        non_finite_at,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_is_exact_for_degree_31() {
        for k in 0..=31 {
            let r = apply(&|x: f64| x.powi(k), 0.0, 1.0);
            let exact = 1.0 / (k as f64 + 1.0);
            assert!((r.value - exact).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn gauss_part_is_exact_for_degree_19() {
        // A polynomial of degree <= 19 gives a vanishing raw Kronrod-Gauss gap, so only the
        // roundoff floor survives in the error estimate.
        let r = apply(&|x: f64| 3.0 * x.powi(19) - x.powi(4) + 2.0, 0.0, 1.0);
        assert!(r.error < 1e-13, "{}", r.error);
    }

    #[test]
    fn flags_non_finite_nodes() {
        let r = apply(&|x: f64| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0);
        assert!(r.non_finite_at.unwrap() > 0.5);
    }
}
