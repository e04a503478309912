use crate::config::{RunConfig, Sweep, SweepMode};
use crate::manifest::Manifest;
use crate::{CliError, CommonArgs};
use hheat::acceptance::{run_criterion, CRITERIA};
use hheat::convergence::{residual_ladder, ResidualRegime};
use hheat::covariance::{
    cov_kind, cov_limit_even_with_path, cov_limit_odd_smoothed, empirical_covariance,
    CovarianceQuery,
};
use hheat::export::{
    write_cov_density_csv, write_covariance_csv, write_field_csv, write_residual_csv, CovarianceRow,
};
use hheat::field::{EquationSpec, FieldModel, Parity};
use hheat::spectral::SpectralDensity;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

struct Run {
    config: RunConfig,
    text: String,
    out: PathBuf,
}

fn load(args: &CommonArgs) -> Result<Run, CliError> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut config = RunConfig::from_toml(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    std::fs::create_dir_all(&args.out)?;
    Ok(Run {
        config,
        text,
        out: args.out.clone(),
    })
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn manifest<'a>(command: &'a str, run: &'a Run) -> Manifest<'a> {
    Manifest::new(command, &run.text, run.config.seed, run.config.replicates)
}

fn model(c: &RunConfig) -> Result<FieldModel, CliError> {
    FieldModel::new(c.kind, &c.spectrum, c.equation, c.grid)
        .map_err(|e| CliError::numeric("field model", e))
}

pub fn simulate(args: &CommonArgs) -> Result<(), CliError> {
    let run = load(args)?;
    let c = &run.config;
    let ensemble = model(c)?
        .ensemble(c.seed, c.replicates, &c.t_grid, &c.x_grid)
        .map_err(|e| CliError::numeric("simulation", e))?;
    let w = create(&run.out, "field.csv")?;
    write_field_csv(w, &ensemble)?;
    let mut m = manifest("simulate", &run);
    m.outputs.push("field.csv".into());
    m.write(&run.out)
}

fn query(t: f64, tp: f64, x: f64, xp: f64) -> Result<CovarianceQuery, CliError> {
    CovarianceQuery::new(t, tp, x, xp)
        .map_err(|e| CliError::numeric(format!("query ({t}, {tp}, {x}, {xp})"), e))
}

fn surface_rows(c: &RunConfig) -> Result<Vec<CovarianceRow>, CliError> {
    let mut rows = Vec::new();
    for &t in &c.t_grid {
        for &tp in &c.t_grid {
            for &x in &c.x_grid {
                let q = query(t, tp, x, c.x_ref)?;
                let value = cov_kind(c.kind, &c.spectrum, &c.equation, &q)
                    .map_err(|e| CliError::numeric(format!("query {q:?}"), e))?;
                rows.push(CovarianceRow {
                    m: c.equation.order(),
                    t,
                    t_prime: tp,
                    x,
                    x_prime: c.x_ref,
                    value,
                    stderr: None,
                });
            }
        }
    }
    Ok(rows)
}

fn limit_covariance(
    c: &RunConfig,
    eq: &EquationSpec,
    q: &CovarianceQuery,
) -> Result<f64, CliError> {
    let v = match eq.parity() {
        Parity::Even => cov_limit_even_with_path(&c.spectrum, eq.order(), q).map(|v| v.0),
        Parity::Odd => cov_limit_odd_smoothed(&c.spectrum, eq, c.spectrum.regime(), q),
    };
    v.map_err(|e| CliError::numeric(format!("m = {}, query {q:?}", eq.order()), e))
}

/// Limit-field covariance along a sweep, one block of rows per order.
///
/// Even orders depend on `t + t'` and odd orders on `t - t'`; odd sweeps are centred on a
/// base time large enough to keep both times positive.
fn sweep_rows(c: &RunConfig, sweep: &Sweep) -> Result<Vec<CovarianceRow>, CliError> {
    let span = sweep
        .values
        .iter()
        .chain(std::iter::once(&sweep.fixed))
        .fold(0.0f64, |a, v| a.max(v.abs()));
    let base = 0.5 * span + 1.0;
    let mut rows = Vec::new();
    for eq in &sweep.orders {
        for &v in &sweep.values {
            let (time, lag) = match sweep.mode {
                SweepMode::Temporal => (v, sweep.fixed),
                SweepMode::Spatial => (sweep.fixed, v),
            };
            let (t, tp) = match eq.parity() {
                Parity::Even => (0.5 * time, 0.5 * time),
                Parity::Odd => (base + 0.5 * time, base - 0.5 * time),
            };
            let q = query(t, tp, lag, 0.0)?;
            rows.push(CovarianceRow {
                m: eq.order(),
                t,
                t_prime: tp,
                x: lag,
                x_prime: 0.0,
                value: limit_covariance(c, eq, &q)?,
                stderr: None,
            });
        }
    }
    Ok(rows)
}

fn empirical_rows(c: &RunConfig, theory: &[CovarianceRow]) -> Result<Vec<CovarianceRow>, CliError> {
    if !c.x_grid.contains(&c.x_ref) {
        return Err(CliError::Config(format!(
            "query.x_ref = {} must lie on x_grid for empirical covariances",
            c.x_ref
        )));
    }
    let ensemble = model(c)?
        .ensemble(c.seed, c.replicates, &c.t_grid, &c.x_grid)
        .map_err(|e| CliError::numeric("simulation", e))?;
    theory
        .iter()
        .map(|r| {
            let q = query(r.t, r.t_prime, r.x, r.x_prime)?;
            let e = empirical_covariance(&ensemble, &q)
                .map_err(|e| CliError::numeric(format!("query {q:?}"), e))?;
            Ok(CovarianceRow {
                value: e.estimate,
                stderr: Some(e.standard_error),
                ..*r
            })
        })
        .collect()
}

pub fn covariance(args: &CommonArgs) -> Result<(), CliError> {
    let run = load(args)?;
    let c = &run.config;
    let mut m = manifest("covariance", &run);
    let rows = match &c.sweep {
        Some(s) => sweep_rows(c, s)?,
        None => surface_rows(c)?,
    };
    write_covariance_csv(create(&run.out, "cov_theory.csv")?, &rows)?;
    m.outputs.push("cov_theory.csv".into());
    if c.empirical && c.sweep.is_none() {
        let emp = empirical_rows(c, &rows)?;
        write_covariance_csv(create(&run.out, "cov_empirical.csv")?, &emp)?;
        m.outputs.push("cov_empirical.csv".into());
    }
    m.write(&run.out)
}

fn checked_regime(c: &RunConfig) -> Result<ResidualRegime, CliError> {
    let actual = ResidualRegime::of(&c.spectrum, &c.equation);
    match c.residual_regime {
        Some(wanted) if wanted != actual => Err(CliError::numeric(
            "residual.regime",
            hheat::Error::RegimeMismatch(format!(
                "requested {} but the spectrum and equation give {} (A0 = {}, m = {})",
                wanted.name(),
                actual.name(),
                c.spectrum.zero_weight(),
                c.equation.order()
            )),
        )),
        _ => Ok(actual),
    }
}

pub fn residual(args: &CommonArgs) -> Result<(), CliError> {
    let run = load(args)?;
    let c = &run.config;
    checked_regime(c)?;
    let curve = residual_ladder(&c.spectrum, &c.equation, c.residual_t, &c.eps_ladder)
        .map_err(|e| CliError::numeric("residual ladder", e))?;
    write_residual_csv(create(&run.out, "residual.csv")?, &curve)?;
    let mut m = manifest("residual", &run);
    m.outputs.push("residual.csv".into());
    m.write(&run.out)
}

fn default_sweeps(c: &RunConfig) -> Result<(Sweep, Sweep), CliError> {
    let orders = match &c.sweep {
        Some(s) => s.orders.clone(),
        None => {
            let ms: &[u32] = match c.equation.parity() {
                Parity::Even => &[2, 4, 6, 8],
                Parity::Odd => &[3, 5, 7, 9],
            };
            ms.iter()
                .map(|&m| EquationSpec::new(m, c.equation.mu()))
                .collect::<Result<_, _>>()?
        }
    };
    let grid = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    };
    let temporal_values = match orders[0].parity() {
        Parity::Even => grid(0.1, 10.0, 100),
        Parity::Odd => grid(0.0, 10.0, 101),
    };
    Ok((
        Sweep {
            mode: SweepMode::Temporal,
            orders: orders.clone(),
            fixed: 1.5,
            values: temporal_values,
        },
        Sweep {
            mode: SweepMode::Spatial,
            orders,
            fixed: 5.0,
            values: grid(-10.0, 10.0, 201),
        },
    ))
}

pub fn figures_data(args: &CommonArgs) -> Result<(), CliError> {
    let run = load(args)?;
    let c = &run.config;
    let mut m = manifest("figures-data", &run);

    let xs: Vec<f64> = (0..=200).map(|i| 0.05 * i as f64).collect();
    let poles: Vec<f64> = SpectralDensity::new(&c.spectrum)
        .poles()
        .iter()
        .map(|p| p.location)
        .collect();
    let lambdas: Vec<f64> = (0..400)
        .map(|i| 0.0125 + 0.025 * i as f64)
        .filter(|l| poles.iter().all(|p| (l - p).abs() > 1e-9))
        .collect();
    write_cov_density_csv(
        create(&run.out, "cov_density.csv")?,
        &c.spectrum,
        &xs,
        &lambdas,
    )?;
    m.outputs.push("cov_density.csv".into());

    let field = model(c)?
        .ensemble(c.seed, 1, &c.t_grid, &c.x_grid)
        .map_err(|e| CliError::numeric("simulation", e))?;
    write_field_csv(create(&run.out, "field.csv")?, &field)?;
    m.outputs.push("field.csv".into());

    write_covariance_csv(create(&run.out, "cov_surface.csv")?, &surface_rows(c)?)?;
    m.outputs.push("cov_surface.csv".into());

    let (temporal, spatial) = default_sweeps(c)?;
    write_covariance_csv(
        create(&run.out, "cov_temporal.csv")?,
        &sweep_rows(c, &temporal)?,
    )?;
    write_covariance_csv(
        create(&run.out, "cov_spatial.csv")?,
        &sweep_rows(c, &spatial)?,
    )?;
    m.outputs.push("cov_temporal.csv".into());
    m.outputs.push("cov_spatial.csv".into());

    checked_regime(c)?;
    let curve = residual_ladder(&c.spectrum, &c.equation, c.residual_t, &c.eps_ladder)
        .map_err(|e| CliError::numeric("residual ladder", e))?;
    write_residual_csv(create(&run.out, "residual.csv")?, &curve)?;
    m.outputs.push("residual.csv".into());
    m.write(&run.out)
}

pub fn selftest(args: &CommonArgs) -> Result<(), CliError> {
    let mut report = String::new();
    let mut failed = Vec::new();
    for (id, name) in CRITERIA {
        let line = match run_criterion(id) {
            Ok(r) => {
                if !r.passed {
                    failed.push(id);
                }
                r.to_string()
            }
            Err(e) => {
                failed.push(id);
                format!("criterion {id:>2} {name:<24} FAIL error: {e}")
            }
        };
        println!("{line}");
        report.push_str(&line);
        report.push('\n');
    }
    let summary = format!(
        "{}/{} criteria passed",
        CRITERIA.len() - failed.len(),
        CRITERIA.len()
    );
    println!("{summary}");
    report.push_str(&summary);
    report.push('\n');
    if args.config.is_some() || args.out != Path::new(".") {
        std::fs::create_dir_all(&args.out)?;
        std::fs::write(args.out.join("selftest.txt"), &report)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::SelfTest(format!("criteria {failed:?}")))
    }
}
