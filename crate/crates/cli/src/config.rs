use crate::CliError;
use hheat::convergence::{ResidualRegime, DEFAULT_LADDER};
use hheat::field::{EquationSpec, FieldKind, SpectralGrid, DEFAULT_REPLICATES};
use hheat::spectral::{SingularityComponent, SpectrumSpec};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub spectrum: RawSpectrum,
    pub equation: RawEquation,
    pub grid: RawGrid,
    #[serde(default)]
    pub field: RawField,
    #[serde(default)]
    pub mc: RawMc,
    pub query: RawQuery,
    pub sweep: Option<RawSweep>,
    #[serde(default)]
    pub residual: RawResidual,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpectrum {
    pub components: Vec<RawComponent>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComponent {
    pub weight: f64,
    pub kappa: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEquation {
    pub order: u32,
    #[serde(default = "default_mu")]
    pub mu: i32,
}

fn default_mu() -> i32 {
    1
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub delta: f64,
    pub half_count: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawField {
    pub kind: Option<String>,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMc {
    pub replicates: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub empirical: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQuery {
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    #[serde(default)]
    pub x_ref: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub mode: String,
    pub orders: Vec<u32>,
    pub fixed: f64,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawResidual {
    pub regime: Option<String>,
    pub t: Option<f64>,
    pub eps_ladder: Option<Vec<f64>>,
}

/// Which argument a covariance sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Time sum (even) or time lag (odd) at fixed `x - x'`.
    Temporal,
    /// Spatial lag at fixed time sum (even) or lag (odd).
    Spatial,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub mode: SweepMode,
    pub orders: Vec<EquationSpec>,
    pub fixed: f64,
    pub values: Vec<f64>,
}

/// A validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spectrum: SpectrumSpec,
    pub equation: EquationSpec,
    pub grid: SpectralGrid,
    pub kind: FieldKind,
    pub replicates: usize,
    pub seed: u64,
    pub empirical: bool,
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub x_ref: f64,
    pub sweep: Option<Sweep>,
    pub residual_regime: Option<ResidualRegime>,
    pub residual_t: f64,
    pub eps_ladder: Vec<f64>,
}

fn config_err(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {e}"))
}

pub fn parse_kind(name: &str, eps: Option<f64>) -> Result<FieldKind, CliError> {
    let need_eps = || eps.ok_or_else(|| config_err("field.eps", format!("kind {name} needs eps")));
    Ok(match name {
        "solution" => FieldKind::Solution,
        "rescaled" => FieldKind::Rescaled { eps: need_eps()? },
        "limit" => FieldKind::LimitEven,
        "smoothed" => FieldKind::KernelAverage { eps: need_eps()? },
        "smoothed-limit" => FieldKind::LimitOddSmoothed,
        other => {
            return Err(config_err(
                "field.kind",
                format!(
                    "unknown kind {other:?}; expected solution, rescaled, limit, smoothed or \
                     smoothed-limit"
                ),
            ))
        }
    })
}

fn parse_regime(name: &str) -> Result<ResidualRegime, CliError> {
    [
        ResidualRegime::EvenCyclic,
        ResidualRegime::EvenZeroFrequency,
        ResidualRegime::OddCyclic,
        ResidualRegime::OddZeroFrequency,
    ]
    .into_iter()
    .find(|r| r.name() == name)
    .ok_or_else(|| config_err("residual.regime", format!("unknown regime {name:?}")))
}

impl RunConfig {
    /// Parse and validate TOML text. Parse errors carry the line and column.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        RunConfig::validate(raw)
    }

    pub fn validate(raw: RawConfig) -> Result<Self, CliError> {
        let components = raw
            .spectrum
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                SingularityComponent::new(c.weight, c.kappa, c.omega)
                    .map_err(|e| config_err(&format!("spectrum.components[{i}]"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let spectrum = SpectrumSpec::new(components).map_err(|e| config_err("spectrum", e))?;
        let equation = EquationSpec::new(raw.equation.order, raw.equation.mu)
            .map_err(|e| config_err("equation", e))?;
        let grid = SpectralGrid::new(raw.grid.delta, raw.grid.half_count)
            .map_err(|e| config_err("grid", e))?;
        let default_kind = match equation.parity() {
            hheat::field::Parity::Even => "limit",
            hheat::field::Parity::Odd => "smoothed-limit",
        };
        let kind = parse_kind(
            raw.field.kind.as_deref().unwrap_or(default_kind),
            raw.field.eps,
        )?;
        if raw.query.t_grid.is_empty() || raw.query.x_grid.is_empty() {
            return Err(config_err("query", "t_grid and x_grid must be non-empty"));
        }
        if raw
            .query
            .t_grid
            .iter()
            .chain(&raw.query.x_grid)
            .any(|v| !v.is_finite())
        {
            return Err(config_err("query", "grid values must be finite"));
        }
        let sweep = raw
            .sweep
            .map(|s| parse_sweep(s, equation.mu()))
            .transpose()?;
        let residual_regime = raw
            .residual
            .regime
            .as_deref()
            .map(parse_regime)
            .transpose()?;
        let replicates = raw.mc.replicates.unwrap_or(DEFAULT_REPLICATES);
        if replicates == 0 {
            return Err(config_err("mc.replicates", "must be positive"));
        }
        Ok(RunConfig {
            spectrum,
            equation,
            grid,
            kind,
            replicates,
            seed: raw.mc.seed.unwrap_or(0),
            empirical: raw.mc.empirical,
            t_grid: raw.query.t_grid,
            x_grid: raw.query.x_grid,
            x_ref: raw.query.x_ref,
            sweep,
            residual_regime,
            residual_t: raw.residual.t.unwrap_or(1.0),
            eps_ladder: raw
                .residual
                .eps_ladder
                .unwrap_or_else(|| DEFAULT_LADDER.to_vec()),
        })
    }
}

fn parse_sweep(s: RawSweep, mu: i32) -> Result<Sweep, CliError> {
    let mode = match s.mode.as_str() {
        "temporal" => SweepMode::Temporal,
        "spatial" => SweepMode::Spatial,
        other => {
            return Err(config_err(
                "sweep.mode",
                format!("unknown mode {other:?}; expected temporal or spatial"),
            ))
        }
    };
    if s.orders.is_empty() {
        return Err(config_err("sweep.orders", "must be non-empty"));
    }
    let orders = s
        .orders
        .iter()
        .map(|&m| EquationSpec::new(m, mu).map_err(|e| config_err("sweep.orders", e)))
        .collect::<Result<Vec<_>, _>>()?;
    if orders.iter().any(|e| e.parity() != orders[0].parity()) {
        return Err(config_err("sweep.orders", "orders must share one parity"));
    }
    if s.count < 2 || !(s.stop > s.start) {
        return Err(config_err("sweep", "need count >= 2 and stop > start"));
    }
    let values = (0..s.count)
        .map(|i| s.start + (s.stop - s.start) * i as f64 / (s.count - 1) as f64)
        .collect();
    Ok(Sweep {
        mode,
        orders,
        fixed: s.fixed,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[spectrum]
components = [
  { weight = 0.0, kappa = 0.2, omega = 0.0 },
  { weight = 1.0, kappa = 0.5, omega = 1.0 },
]
[equation]
order = 4
[grid]
delta = 0.05
half_count = 100
[query]
t_grid = [1.0]
x_grid = [0.0]
"#;

    #[test]
    fn defaults() {
        let c = RunConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.kind, FieldKind::LimitEven);
        assert_eq!(c.replicates, DEFAULT_REPLICATES);
        assert_eq!(c.eps_ladder, DEFAULT_LADDER);
        assert_eq!(c.equation.mu(), 1);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = MINIMAL.replace("weight = 1.0", "weight = 0.9");
        let e = RunConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(e.contains("spectrum") && e.contains("sum"), "{e}");
        let bad = MINIMAL.replace("order = 4", "order = 4\nextra = 1");
        let e = RunConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(e.contains("line"), "{e}");
        let bad = format!("{MINIMAL}[field]\nkind = \"rescaled\"\n");
        assert!(RunConfig::from_toml(&bad)
            .unwrap_err()
            .to_string()
            .contains("eps"));
    }
}
