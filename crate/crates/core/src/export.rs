//! CSV writers for fields, covariances, residual curves and the spectral pair.
//!
//! Floats are written with 17 significant digits, so reading a file back reproduces the
//! values bit for bit.

use crate::convergence::ResidualCurve;
use crate::error::{Error, Result};
use crate::field::FieldRealization;
use crate::spectral::{covariance_r, SpectralDensity, SpectrumSpec};
use std::io::{Read, Write};

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows `t,x,value,replicate`, replicate-major, then time, then space.
pub fn write_field_csv<W: Write>(out: W, ensemble: &[FieldRealization]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "x", "value", "replicate"])?;
    for f in ensemble {
        for (it, &t) in f.t_grid.iter().enumerate() {
            for (ix, &x) in f.x_grid.iter().enumerate() {
                w.write_record([
                    num(t),
                    num(x),
                    num(f.value(it, ix)),
                    f.provenance.replicate.to_string(),
                ])?;
            }
        }
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// One covariance value, optionally with its Monte-Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceRow {
    pub m: u32,
    pub t: f64,
    pub t_prime: f64,
    pub x: f64,
    pub x_prime: f64,
    pub value: f64,
    pub stderr: Option<f64>,
}

/// Rows `m,t,tprime,x,xprime,value` with a trailing `stderr` column when every row has one.
pub fn write_covariance_csv<W: Write>(out: W, rows: &[CovarianceRow]) -> Result<()> {
    let with_se = !rows.is_empty() && rows.iter().all(|r| r.stderr.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["m", "t", "tprime", "x", "xprime", "value"];
    if with_se {
        header.push("stderr");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.m.to_string(),
            num(r.t),
            num(r.t_prime),
            num(r.x),
            num(r.x_prime),
            num(r.value),
        ];
        if with_se {
            rec.push(num(r.stderr.unwrap_or(f64::NAN)));
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Rows `eps,residual,quad_error`.
pub fn write_residual_csv<W: Write>(out: W, curve: &ResidualCurve) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eps", "residual", "quad_error"])?;
    for i in 0..curve.eps_ladder.len() {
        w.write_record([
            num(curve.eps_ladder[i]),
            num(curve.residuals[i]),
            num(curve.quadrature_errors[i]),
        ])?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Rows `kind,arg,value`: `covariance` rows give `r(x)` and `density` rows give `f(λ)`.
///
/// Frequencies that hit a singular point of the density are rejected.
pub fn write_cov_density_csv<W: Write>(
    out: W,
    spec: &SpectrumSpec,
    x_grid: &[f64],
    lambda_grid: &[f64],
) -> Result<()> {
    let density = SpectralDensity::new(spec);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "arg", "value"])?;
    for &x in x_grid {
        w.write_record(["covariance".to_string(), num(x), num(covariance_r(spec, x))])?;
    }
    for &l in lambda_grid {
        w.write_record(["density".to_string(), num(l), num(density.eval(l)?)])?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// A CSV table read back as its header and string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Table { header, rows })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Io(format!("no column {name}")))
    }

    /// Column `name` parsed as floats.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        self.rows
            .iter()
            .map(|row| {
                row[i]
                    .parse::<f64>()
                    .map_err(|e| Error::Io(format!("column {name}: {e}")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::ResidualRegime;
    use crate::field::{draw_noise, simulate_limit_even, EquationSpec, SpectralGrid};

    #[test]
    fn field_round_trip() {
        let grid = SpectralGrid::new(0.05, 200).unwrap();
        let spec = SpectrumSpec::three_cyclic();
        let eq = EquationSpec::even(4).unwrap();
        let ens: Vec<_> = (0..3)
            .map(|r| {
                let noise = draw_noise(&grid, 7, r);
                simulate_limit_even(&spec, eq, &grid, &noise, &[0.5, 1.0], &[-1.0, 0.0, 1.0])
            })
            .collect::<Result<_>>()
            .unwrap();
        let mut buf = Vec::new();
        write_field_csv(&mut buf, &ens).unwrap();
        let table = Table::read(&buf[..]).unwrap();
        assert_eq!(table.header, ["t", "x", "value", "replicate"]);
        assert_eq!(table.rows.len(), 3 * 2 * 3);
        let values = table.column("value").unwrap();
        let expected: Vec<f64> = ens.iter().flat_map(|f| f.values.iter().copied()).collect();
        assert_eq!(values, expected);
    }

    #[test]
    fn covariance_stderr_column() {
        let row = CovarianceRow {
            m: 4,
            t: 1.0,
            t_prime: 0.5,
            x: 0.1,
            x_prime: 0.0,
            value: 1.0 / 3.0,
            stderr: None,
        };
        let mut buf = Vec::new();
        write_covariance_csv(&mut buf, &[row]).unwrap();
        let t = Table::read(&buf[..]).unwrap();
        assert_eq!(t.header.len(), 6);
        assert_eq!(t.column("value").unwrap()[0], 1.0 / 3.0);
        let mut buf = Vec::new();
        write_covariance_csv(
            &mut buf,
            &[CovarianceRow {
                stderr: Some(0.1),
                ..row
            }],
        )
        .unwrap();
        let t = Table::read(&buf[..]).unwrap();
        assert_eq!(t.column("stderr").unwrap(), [0.1]);
    }

    #[test]
    fn residual_and_density_round_trip() {
        let curve = ResidualCurve {
            eps_ladder: vec![1.0, 0.1],
            residuals: vec![std::f64::consts::PI, 1e-300],
            quadrature_errors: vec![1e-12, 0.0],
            regime: ResidualRegime::EvenCyclic,
        };
        let mut buf = Vec::new();
        write_residual_csv(&mut buf, &curve).unwrap();
        let t = Table::read(&buf[..]).unwrap();
        assert_eq!(t.column("residual").unwrap(), curve.residuals);
        let spec = SpectrumSpec::four_component();
        let mut buf = Vec::new();
        write_cov_density_csv(&mut buf, &spec, &[0.0, 1.0], &[0.3]).unwrap();
        let t = Table::read(&buf[..]).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.column("value").unwrap()[0], covariance_r(&spec, 0.0));
        assert!(write_cov_density_csv(Vec::new(), &spec, &[], &[0.8]).is_err());
    }
}
