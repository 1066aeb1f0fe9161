//! CSV series, plot data and their readers.
//!
//! Numbers are written with 17 significant digits so that re-reading a file
//! reproduces the in-memory values bit for bit; `+0.0` is written as `0`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::diagnostics::SobolevSeries;
use crate::error::{Error, Result};

/// Formats one value for a CSV cell.
pub fn format_number(x: f64) -> String {
    if x == 0.0 && x.is_sign_positive() {
        "0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn momentum_columns(dim: usize) -> Vec<String> {
    match dim {
        1 => vec!["momentum".to_string()],
        _ => ["x", "y", "z"].iter().take(dim).map(|a| format!("momentum_{a}")).collect(),
    }
}

/// Column names of `series.csv`.
pub fn series_header(series: &SobolevSeries) -> Vec<String> {
    let m = series.config.m;
    let mut cols = vec!["t".to_string()];
    cols.extend((0..=m).map(|k| format!("Y{k}")));
    cols.extend(["Z", "zeta", "min_pi", "max_rho", "mass"].map(String::from));
    cols.extend(momentum_columns(series.config.dim));
    cols.push("energy".to_string());
    cols
}

/// Column names of `weighted_norms.csv`.
pub fn weighted_header(series: &SobolevSeries) -> Vec<String> {
    let m = series.config.m;
    let mut cols = vec!["t".to_string()];
    cols.extend((0..=m).map(|k| format!("N{k}")));
    cols.push("max_pi".to_string());
    let sups = series.rows.first().map_or(3, |r| r.sup.len());
    cols.extend((0..sups).map(|k| format!("sup{k}")));
    cols
}

fn write_table(path: &Path, header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(format_number).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    write_file(path, &text)
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes `series.csv`: `t, Y0..Ym, Z, zeta, min_pi, max_rho, mass, momentum.., energy`.
pub fn write_series(path: &Path, series: &SobolevSeries) -> Result<()> {
    let rows = series.rows.iter().map(|r| {
        let mut v = vec![r.t];
        v.extend(&r.plain);
        v.extend([r.z, r.zeta, r.min_pi, r.max_rho, r.mass]);
        v.extend(&r.momentum);
        v.push(r.energy);
        v
    });
    write_table(path, &series_header(series), rows)
}

/// Writes `weighted_norms.csv`: the entropy-weighted norms, `max pi` and the
/// sup norms of the first derivatives.
pub fn write_weighted(path: &Path, series: &SobolevSeries) -> Result<()> {
    let rows = series.rows.iter().map(|r| {
        let mut v = vec![r.t];
        v.extend(&r.weighted);
        v.push(r.max_pi);
        v.extend(&r.sup);
        v
    });
    write_table(path, &weighted_header(series), rows)
}

/// A CSV file read back as numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// Parses a numeric CSV with one header line.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Format("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            let row: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Format(format!("row {}: `{c}`: {e}", i + 1))))
                .collect::<Result<_>>()?;
            if row.len() != header.len() {
                return Err(Error::Format(format!(
                    "row {} has {} cells, header has {}",
                    i + 1,
                    row.len(),
                    header.len()
                )));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table { header, rows })
}

pub fn read_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_table(&text)
}

/// Writes a two-column whitespace-separated file under `dir` and returns its path.
pub fn write_columns(dir: &Path, name: &str, xs: &[f64], ys: &[f64]) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut text = String::new();
    for (x, y) in xs.iter().zip(ys) {
        let _ = writeln!(text, "{} {}", format_number(*x), format_number(*y));
    }
    write_file(&path, &text)?;
    Ok(path)
}

/// Per-figure plot data of a run: `Y_k(t)`, `zeta(t)`, `min pi(t)` and the
/// envelope when given.
pub fn write_plotdata(dir: &Path, series: &SobolevSeries, envelope: Option<&[f64]>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let t = series.times();
    let mut files = Vec::new();
    for k in 0..=series.config.m {
        files.push(write_columns(dir, &format!("Y{k}.dat"), &t, &series.primary(k))?);
    }
    let col = |f: fn(&crate::diagnostics::SeriesRow) -> f64| series.rows.iter().map(f).collect::<Vec<_>>();
    files.push(write_columns(dir, "zeta.dat", &t, &col(|r| r.zeta))?);
    files.push(write_columns(dir, "Z.dat", &t, &col(|r| r.z))?);
    files.push(write_columns(dir, "min_pi.dat", &t, &col(|r| r.min_pi))?);
    if let Some(env) = envelope {
        files.push(write_columns(dir, "envelope.dat", &t, env)?);
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e17, f64::MIN_POSITIVE, 0.1 + 0.2] {
            let back: f64 = format_number(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x}");
        }
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn table_rejects_ragged_rows() {
        assert!(parse_table("a,b\n1,2\n3\n").is_err());
        let t = parse_table("a,b\n1,2\n3,4\n").unwrap();
        assert_eq!(t.column("b"), Some(vec![2.0, 4.0]));
    }
}
