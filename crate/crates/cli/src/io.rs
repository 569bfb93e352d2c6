//! CSV and JSON artifacts. Floats are written with 17 significant digits in
//! scientific notation, which round-trips every `f64` exactly.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use scattering::{Coeffs1, Coeffs2, FreqSamples, GridConfig};

use crate::error::{CliError, CliResult};

pub const A1_FILE: &str = "a1.csv";
pub const A2_FILE: &str = "a2.csv";

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Writes a CSV with the given header; each row is already formatted.
pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::csv(path, e))?;
    w.write_record(header).map_err(|e| CliError::csv(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::csv(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Writes named equal-length columns.
pub fn write_columns(path: &Path, columns: &[(&str, &[f64])]) -> CliResult<()> {
    let header: Vec<&str> = columns.iter().map(|(name, _)| *name).collect();
    let len = columns.first().map_or(0, |(_, c)| c.len());
    let rows = (0..len).map(|j| columns.iter().map(|(_, c)| num(c[j])).collect());
    write_csv(path, &header, rows)
}

pub fn write_a1(path: &Path, c: &Coeffs1) -> CliResult<()> {
    let rows = c.values().iter().enumerate().map(|(k, v)| vec![k.to_string(), num(*v)]);
    write_csv(path, &["k", "a1"], rows)
}

/// Upper triangle `k <= l` only; the table is symmetric.
pub fn write_a2(path: &Path, c: &Coeffs2) -> CliResult<()> {
    let dim = c.dim();
    let rows = (0..dim).flat_map(|k| (k..dim).map(move |l| (k, l))).map(|(k, l)| {
        vec![k.to_string(), l.to_string(), num(c.get(k, l))]
    });
    write_csv(path, &["k", "l", "a2"], rows)
}

fn open_reader(path: &Path) -> CliResult<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    if file.metadata().map_err(|e| CliError::io(path, e))?.len() == 0 {
        return Err(CliError::Parse(format!("{}: file is empty", path.display())));
    }
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn headers(path: &Path, r: &mut csv::Reader<fs::File>) -> CliResult<Vec<String>> {
    Ok(r.headers()
        .map_err(|e| CliError::csv(path, e))?
        .iter()
        .map(str::to_owned)
        .collect())
}

fn expect_header(path: &Path, found: &[String], expected: &[&str]) -> CliResult<()> {
    if found != expected {
        return Err(CliError::Parse(format!(
            "{}: expected header {:?}, found {:?}",
            path.display(),
            expected.join(","),
            found.join(",")
        )));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(path: &Path, line: u64, name: &str, raw: Option<&str>) -> CliResult<T> {
    let raw = raw.ok_or_else(|| CliError::Parse(format!("{}: line {line}: missing {name}", path.display())))?;
    raw.parse()
        .map_err(|_| CliError::Parse(format!("{}: line {line}: invalid {name} {raw:?}", path.display())))
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// Reads a first-order table; the grid is rebuilt from `omega_max` and the
/// number of rows.
pub fn read_a1(path: &Path, omega_max: f64) -> CliResult<Coeffs1> {
    let mut r = open_reader(path)?;
    let h = headers(path, &mut r)?;
    expect_header(path, &h, &["k", "a1"])?;
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::csv(path, e))?;
        let line = line_of(&rec);
        let k: usize = field(path, line, "k", rec.get(0))?;
        if k != values.len() {
            return Err(CliError::Parse(format!(
                "{}: line {line}: expected k = {}, found {k}",
                path.display(),
                values.len()
            )));
        }
        values.push(field(path, line, "a1", rec.get(1))?);
    }
    if values.is_empty() {
        return Err(CliError::Parse(format!("{}: no coefficient rows", path.display())));
    }
    let grid = GridConfig::with_count(omega_max, values.len() - 1)?;
    Ok(Coeffs1::new(grid, values)?)
}

pub fn read_a2(path: &Path, grid: &GridConfig) -> CliResult<Coeffs2> {
    let mut r = open_reader(path)?;
    let h = headers(path, &mut r)?;
    expect_header(path, &h, &["k", "l", "a2"])?;
    let dim = grid.len();
    let mut values = vec![0.0; dim * dim];
    let mut seen = HashSet::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::csv(path, e))?;
        let line = line_of(&rec);
        let k: usize = field(path, line, "k", rec.get(0))?;
        let l: usize = field(path, line, "l", rec.get(1))?;
        let v: f64 = field(path, line, "a2", rec.get(2))?;
        if k > l || l >= dim || !seen.insert((k, l)) {
            return Err(CliError::Parse(format!(
                "{}: line {line}: entry ({k}, {l}) is repeated, below the diagonal, or beyond N = {}",
                path.display(),
                dim - 1
            )));
        }
        values[k * dim + l] = v;
        values[l * dim + k] = v;
    }
    let expected = dim * (dim + 1) / 2;
    if seen.len() != expected {
        return Err(CliError::Parse(format!(
            "{}: {} entries for an upper triangle of {expected}",
            path.display(),
            seen.len()
        )));
    }
    Ok(Coeffs2::new(*grid, values)?)
}

/// Measurement file: column `omega` plus `reh` and/or `imh`. Other columns
/// are ignored with a warning.
pub fn read_measurements(path: &Path) -> CliResult<FreqSamples> {
    let mut r = open_reader(path)?;
    let h = headers(path, &mut r)?;
    let find = |name: &str| h.iter().position(|c| c.eq_ignore_ascii_case(name));
    let omega = find("omega")
        .ok_or_else(|| CliError::Parse(format!("{}: missing column \"omega\"", path.display())))?;
    let (re, im) = (find("reh"), find("imh"));
    if re.is_none() && im.is_none() {
        return Err(CliError::Parse(format!(
            "{}: need at least one of the columns \"reh\", \"imh\"",
            path.display()
        )));
    }
    for (i, name) in h.iter().enumerate() {
        if Some(i) != Some(omega) && Some(i) != re && Some(i) != im {
            log::warn!("{}: ignoring column {name:?}", path.display());
        }
    }
    let (mut ws, mut res, mut ims) = (Vec::new(), Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::csv(path, e))?;
        let line = line_of(&rec);
        ws.push(field(path, line, "omega", rec.get(omega))?);
        if let Some(i) = re {
            res.push(field(path, line, "reh", rec.get(i))?);
        }
        if let Some(i) = im {
            ims.push(field(path, line, "imh", rec.get(i))?);
        }
    }
    if ws.is_empty() {
        return Err(CliError::Parse(format!("{}: no data rows", path.display())));
    }
    Ok(FreqSamples::new(ws, re.map(|_| res), im.map(|_| ims))?)
}

#[derive(Serialize)]
struct Sidecar<'a, C: Serialize, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
    files: Vec<String>,
    results: T,
}

pub fn write_sidecar<C: Serialize, T: Serialize>(
    path: &Path,
    command: &str,
    config: &C,
    files: &[PathBuf],
    results: T,
) -> CliResult<()> {
    let sidecar = Sidecar {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        files: files
            .iter()
            .map(|p| p.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned()))
            .collect(),
        results,
    };
    let text = serde_json::to_string_pretty(&sidecar).map_err(|e| CliError::Parse(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 2.5e300, 0.0, f64::MIN_POSITIVE] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }
}
