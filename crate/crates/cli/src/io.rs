//! File formats: sample lists, inline parameters, SNR grids and atomic output.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use eggfit::channel::EggParams;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// Raw bytes of a file, with its path in any error.
pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One positive value per line; `#` comments, blank lines and a leading
/// `irradiance` header are skipped.
pub fn parse_samples(text: &str, source: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    let mut seen_data = false;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_data && line.eq_ignore_ascii_case("irradiance") {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::input(format!("{source}: line {}: cannot parse '{line}'", k + 1)))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::input(format!(
                "{source}: line {}: value {line} is not a positive finite number",
                k + 1
            )));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(CliError::input(format!("{source}: no samples found")));
    }
    Ok(out)
}

pub fn parse_inline_params(s: &str) -> CliResult<EggParams<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::input(format!("--params '{s}': expected omega,lambda,a,b,c")))?;
    if v.len() != 5 {
        return Err(CliError::input(format!(
            "--params '{s}': expected 5 comma-separated values (omega,lambda,a,b,c), got {}",
            v.len()
        )));
    }
    Ok(EggParams::new(v[0], v[1], v[2], v[3], v[4])?)
}

/// Inclusive dB grid `FROM:TO:STEP`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| round_db(self.from + k as f64 * self.step)).collect()
    }
}

fn round_db(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

impl FromStr for SnrGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("'{s}' is not FROM:TO:STEP");
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let grid = SnrGrid {
            from: num(parts[0])?,
            to: num(parts[1])?,
            step: num(parts[2])?,
        };
        if !(grid.from.is_finite() && grid.to.is_finite())
            || !grid.step.is_finite()
            || grid.step <= 0.0
            || grid.to < grid.from
        {
            return Err(format!("'{s}': need finite FROM <= TO and STEP > 0"));
        }
        if (grid.to - grid.from) / grid.step > 100_000.0 {
            return Err(format!("'{s}': more than 100000 grid points"));
        }
        Ok(grid)
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::input(format!("cannot write to stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::input(format!("cannot write {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
