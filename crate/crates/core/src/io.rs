//! Plain-text input formats.
//!
//! Data files hold one number per line; blank lines and lines starting with
//! `#` are skipped. Grid configuration files hold `key = value` pairs, with
//! list values separated by commas:
//!
//! ```text
//! # keys: n, k, mu0, methods, reps, seed, baseline
//! n = 1000
//! k = 5, 50, 500
//! mu0 = 3, 4, 5, 7
//! methods = exponential, cauchy, sure
//! reps = 100
//! seed = 20040801
//! baseline = exponential
//! ```
//!
//! Keys that are absent keep their default values.

use std::fs;
use std::path::Path;

use crate::bench::{BenchGrid, Method};
use crate::error::{Error, Result};

pub fn parse_data(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Parse { line: i + 1, message: format!("'{line}' is not a number") })?;
        if !v.is_finite() {
            return Err(Error::Parse { line: i + 1, message: format!("value {v} is not finite") });
        }
        out.push(v);
    }
    Ok(out)
}

pub fn read_data(path: &Path) -> Result<Vec<f64>> {
    parse_data(&fs::read_to_string(path)?)
}

/// One value per line.
pub fn write_vector<W: std::io::Write>(values: &[f64], mut out: W) -> Result<()> {
    for v in values {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

fn parse_list<T, F>(line: usize, value: &str, mut f: F) -> Result<Vec<T>>
where
    F: FnMut(&str) -> Result<T>,
{
    value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| f(s).map_err(|e| Error::Parse { line, message: e.to_string() }))
        .collect()
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::InvalidParameter(format!("'{s}' is not a valid number")))
}

/// Applies a `key = value` configuration on top of `base`.
pub fn parse_grid_config(text: &str, base: BenchGrid) -> Result<BenchGrid> {
    let mut grid = base;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: line_no, message: format!("expected key = value, got '{line}'") })?;
        let value = value.trim();
        let one = |v: &str| -> Result<u64> {
            parse_num(v).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })
        };
        match key.trim() {
            "n" => grid.n = one(value)? as usize,
            "k" => grid.k_values = parse_list(line_no, value, parse_num)?,
            "mu0" => grid.mu0_values = parse_list(line_no, value, parse_num)?,
            "methods" => grid.methods = parse_list(line_no, value, |s| s.parse::<Method>())?,
            "reps" => grid.replications = one(value)? as usize,
            "seed" => grid.master_seed = one(value)?,
            "baseline" => {
                grid.baseline = match value {
                    "" | "none" => None,
                    v => Some(v.parse().map_err(|e: Error| Error::Parse { line: line_no, message: e.to_string() })?),
                }
            }
            other => return Err(Error::Parse { line: line_no, message: format!("unknown key '{other}'") }),
        }
    }
    grid.validate()?;
    Ok(grid)
}
