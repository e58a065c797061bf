//! Field files: raw little-endian `f64` samples (row-major, axis 1 slow) with
//! a `<name>.meta.json` sidecar, plus a small CSV format `x1,x2,value`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{TorusField, TorusGrid};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub n1: usize,
    pub n2: usize,
    pub period1: f64,
    pub period2: f64,
}

impl FieldMeta {
    pub fn for_grid(grid: TorusGrid) -> Self {
        Self {
            n1: grid.n1(),
            n2: grid.n2(),
            period1: 1.0,
            period2: 1.0,
        }
    }
}

/// Sidecar path for a field file: `u.f64` → `u.meta.json`.
pub fn meta_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

pub fn encode_raw(field: &TorusField) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(8 * field.grid().len());
    for v in field.values().iter() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    bytes
}

pub fn decode_raw(grid: TorusGrid, bytes: &[u8]) -> Result<TorusField> {
    if bytes.len() != 8 * grid.len() {
        return Err(Error::GridMismatch(format!(
            "field file holds {} bytes, grid {}x{} needs {}",
            bytes.len(),
            grid.n1(),
            grid.n2(),
            8 * grid.len()
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    TorusField::from_vec(grid, values)
}

pub fn write_field(path: &Path, field: &TorusField) -> Result<()> {
    fs::write(path, encode_raw(field))?;
    let meta = FieldMeta::for_grid(field.grid());
    fs::write(meta_path(path), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<TorusField> {
    let meta: FieldMeta = serde_json::from_str(&fs::read_to_string(meta_path(path))?)?;
    if meta.period1 != 1.0 || meta.period2 != 1.0 {
        return Err(Error::Parse(format!(
            "field periods ({}, {}) must both be 1; rescale the lattice first",
            meta.period1, meta.period2
        )));
    }
    let grid = TorusGrid::new(meta.n1, meta.n2)?;
    decode_raw(grid, &fs::read(path)?)
}

pub fn to_csv(field: &TorusField) -> String {
    let grid = field.grid();
    let mut out = String::from("x1,x2,value\n");
    for ((i, j), v) in field.values().indexed_iter() {
        let _ = writeln!(out, "{:?},{:?},{:?}", grid.x1(i), grid.x2(j), v);
    }
    out
}

/// Parses CSV written by [`to_csv`]; rows must be in row-major order.
pub fn from_csv(text: &str) -> Result<TorusField> {
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("x1,x2,value") => {}
        other => return Err(Error::Parse(format!("bad CSV header {other:?}"))),
    }
    let mut x1s = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(Error::Parse(format!("CSV line {}: expected 3 columns", lineno + 2)));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("CSV line {}: {e}", lineno + 2)))
        };
        x1s.push(parse(cols[0])?);
        values.push(parse(cols[2])?);
    }
    let n2 = x1s.iter().take_while(|&&x| x == x1s[0]).count();
    if n2 == 0 || values.len() % n2 != 0 {
        return Err(Error::Parse("CSV rows do not form a rectangular grid".into()));
    }
    let grid = TorusGrid::new(values.len() / n2, n2)?;
    TorusField::from_vec(grid, values)
}
