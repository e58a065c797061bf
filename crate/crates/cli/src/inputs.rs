//! Loading frames, coefficients, solver configs and forcing specifications.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::de::DeserializeOwned;

use cyma_core::fixtures;
use cyma_core::grid::io::{from_csv, read_field};
use cyma_core::grid::{normalize_F, DerivativeBackend};
use cyma_core::solver::{manufactured_forcing, modes_field, Mode};
use cyma_core::{Error, FrameSpec, MACoefficients, SolverConfig, TorusField, TorusGrid};

use crate::output::Run;

pub fn parse_grid_arg(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected N1xN2, got `{s}`"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((n(a)?, n(b)?))
}

fn read_json<T: DeserializeOwned>(run: &mut Run, path: &Path) -> anyhow::Result<T> {
    run.record_file(path)?;
    let text = fs::read_to_string(path).map_err(Error::from)?;
    let value = serde_json::from_str(&text)
        .map_err(Error::from)
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(value)
}

/// A frame file, or `fixture:NAME` for one of the built-in example frames.
pub fn load_frame(run: &mut Run, arg: &str) -> anyhow::Result<FrameSpec> {
    if let Some(name) = arg.strip_prefix("fixture:") {
        run.record_generated(arg);
        return Ok(fixtures::named_frame(name)?);
    }
    read_json(run, Path::new(arg))
}

pub fn load_coefficients(run: &mut Run, path: &Path) -> anyhow::Result<MACoefficients> {
    read_json(run, path)
}

/// Solver config from file (defaults otherwise) with the global flag
/// overrides applied. The second value says whether the grid was fixed by
/// the user rather than left at its default.
pub fn load_config(run: &mut Run, path: Option<&Path>) -> anyhow::Result<(SolverConfig, bool)> {
    let mut explicit_grid = false;
    let mut cfg = match path {
        Some(p) => {
            let raw: serde_json::Value = read_json(run, p)?;
            explicit_grid = raw.get("n1").is_some() || raw.get("n2").is_some();
            serde_json::from_value(raw).map_err(Error::from)?
        }
        None => SolverConfig::default(),
    };
    if let Some((n1, n2)) = run.opts.grid {
        cfg.n1 = n1;
        cfg.n2 = n2;
        explicit_grid = true;
    }
    if let Some(b) = &run.opts.backend {
        cfg.backend = b.clone();
    }
    Ok((cfg, explicit_grid))
}

pub enum Forcing {
    File(PathBuf),
    Csv(PathBuf),
    Modes(Vec<Mode>),
    /// Forcing that makes `scale · u*` the exact solution.
    Manufactured(f64),
}

pub fn parse_forcing(run: &mut Run, arg: &str) -> anyhow::Result<Forcing> {
    if let Some(rest) = arg.strip_prefix("manufactured") {
        let scale = match rest.strip_prefix(':') {
            Some(s) => s
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("manufactured scale `{s}`: {e}")))?,
            None if rest.is_empty() => 1.0,
            None => return Err(Error::Parse(format!("unrecognized forcing `{arg}`")).into()),
        };
        run.record_generated(arg);
        return Ok(Forcing::Manufactured(scale));
    }
    if arg.trim_start().starts_with('[') {
        run.record_generated(arg);
        let modes = serde_json::from_str(arg).map_err(Error::from)?;
        return Ok(Forcing::Modes(modes));
    }
    let path = PathBuf::from(arg);
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Ok(Forcing::Modes(read_json(run, &path)?)),
        Some("csv") => {
            run.record_file(&path)?;
            Ok(Forcing::Csv(path))
        }
        _ => {
            run.record_file(&path)?;
            run.record_file(&cyma_core::grid::io::meta_path(&path))?;
            Ok(Forcing::File(path))
        }
    }
}

fn check_grid(found: TorusGrid, wanted: Option<TorusGrid>) -> anyhow::Result<TorusGrid> {
    match wanted {
        Some(w) if w != found => Err(Error::GridMismatch(format!(
            "forcing is {}x{} but the requested grid is {}x{}",
            found.n1(),
            found.n2(),
            w.n1(),
            w.n2()
        ))
        .into()),
        _ => Ok(found),
    }
}

impl Forcing {
    /// Raw (unnormalized) forcing. File-based forcings carry their own grid,
    /// which must agree with `wanted` when one is given; generated ones are
    /// sampled on `wanted`, or on `fallback`.
    pub fn sample(
        &self,
        wanted: Option<TorusGrid>,
        fallback: TorusGrid,
        coefficients: Option<&MACoefficients>,
        backend: &dyn DerivativeBackend,
    ) -> anyhow::Result<TorusField> {
        let grid = wanted.unwrap_or(fallback);
        Ok(match self {
            Forcing::File(path) => {
                let f = read_field(path).with_context(|| format!("reading {}", path.display()))?;
                check_grid(f.grid(), wanted)?;
                f
            }
            Forcing::Csv(path) => {
                let f = from_csv(&fs::read_to_string(path).map_err(Error::from)?)?;
                check_grid(f.grid(), wanted)?;
                f
            }
            Forcing::Modes(modes) => modes_field(grid, modes),
            Forcing::Manufactured(scale) => {
                let c = coefficients.ok_or_else(|| {
                    Error::InvalidConfig("manufactured forcing needs Monge–Ampère coefficients".into())
                })?;
                manufactured_forcing(&fixtures::u_star(grid).scale(*scale), c, backend)?
            }
        })
    }
}

/// Normalizes `F` so that `mean(e^F) = 1`, logging the constant shift applied.
pub fn normalized(run: &mut Run, raw: &TorusField) -> TorusField {
    let f = normalize_F(raw);
    let shift = f.get(0, 0) - raw.get(0, 0);
    run.note(format!("normalized F by adding {shift:e}"));
    f
}
