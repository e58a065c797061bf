use std::path::Path;

use serde::Serialize;

use cyma_core::frames::{sample_admissible, validate as validate_frame};
use cyma_core::macoeffs::{check_hypotheses, coefficients};
use cyma_core::pipeline::roundtrip as run_roundtrip;
use cyma_core::reconstruct::nil_explicit_g33zero;
use cyma_core::registry;
use cyma_core::validation::ValidationReport;
use cyma_core::{continuity_solve, GroupCase, MACoefficients, SolverConfig, TorusGrid};

use crate::inputs::{load_coefficients, load_config, load_frame, normalized, parse_forcing};
use crate::output::Run;

pub fn validate(run: &mut Run, frame: &str) -> anyhow::Result<u8> {
    let spec = load_frame(run, frame)?;
    let report = validate_frame(&spec)?;
    run.report("validation", &report)?;
    if !report.valid {
        eprintln!("invalid frame: {}", report.summary());
        return Ok(1);
    }
    Ok(0)
}

#[derive(Serialize)]
struct CoefficientsReport {
    #[serde(flatten)]
    coefficients: MACoefficients,
    /// `B11·B22 − B12² − D`
    b_identity_defect: f64,
    /// `C11·C22 − C12² − E1 − E2`
    c_identity_defect: f64,
    hypotheses: ValidationReport,
    notes: Vec<&'static str>,
}

pub fn coeffs(run: &mut Run, frame: &str) -> anyhow::Result<u8> {
    let spec = load_frame(run, frame)?;
    let c = coefficients(&spec)?;
    run.report(
        "coefficients",
        &CoefficientsReport {
            coefficients: c,
            b_identity_defect: c.b_identity_defect(),
            c_identity_defect: c.c_identity_defect(),
            hypotheses: check_hypotheses(&c),
            notes: c.notes(),
        },
    )?;
    Ok(0)
}

/// Resolves the solver config and the normalized forcing on a common grid.
fn config_and_forcing(
    run: &mut Run,
    config: Option<&Path>,
    forcing: &str,
    c: &MACoefficients,
) -> anyhow::Result<(SolverConfig, cyma_core::TorusField)> {
    let (mut cfg, explicit_grid) = load_config(run, config)?;
    let forcing = parse_forcing(run, forcing)?;
    let backend = registry::backend(&cfg.backend)?;
    let grid = cfg.grid()?;
    let raw = forcing.sample(explicit_grid.then_some(grid), grid, Some(c), backend.as_ref())?;
    cfg.n1 = raw.grid().n1();
    cfg.n2 = raw.grid().n2();
    cfg.validate()?;
    run.set_config(&cfg)?;
    let f = normalized(run, &raw);
    Ok((cfg, f))
}

pub fn solve(run: &mut Run, coeffs: &Path, forcing: &str, config: Option<&Path>) -> anyhow::Result<u8> {
    let c = load_coefficients(run, coeffs)?;
    let (cfg, f) = config_and_forcing(run, config, forcing, &c)?;
    let (u, report) = continuity_solve(&c, &f, &cfg)?;
    run.field("u", &u)?;
    run.report("solve", &report)?;
    Ok(0)
}

#[derive(Serialize)]
struct OneFormManifest<'a> {
    case: GroupCase,
    grid: [usize; 2],
    frame_file: &'a str,
    components: [&'static str; 4],
}

pub fn roundtrip(run: &mut Run, frame: &str, forcing: &str, config: Option<&Path>) -> anyhow::Result<u8> {
    let spec = load_frame(run, frame)?;
    let c = coefficients(&spec)?;
    let (cfg, f) = config_and_forcing(run, config, forcing, &c)?;
    let rt = run_roundtrip(&spec, &f, &cfg)?;
    run.field("u", &rt.u)?;
    for (name, a) in ["a1", "a2", "a3", "a4"].into_iter().zip(rt.form.components()) {
        run.field(name, a)?;
    }
    let g = rt.form.grid();
    run.write_json(
        "oneform",
        &OneFormManifest {
            case: rt.form.case,
            grid: [g.n1(), g.n2()],
            frame_file: frame,
            components: ["a1.f64", "a2.f64", "a3.f64", "a4.f64"],
        },
    )?;
    run.report("roundtrip", &rt.report)?;
    Ok(0)
}

pub fn explicit(run: &mut Run, frame: &str, forcing: &str) -> anyhow::Result<u8> {
    let spec = load_frame(run, frame)?;
    let forcing = parse_forcing(run, forcing)?;
    let wanted = run.opts.grid.map(|(n1, n2)| TorusGrid::new(n1, n2)).transpose()?;
    let backend = registry::backend(run.opts.backend.as_deref().unwrap_or("spectral"))?;
    let raw = forcing.sample(wanted, TorusGrid::square(64)?, None, backend.as_ref())?;
    let f = normalized(run, &raw);
    let sol = nil_explicit_g33zero(&spec, &f)?;
    run.field("p", &sol.p)?;
    run.field("q", &sol.q)?;
    run.report("explicit", &sol.report)?;
    Ok(0)
}

pub fn sample(run: &mut Run, case: &str, count: usize) -> anyhow::Result<u8> {
    let case = GroupCase::parse(case)?;
    let seed = run.opts.seed;
    let frames = (0..count as u64)
        .map(|k| sample_admissible(case, seed + k))
        .collect::<Result<Vec<_>, _>>()?;
    if let [frame] = frames.as_slice() {
        run.report("frame", frame)?;
    } else {
        for (k, frame) in frames.iter().enumerate() {
            run.write_json(&format!("frame_{k:04}"), frame)?;
        }
        run.report("frames", &frames)?;
    }
    Ok(0)
}
