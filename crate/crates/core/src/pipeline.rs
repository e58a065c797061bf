//! End-to-end round trip: frame → coefficients → solve → 1-form → residuals.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::frames::FrameSpec;
use crate::grid::TorusField;
use crate::macoeffs::{coefficients, MACoefficients};
use crate::reconstruct::{one_form, system_residuals_with, OneFormField, SystemResidualReport};
use crate::solver::{continuity_solve, SolveReport, SolverConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub coefficients: MACoefficients,
    pub solve: SolveReport,
    pub residuals: SystemResidualReport,
    pub wraparound_jumps: [f64; 4],
}

pub struct RoundTrip {
    pub u: TorusField,
    pub form: OneFormField,
    pub report: RoundTripReport,
}

pub fn roundtrip(spec: &FrameSpec, f: &TorusField, cfg: &SolverConfig) -> Result<RoundTrip> {
    let c = coefficients(spec)?;
    let (u, solve) = continuity_solve(&c, f, cfg)?;
    let backend = crate::registry::backend(&cfg.backend)?;
    let form = one_form(&u, spec, backend.as_ref())?;
    let residuals = system_residuals_with(&form, &u, spec, f, backend.as_ref())?;
    Ok(RoundTrip {
        report: RoundTripReport {
            coefficients: c,
            solve,
            residuals,
            wraparound_jumps: form.wraparound_jumps,
        },
        u,
        form,
    })
}
