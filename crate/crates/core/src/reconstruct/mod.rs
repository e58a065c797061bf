//! Inverse change of variables: from the scalar potential `u` back to the
//! 1-form `a` with `Ω̃ = Ω + da`, and verification of the original system.

pub mod adapter;
pub mod coframe;
pub mod explicit;
pub mod nil;
pub mod sol;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{FrameSpec, GroupCase};
use crate::grid::{DerivativeBackend, Spectral, TorusField, TorusGrid};

pub use adapter::{CaseAdapter, NilAdapter, SolAdapter};
pub use coframe::Coframe;
pub use explicit::{nil_explicit_g33zero, ExplicitReport, ExplicitSolution};

/// `a = a_k f^k` sampled on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFormField {
    pub case: GroupCase,
    pub a1: TorusField,
    pub a2: TorusField,
    pub a3: TorusField,
    pub a4: TorusField,
    /// Wraparound jumps of the nonlocal terms (identically zero for Nil).
    pub wraparound_jumps: [f64; 4],
}

impl OneFormField {
    pub fn new(case: GroupCase, [a1, a2, a3, a4]: [TorusField; 4]) -> Self {
        Self {
            case,
            a1,
            a2,
            a3,
            a4,
            wraparound_jumps: [0.0; 4],
        }
    }

    pub fn zeros(case: GroupCase, grid: TorusGrid) -> Self {
        let z = TorusField::zeros(grid);
        Self::new(case, [z.clone(), z.clone(), z.clone(), z])
    }

    pub fn components(&self) -> [&TorusField; 4] {
        [&self.a1, &self.a2, &self.a3, &self.a4]
    }

    pub fn grid(&self) -> TorusGrid {
        self.a1.grid()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemResidualReport {
    pub r1_sup: f64,
    pub r2_sup: f64,
    /// `sup |L3 − e^F|` for the volume equation as written in components
    pub r3_sup: f64,
    /// `sup |(Ω + da)²/Ω² − e^F|`, computed through the coframe instead
    pub volume_ratio_error: f64,
}

impl SystemResidualReport {
    pub fn max(&self) -> f64 {
        self.r1_sup.max(self.r2_sup).max(self.r3_sup).max(self.volume_ratio_error)
    }
}

fn adapter_for(case: GroupCase) -> Result<std::sync::Arc<dyn CaseAdapter>> {
    crate::registry::case_adapter(case.name())
}

pub fn nil_one_form(u: &TorusField, spec: &FrameSpec) -> Result<OneFormField> {
    nil::nil_one_form_with(u, spec, &Spectral)
}

pub fn sol_one_form(u: &TorusField, spec: &FrameSpec) -> Result<OneFormField> {
    sol::sol_one_form_with(u, spec, &Spectral)
}

/// Dispatches on the frame's case.
pub fn one_form(u: &TorusField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> Result<OneFormField> {
    adapter_for(spec.case())?.one_form(u, spec, backend)
}

pub fn system_residuals(a: &OneFormField, u: &TorusField, spec: &FrameSpec, f: &TorusField) -> Result<SystemResidualReport> {
    system_residuals_with(a, u, spec, f, &Spectral)
}

pub fn system_residuals_with(
    a: &OneFormField,
    u: &TorusField,
    spec: &FrameSpec,
    f: &TorusField,
    backend: &dyn DerivativeBackend,
) -> Result<SystemResidualReport> {
    let grid = a.grid();
    for (what, other) in [("u", u.grid()), ("F", f.grid())] {
        if other != grid {
            return Err(Error::GridMismatch(format!(
                "{what} is {}x{} but the 1-form is {}x{}",
                other.n1(),
                other.n2(),
                grid.n1(),
                grid.n2()
            )));
        }
    }
    if a.case != spec.case() {
        return Err(Error::WrongCase {
            expected: spec.case().name(),
            found: a.case.name(),
        });
    }
    let [r1, r2, l3] = adapter_for(spec.case())?.system(a, spec, backend);
    let ef = f.map(f64::exp);
    let volume = Coframe::new(spec).volume_ratio(a, backend);
    Ok(SystemResidualReport {
        r1_sup: r1.sup_abs(),
        r2_sup: r2.sup_abs(),
        r3_sup: (&l3 - &ef).sup_abs(),
        volume_ratio_error: (&volume - &ef).sup_abs(),
    })
}
