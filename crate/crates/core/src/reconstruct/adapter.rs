use crate::error::Result;
use crate::frames::{FrameSpec, GroupCase};
use crate::grid::{DerivativeBackend, TorusField};

use super::{nil, sol, OneFormField};

/// Per-case half of the round trip: potential → 1-form, and the frame
/// component form of the original system.
pub trait CaseAdapter: Send + Sync {
    fn name(&self) -> &'static str;

    fn case(&self) -> GroupCase;

    fn one_form(&self, u: &TorusField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> Result<OneFormField>;

    /// `[r1, r2, L3]`: the two type conditions (zero when satisfied) and the
    /// left side of the volume equation `L3 = e^F`.
    fn system(&self, a: &OneFormField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> [TorusField; 3];
}

#[derive(Debug, Default)]
pub struct NilAdapter;

impl CaseAdapter for NilAdapter {
    fn name(&self) -> &'static str {
        GroupCase::NilYT.name()
    }

    fn case(&self) -> GroupCase {
        GroupCase::NilYT
    }

    fn one_form(&self, u: &TorusField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> Result<OneFormField> {
        nil::nil_one_form_with(u, spec, backend)
    }

    fn system(&self, a: &OneFormField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> [TorusField; 3] {
        nil::nil_system(a, spec, backend)
    }
}

#[derive(Debug, Default)]
pub struct SolAdapter;

impl CaseAdapter for SolAdapter {
    fn name(&self) -> &'static str {
        GroupCase::SolR.name()
    }

    fn case(&self) -> GroupCase {
        GroupCase::SolR
    }

    fn one_form(&self, u: &TorusField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> Result<OneFormField> {
        sol::sol_one_form_with(u, spec, backend)
    }

    fn system(&self, a: &OneFormField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> [TorusField; 3] {
        sol::sol_system(a, spec, backend)
    }
}
