//! Nil frames with `G³₃ = 0`: the problem has the closed-form solution
//! `Ω̃ = e^F f¹⁴ + f²³ = Ω + (e^F − 1) dy∧dt`, no PDE solve needed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{validate, FrameSpec, GroupCase};
use crate::grid::{integral_mean, TorusField};
use crate::macoeffs::G33_ZERO_TOL;

/// Exactness certificate: `∫(e^F − 1)` must vanish to this tolerance.
pub const EXACTNESS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitReport {
    /// `sup |p·q − e^F|`
    pub product_defect: f64,
    /// `|mean(e^F − 1)|`
    pub exactness_mean: f64,
    pub exact: bool,
    pub mean_p: f64,
    /// Volume defect `sup |(e^F − 1)·1 − e^F|` of the alternative form
    /// `(e^F − 1) f¹⁴ + f²³`, which does not solve the problem (always 1).
    pub unshifted_form_defect: f64,
}

/// Coefficients of `Ω̃ = p·f¹⁴ + q·f²³`.
#[derive(Clone, Debug)]
pub struct ExplicitSolution {
    pub p: TorusField,
    pub q: TorusField,
    pub report: ExplicitReport,
}

pub fn nil_explicit_g33zero(spec: &FrameSpec, f: &TorusField) -> Result<ExplicitSolution> {
    if spec.case() != GroupCase::NilYT {
        return Err(Error::WrongCase {
            expected: GroupCase::NilYT.name(),
            found: spec.case().name(),
        });
    }
    let g33 = spec.g(3, 3);
    if g33.abs() > G33_ZERO_TOL {
        return Err(Error::NotExplicitCase { g33 });
    }
    let validation = validate(spec)?;
    if !validation.valid {
        return Err(Error::InvalidFrame(validation));
    }
    let ef = f.map(f64::exp);
    let p = ef.clone();
    let q = TorusField::constant(f.grid(), 1.0);
    let exactness_mean = integral_mean(&ef.offset(-1.0)).abs();
    let report = ExplicitReport {
        product_defect: (&(&p * &q) - &ef).sup_abs(),
        exactness_mean,
        exact: exactness_mean <= EXACTNESS_TOL,
        mean_p: integral_mean(&p),
        unshifted_form_defect: (&ef.offset(-1.0) - &ef).sup_abs(),
    };
    Ok(ExplicitSolution { p, q, report })
}
