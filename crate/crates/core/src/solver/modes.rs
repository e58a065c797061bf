//! Analytic forcing generators: finite sums of Fourier modes, and the
//! manufactured forcing that makes a chosen `u*` the exact solution.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DerivativeBackend, TorusField, TorusGrid};
use crate::macoeffs::MACoefficients;

use super::operator::operator_fields;

/// `amp · cos(2π(k1·x₁ + k2·x₂) + phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub k1: i64,
    pub k2: i64,
    pub amp: f64,
    #[serde(default)]
    pub phase: f64,
}

impl Mode {
    pub fn new(k1: i64, k2: i64, amp: f64, phase: f64) -> Self {
        Self { k1, k2, amp, phase }
    }
}

pub fn modes_field(grid: TorusGrid, modes: &[Mode]) -> TorusField {
    TorusField::from_fn(grid, |x, y| {
        modes
            .iter()
            .map(|m| m.amp * (2.0 * PI * (m.k1 as f64 * x + m.k2 as f64 * y) + m.phase).cos())
            .sum()
    })
}

/// Forcing `F = ln((A11A22 − A12² − E1)/E2)` evaluated at `u_star`, so that
/// `u_star` solves the τ = 1 equation exactly in the given discretization.
/// Fails if the ratio is not positive somewhere (no clamping).
pub fn manufactured_forcing(
    u_star: &TorusField,
    c: &MACoefficients,
    backend: &dyn DerivativeBackend,
) -> Result<TorusField> {
    let ratio = operator_fields(u_star, c, backend)
        .determinant()
        .map(|d| (d - c.e1) / c.e2);
    let min = ratio.min();
    if !(min > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "manufactured e^F is not positive (min {min:e}); choose a smaller u*"
        )));
    }
    Ok(ratio.map(f64::ln))
}
