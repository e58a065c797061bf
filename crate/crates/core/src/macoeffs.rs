//! Constant coefficients of the generalized Monge–Ampère equation
//!
//! ```text
//! (u₁₁ + B11 u₂ + C11 + D u)(u₂₂ + B22 u₂ + C22) − (u₁₂ + B12 u₂ + C12)² = E1 + E2 e^F
//! ```
//!
//! extracted in closed form from validated frame data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{validate, FrameSpec, GroupCase};
use crate::validation::ValidationReport;

/// Identity tolerance used by [`check_hypotheses`].
pub const IDENTITY_TOL: f64 = 1e-10;

/// `|G³₃|` at or below this selects the explicit (G³₃ = 0) Nil branch.
pub const G33_ZERO_TOL: f64 = 1e-10;

/// `(G²₃)² + (G²₄)²` at or below this makes the Sol reduction degenerate.
pub const SOL_E2_MIN: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MACoefficients {
    #[serde(rename = "B11")]
    pub b11: f64,
    #[serde(rename = "B12")]
    pub b12: f64,
    #[serde(rename = "B22")]
    pub b22: f64,
    #[serde(rename = "C11")]
    pub c11: f64,
    #[serde(rename = "C12")]
    pub c12: f64,
    #[serde(rename = "C22")]
    pub c22: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    #[serde(rename = "E2")]
    pub e2: f64,
    pub case: GroupCase,
}

impl MACoefficients {
    /// `(B11, B12, B22, C11, C12, C22, D, E1, E2)`.
    pub fn as_tuple(&self) -> [f64; 9] {
        [
            self.b11, self.b12, self.b22, self.c11, self.c12, self.c22, self.d, self.e1, self.e2,
        ]
    }

    pub fn from_tuple(case: GroupCase, v: [f64; 9]) -> Self {
        let [b11, b12, b22, c11, c12, c22, d, e1, e2] = v;
        Self {
            b11,
            b12,
            b22,
            c11,
            c12,
            c22,
            d,
            e1,
            e2,
            case,
        }
    }

    /// `B11·B22 − B12² − D`; zero by construction.
    pub fn b_identity_defect(&self) -> f64 {
        self.b11 * self.b22 - self.b12 * self.b12 - self.d
    }

    /// `C11·C22 − C12² − E1 − E2`; zero by construction.
    pub fn c_identity_defect(&self) -> f64 {
        self.c11 * self.c22 - self.c12 * self.c12 - self.e1 - self.e2
    }

    /// Modelling assumptions attached to the record, for reports.
    pub fn notes(&self) -> Vec<&'static str> {
        match self.case {
            GroupCase::NilYT => vec![
                "D = 0: the Nil reduction has no zeroth-order term",
                "E2 = 1/(G¹₁G³₃)², the value for which C11C22 − C12² = E1 + E2 holds",
            ],
            GroupCase::SolR => vec!["C12 = 0: the Sol mixed operator (u₁₂ + B12 u₂) has no constant"],
        }
    }
}

fn require_valid(spec: &FrameSpec, case: GroupCase) -> Result<()> {
    if spec.case() != case {
        return Err(Error::WrongCase {
            expected: case.name(),
            found: spec.case().name(),
        });
    }
    let report = validate(spec)?;
    if !report.valid {
        return Err(Error::InvalidFrame(report));
    }
    Ok(())
}

fn assert_identities(c: &MACoefficients) {
    let scale = c.as_tuple().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = IDENTITY_TOL * scale * scale;
    assert!(
        c.b_identity_defect().abs() <= tol && c.c_identity_defect().abs() <= tol,
        "coefficient identities violated on a validated frame: {c:?}"
    );
}

/// Coefficients of the Nil³×ℝ (π_yt, non-Lagrangian, G³₃ ≠ 0) reduction.
pub fn nil_coefficients(spec: &FrameSpec) -> Result<MACoefficients> {
    require_valid(spec, GroupCase::NilYT)?;
    let g33 = spec.g(3, 3);
    if g33.abs() <= G33_ZERO_TOL {
        return Err(Error::ExplicitCaseG33Zero { g33 });
    }
    let g = |i, j| spec.g(i, j);
    let h = |i, j| spec.h(i, j);
    let g11 = g(1, 1);
    let g31 = g(3, 1);
    let g34 = g(3, 4);
    let h44 = h(4, 4);

    let b11 = g(2, 2) * g31 * g31 * h44 / (g11 * g33) - 2.0 * g(2, 3) * g31 * g34 * h44 / (g11 * g33)
        + g(2, 3) * g34 * h(2, 4) / g11;
    let b12 = -g(2, 2) * g31 * h44 / g33 + g(2, 3) * g34 * h44 / g33;
    let b22 = g11 * g(2, 2) * h44 / g33;
    let c11 = 1.0 / (g11 * g11) + g31 * g31 / (g11 * g11 * g33 * g33) + g34 / (g11 * g11 * g33);
    let c12 = -g31 / (g11 * g33 * g33);
    let c22 = 1.0 / (g33 * g33);
    let e1 = g33 * g34 / (g11 * g11 * g33.powi(4));
    let e2 = 1.0 / (g11 * g33).powi(2);

    let c = MACoefficients {
        b11,
        b12,
        b22,
        c11,
        c12,
        c22,
        d: 0.0,
        e1,
        e2,
        case: GroupCase::NilYT,
    };
    assert_identities(&c);
    Ok(c)
}

/// Coefficients of the Sol³×ℝ reduction.
pub fn sol_coefficients(spec: &FrameSpec) -> Result<MACoefficients> {
    require_valid(spec, GroupCase::SolR)?;
    let e2 = spec.sol_e2();
    if e2 <= SOL_E2_MIN {
        return Err(Error::DegenerateE2 { e2 });
    }
    let g = |i, j| spec.g(i, j);
    let h = |i, j| spec.h(i, j);
    let (g22, g23, g24) = (g(2, 2), g(2, 3), g(2, 4));
    let twist = h(4, 4) * g(4, 3);

    let b11 = 2.0 * h(1, 1) * g22 * g23 * (g24 + g23 * twist) / e2;
    let b12 = (g24 * g24 - g23 * g23 + 2.0 * g23 * g24 * twist) / e2;
    let b22 = -2.0 * g(1, 1) * h(2, 2) * g24 * (g23 - g24 * twist) / e2;
    let c11 = h(1, 1) * (g22 * g22 + g23 * g23 + g24 * g24);
    let c22 = g(1, 1);

    let c = MACoefficients {
        b11,
        b12,
        b22,
        c11,
        c12: 0.0,
        c22,
        d: -1.0,
        e1: g22 * g22,
        e2,
        case: GroupCase::SolR,
    };
    assert_identities(&c);
    Ok(c)
}

/// Dispatches on the frame's case.
pub fn coefficients(spec: &FrameSpec) -> Result<MACoefficients> {
    match spec.case() {
        GroupCase::NilYT => nil_coefficients(spec),
        GroupCase::SolR => sol_coefficients(spec),
    }
}

/// Structural hypotheses required by the Monge–Ampère existence theory.
pub fn check_hypotheses(c: &MACoefficients) -> ValidationReport {
    let mut r = ValidationReport::new();
    r.positive("C11 + C22 > 0", c.c11 + c.c22);
    r.require("D ≤ 0", c.d, 0.0, c.d <= 0.0);
    r.positive("E1 > 0", c.e1);
    r.positive("E2 > 0", c.e2);
    r.zero("B11B22 − B12² = D", c.b_identity_defect(), IDENTITY_TOL);
    r.zero("C11C22 − C12² = E1 + E2", c.c_identity_defect(), IDENTITY_TOL);
    for (name, v) in [("E1", c.e1), ("E2", c.e2)] {
        if v > 0.0 && v < 1e-8 {
            r.warn(format!("{name} = {v:e} is close to degenerate"));
        }
    }
    r
}
