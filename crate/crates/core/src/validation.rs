use serde::{Deserialize, Serialize};

/// One failed constraint: its name, the offending left-hand side and the
/// tolerance it was checked against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub(crate) fn new() -> Self {
        Self {
            valid: true,
            ..Self::default()
        }
    }

    /// `lhs = 0` within `tol`.
    pub(crate) fn zero(&mut self, name: &str, lhs: f64, tol: f64) {
        self.require(name, lhs, tol, lhs.abs() <= tol);
    }

    /// `lhs ≠ 0`, i.e. `|lhs| > tol`.
    pub(crate) fn nonzero(&mut self, name: &str, lhs: f64, tol: f64) {
        self.require(name, lhs, tol, lhs.abs() > tol);
    }

    /// `lhs ≥ 0` up to `tol`.
    pub(crate) fn nonnegative(&mut self, name: &str, lhs: f64, tol: f64) {
        self.require(name, lhs, tol, lhs >= -tol);
    }

    /// Strict positivity, no slack.
    pub(crate) fn positive(&mut self, name: &str, lhs: f64) {
        self.require(name, lhs, 0.0, lhs > 0.0);
    }

    pub(crate) fn require(&mut self, name: &str, lhs: f64, tol: f64, ok: bool) {
        if !ok || !lhs.is_finite() {
            self.violations.push(Violation {
                constraint: name.to_string(),
                value: lhs,
                tolerance: tol,
            });
            self.valid = false;
        }
    }

    pub(crate) fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn has_violation(&self, constraint: &str) -> bool {
        self.violations.iter().any(|v| v.constraint == constraint)
    }

    pub fn summary(&self) -> String {
        if self.valid {
            return "valid".to_string();
        }
        self.violations
            .iter()
            .map(|v| format!("{} (lhs {:e}, tol {:e})", v.constraint, v.value, v.tolerance))
            .collect::<Vec<_>>()
            .join("; ")
    }
}
