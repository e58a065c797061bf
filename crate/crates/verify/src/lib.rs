//! Bookkeeping for the acceptance suite: each criterion collects named
//! checks and prints a single PASS/FAIL line, followed by indented detail
//! for failed checks and notes.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub what: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Criterion {
    pub fn new(id: u8, title: &'static str) -> Self {
        Self {
            id,
            title,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn holds(&mut self, what: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            what: what.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    /// `value ≤ limit`; NaN fails.
    pub fn at_most(&mut self, what: impl Into<String>, value: f64, limit: f64) -> bool {
        self.holds(what, value <= limit, format!("{value:.3e} (limit {limit:.0e})"))
    }

    pub fn within(&mut self, what: impl Into<String>, value: f64, lo: f64, hi: f64) -> bool {
        self.holds(what, (lo..=hi).contains(&value), format!("{value:.4} (range [{lo}, {hi}])"))
    }

    /// Context printed under the criterion whatever its status.
    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(
            f,
            "acceptance {:>2} {status}  {}  [{}/{} checks]",
            self.id,
            self.title,
            self.checks.len() - failed,
            self.checks.len()
        )?;
        for c in self.checks.iter().filter(|c| !c.passed) {
            write!(f, "\n      failed: {}: {}", c.what, c.detail)?;
        }
        for n in &self.notes {
            write!(f, "\n      note: {n}")?;
        }
        Ok(())
    }
}

/// Prints the criteria in id order; returns whether all passed.
pub fn summarize(criteria: &mut [Criterion]) -> bool {
    criteria.sort_by_key(|c| c.id);
    for c in criteria.iter() {
        println!("{c}");
    }
    let passed = criteria.iter().filter(|c| c.passed()).count();
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
    passed == criteria.len()
}
