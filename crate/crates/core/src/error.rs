use thiserror::Error;

use crate::validation::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("frame matrix is singular (|det G| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("sampler exhausted {0} draws without an admissible frame")]
    ExhaustedRetries(usize),

    #[error("invalid frame: {}", .0.summary())]
    InvalidFrame(ValidationReport),

    #[error("G³₃ = {g33:e} is zero; use the explicit-solution path (`explicit` command)")]
    ExplicitCaseG33Zero { g33: f64 },

    #[error("degenerate Sol frame: (G²₃)² + (G²₄)² = {e2:e} gives E₂ ≈ 0")]
    DegenerateE2 { e2: f64 },

    #[error("Monge–Ampère hypotheses fail: {}", .0.summary())]
    HypothesesFailed(ValidationReport),

    #[error("frame case is {found}, expected {expected}")]
    WrongCase {
        expected: &'static str,
        found: &'static str,
    },

    #[error("F is not normalized: |mean(e^F) − 1| = {defect:e}")]
    UnnormalizedF { defect: f64 },

    #[error("line search found no admissible step ≥ {min_step:e}")]
    LineSearchFailed { min_step: f64 },

    #[error("Krylov solver stalled after {iterations} iterations (relative residual {relative_residual:e})")]
    LinearSolveFailed {
        iterations: usize,
        relative_residual: f64,
    },

    #[error("continuation failed: τ step underflow after reaching τ = {last_tau}")]
    HomotopyFailed {
        last_tau: f64,
        iterate: Box<crate::grid::TorusField>,
    },

    #[error("u has nonzero mean {mean:e}")]
    NonzeroMeanU { mean: f64 },

    #[error("wraparound jump {jump:e} of a{component} exceeds tolerance {tol:e}")]
    PeriodicityCheckFailed {
        component: usize,
        jump: f64,
        tol: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("frame has G³₃ = {g33:e}; the explicit solution only applies when G³₃ = 0")]
    NotExplicitCase { g33: f64 },

    #[error("invalid grid {n1}x{n2}: sizes must be even and at least 8")]
    InvalidGrid { n1: usize, n2: usize },

    #[error("field contains non-finite values")]
    NonFinite,

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Domain failures (bad frame, failed solve) as opposed to usage / IO errors.
    pub fn is_domain_failure(&self) -> bool {
        !matches!(
            self,
            Error::Io(_)
                | Error::Json(_)
                | Error::Parse(_)
                | Error::GridMismatch(_)
                | Error::InvalidGrid { .. }
                | Error::UnknownStrategy { .. }
                | Error::InvalidConfig(_)
                | Error::WrongCase { .. }
                | Error::NotExplicitCase { .. }
                | Error::SingularMatrix { .. }
        )
    }
}
