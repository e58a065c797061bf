//! Continuity-method Newton–Krylov solver for
//! `A11A22 − A12² = E1 + E2·e^F` on the unit torus.

pub mod jacobian;
pub mod krylov;
pub mod modes;
pub mod newton;
pub mod operator;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    fft, integral_mean, normalization_defect, sup_norms, NormReport, TorusField, TorusGrid,
};
use crate::macoeffs::{check_hypotheses, MACoefficients};

pub use jacobian::{apply_jacobian, ExactJacobian, JacobianMode, LinearOperator, ShiftedJacobian};
pub use modes::{manufactured_forcing, modes_field, Mode};
pub use newton::{newton_step, NewtonStats};
pub use operator::{apriori_bound, ellipticity, operator_fields, residual, OperatorTriple};

use newton::Stepper;
use operator::F_NORMALIZATION_TOL;

/// Smallest τ increment before the continuation gives up.
pub const MIN_TAU_STEP: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LineSearchConfig {
    pub shrink: f64,
    pub min_step: f64,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        Self { shrink: 0.5, min_step: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinearSolverConfig {
    /// Only `"gmres"` (right-preconditioned, restarted) is available.
    pub method: String,
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for LinearSolverConfig {
    fn default() -> Self {
        Self {
            method: "gmres".into(),
            tol: 1e-12,
            max_iter: 500,
            restart: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub n1: usize,
    pub n2: usize,
    pub backend: String,
    pub newton_tol: f64,
    pub max_newton: usize,
    pub tau_steps: usize,
    pub line_search: LineSearchConfig,
    pub linear_solver: LinearSolverConfig,
    pub jacobian_mode: String,
    /// Truncate iterates to the lower two thirds of each spectrum.
    pub dealias: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n1: 64,
            n2: 64,
            backend: "spectral".into(),
            newton_tol: 1e-10,
            max_newton: 30,
            tau_steps: 8,
            line_search: LineSearchConfig::default(),
            linear_solver: LinearSolverConfig::default(),
            jacobian_mode: "exact".into(),
            dealias: false,
        }
    }
}

impl SolverConfig {
    pub fn for_grid(grid: TorusGrid) -> Self {
        Self {
            n1: grid.n1(),
            n2: grid.n2(),
            ..Self::default()
        }
    }

    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.n1, self.n2)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.newton_tol) || !positive(self.linear_solver.tol) || !positive(self.line_search.min_step) {
            return bad("tolerances must be positive");
        }
        if self.tau_steps == 0 {
            return bad("tau_steps must be at least 1");
        }
        if !(self.line_search.shrink > 0.0 && self.line_search.shrink < 1.0) {
            return bad("line_search.shrink must lie in (0, 1)");
        }
        if self.max_newton == 0 || self.linear_solver.max_iter == 0 || self.linear_solver.restart == 0 {
            return bad("iteration limits must be positive");
        }
        if self.linear_solver.method != "gmres" {
            return Err(Error::UnknownStrategy {
                kind: "linear solver",
                name: self.linear_solver.method.clone(),
                available: "gmres".into(),
            });
        }
        self.grid()?;
        crate::registry::backend(&self.backend)?;
        crate::registry::jacobian_mode(&self.jacobian_mode)?;
        Ok(())
    }
}

/// One attempted continuation stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub tau: f64,
    pub accepted: bool,
    pub newton_iterations: usize,
    pub residual_sup: f64,
    pub min_a11: f64,
    pub min_a22: f64,
    pub line_search_activations: usize,
    pub linear_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n1: usize,
    pub n2: usize,
    pub backend: String,
    pub jacobian_mode: String,
    pub converged: bool,
    pub stages: Vec<StageRecord>,
    pub total_newton_iterations: usize,
    /// sup of the zero-mean part of `T(u, 1)`
    pub residual_sup: f64,
    /// raw mean of `T(u, 1)`: zero analytically, a discretization remainder otherwise
    pub residual_mean: f64,
    pub mean_u: f64,
    pub norms: NormReport,
    pub apriori_bound: f64,
    pub c2_within_bound: bool,
    pub min_a11: f64,
    pub min_a22: f64,
    /// `min(C11 + D·u)`, which the minimum-principle argument keeps positive
    pub min_c11_plus_du: f64,
    /// `min(D·u − C11)` — the lower bound as literally stated
    pub min_du_minus_c11: f64,
    pub wall_time_s: f64,
}

/// Zeroes every Fourier mode with `|k| > n/3` on either axis.
pub fn truncate_two_thirds(f: &TorusField) -> TorusField {
    let grid = f.grid();
    let plan = fft::plan(grid);
    let (n1, n2) = (grid.n1(), grid.n2());
    let mut spec = plan.forward(f.values());
    for ((i, j), c) in spec.indexed_iter_mut() {
        let k1 = fft::signed_mode(i, n1).unsigned_abs() as usize;
        let k2 = fft::signed_mode(j, n2).unsigned_abs() as usize;
        if 3 * k1 > n1 || 3 * k2 > n2 {
            *c = Default::default();
        }
    }
    TorusField::from_array_unchecked(grid, plan.inverse_real(&spec))
}

enum StageOutcome {
    Converged(TorusField, StageRecord),
    Failed(StageRecord),
}

fn solve_stage(stepper: &Stepper<'_>, u0: &TorusField, tau: f64) -> Result<StageOutcome> {
    let cfg = stepper.cfg;
    let mut u = u0.clone();
    let mut at = stepper.evaluate(&u, tau);
    let mut rec = StageRecord {
        tau,
        accepted: false,
        newton_iterations: 0,
        residual_sup: at.t_sup,
        min_a11: at.ops.min_a11(),
        min_a22: at.ops.min_a22(),
        line_search_activations: 0,
        linear_iterations: 0,
        failure: None,
    };
    loop {
        if at.t_sup <= cfg.newton_tol {
            rec.accepted = true;
            return Ok(StageOutcome::Converged(u, rec));
        }
        if rec.newton_iterations >= cfg.max_newton {
            rec.failure = Some(format!("no convergence in {} Newton iterations", cfg.max_newton));
            return Ok(StageOutcome::Failed(rec));
        }
        match stepper.step(&u, tau, &at) {
            Ok((next, stats, ev)) => {
                rec.newton_iterations += 1;
                rec.linear_iterations += stats.linear_iterations;
                if stats.line_search_shrinks > 0 {
                    rec.line_search_activations += 1;
                }
                rec.residual_sup = ev.t_sup;
                rec.min_a11 = ev.ops.min_a11();
                rec.min_a22 = ev.ops.min_a22();
                u = next;
                at = ev;
            }
            Err(e @ (Error::LineSearchFailed { .. } | Error::LinearSolveFailed { .. })) => {
                rec.failure = Some(e.to_string());
                return Ok(StageOutcome::Failed(rec));
            }
            Err(e) => return Err(e),
        }
    }
}

/// Marches `τ` from 0 to 1 starting at the exact solution `u = 0`, halving the
/// step whenever a stage fails and growing it back (up to the base step) on
/// success.
pub fn continuity_solve(
    c: &MACoefficients,
    f: &TorusField,
    cfg: &SolverConfig,
) -> Result<(TorusField, SolveReport)> {
    let start = Instant::now();
    cfg.validate()?;
    let hyp = check_hypotheses(c);
    if !hyp.valid {
        return Err(Error::HypothesesFailed(hyp));
    }
    let grid = cfg.grid()?;
    if f.grid() != grid {
        return Err(Error::GridMismatch(format!(
            "F is {}x{} but the solver is configured for {}x{}",
            f.grid().n1(),
            f.grid().n2(),
            grid.n1(),
            grid.n2()
        )));
    }
    let defect = normalization_defect(f);
    if !(defect <= F_NORMALIZATION_TOL) {
        return Err(Error::UnnormalizedF { defect });
    }
    let backend = crate::registry::backend(&cfg.backend)?;
    let mode = crate::registry::jacobian_mode(&cfg.jacobian_mode)?;
    let stepper = Stepper {
        c,
        f,
        backend: backend.as_ref(),
        mode: mode.as_ref(),
        cfg,
    };

    let base = 1.0 / cfg.tau_steps as f64;
    let mut dtau = base;
    let mut tau = 0.0;
    let mut u = TorusField::zeros(grid);
    let mut stages = Vec::new();
    while tau < 1.0 {
        let mut target = tau + dtau;
        if target > 1.0 - 1e-12 {
            target = 1.0;
        }
        match solve_stage(&stepper, &u, target)? {
            StageOutcome::Converged(next, rec) => {
                stages.push(rec);
                u = next;
                tau = target;
                dtau = (2.0 * dtau).min(base);
            }
            StageOutcome::Failed(rec) => {
                stages.push(rec);
                dtau *= 0.5;
                if dtau < MIN_TAU_STEP {
                    return Err(Error::HomotopyFailed {
                        last_tau: tau,
                        iterate: Box::new(u),
                    });
                }
            }
        }
    }

    let final_eval = stepper.evaluate(&u, 1.0);
    let raw = operator::residual_unchecked(&u, c, f, 1.0, backend.as_ref()).0;
    let norms = sup_norms(&u, backend.as_ref());
    let bound = apriori_bound(c);
    let report = SolveReport {
        n1: grid.n1(),
        n2: grid.n2(),
        backend: backend.name().into(),
        jacobian_mode: mode.name().into(),
        converged: final_eval.t_sup <= cfg.newton_tol,
        total_newton_iterations: stages.iter().map(|s| s.newton_iterations).sum(),
        stages,
        residual_sup: final_eval.t_sup,
        residual_mean: integral_mean(&raw),
        mean_u: integral_mean(&u),
        c2_within_bound: norms.max() <= bound,
        norms,
        apriori_bound: bound,
        min_a11: final_eval.ops.min_a11(),
        min_a22: final_eval.ops.min_a22(),
        min_c11_plus_du: u.map(|v| c.c11 + c.d * v).min(),
        min_du_minus_c11: u.map(|v| c.d * v - c.c11).min(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok((u, report))
}
