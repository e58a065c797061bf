use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{project_zero_mean, DerivativeBackend, TorusField};
use crate::macoeffs::MACoefficients;

use super::jacobian::JacobianMode;
use super::krylov::{gmres, FourierPreconditioner, GmresOptions};
use super::operator::{residual_unchecked, OperatorTriple};
use super::{truncate_two_thirds, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonStats {
    /// sup of the zero-mean residual before / after the step
    pub residual_before: f64,
    pub residual_after: f64,
    pub step_length: f64,
    pub line_search_shrinks: usize,
    pub linear_iterations: usize,
    pub linear_relative_residual: f64,
    pub update_sup: f64,
}

pub(crate) struct Evaluated {
    pub t_sup: f64,
    pub ops: OperatorTriple,
    pub rhs: TorusField,
}

pub(crate) struct Stepper<'a> {
    pub c: &'a MACoefficients,
    pub f: &'a TorusField,
    pub backend: &'a dyn DerivativeBackend,
    pub mode: &'a dyn JacobianMode,
    pub cfg: &'a SolverConfig,
}

impl Stepper<'_> {
    pub fn evaluate(&self, u: &TorusField, tau: f64) -> Evaluated {
        let (t, ops) = residual_unchecked(u, self.c, self.f, tau, self.backend);
        let projected = project_zero_mean(&t);
        Evaluated {
            t_sup: projected.sup_abs(),
            ops,
            rhs: -&projected,
        }
    }

    fn project_iterate(&self, u: &TorusField) -> TorusField {
        let u = project_zero_mean(u);
        if self.cfg.dealias {
            truncate_two_thirds(&u)
        } else {
            u
        }
    }

    /// One damped Newton step from an iterate whose evaluation is `at`.
    pub fn step(&self, u: &TorusField, tau: f64, at: &Evaluated) -> Result<(TorusField, NewtonStats, Evaluated)> {
        assert!(
            at.ops.is_elliptic(),
            "newton_step requires min A11 > 0 and min A22 > 0 at the current iterate (got {}, {})",
            at.ops.min_a11(),
            at.ops.min_a22()
        );
        let lin = self.mode.linearize(&at.ops, u, self.c);
        let (p11, p22) = lin.principal_means();
        let precond = FourierPreconditioner::new(u.grid(), p11, p22, self.backend);
        let apply = |w: &TorusField| project_zero_mean(&lin.apply(w, self.backend));
        let ls = &self.cfg.linear_solver;
        let opts = GmresOptions {
            tol: ls.tol,
            max_iter: ls.max_iter,
            restart: ls.restart,
        };
        let (w, lstats) = gmres(apply, |r| precond.apply(r), &at.rhs, opts)?;

        let tol = self.cfg.newton_tol;
        let mut s = 1.0;
        let mut shrinks = 0;
        while s >= self.cfg.line_search.min_step {
            let cand = self.project_iterate(&u.axpy(s, &w));
            let ev = self.evaluate(&cand, tau);
            if ev.ops.is_elliptic() && (ev.t_sup <= at.t_sup || ev.t_sup <= tol) {
                let stats = NewtonStats {
                    residual_before: at.t_sup,
                    residual_after: ev.t_sup,
                    step_length: s,
                    line_search_shrinks: shrinks,
                    linear_iterations: lstats.iterations,
                    linear_relative_residual: lstats.relative_residual,
                    update_sup: s * w.sup_abs(),
                };
                return Ok((cand, stats, ev));
            }
            s *= self.cfg.line_search.shrink;
            shrinks += 1;
        }
        Err(Error::LineSearchFailed {
            min_step: self.cfg.line_search.min_step,
        })
    }
}

/// One exact-Jacobian (or configured-mode) Newton update of `T(·, τ) = 0`
/// with the ellipticity-preserving line search.
///
/// Panics if `u` is not elliptic (`min A11 > 0`, `min A22 > 0`).
pub fn newton_step(
    u: &TorusField,
    c: &MACoefficients,
    f: &TorusField,
    tau: f64,
    cfg: &SolverConfig,
) -> Result<(TorusField, NewtonStats)> {
    cfg.validate()?;
    u.check_same_grid(f)?;
    let backend = crate::registry::backend(&cfg.backend)?;
    let mode = crate::registry::jacobian_mode(&cfg.jacobian_mode)?;
    let stepper = Stepper {
        c,
        f,
        backend: backend.as_ref(),
        mode: mode.as_ref(),
        cfg,
    };
    let at = stepper.evaluate(u, tau);
    stepper.step(u, tau, &at).map(|(u, stats, _)| (u, stats))
}
