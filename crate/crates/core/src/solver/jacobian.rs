//! Linearizations of `u ↦ A11A22 − A12²` around an iterate `v`.
//!
//! Both modes produce the same shape of operator,
//! `c₁₁∂₁₁w + c₁₂∂₁₂w + c₂₂∂₂₂w + c₂∂₂w + c₀w`, with variable coefficients,
//! so the Krylov solve and the preconditioner do not care which one is used.

use crate::grid::{integral_mean, DerivativeBackend, TorusField};
use crate::macoeffs::MACoefficients;

use super::operator::{operator_fields, OperatorTriple};

/// Variable-coefficient second-order operator on the torus.
#[derive(Clone, Debug)]
pub struct LinearOperator {
    pub c11: TorusField,
    pub c12: TorusField,
    pub c22: TorusField,
    pub c2: TorusField,
    pub c0: TorusField,
}

impl LinearOperator {
    pub fn apply(&self, w: &TorusField, backend: &dyn DerivativeBackend) -> TorusField {
        let d = backend.derivatives(w);
        let mut out = &self.c11 * &d.d11;
        for (coef, term) in [(&self.c12, &d.d12), (&self.c22, &d.d22), (&self.c2, &d.d2), (&self.c0, w)] {
            out = &out + &(coef * term);
        }
        out
    }

    /// Means of the `∂₁₁` and `∂₂₂` coefficients, used by the preconditioner.
    pub fn principal_means(&self) -> (f64, f64) {
        (integral_mean(&self.c11), integral_mean(&self.c22))
    }
}

pub trait JacobianMode: Send + Sync {
    fn name(&self) -> &'static str;

    fn linearize(&self, ops: &OperatorTriple, v: &TorusField, c: &MACoefficients) -> LinearOperator;
}

/// Coefficient pattern shared by both modes: with `(p11, p12, p22)` standing
/// in for `(A11, A12, A22)` the operator is
/// `p22(∂₁₁ + B11∂₂ + D) + p11(∂₂₂ + B22∂₂) − 2p12(∂₁₂ + B12∂₂)`.
fn assemble(p11: TorusField, p12: TorusField, p22: TorusField, c: &MACoefficients) -> LinearOperator {
    let c2 = p22
        .scale(c.b11)
        .axpy(c.b22, &p11)
        .axpy(-2.0 * c.b12, &p12);
    LinearOperator {
        c0: p22.scale(c.d),
        c12: p12.scale(-2.0),
        c11: p22,
        c22: p11,
        c2,
    }
}

/// Fréchet derivative of `A11A22 − A12²`.
#[derive(Debug, Default)]
pub struct ExactJacobian;

impl JacobianMode for ExactJacobian {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn linearize(&self, ops: &OperatorTriple, _v: &TorusField, c: &MACoefficients) -> LinearOperator {
        assemble(ops.a11.clone(), ops.a12.clone(), ops.a22.clone(), c)
    }
}

/// The linearized operator with coefficients shifted to `A_ij[v] + C_ij`,
/// a quasi-Newton operator. Its zeroth-order term `D(A22 + C22)w` is read
/// with the iterate `v` in place of `u`.
#[derive(Debug, Default)]
pub struct ShiftedJacobian;

impl JacobianMode for ShiftedJacobian {
    fn name(&self) -> &'static str {
        "shifted"
    }

    fn linearize(&self, ops: &OperatorTriple, _v: &TorusField, c: &MACoefficients) -> LinearOperator {
        assemble(ops.a11.offset(c.c11), ops.a12.offset(c.c12), ops.a22.offset(c.c22), c)
    }
}

/// `L_v w` for the given mode.
pub fn apply_jacobian(
    v: &TorusField,
    w: &TorusField,
    c: &MACoefficients,
    backend: &dyn DerivativeBackend,
    mode: &dyn JacobianMode,
) -> TorusField {
    let ops = operator_fields(v, c, backend);
    mode.linearize(&ops, v, c).apply(w, backend)
}
