use crate::error::{Error, Result};
use crate::grid::{normalization_defect, DerivativeBackend, TorusField};
use crate::macoeffs::MACoefficients;

/// Normalization slack accepted by [`residual`].
pub const F_NORMALIZATION_TOL: f64 = 1e-8;

/// The three affine second-order operators evaluated at one `u`.
#[derive(Clone, Debug)]
pub struct OperatorTriple {
    pub a11: TorusField,
    pub a12: TorusField,
    pub a22: TorusField,
}

impl OperatorTriple {
    /// `A11·A22 − A12²`.
    pub fn determinant(&self) -> TorusField {
        let mut out = &self.a11 * &self.a22;
        out = out.zip_map(&self.a12, |d, b| d - b * b);
        out
    }

    pub fn min_a11(&self) -> f64 {
        self.a11.min()
    }

    pub fn min_a22(&self) -> f64 {
        self.a22.min()
    }

    pub fn is_elliptic(&self) -> bool {
        self.min_a11() > 0.0 && self.min_a22() > 0.0
    }
}

/// `A11 = u₁₁ + B11 u₂ + C11 + D u`, `A12 = u₁₂ + B12 u₂ + C12`,
/// `A22 = u₂₂ + B22 u₂ + C22`.
pub fn operator_fields(u: &TorusField, c: &MACoefficients, backend: &dyn DerivativeBackend) -> OperatorTriple {
    let d = backend.derivatives(u);
    let a11 = d
        .d11
        .axpy(c.b11, &d.d2)
        .axpy(c.d, u)
        .offset(c.c11);
    let a12 = d.d12.axpy(c.b12, &d.d2).offset(c.c12);
    let a22 = d.d22.axpy(c.b22, &d.d2).offset(c.c22);
    OperatorTriple { a11, a12, a22 }
}

/// Right-hand side `E1 + (1−τ)E2 + τE2·e^F` of the continuity path.
pub fn path_rhs(c: &MACoefficients, f: &TorusField, tau: f64) -> TorusField {
    let base = c.e1 + (1.0 - tau) * c.e2;
    f.map(|v| base + tau * c.e2 * v.exp())
}

/// `T(u, τ)` for an already validated `F`.
pub(crate) fn residual_unchecked(
    u: &TorusField,
    c: &MACoefficients,
    f: &TorusField,
    tau: f64,
    backend: &dyn DerivativeBackend,
) -> (TorusField, OperatorTriple) {
    let ops = operator_fields(u, c, backend);
    let t = &ops.determinant() - &path_rhs(c, f, tau);
    (t, ops)
}

/// `T(u, τ) = A11A22 − A12² − E1 − (1−τ)E2 − τE2e^F`, pointwise.
pub fn residual(
    u: &TorusField,
    c: &MACoefficients,
    f: &TorusField,
    tau: f64,
    backend: &dyn DerivativeBackend,
) -> Result<TorusField> {
    u.check_same_grid(f)?;
    let defect = normalization_defect(f);
    if !(defect <= F_NORMALIZATION_TOL) {
        return Err(Error::UnnormalizedF { defect });
    }
    Ok(residual_unchecked(u, c, f, tau, backend).0)
}

/// Pointwise minima `(min A11, min A22)`.
pub fn ellipticity(u: &TorusField, c: &MACoefficients, backend: &dyn DerivativeBackend) -> (f64, f64) {
    let ops = operator_fields(u, c, backend);
    (ops.min_a11(), ops.min_a22())
}

/// A priori C² bound `2(|B11|+1)|B22|e^{2C22} + C11 + C22` on solutions.
pub fn apriori_bound(c: &MACoefficients) -> f64 {
    2.0 * (c.b11.abs() + 1.0) * c.b22.abs() * (2.0 * c.c22).exp() + c.c11 + c.c22
}
