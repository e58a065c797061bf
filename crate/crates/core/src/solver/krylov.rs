//! Restarted GMRES with right preconditioning, plus the constant-coefficient
//! Fourier preconditioner used by the Newton solve.

use ndarray::Array2;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{fft, DerivativeBackend, TorusField, TorusGrid};

#[derive(Clone, Copy, Debug)]
pub struct GmresOptions {
    /// Relative residual target `‖b − Ax‖₂ ≤ tol·‖b‖₂`.
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmresStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Solves `A x = b` from `x₀ = 0`; `precond` applies `M⁻¹` on the right.
pub fn gmres(
    apply: impl Fn(&TorusField) -> TorusField,
    precond: impl Fn(&TorusField) -> TorusField,
    b: &TorusField,
    opts: GmresOptions,
) -> Result<(TorusField, GmresStats)> {
    let grid = b.grid();
    let bnorm = b.norm2();
    let mut x = TorusField::zeros(grid);
    if bnorm == 0.0 {
        return Ok((x, GmresStats { iterations: 0, relative_residual: 0.0 }));
    }
    let m = opts.restart.max(1);
    let mut r = b.clone();
    let mut beta = bnorm;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let mut basis: Vec<TorusField> = vec![r.scale(1.0 / beta)];
        // Column-major Hessenberg, already rotated into upper-triangular form.
        let mut hess: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut rot: Vec<(f64, f64)> = Vec::with_capacity(m);
        let mut g = vec![beta];

        for j in 0..m {
            if iterations >= opts.max_iter {
                break;
            }
            iterations += 1;
            let mut w = apply(&precond(&basis[j]));
            let mut col = Vec::with_capacity(j + 2);
            for v in &basis {
                let h = w.dot(v);
                w = w.axpy(-h, v);
                col.push(h);
            }
            // one reorthogonalization pass keeps the basis orthogonal at 1e−12 targets
            for (i, v) in basis.iter().enumerate() {
                let h = w.dot(v);
                w = w.axpy(-h, v);
                col[i] += h;
            }
            let hnext = w.norm2();
            col.push(hnext);
            for (i, &(cs, sn)) in rot.iter().enumerate() {
                let (a, b) = (col[i], col[i + 1]);
                col[i] = cs * a + sn * b;
                col[i + 1] = -sn * a + cs * b;
            }
            let (a, b) = (col[j], col[j + 1]);
            let den = a.hypot(b);
            let (cs, sn) = if den == 0.0 { (1.0, 0.0) } else { (a / den, b / den) };
            col[j] = den;
            col[j + 1] = 0.0;
            rot.push((cs, sn));
            let gj = g[j];
            g[j] = cs * gj;
            g.push(-sn * gj);
            hess.push(col);
            let estimate = g[j + 1].abs() / bnorm;
            if estimate <= opts.tol || hnext == 0.0 {
                break;
            }
            basis.push(w.scale(1.0 / hnext));
        }

        // back substitution on the rotated triangle
        let k = hess.len();
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for l in i + 1..k {
                s -= hess[l][i] * y[l];
            }
            y[i] = if hess[i][i] == 0.0 { 0.0 } else { s / hess[i][i] };
        }
        let mut combo = TorusField::zeros(grid);
        for (yi, v) in y.iter().zip(&basis) {
            combo = combo.axpy(*yi, v);
        }
        x = &x + &precond(&combo);
        r = b - &apply(&x);
        beta = r.norm2();
        if beta <= opts.tol * bnorm {
            return Ok((x, GmresStats { iterations, relative_residual: beta / bnorm }));
        }
    }
    Err(Error::LinearSolveFailed {
        iterations,
        relative_residual: beta / bnorm,
    })
}

/// Inverse of `a·∂₁₁ + b·∂₂₂` mode by mode, using the backend's own symbols;
/// the mean mode passes through unchanged.
pub struct FourierPreconditioner {
    grid: TorusGrid,
    inv_symbol: Array2<f64>,
}

impl FourierPreconditioner {
    pub fn new(grid: TorusGrid, a: f64, b: f64, backend: &dyn DerivativeBackend) -> Self {
        let (n1, n2) = (grid.n1(), grid.n2());
        let l1: Vec<f64> = (0..n1).map(|k| backend.second_derivative_symbol(k, n1)).collect();
        let l2: Vec<f64> = (0..n2).map(|k| backend.second_derivative_symbol(k, n2)).collect();
        let inv_symbol = Array2::from_shape_fn((n1, n2), |(i, j)| {
            let s = a * l1[i] + b * l2[j];
            if (i, j) == (0, 0) || s == 0.0 {
                1.0
            } else {
                1.0 / s
            }
        });
        Self { grid, inv_symbol }
    }

    pub fn apply(&self, r: &TorusField) -> TorusField {
        let plan = fft::plan(self.grid);
        let mut spec = plan.forward(r.values());
        spec.zip_mut_with(&self.inv_symbol, |c: &mut Complex64, &s| *c *= s);
        TorusField::from_array_unchecked(self.grid, plan.inverse_real(&spec))
    }
}
