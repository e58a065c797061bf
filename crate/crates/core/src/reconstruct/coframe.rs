//! Exterior calculus in the orthonormal coframe `(f^k)`, used as an
//! independent route to the volume factor of `Ω + da`.
//!
//! Structure equations of the invariant coframe `(e^i)`:
//! Nil has `de⁴ = e¹²` with base coordinates `(y, t)` along `(e¹, e³)`;
//! Sol has `de³ = e¹³`, `de⁴ = −e¹⁴` with base `(x, y)` along `(e¹, e²)`.
//! The frames are related by `e^i = G_ij f^j`, `f^k = H_kj e^j`.

use crate::frames::{mat_mul, FrameSpec, GroupCase, Mat4};
use crate::grid::{Axis, DerivativeBackend, Order, TorusField};

use super::OneFormField;

/// Antisymmetric coefficient matrix of `α ∧ β` for 1-forms `α`, `β`.
fn wedge(a: &[f64; 4], b: &[f64; 4]) -> Mat4 {
    let mut w = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            w[i][j] = a[i] * b[j] - b[i] * a[j];
        }
    }
    w
}

fn unit(k: usize) -> [f64; 4] {
    let mut e = [0.0; 4];
    e[k] = 1.0;
    e
}

fn transpose(m: &Mat4) -> Mat4 {
    let mut t = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = m[j][i];
        }
    }
    t
}

/// `d e^i` as 2-forms in the `e` basis, and the base directions.
fn structure(case: GroupCase) -> ([Mat4; 4], [usize; 2]) {
    let zero = [[0.0; 4]; 4];
    let mut de = [zero; 4];
    match case {
        GroupCase::NilYT => {
            de[3] = wedge(&unit(0), &unit(1));
            (de, [0, 2])
        }
        GroupCase::SolR => {
            de[2] = wedge(&unit(0), &unit(2));
            // −e¹⁴ = e⁴¹
            de[3] = wedge(&unit(3), &unit(0));
            (de, [0, 1])
        }
    }
}

/// The invariant symplectic form in the `f` basis.
pub fn symplectic_form(case: GroupCase) -> Mat4 {
    let (a, b) = match case {
        GroupCase::NilYT => (wedge(&unit(0), &unit(3)), wedge(&unit(1), &unit(2))),
        GroupCase::SolR => (wedge(&unit(0), &unit(1)), wedge(&unit(2), &unit(3))),
    };
    let mut w = a;
    for i in 0..4 {
        for j in 0..4 {
            w[i][j] += b[i][j];
        }
    }
    w
}

/// A 2-form on the torus: `ω = Σ_{i<j} ω_ij f^{ij}`, stored antisymmetrically.
pub struct TwoFormField {
    comps: Vec<Vec<TorusField>>,
}

impl TwoFormField {
    /// Component `ω_ij` (0-based).
    pub fn get(&self, i: usize, j: usize) -> &TorusField {
        &self.comps[i][j]
    }

    /// `Pf(ω) = ω₁₂ω₃₄ − ω₁₃ω₂₄ + ω₁₄ω₂₃`, so that `ω² = 2·Pf(ω)·f¹²³⁴`.
    pub fn pfaffian(&self) -> TorusField {
        let c = |i, j| self.get(i, j);
        &(&(c(0, 1) * c(2, 3)) - &(c(0, 2) * c(1, 3))) + &(c(0, 3) * c(1, 2))
    }
}

/// Constant coefficient tables for `d` acting on `a_k f^k`.
pub struct Coframe {
    /// `df^k` in the `f` basis
    df: [Mat4; 4],
    /// `d(base coordinate)` in the `f` basis, i.e. rows of `G`
    base: [[f64; 4]; 2],
    omega: Mat4,
}

impl Coframe {
    pub fn new(spec: &FrameSpec) -> Self {
        let (de, base_rows) = structure(spec.case());
        let g = spec.g_matrix();
        let h = spec.h_matrix();
        let gt = transpose(g);
        let de_f: Vec<Mat4> = de.iter().map(|w| mat_mul(&mat_mul(&gt, w), g)).collect();
        let mut df = [[[0.0; 4]; 4]; 4];
        for (k, dfk) in df.iter_mut().enumerate() {
            for (j, w) in de_f.iter().enumerate() {
                for r in 0..4 {
                    for s in 0..4 {
                        dfk[r][s] += h[k][j] * w[r][s];
                    }
                }
            }
        }
        Self {
            df,
            base: [g[base_rows[0]], g[base_rows[1]]],
            omega: symplectic_form(spec.case()),
        }
    }

    /// `da = Σ_k (∂₁a_k·db₁ + ∂₂a_k·db₂) ∧ f^k + a_k·df^k`.
    pub fn exterior_derivative(&self, a: &OneFormField, backend: &dyn DerivativeBackend) -> TwoFormField {
        let grid = a.a1.grid();
        let mut terms: Vec<(TorusField, Mat4)> = Vec::with_capacity(12);
        for (k, ak) in a.components().into_iter().enumerate() {
            let d1 = backend.derivative(ak, Axis::One, Order::First);
            let d2 = backend.derivative(ak, Axis::Two, Order::First);
            terms.push((d1, wedge(&self.base[0], &unit(k))));
            terms.push((d2, wedge(&self.base[1], &unit(k))));
            terms.push((ak.clone(), self.df[k]));
        }
        let comps = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        terms
                            .iter()
                            .fold(TorusField::zeros(grid), |acc, (f, m)| {
                                if m[i][j] == 0.0 {
                                    acc
                                } else {
                                    acc.axpy(m[i][j], f)
                                }
                            })
                    })
                    .collect()
            })
            .collect();
        TwoFormField { comps }
    }

    /// `Ω + da`.
    pub fn perturbed_form(&self, a: &OneFormField, backend: &dyn DerivativeBackend) -> TwoFormField {
        let mut w = self.exterior_derivative(a, backend);
        for i in 0..4 {
            for j in 0..4 {
                if self.omega[i][j] != 0.0 {
                    w.comps[i][j] = w.comps[i][j].offset(self.omega[i][j]);
                }
            }
        }
        w
    }

    /// `(Ω + da)² / Ω²` pointwise.
    pub fn volume_ratio(&self, a: &OneFormField, backend: &dyn DerivativeBackend) -> TorusField {
        let w = &self.omega;
        let pf_omega = w[0][1] * w[2][3] - w[0][2] * w[1][3] + w[0][3] * w[1][2];
        self.perturbed_form(a, backend).pfaffian().scale(1.0 / pf_omega)
    }
}
