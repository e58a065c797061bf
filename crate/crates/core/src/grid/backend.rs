//! Derivative backends: interchangeable discretizations of ∂₁, ∂₂ and their
//! second-order combinations on the periodic grid.

use std::f64::consts::PI;

use ndarray::Array2;
use rustfft::num_complex::Complex64;

use super::{fft, Axis, Order, TorusField};

/// All first and second partial derivatives of one field.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub d1: TorusField,
    pub d2: TorusField,
    pub d11: TorusField,
    pub d12: TorusField,
    pub d22: TorusField,
}

pub trait DerivativeBackend: Send + Sync {
    /// Registry name, e.g. `"spectral"`.
    fn name(&self) -> &'static str;

    fn derivative(&self, f: &TorusField, axis: Axis, order: Order) -> TorusField;

    /// `∂₁∂₂ f`, composed from two first derivatives.
    fn mixed(&self, f: &TorusField) -> TorusField {
        let d2 = self.derivative(f, Axis::Two, Order::First);
        self.derivative(&d2, Axis::One, Order::First)
    }

    fn derivatives(&self, f: &TorusField) -> Derivatives {
        let d2 = self.derivative(f, Axis::Two, Order::First);
        Derivatives {
            d1: self.derivative(f, Axis::One, Order::First),
            d12: self.derivative(&d2, Axis::One, Order::First),
            d11: self.derivative(f, Axis::One, Order::Second),
            d22: self.derivative(f, Axis::Two, Order::Second),
            d2,
        }
    }

    /// Eigenvalue of the discrete `∂²` on the Fourier mode with FFT bin `k`
    /// of an `n`-point axis (used by spectral preconditioners).
    fn second_derivative_symbol(&self, k: usize, n: usize) -> f64;
}

/// Fourier pseudo-spectral differentiation. The Nyquist mode's odd-order
/// derivatives are set to zero.
#[derive(Debug, Default)]
pub struct Spectral;

impl Spectral {
    pub fn new() -> Self {
        Spectral
    }

    fn multiplier(k: usize, n: usize, order: Order) -> Complex64 {
        let m = fft::signed_mode(k, n);
        let w = 2.0 * PI * m as f64;
        match order {
            Order::First if 2 * k == n => Complex64::new(0.0, 0.0),
            Order::First => Complex64::new(0.0, w),
            Order::Second => Complex64::new(-w * w, 0.0),
        }
    }

    fn apply(
        spec: &Array2<Complex64>,
        n1: usize,
        n2: usize,
        mult: impl Fn(usize, usize) -> Complex64,
    ) -> Array2<Complex64> {
        let mut out = spec.clone();
        for ((i, j), c) in out.indexed_iter_mut() {
            *c *= mult(i, j);
        }
        debug_assert_eq!(out.dim(), (n1, n2));
        out
    }
}

impl DerivativeBackend for Spectral {
    fn name(&self) -> &'static str {
        "spectral"
    }

    fn derivative(&self, f: &TorusField, axis: Axis, order: Order) -> TorusField {
        let grid = f.grid();
        let plan = fft::plan(grid);
        let spec = plan.forward(f.values());
        let (n1, n2) = (plan.n1(), plan.n2());
        let d = Self::apply(&spec, n1, n2, |i, j| match axis {
            Axis::One => Self::multiplier(i, n1, order),
            Axis::Two => Self::multiplier(j, n2, order),
        });
        TorusField::from_array_unchecked(grid, plan.inverse_real(&d))
    }

    fn mixed(&self, f: &TorusField) -> TorusField {
        let grid = f.grid();
        let plan = fft::plan(grid);
        let spec = plan.forward(f.values());
        let (n1, n2) = (plan.n1(), plan.n2());
        let d = Self::apply(&spec, n1, n2, |i, j| {
            Self::multiplier(i, n1, Order::First) * Self::multiplier(j, n2, Order::First)
        });
        TorusField::from_array_unchecked(grid, plan.inverse_real(&d))
    }

    fn derivatives(&self, f: &TorusField) -> Derivatives {
        let grid = f.grid();
        let plan = fft::plan(grid);
        let spec = plan.forward(f.values());
        let (n1, n2) = (plan.n1(), plan.n2());
        let mk = |mult: &dyn Fn(usize, usize) -> Complex64| {
            TorusField::from_array_unchecked(grid, plan.inverse_real(&Self::apply(&spec, n1, n2, mult)))
        };
        Derivatives {
            d1: mk(&|i, _| Self::multiplier(i, n1, Order::First)),
            d2: mk(&|_, j| Self::multiplier(j, n2, Order::First)),
            d11: mk(&|i, _| Self::multiplier(i, n1, Order::Second)),
            d12: mk(&|i, j| Self::multiplier(i, n1, Order::First) * Self::multiplier(j, n2, Order::First)),
            d22: mk(&|_, j| Self::multiplier(j, n2, Order::Second)),
        }
    }

    fn second_derivative_symbol(&self, k: usize, n: usize) -> f64 {
        Self::multiplier(k, n, Order::Second).re
    }
}

/// Centered second-order periodic finite differences.
#[derive(Debug, Default)]
pub struct FiniteDifference2;

impl DerivativeBackend for FiniteDifference2 {
    fn name(&self) -> &'static str {
        "fd2"
    }

    fn derivative(&self, f: &TorusField, axis: Axis, order: Order) -> TorusField {
        let grid = f.grid();
        let v = f.values();
        let (n1, n2) = (grid.n1(), grid.n2());
        let n = grid.n(axis);
        let h = grid.h(axis);
        let at = |i: usize, j: usize, shift: isize| -> f64 {
            match axis {
                Axis::One => v[[(i as isize + shift).rem_euclid(n as isize) as usize, j]],
                Axis::Two => v[[i, (j as isize + shift).rem_euclid(n as isize) as usize]],
            }
        };
        let out = match order {
            Order::First => {
                let s = 0.5 / h;
                Array2::from_shape_fn((n1, n2), |(i, j)| s * (at(i, j, 1) - at(i, j, -1)))
            }
            Order::Second => {
                let s = 1.0 / (h * h);
                Array2::from_shape_fn((n1, n2), |(i, j)| {
                    s * (at(i, j, 1) - 2.0 * v[[i, j]] + at(i, j, -1))
                })
            }
        };
        TorusField::from_array_unchecked(grid, out)
    }

    fn second_derivative_symbol(&self, k: usize, n: usize) -> f64 {
        let s = (PI * k as f64 / n as f64).sin();
        -4.0 * (n as f64).powi(2) * s * s
    }
}
