//! Doubly periodic scalar fields on the unit 2-torus.
//!
//! A [`TorusField`] samples `u(x₁, x₂)` at `x₁ = i/n1`, `x₂ = j/n2`, stored
//! row-major with axis 1 as the slow index. Both periods are 1, so the
//! integral over the torus is the grid mean.

pub mod backend;
pub(crate) mod fft;
pub mod io;

use std::ops::{Add, Mul, Neg, Sub};

use ndarray::{Array2, Zip};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use backend::{Derivatives, DerivativeBackend, FiniteDifference2, Spectral};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusGrid {
    n1: usize,
    n2: usize,
}

impl TorusGrid {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 < 8 || n2 < 8 || n1 % 2 != 0 || n2 % 2 != 0 {
            return Err(Error::InvalidGrid { n1, n2 });
        }
        Ok(Self { n1, n2 })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn n(&self, axis: Axis) -> usize {
        match axis {
            Axis::One => self.n1,
            Axis::Two => self.n2,
        }
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x1(&self, i: usize) -> f64 {
        i as f64 / self.n1 as f64
    }

    pub fn x2(&self, j: usize) -> f64 {
        j as f64 / self.n2 as f64
    }

    /// Grid spacing along `axis`.
    pub fn h(&self, axis: Axis) -> f64 {
        1.0 / self.n(axis) as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::One => 0,
            Axis::Two => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusField {
    grid: TorusGrid,
    values: Array2<f64>,
}

impl TorusField {
    pub fn from_array(grid: TorusGrid, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (grid.n1, grid.n2) {
            return Err(Error::GridMismatch(format!(
                "array shape {:?} does not match grid {}x{}",
                values.dim(),
                grid.n1,
                grid.n2
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for results of arithmetic on finite fields.
    pub(crate) fn from_array_unchecked(grid: TorusGrid, values: Array2<f64>) -> Self {
        debug_assert_eq!(values.dim(), (grid.n1, grid.n2));
        Self { grid, values }
    }

    pub fn from_vec(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        let arr = Array2::from_shape_vec((grid.n1, grid.n2), values)
            .map_err(|e| Error::GridMismatch(e.to_string()))?;
        Self::from_array(grid, arr)
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = Array2::from_shape_fn((grid.n1, grid.n2), |(i, j)| f(grid.x1(i), grid.x2(j)));
        Self { grid, values }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: TorusGrid, c: f64) -> Self {
        Self {
            grid,
            values: Array2::from_elem((grid.n1, grid.n2), c),
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_array_unchecked(self.grid, self.values.mapv(f))
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let mut out = self.values.clone();
        Zip::from(&mut out).and(&other.values).for_each(|a, &b| *a = f(*a, b));
        Self::from_array_unchecked(self.grid, out)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    pub fn offset(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + s * b)
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Euclidean inner product of the sample vectors (no quadrature weight).
    pub fn dot(&self, other: &Self) -> f64 {
        compensated_sum(self.values.iter().zip(other.values.iter()).map(|(a, b)| a * b))
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{}x{} vs {}x{}",
                self.grid.n1, self.grid.n2, other.grid.n1, other.grid.n2
            )));
        }
        Ok(())
    }
}

impl Add for &TorusField {
    type Output = TorusField;
    fn add(self, rhs: Self) -> TorusField {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &TorusField {
    type Output = TorusField;
    fn sub(self, rhs: Self) -> TorusField {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Mul for &TorusField {
    type Output = TorusField;
    fn mul(self, rhs: Self) -> TorusField {
        self.zip_map(rhs, |a, b| a * b)
    }
}

impl Mul<&TorusField> for f64 {
    type Output = TorusField;
    fn mul(self, rhs: &TorusField) -> TorusField {
        rhs.scale(self)
    }
}

impl Neg for &TorusField {
    type Output = TorusField;
    fn neg(self) -> TorusField {
        self.scale(-1.0)
    }
}

/// Neumaier-compensated sum in a fixed (iteration) order.
pub(crate) fn compensated_sum(iter: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in iter {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `∫_{𝕋²} f`, i.e. the grid mean (rectangle rule, spectrally accurate).
pub fn integral_mean(f: &TorusField) -> f64 {
    compensated_sum(f.values.iter().copied()) / f.grid.len() as f64
}

pub fn project_zero_mean(f: &TorusField) -> TorusField {
    let m = integral_mean(f);
    f.offset(-m)
}

/// Mean of `f` along `axis`, returned as a field constant along that axis.
pub fn axis_mean(f: &TorusField, axis: Axis) -> TorusField {
    let (n1, n2) = (f.grid.n1, f.grid.n2);
    let mut out = Array2::zeros((n1, n2));
    match axis {
        Axis::Two => {
            for i in 0..n1 {
                let m = compensated_sum(f.values.row(i).iter().copied()) / n2 as f64;
                out.row_mut(i).fill(m);
            }
        }
        Axis::One => {
            for j in 0..n2 {
                let m = compensated_sum(f.values.column(j).iter().copied()) / n1 as f64;
                out.column_mut(j).fill(m);
            }
        }
    }
    TorusField::from_array_unchecked(f.grid, out)
}

/// Copies the line at coordinate 0 of `axis` across the whole axis, i.e. the
/// field `(x₁, x₂) ↦ f(0, x₂)` for axis 1 and `f(x₁, 0)` for axis 2.
pub fn restrict_to_origin_line(f: &TorusField, axis: Axis) -> TorusField {
    let (n1, n2) = (f.grid.n1, f.grid.n2);
    let values = match axis {
        Axis::One => Array2::from_shape_fn((n1, n2), |(_, j)| f.values[[0, j]]),
        Axis::Two => Array2::from_shape_fn((n1, n2), |(i, _)| f.values[[i, 0]]),
    };
    TorusField::from_array_unchecked(f.grid, values)
}

/// Running integral `∫₀^{x} f` along `axis`, starting from zero on the
/// origin line.
///
/// The mean-zero part of every line is integrated spectrally (the Nyquist
/// mode has no grid-representable periodic primitive and is dropped); the
/// line mean contributes the exact ramp `mean·x`.
pub fn cumulative_integral(f: &TorusField, axis: Axis) -> TorusField {
    let grid = f.grid;
    let n = grid.n(axis);
    let plan = fft::plan(grid);
    let mut spec = f.values.mapv(|v| Complex64::new(v, 0.0));
    plan.transform_axis(&mut spec, axis, false);
    let mut line_means = vec![0.0; grid.n(other(axis))];
    let two_pi = 2.0 * std::f64::consts::PI;
    for (l, mut lane) in spec.lanes_mut(ndarray::Axis(axis.index())).into_iter().enumerate() {
        line_means[l] = lane[0].re / n as f64;
        for (k, c) in lane.iter_mut().enumerate() {
            let m = fft::signed_mode(k, n);
            if m == 0 || 2 * k == n {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c /= Complex64::new(0.0, two_pi * m as f64);
            }
        }
    }
    plan.transform_axis(&mut spec, axis, true);
    let mut out = spec.mapv(|c| c.re);
    for (l, mut lane) in out.lanes_mut(ndarray::Axis(axis.index())).into_iter().enumerate() {
        let origin = lane[0];
        for (k, v) in lane.iter_mut().enumerate() {
            *v = *v - origin + line_means[l] * (k as f64 / n as f64);
        }
    }
    TorusField::from_array_unchecked(grid, out)
}

/// Per-line wraparound jump `g(1) − g(0)` of [`cumulative_integral`] along
/// `axis`: the ramp part evaluated over one full period, i.e. `∫₀¹ f`.
pub fn cumulative_wraparound(f: &TorusField, axis: Axis) -> TorusField {
    axis_mean(f, axis)
}

fn other(axis: Axis) -> Axis {
    match axis {
        Axis::One => Axis::Two,
        Axis::Two => Axis::One,
    }
}

/// Grid sup-norms of a field and its first and second derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl NormReport {
    pub fn max(&self) -> f64 {
        self.c0.max(self.c1).max(self.c2)
    }
}

pub fn sup_norms(f: &TorusField, backend: &dyn DerivativeBackend) -> NormReport {
    let d = backend.derivatives(f);
    NormReport {
        c0: f.sup_abs(),
        c1: d.d1.sup_abs().max(d.d2.sup_abs()),
        c2: d.d11.sup_abs().max(d.d12.sup_abs()).max(d.d22.sup_abs()),
    }
}

/// Shifts `f_raw` so that `∫_{𝕋²} (e^F − 1) = 0`.
#[allow(non_snake_case)]
pub fn normalize_F(f_raw: &TorusField) -> TorusField {
    // factor out the max before exponentiating so large inputs do not overflow
    let top = f_raw.max();
    let shift = top + integral_mean(&f_raw.map(|v| (v - top).exp())).ln();
    f_raw.offset(-shift)
}

/// `|mean(e^F) − 1|`.
pub fn normalization_defect(f: &TorusField) -> f64 {
    (integral_mean(&f.map(f64::exp)) - 1.0).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn g64() -> TorusGrid {
        TorusGrid::square(64).unwrap()
    }

    #[test]
    fn grid_sizes_must_be_even_and_large_enough() {
        assert!(TorusGrid::new(6, 8).is_err());
        assert!(TorusGrid::new(9, 8).is_err());
        assert!(TorusGrid::new(8, 10).is_ok());
    }

    #[test]
    fn mean_of_constant_and_modes() {
        let g = g64();
        assert_eq!(integral_mean(&TorusField::constant(g, 2.5)), 2.5);
        let s = TorusField::from_fn(g, |_, y| (2.0 * PI * y).sin());
        assert!(integral_mean(&s).abs() <= 1e-15);
        let p = TorusField::from_fn(g, |x, y| 1.0 + 0.5 * (2.0 * PI * x).cos() * (2.0 * PI * y).cos());
        assert!((integral_mean(&p) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn zero_mean_projection() {
        let g = g64();
        assert_eq!(project_zero_mean(&TorusField::constant(g, 5.0)).sup_abs(), 0.0);
        let s = TorusField::from_fn(g, |x, y| (2.0 * PI * x).sin() * (4.0 * PI * y).cos());
        let p = project_zero_mean(&s);
        assert!((&p - &s).sup_abs() < 1e-16);
        let f = TorusField::from_fn(g, |x, y| (x * 7.0).exp() + y * y);
        assert!(integral_mean(&project_zero_mean(&f)).abs() <= 1e-15 * f.sup_abs().max(1.0));
    }

    #[test]
    fn cumulative_integral_of_one_is_ramp() {
        let g = g64();
        let r = cumulative_integral(&TorusField::constant(g, 1.0), Axis::One);
        let ramp = TorusField::from_fn(g, |x, _| x);
        assert!((&r - &ramp).sup_abs() < 1e-15);
    }

    #[test]
    fn cumulative_integral_of_sine() {
        let g = g64();
        let s = TorusField::from_fn(g, |x, _| (2.0 * PI * x).sin());
        let exact = TorusField::from_fn(g, |x, _| (1.0 - (2.0 * PI * x).cos()) / (2.0 * PI));
        assert!((&cumulative_integral(&s, Axis::One) - &exact).sup_abs() < 1e-12);
        let s2 = TorusField::from_fn(g, |_, y| (2.0 * PI * y).sin() + 0.25);
        let exact2 = TorusField::from_fn(g, |_, y| (1.0 - (2.0 * PI * y).cos()) / (2.0 * PI) + 0.25 * y);
        assert!((&cumulative_integral(&s2, Axis::Two) - &exact2).sup_abs() < 1e-12);
    }

    #[test]
    fn cumulative_integral_of_zero_mean_field_is_periodic() {
        let g = TorusGrid::new(32, 48).unwrap();
        let f = TorusField::from_fn(g, |x, y| {
            (2.0 * PI * (x + 2.0 * y)).cos() + 0.3 * (6.0 * PI * x).sin() * (2.0 * PI * y).cos()
        });
        for axis in [Axis::One, Axis::Two] {
            assert!(cumulative_wraparound(&f, axis).sup_abs() < 1e-10);
            // the periodic continuation of the primitive matches one step past the last sample
            let c = cumulative_integral(&f, axis);
            let n = g.n(axis);
            let exact_step = |i: usize, j: usize| {
                let (x, y) = (g.x1(i), g.x2(j));
                match axis {
                    Axis::One => {
                        let h = 1.0 / n as f64;
                        let prim = |x: f64| {
                            (2.0 * PI * (x + 2.0 * y)).sin() / (2.0 * PI)
                                - 0.3 * (6.0 * PI * x).cos() * (2.0 * PI * y).cos() / (6.0 * PI)
                        };
                        prim(x + h) - prim(x)
                    }
                    Axis::Two => {
                        let h = 1.0 / n as f64;
                        let prim = |y: f64| {
                            (2.0 * PI * (x + 2.0 * y)).sin() / (4.0 * PI)
                                + 0.3 * (6.0 * PI * x).sin() * (2.0 * PI * y).sin() / (2.0 * PI)
                        };
                        prim(y + h) - prim(y)
                    }
                }
            };
            for l in 0..g.n(if axis == Axis::One { Axis::Two } else { Axis::One }) {
                let (i, j) = if axis == Axis::One { (n - 1, l) } else { (l, n - 1) };
                let wrapped = c.get(i, j) + exact_step(i, j);
                assert!(wrapped.abs() < 1e-10, "{axis:?} line {l}: {wrapped}");
            }
        }
    }

    #[test]
    fn sup_norms_of_simple_fields() {
        let g = g64();
        let spectral = Spectral::new();
        let z = sup_norms(&TorusField::zeros(g), &spectral);
        assert_eq!((z.c0, z.c1, z.c2), (0.0, 0.0, 0.0));
        let s = sup_norms(&TorusField::from_fn(g, |_, y| (2.0 * PI * y).sin()), &spectral);
        assert!((s.c0 - 1.0).abs() < 1e-6);
        assert!((s.c1 - 2.0 * PI).abs() < 1e-6);
        assert!((s.c2 - 4.0 * PI * PI).abs() < 1e-6);
        let c = sup_norms(&TorusField::constant(g, 3.0), &spectral);
        assert_eq!(c.c0, 3.0);
        assert!(c.c1 < 1e-12 && c.c2 < 1e-12);
    }

    #[test]
    fn normalize_constant_gives_zero() {
        let f = normalize_F(&TorusField::constant(g64(), 1.7));
        assert!(f.sup_abs() < 1e-15);
    }

    #[test]
    fn normalize_is_idempotent() {
        let g = g64();
        let f = normalize_F(&TorusField::from_fn(g, |x, y| (2.0 * PI * x).sin() + 0.4 * (2.0 * PI * y).cos()));
        assert!(normalization_defect(&f) <= 1e-12);
        assert!((&normalize_F(&f) - &f).sup_abs() <= 1e-12);
    }

    #[test]
    fn normalize_cosine_against_quadrature() {
        // mean(e^{0.3 cos 2πx}) = I₀(0.3), evaluated by a dense midpoint rule
        let m = 200_000;
        let i0 = (0..m)
            .map(|k| (0.3 * (2.0 * PI * (k as f64 + 0.5) / m as f64).cos()).exp())
            .sum::<f64>()
            / m as f64;
        let g = g64();
        let f = normalize_F(&TorusField::from_fn(g, |x, _| 0.3 * (2.0 * PI * x).cos()));
        let expected = TorusField::from_fn(g, |x, _| 0.3 * (2.0 * PI * x).cos() - i0.ln());
        assert!((&f - &expected).sup_abs() < 1e-12);
    }

    #[test]
    fn from_array_rejects_non_finite() {
        let g = TorusGrid::square(8).unwrap();
        let mut a = Array2::zeros((8, 8));
        a[[1, 1]] = f64::NAN;
        assert!(matches!(TorusField::from_array(g, a), Err(Error::NonFinite)));
    }
}
