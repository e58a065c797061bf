//! Cached 2-D complex FFT plans over a [`TorusGrid`].

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{Axis, TorusGrid};

pub(crate) struct Fft2 {
    n1: usize,
    n2: usize,
    fwd1: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
    fwd2: Arc<dyn Fft<f64>>,
    inv2: Arc<dyn Fft<f64>>,
}

static PLANS: LazyLock<Mutex<HashMap<TorusGrid, Arc<Fft2>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

pub(crate) fn plan(grid: TorusGrid) -> Arc<Fft2> {
    let mut plans = PLANS.lock().unwrap();
    Arc::clone(plans.entry(grid).or_insert_with(|| {
        let mut planner = FftPlanner::new();
        Arc::new(Fft2 {
            n1: grid.n1(),
            n2: grid.n2(),
            fwd1: planner.plan_fft_forward(grid.n1()),
            inv1: planner.plan_fft_inverse(grid.n1()),
            fwd2: planner.plan_fft_forward(grid.n2()),
            inv2: planner.plan_fft_inverse(grid.n2()),
        })
    }))
}

/// Signed wavenumber of FFT bin `k` on `n` points; the Nyquist bin maps to `n/2`.
pub(crate) fn signed_mode(k: usize, n: usize) -> i64 {
    if 2 * k <= n {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

impl Fft2 {
    /// In-place 1-D transform of every lane along `axis`. Inverse transforms
    /// are normalized by `1/n`.
    pub(crate) fn transform_axis(&self, data: &mut Array2<Complex64>, axis: Axis, inverse: bool) {
        let (fft, n) = match (axis, inverse) {
            (Axis::One, false) => (&self.fwd1, self.n1),
            (Axis::One, true) => (&self.inv1, self.n1),
            (Axis::Two, false) => (&self.fwd2, self.n2),
            (Axis::Two, true) => (&self.inv2, self.n2),
        };
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let scale = if inverse { 1.0 / n as f64 } else { 1.0 };
        for mut lane in data.lanes_mut(ndarray::Axis(axis.index())) {
            for (b, v) in buf.iter_mut().zip(lane.iter()) {
                *b = *v;
            }
            fft.process_with_scratch(&mut buf, &mut scratch);
            for (v, b) in lane.iter_mut().zip(buf.iter()) {
                *v = *b * scale;
            }
        }
    }

    pub(crate) fn forward(&self, values: &Array2<f64>) -> Array2<Complex64> {
        let mut spec = values.mapv(|v| Complex64::new(v, 0.0));
        self.transform_axis(&mut spec, Axis::Two, false);
        self.transform_axis(&mut spec, Axis::One, false);
        spec
    }

    /// Inverse transform, keeping the real part.
    pub(crate) fn inverse_real(&self, spec: &Array2<Complex64>) -> Array2<f64> {
        let mut data = spec.clone();
        self.transform_axis(&mut data, Axis::One, true);
        self.transform_axis(&mut data, Axis::Two, true);
        data.mapv(|c| c.re)
    }

    pub(crate) fn n1(&self) -> usize {
        self.n1
    }

    pub(crate) fn n2(&self) -> usize {
        self.n2
    }
}
