//! Sol case, base coordinates `(x, y)` on axes `(1, 2)`.
//!
//! The reconstruction is nonlocal: it uses running integrals from the origin
//! lines and full-period averages. Every such piece is periodic only because
//! the matching average vanishes, so the wraparound jumps are computed and
//! checked explicitly.

use crate::error::{Error, Result};
use crate::frames::{validate, FrameSpec, GroupCase};
use crate::grid::{
    axis_mean, cumulative_integral, cumulative_wraparound, integral_mean, restrict_to_origin_line,
    sup_norms, Axis, DerivativeBackend, Order, TorusField,
};
use crate::macoeffs::SOL_E2_MIN;

use super::OneFormField;

/// Mean of `u` above which the reconstruction is refused.
pub const MEAN_U_TOL: f64 = 1e-10;
/// Relative wraparound tolerance, scaled by `1 + ‖u‖_{C²}`.
pub const PERIODICITY_TOL: f64 = 1e-8;

pub(crate) fn check_frame(spec: &FrameSpec) -> Result<()> {
    if spec.case() != GroupCase::SolR {
        return Err(Error::WrongCase {
            expected: GroupCase::SolR.name(),
            found: spec.case().name(),
        });
    }
    let report = validate(spec)?;
    if !report.valid {
        return Err(Error::InvalidFrame(report));
    }
    let e2 = spec.sol_e2();
    if !(e2 > SOL_E2_MIN) {
        return Err(Error::DegenerateE2 { e2 });
    }
    Ok(())
}

pub fn sol_one_form_with(u: &TorusField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> Result<OneFormField> {
    check_frame(spec)?;
    let mean = integral_mean(u);
    if !(mean.abs() <= MEAN_U_TOL) {
        return Err(Error::NonzeroMeanU { mean });
    }
    let g = |i, j| spec.g(i, j);
    let h = |i, j| spec.h(i, j);
    let e2 = spec.sol_e2();
    let grid = u.grid();

    let d = backend.derivatives(u);
    let (ux, uy) = (&d.d1, &d.d2);

    // x-running integral of the y-average, corrected by the y-average of u_x
    let ybar_ux = axis_mean(ux, Axis::Two);
    let ybar_u = axis_mean(u, Axis::Two);
    let q = &cumulative_integral(&ybar_u, Axis::One)
        - &(&ybar_ux - &restrict_to_origin_line(&ybar_ux, Axis::One));
    let q_jump = cumulative_wraparound(&ybar_u, Axis::One).sup_abs();

    // y-running integral of u_xx − u with its linear-in-y correction
    let src = &d.d11 - u;
    let ybar_src = axis_mean(&src, Axis::Two);
    let y_ramp = TorusField::from_fn(grid, |_, y| y);
    let p = &cumulative_integral(&src, Axis::Two) - &(&y_ramp * &ybar_src);
    let p_jump = (&cumulative_wraparound(&src, Axis::Two) - &ybar_src).sup_abs();

    let uy_rel = uy - &restrict_to_origin_line(uy, Axis::Two);
    let u_rel = u - &restrict_to_origin_line(u, Axis::Two);
    let a1 = uy_rel
        .scale(-h(1, 1) * g(2, 2) / e2)
        .axpy(-2.0 * h(4, 4) * g(4, 3) / e2, &u_rel)
        .axpy(-g(1, 1) * h(2, 2) / e2, &p);
    let a2 = q.scale(-1.0 / e2);
    let a3 = ux
        .scale(-h(2, 2) * g(2, 3) / e2)
        .axpy(-h(1, 1) * g(2, 4) / e2, uy)
        .axpy(h(2, 2) * (g(2, 3) - 2.0 * g(2, 4) * h(4, 4) * g(4, 3)) / e2, u)
        .axpy(-h(2, 2) * g(2, 3) / e2, &q);
    let a4 = ux
        .scale(-h(2, 2) * g(2, 4) / e2)
        .axpy(h(1, 1) * g(2, 3) / e2, uy)
        .axpy(-h(2, 2) * g(2, 4) / e2, u)
        .axpy(-h(2, 2) * g(2, 4) / e2, &q);

    let jumps = [
        (g(1, 1) * h(2, 2) / e2).abs() * p_jump,
        q_jump / e2,
        (h(2, 2) * g(2, 3) / e2).abs() * q_jump,
        (h(2, 2) * g(2, 4) / e2).abs() * q_jump,
    ];
    let tol = PERIODICITY_TOL * (1.0 + sup_norms(u, backend).max());
    for (k, &jump) in jumps.iter().enumerate() {
        if !(jump <= tol) {
            return Err(Error::PeriodicityCheckFailed {
                component: k + 1,
                jump,
                tol,
            });
        }
    }
    let mut form = OneFormField::new(GroupCase::SolR, [a1, a2, a3, a4]);
    form.wraparound_jumps = jumps;
    Ok(form)
}

pub(crate) fn sol_system(a: &OneFormField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> [TorusField; 3] {
    let g = |i, j| spec.g(i, j);
    let h = |i, j| spec.h(i, j);
    let [a1, a2, a3, a4] = a.components();
    let dx = |f: &TorusField| backend.derivative(f, Axis::One, Order::First);
    let dy = |f: &TorusField| backend.derivative(f, Axis::Two, Order::First);
    let (a2x, a3x, a4x) = (dx(a2), dx(a3), dx(a4));
    let (a1y, a2y, a3y, a4y) = (dy(a1), dy(a2), dy(a3), dy(a4));

    // components of da on f^{24}, f^{23}, f^{34}
    let p24 = a4y.scale(g(2, 2)).axpy(-g(2, 4), &a2y);
    let p23 = a3y.scale(g(2, 2)).axpy(-g(2, 3), &a2y);
    let p34 = a4y.scale(g(2, 3)).axpy(-g(2, 4), &a3y);

    let r1 = a3x
        .scale(g(1, 1))
        .axpy(-g(2, 3), &a1y)
        .axpy(g(1, 1) * (h(2, 3) * g(3, 3) - h(2, 4) * g(4, 3)), a2)
        .axpy(g(1, 1), a3)
        .axpy(g(1, 1) * (h(4, 3) * g(3, 3) - h(4, 4) * g(4, 3)), a4)
        .axpy(-1.0, &p24);
    let r2 = a4x
        .scale(g(1, 1))
        .axpy(-g(2, 4), &a1y)
        .axpy(-g(1, 1) * h(2, 4) * g(4, 4), a2)
        .axpy(-g(1, 1), a4)
        .axpy(1.0, &p23);

    let first = a2x.scale(g(1, 1)).axpy(-g(2, 2), &a1y).offset(1.0);
    let l3 = (&first * &p34.offset(1.0))
        .zip_map(&p24, |v, w| v - w * w)
        .zip_map(&p23, |v, w| v - w * w);
    [r1, r2, l3]
}
