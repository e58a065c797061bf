//! Nil case, base coordinates `(y, t)` on axes `(1, 2)`.

use crate::error::{Error, Result};
use crate::frames::{validate, FrameSpec, GroupCase};
use crate::grid::{Axis, DerivativeBackend, Order, TorusField};
use crate::macoeffs::G33_ZERO_TOL;

use super::OneFormField;

pub(crate) fn check_frame(spec: &FrameSpec) -> Result<()> {
    if spec.case() != GroupCase::NilYT {
        return Err(Error::WrongCase {
            expected: GroupCase::NilYT.name(),
            found: spec.case().name(),
        });
    }
    let g33 = spec.g(3, 3);
    if g33.abs() <= G33_ZERO_TOL {
        return Err(Error::ExplicitCaseG33Zero { g33 });
    }
    let report = validate(spec)?;
    if !report.valid {
        return Err(Error::InvalidFrame(report));
    }
    Ok(())
}

/// `a = a_k f^k` from the potential `u` (linear in `u`).
pub fn nil_one_form_with(u: &TorusField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> Result<OneFormField> {
    check_frame(spec)?;
    let g = |i, j| spec.g(i, j);
    let h = |i, j| spec.h(i, j);
    let uy = backend.derivative(u, Axis::One, Order::First);
    let ut = backend.derivative(u, Axis::Two, Order::First);
    let a1 = ut
        .scale(-g(3, 3))
        .axpy(-g(1, 1) * (h(2, 4) * g(2, 3) + h(4, 4) * g(2, 2)), u);
    let a2 = ut.scale(-g(3, 3)).axpy(-h(4, 4) * g(1, 1) * g(2, 2), u);
    let a3 = u.scale(-h(4, 4) * g(1, 1) * g(2, 3));
    let a4 = uy.scale(g(1, 1)).axpy(g(3, 1), &ut);
    Ok(OneFormField::new(GroupCase::NilYT, [a1, a2, a3, a4]))
}

/// The two type conditions and the left side of the volume equation,
/// written out in frame components.
pub(crate) fn nil_system(a: &OneFormField, spec: &FrameSpec, backend: &dyn DerivativeBackend) -> [TorusField; 3] {
    let g = |i, j| spec.g(i, j);
    let h = |i, j| spec.h(i, j);
    let [a1, a2, a3, a4] = a.components();
    let dy = |f: &TorusField| backend.derivative(f, Axis::One, Order::First);
    let dt = |f: &TorusField| backend.derivative(f, Axis::Two, Order::First);
    let (a2y, a3y, a4y) = (dy(a2), dy(a3), dy(a4));
    let (a1t, a2t, a3t, a4t) = (dt(a1), dt(a2), dt(a3), dt(a4));
    let s = a2.scale(h(2, 4)).axpy(h(3, 4), a3).axpy(h(4, 4), a4);

    let r1 = a2y
        .scale(g(1, 1))
        .axpy(g(1, 1) * g(2, 2), &s)
        .axpy(g(3, 1), &a2t)
        .axpy(g(3, 3), &a4t)
        .axpy(-g(3, 4), &a3t);
    let r2 = a3y
        .scale(g(1, 1))
        .axpy(g(1, 1) * g(2, 3), &s)
        .axpy(g(3, 1), &a3t)
        .axpy(-g(3, 3), &a1t)
        .axpy(g(3, 3), &a2t);

    let first = a4y.scale(g(1, 1)).axpy(g(3, 1), &a4t).axpy(-g(3, 4), &a1t).offset(1.0);
    let second = a2t.scale(-g(3, 3)).offset(1.0);
    let cross = a4t.scale(-g(3, 3)).axpy(g(3, 4), &a3t);
    let gg = g(3, 3) * g(3, 4);
    let l3 = (&first * &second)
        .zip_map(&a2t, |v, w| v - gg * w * w)
        .zip_map(&cross, |v, x| v - x * x);
    [r1, r2, l3]
}
