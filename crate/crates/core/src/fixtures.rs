//! Named example frames and manufactured-solution fixtures shared by the
//! tests, the acceptance suite and the CLI.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::frames::{FrameSpec, GroupCase};
use crate::grid::{TorusField, TorusGrid};
use crate::solver::modes::Mode;

/// Nil frame with G³₃ = G³₄ = 1; coefficients (0,0,1,2,0,1,0,1,1).
pub fn nil_example_frame() -> FrameSpec {
    FrameSpec::new(
        GroupCase::NilYT,
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 1.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    )
    .expect("example frame is invertible")
}

/// Sol frame with H row 2 = (0, 1/√2, 0, 1/√2); coefficients (0,1,0,3,0,1,−1,2,1).
pub fn sol_example_frame() -> FrameSpec {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    FrameSpec::from_inverse(
        GroupCase::SolR,
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, r, 0.0, r],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    )
    .expect("example frame is invertible")
}

/// Nil frame in the explicit branch: G³₃ = 0, G³₄ = 1.
pub fn nil_g33_zero_frame() -> FrameSpec {
    FrameSpec::new(
        GroupCase::NilYT,
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ],
    )
    .expect("example frame is invertible")
}

/// Modes of the manufactured solution `u* = 0.05(cos2πx₁·cos2πx₂ + 0.5·sin2πx₂)`.
pub fn u_star_modes() -> Vec<Mode> {
    // cos a cos b = ½cos(a+b) + ½cos(a−b); sin b = cos(b − π/2)
    vec![
        Mode::new(1, 1, 0.025, 0.0),
        Mode::new(1, -1, 0.025, 0.0),
        Mode::new(0, 1, 0.025, -0.5 * PI),
    ]
}

pub fn u_star(grid: TorusGrid) -> TorusField {
    TorusField::from_fn(grid, |x, y| {
        0.05 * ((2.0 * PI * x).cos() * (2.0 * PI * y).cos() + 0.5 * (2.0 * PI * y).sin())
    })
}

/// `u*` scaled down to the largest round amplitude (0.005) for which the
/// manufactured forcing exists for both example coefficient sets: at the full
/// amplitude 0.05 the implied `e^F` is negative and `A22[u*]` changes sign.
pub const ADMISSIBLE_U_STAR_SCALE: f64 = 0.1;

pub fn u_star_admissible(grid: TorusGrid) -> TorusField {
    u_star(grid).scale(ADMISSIBLE_U_STAR_SCALE)
}

/// Random zero-mean trigonometric polynomial with `terms` modes of
/// wavenumber at most `kmax` and amplitudes in `[-amp, amp]`.
pub fn random_band_limited(grid: TorusGrid, seed: u64, terms: usize, kmax: i64, amp: f64) -> TorusField {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<Mode> = (0..terms)
        .map(|_| {
            let (k1, k2) = loop {
                let k = (rng.gen_range(-kmax..=kmax), rng.gen_range(-kmax..=kmax));
                if k != (0, 0) {
                    break k;
                }
            };
            Mode::new(k1, k2, rng.gen_range(-amp..=amp), rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    crate::grid::project_zero_mean(&crate::solver::modes_field(grid, &modes))
}

/// Named acceptance fixtures: `nil-a` and `sol-a` pair an example frame with
/// the manufactured solution `u*`.
pub fn named_frame(name: &str) -> Result<FrameSpec> {
    match name {
        "nil-a" | "nil" => Ok(nil_example_frame()),
        "sol-a" | "sol" => Ok(sol_example_frame()),
        "nil-explicit" => Ok(nil_g33_zero_frame()),
        _ => Err(Error::Parse(format!(
            "unknown fixture `{name}` (available: nil-a, sol-a, nil-explicit)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::modes::modes_field;

    #[test]
    fn u_star_modes_reproduce_closed_form() {
        let g = TorusGrid::square(32).unwrap();
        let diff = &modes_field(g, &u_star_modes()) - &u_star(g);
        assert!(diff.sup_abs() < 1e-15);
    }

    #[test]
    fn full_amplitude_u_star_admits_no_forcing() {
        use crate::grid::Spectral;
        use crate::macoeffs::coefficients;
        use crate::solver::{manufactured_forcing, operator_fields};
        let g = TorusGrid::square(64).unwrap();
        for spec in [nil_example_frame(), sol_example_frame()] {
            let c = coefficients(&spec).unwrap();
            assert!(manufactured_forcing(&u_star(g), &c, &Spectral).is_err());
            assert!(operator_fields(&u_star(g), &c, &Spectral).min_a22() < 0.0);
            let f = manufactured_forcing(&u_star_admissible(g), &c, &Spectral).unwrap();
            assert!(f.map(f64::exp).min() > 0.15);
        }
    }
}
