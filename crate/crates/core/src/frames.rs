//! Invariant almost-Kähler frame data.
//!
//! A structure is described by the 4×4 matrix `G` with `G[i][j] = g(eⁱ, fʲ)`,
//! where `(eⁱ)` is the Lie-group coframe and `(fʲ)` an orthonormal adapted
//! coframe, so `eⁱ = Gⁱⱼ fʲ` and `fⁱ = Hⁱⱼ eʲ` with `H = G⁻¹`. Rows index
//! `e`, columns index `f`. Accessors take 1-based indices so that
//! `spec.g(3, 4)` reads as `G³₄`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::validation::ValidationReport;

pub type Mat4 = [[f64; 4]; 4];

/// Absolute tolerance for equality constraints on the max-normalized `G`.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Threshold on `(G²₃)² + (G²₄)²` below which a Sol frame is flagged as E₂-degenerate.
pub const E2_WARN_TOL: f64 = 1e-12;

const SAMPLER_MAX_DRAWS: usize = 1000;
const MAX_SAMPLED_H: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupCase {
    /// Nil³×ℝ fibred by π_yt; base coordinates (y, t), Ω = f¹⁴ + f²³.
    #[serde(rename = "nil_yt")]
    NilYT,
    /// Sol³×ℝ; base coordinates (x, y), Ω = f¹² + f³⁴.
    #[serde(rename = "sol_r")]
    SolR,
}

impl GroupCase {
    pub fn name(self) -> &'static str {
        match self {
            GroupCase::NilYT => "nil_yt",
            GroupCase::SolR => "sol_r",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "nil_yt" | "nil" | "NilYT" => Ok(GroupCase::NilYT),
            "sol_r" | "sol" | "SolR" => Ok(GroupCase::SolR),
            _ => Err(Error::Parse(format!("unknown group case `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameFile", into = "FrameFile")]
pub struct FrameSpec {
    case: GroupCase,
    g: Mat4,
    h: Mat4,
}

/// On-disk form: `H` is never stored, it is recomputed on load.
#[derive(Serialize, Deserialize)]
struct FrameFile {
    case: GroupCase,
    #[serde(rename = "G")]
    g: Mat4,
}

impl TryFrom<FrameFile> for FrameSpec {
    type Error = Error;
    fn try_from(f: FrameFile) -> Result<Self> {
        FrameSpec::new(f.case, f.g)
    }
}

impl From<FrameSpec> for FrameFile {
    fn from(s: FrameSpec) -> Self {
        FrameFile {
            case: s.case,
            g: s.g,
        }
    }
}

impl FrameSpec {
    pub fn new(case: GroupCase, g: Mat4) -> Result<Self> {
        if g.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let h = invert_frame(&g)?;
        Ok(Self { case, g, h })
    }

    /// Builds a frame from its inverse `H` (the natural parametrization in the Sol case).
    pub fn from_inverse(case: GroupCase, h: Mat4) -> Result<Self> {
        let g = invert_frame(&h)?;
        Self::new(case, g)
    }

    pub fn case(&self) -> GroupCase {
        self.case
    }

    pub fn g_matrix(&self) -> &Mat4 {
        &self.g
    }

    pub fn h_matrix(&self) -> &Mat4 {
        &self.h
    }

    /// `Gⁱⱼ`, 1-based.
    #[inline]
    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.g[i - 1][j - 1]
    }

    /// `Hⁱⱼ`, 1-based.
    #[inline]
    pub fn h(&self, i: usize, j: usize) -> f64 {
        self.h[i - 1][j - 1]
    }

    /// `(G²₃)² + (G²₄)²`, the E₂ of the Sol reduction.
    pub fn sol_e2(&self) -> f64 {
        self.g(2, 3).powi(2) + self.g(2, 4).powi(2)
    }
}

fn max_abs(m: &Mat4) -> f64 {
    m.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Inverts a 4×4 matrix by Gauss–Jordan elimination with partial pivoting.
pub fn invert_frame(g: &Mat4) -> Result<Mat4> {
    let scale = max_abs(g);
    let mut a = *g;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return Err(Error::SingularMatrix { det: 0.0 });
        }
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for k in 0..4 {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for r in 0..4 {
            if r == col {
                continue;
            }
            let factor = a[r][col];
            if factor == 0.0 {
                continue;
            }
            for k in 0..4 {
                a[r][k] -= factor * a[col][k];
                inv[r][k] -= factor * inv[col][k];
            }
        }
    }
    if scale == 0.0 || det.abs() < 1e-14 * scale.powi(4) {
        return Err(Error::SingularMatrix { det });
    }
    Ok(inv)
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Checks every algebraic constraint of the adapted coframe for the spec's case.
///
/// Constraints are evaluated on a copy of `G` scaled to unit max-entry (and the
/// correspondingly scaled `H`), so the absolute tolerance is scale-free.
pub fn validate(spec: &FrameSpec) -> Result<ValidationReport> {
    let h_raw = invert_frame(&spec.g)?;
    let m = max_abs(&spec.g);
    let gn = |i: usize, j: usize| spec.g[i - 1][j - 1] / m;
    let hn = |i: usize, j: usize| h_raw[i - 1][j - 1] * m;
    let tol = CONSTRAINT_TOL;
    let mut r = ValidationReport::new();

    match spec.case {
        GroupCase::NilYT => {
            r.nonzero("G¹₁ ≠ 0", gn(1, 1), tol);
            r.zero("G¹₂ = 0", gn(1, 2), tol);
            r.zero("G¹₃ = 0", gn(1, 3), tol);
            r.zero("G¹₄ = 0", gn(1, 4), tol);
            r.zero("G³₂ = 0", gn(3, 2), tol);
            r.nonnegative("G³₃G³₄ ≥ 0", gn(3, 3) * gn(3, 4), tol);
            r.nonzero("non-Lagrangian G³₄ ≠ 0", gn(3, 4), tol);
            r.zero(
                "G³₃H³₄ + G³₄H⁴₄ = 0",
                gn(3, 3) * hn(3, 4) + gn(3, 4) * hn(4, 4),
                tol,
            );
            r.zero(
                "H²₄G²₂ + H³₄G²₃ = 0",
                hn(2, 4) * gn(2, 2) + hn(3, 4) * gn(2, 3),
                tol,
            );
            r.zero("H²₄G²₄ = 0", hn(2, 4) * gn(2, 4), tol);
            r.zero("H³₄G²₄ = 0", hn(3, 4) * gn(2, 4), tol);
            r.zero("G²₄ = 0", gn(2, 4), tol);
        }
        GroupCase::SolR => {
            r.positive("G¹₁ > 0", gn(1, 1));
            for (i, j) in [
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 1),
                (3, 1),
                (3, 2),
                (3, 4),
                (4, 1),
                (4, 2),
            ] {
                r.zero(&format!("H{}{} = 0", sup(i), sub(j)), hn(i, j), tol);
            }
            r.zero("G³₄ = 0", gn(3, 4), tol);
            r.zero(
                "H²₄G²₂ + H⁴₄G²₄ = 0",
                hn(2, 4) * gn(2, 2) + hn(4, 4) * gn(2, 4),
                tol,
            );
            r.zero(
                "H³₃G⁴₃ + H⁴₃G⁴₄ = 0",
                hn(3, 3) * gn(4, 3) + hn(4, 3) * gn(4, 4),
                tol,
            );
            let e2 = spec.sol_e2();
            if e2 <= E2_WARN_TOL {
                r.warn(format!(
                    "E₂-degenerate: (G²₃)² + (G²₄)² = {e2:e}; the Monge–Ampère reduction is unavailable"
                ));
            }
        }
    }
    Ok(r)
}

fn sup(i: usize) -> char {
    ['¹', '²', '³', '⁴'][i - 1]
}

fn sub(j: usize) -> char {
    ['₁', '₂', '₃', '₄'][j - 1]
}

/// Deterministic generator of admissible frames (test data / CLI `sample`).
///
/// Nil: `G` row 1 = (G¹₁,0,0,0), row 2 = (·,·,·,0), row 3 = (·,0,G³₃,G³₄) with
/// G³₃G³₄ > 0, row 4 free. Sol: `H` in the adapted shape with H¹₁ > 0.
/// Every bilinear constraint then follows from `G·H = I`.
pub fn sample_admissible(case: GroupCase, seed: u64) -> Result<FrameSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLER_MAX_DRAWS {
        let candidate = match case {
            GroupCase::NilYT => draw_nil(&mut rng),
            GroupCase::SolR => draw_sol(&mut rng),
        };
        let Ok(spec) = candidate else { continue };
        // keep the sampled family well conditioned: coefficient identities are
        // checked to absolute tolerances, and coefficients grow with |H|
        if max_abs(&spec.h) > MAX_SAMPLED_H {
            continue;
        }
        if case == GroupCase::SolR && spec.sol_e2() < 0.1 {
            continue;
        }
        if validate(&spec)?.valid {
            return Ok(spec);
        }
    }
    Err(Error::ExhaustedRetries(SAMPLER_MAX_DRAWS))
}

fn magnitude(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.5..2.0)
}

fn signed_magnitude(rng: &mut ChaCha8Rng) -> f64 {
    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    s * magnitude(rng)
}

fn draw_nil(rng: &mut ChaCha8Rng) -> Result<FrameSpec> {
    let mut g = [[0.0; 4]; 4];
    g[0][0] = magnitude(rng);
    g[1][0] = rng.gen_range(-1.0..1.0);
    g[1][1] = signed_magnitude(rng);
    g[1][2] = rng.gen_range(-1.0..1.0);
    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    g[2][0] = rng.gen_range(-1.0..1.0);
    g[2][2] = s * magnitude(rng);
    g[2][3] = s * magnitude(rng);
    for v in g[3].iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    g[3][3] += signed_magnitude(rng);
    FrameSpec::new(GroupCase::NilYT, g)
}

fn draw_sol(rng: &mut ChaCha8Rng) -> Result<FrameSpec> {
    let mut h = [[0.0; 4]; 4];
    h[0][0] = magnitude(rng);
    h[1][1] = signed_magnitude(rng);
    h[1][2] = rng.gen_range(-1.0..1.0);
    h[1][3] = rng.gen_range(-1.0..1.0);
    h[2][2] = signed_magnitude(rng);
    h[3][2] = rng.gen_range(-1.0..1.0);
    h[3][3] = signed_magnitude(rng);
    FrameSpec::from_inverse(GroupCase::SolR, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const I4: Mat4 = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];

    fn max_diff(a: &Mat4, b: &Mat4) -> f64 {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn invert_identity() {
        assert_eq!(invert_frame(&I4).unwrap(), I4);
    }

    #[test]
    fn invert_shear_block() {
        let g = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 1.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let expected = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, -1.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let h = invert_frame(&g).unwrap();
        assert!(max_diff(&h, &expected) < 1e-15);
        assert!(max_diff(&mat_mul(&g, &h), &I4) <= 1e-12);
    }

    #[test]
    fn zero_row_is_singular() {
        let mut g = I4;
        g[2] = [0.0; 4];
        assert!(matches!(invert_frame(&g), Err(Error::SingularMatrix { .. })));
        let tiny = [[1e-15, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        assert!(matches!(invert_frame(&tiny), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn nil_example_is_valid() {
        let r = validate(&fixtures::nil_example_frame()).unwrap();
        assert!(r.valid, "{}", r.summary());
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn nil_identity_is_lagrangian() {
        let spec = FrameSpec::new(GroupCase::NilYT, I4).unwrap();
        let r = validate(&spec).unwrap();
        assert!(!r.valid);
        assert!(r.has_violation("non-Lagrangian G³₄ ≠ 0"), "{}", r.summary());
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn nil_opposite_signs_violate_y2() {
        let g = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, -1.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let r = validate(&FrameSpec::new(GroupCase::NilYT, g).unwrap()).unwrap();
        assert!(r.has_violation("G³₃G³₄ ≥ 0"), "{}", r.summary());
    }

    #[test]
    fn nil_nonzero_g24_is_rejected() {
        let mut g = fixtures::nil_example_frame().g_matrix().to_owned();
        g[1][3] = 0.3;
        let r = validate(&FrameSpec::new(GroupCase::NilYT, g).unwrap()).unwrap();
        assert!(r.has_violation("G²₄ = 0"));
    }

    #[test]
    fn sol_example_is_valid() {
        let spec = fixtures::sol_example_frame();
        let r = validate(&spec).unwrap();
        assert!(r.valid, "{}", r.summary());
        assert!((spec.g(2, 2) - 2f64.sqrt()).abs() < 1e-15);
        assert!((spec.g(2, 4) + 1.0).abs() < 1e-15);
        assert_eq!(spec.g(2, 3), 0.0);
    }

    #[test]
    fn sol_e2_degenerate_warns_but_stays_valid() {
        let h = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let spec = FrameSpec::from_inverse(GroupCase::SolR, h).unwrap();
        let r = validate(&spec).unwrap();
        assert!(r.valid);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn sol_wrong_shape_is_rejected() {
        let mut h = *fixtures::sol_example_frame().h_matrix();
        h[2][3] = 0.5;
        let r = validate(&FrameSpec::from_inverse(GroupCase::SolR, h).unwrap()).unwrap();
        assert!(r.has_violation("H³₄ = 0"));
        assert!(r.has_violation("G³₄ = 0"));
        let mut h = *fixtures::sol_example_frame().h_matrix();
        h[0][0] = -1.0;
        let r = validate(&FrameSpec::from_inverse(GroupCase::SolR, h).unwrap()).unwrap();
        assert!(r.has_violation("G¹₁ > 0"));
    }

    #[test]
    fn validation_is_scale_free() {
        let mut g = *fixtures::nil_example_frame().g_matrix();
        for v in g.iter_mut().flatten() {
            *v *= 1e6;
        }
        assert!(validate(&FrameSpec::new(GroupCase::NilYT, g).unwrap()).unwrap().valid);
    }

    #[test]
    fn sampler_is_deterministic_and_valid() {
        for case in [GroupCase::NilYT, GroupCase::SolR] {
            let a = sample_admissible(case, 7).unwrap();
            let b = sample_admissible(case, 7).unwrap();
            assert_eq!(a.g_matrix(), b.g_matrix());
            assert!(validate(&a).unwrap().valid);
        }
        assert!(sample_admissible(GroupCase::SolR, 7).unwrap().sol_e2() >= 0.1);
    }

    #[test]
    fn sampler_exercises_off_block_entries() {
        let hits = (0..50)
            .map(|s| sample_admissible(GroupCase::NilYT, s).unwrap())
            .filter(|f| f.g(3, 1).abs() > 1e-3 && f.g(4, 1).abs() > 1e-3)
            .count();
        assert!(hits > 25);
    }

    #[test]
    fn frame_json_round_trip_recomputes_h() {
        let spec = fixtures::sol_example_frame();
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"case\":\"sol_r\"") && text.contains("\"G\""));
        assert!(!text.contains("\"H\""));
        let back: FrameSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn singular_frame_json_is_rejected() {
        let text = r#"{"case":"nil_yt","G":[[1,0,0,0],[0,0,0,0],[0,0,1,1],[0,0,0,1]]}"#;
        assert!(serde_json::from_str::<FrameSpec>(text).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn double_inversion_is_identity(seed in any::<u64>(), sol in any::<bool>()) {
                let case = if sol { GroupCase::SolR } else { GroupCase::NilYT };
                let spec = sample_admissible(case, seed).unwrap();
                let g = spec.g_matrix();
                let back = invert_frame(&invert_frame(g).unwrap()).unwrap();
                prop_assert!(max_diff(&back, g) <= 1e-10 * max_abs(g));
            }

            #[test]
            fn inverse_residual_is_tiny(seed in any::<u64>(), sol in any::<bool>()) {
                let case = if sol { GroupCase::SolR } else { GroupCase::NilYT };
                let spec = sample_admissible(case, seed).unwrap();
                let prod = mat_mul(spec.g_matrix(), spec.h_matrix());
                let bound = 1e-12 * max_abs(spec.g_matrix()) * max_abs(spec.h_matrix());
                prop_assert!(max_diff(&prod, &I4) <= bound);
            }

            #[test]
            fn validate_is_pure(seed in any::<u64>()) {
                let spec = sample_admissible(GroupCase::NilYT, seed).unwrap();
                prop_assert_eq!(validate(&spec).unwrap(), validate(&spec).unwrap());
            }

            #[test]
            fn nil_block_identity_holds(seed in any::<u64>()) {
                let spec = sample_admissible(GroupCase::NilYT, seed).unwrap();
                let lhs = spec.g(3, 3) * spec.h(3, 4) + spec.g(3, 4) * spec.h(4, 4);
                prop_assert!(lhs.abs() <= 1e-12 * max_abs(spec.g_matrix()) * max_abs(spec.h_matrix()));
            }
        }
    }
}
