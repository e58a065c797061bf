//! Numerical solver for the generalized Monge–Ampère equation
//! `A11A22 − A12² = E1 + E2·e^F` on the 2-torus, together with the frame
//! algebra that produces its coefficients from almost-Kähler structures on
//! Nil and Sol solvmanifolds and the reconstruction that maps solutions back.

pub mod error;
pub mod fixtures;
pub mod frames;
pub mod grid;
pub mod macoeffs;
pub mod pipeline;
pub mod reconstruct;
pub mod registry;
pub mod solver;
pub mod validation;

pub use error::{Error, Result};
pub use frames::{FrameSpec, GroupCase};
pub use grid::{TorusField, TorusGrid};
pub use macoeffs::MACoefficients;
pub use solver::{continuity_solve, SolveReport, SolverConfig};
