//! Stimulated Raman transitions between two long-lived states coupled through
//! an arbitrary number of far-detuned intermediate levels.
//!
//! The crate reduces the multilevel problem to an effective two-level system
//! (Rabi frequency, lightshift, oscillation envelope), evaluates the geometric
//! dipole factors for alkali-metal hyperfine manifolds, and carries a
//! brute-force Schrödinger integrator used to check every analytic result.
//!
//! All frequencies are angular (rad/s) unless a name says otherwise.

pub mod atoms;
pub mod cli;
pub mod constants;
pub mod effective;
pub mod eigen;
mod error;
pub mod geometry;
pub mod halfint;
pub mod oracle;
pub mod parallel;
pub mod wigner;

pub use error::{Error, Result};
pub use halfint::HalfInt;

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex64;
