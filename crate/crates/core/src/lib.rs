//! A decision engine built on quantum decision theory.
//!
//! Actions and their modes span a finite tensor-product space (the mind
//! space). A decision maker is a fixed unit-norm strategic state in that
//! space, and each prospect is an (unnormalized) state whose rank-1 operator
//! is averaged over the strategic state to give a prospect probability. That
//! probability splits into a classical utility factor and an interference
//! (attraction) factor, and the prospect with the largest probability is
//! optimal.
//!
//! Module map:
//!
//! - [`action_algebra`]: actions, modes, elementary prospects and events.
//! - [`hilbert`]: mind space, state vectors, strategic states.
//! - [`prospects`]: prospect states and their operators.
//! - [`decision`]: probabilities, factors, normalization, ranking.
//! - [`machine`]: the measure-and-select pipeline with optional shot noise.
//! - [`io`] and [`cli`]: problem files and the `qdt` command line.

pub mod action_algebra;
pub mod cli;
pub mod decision;
mod error;
pub mod hilbert;
pub mod io;
pub mod machine;
pub mod prospects;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Tolerance for checks that hold exactly in real arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Norm slack accepted on user-supplied "already normalized" vectors.
pub const NORM_SLACK: f64 = 1e-9;
