//! Greedy dictionary approximation over Hilbert spaces.
//!
//! The crate provides:
//!
//! - [`space`]: the ambient spaces (empirical L² on sample points,
//!   Euclidean, ℓ² sequence) and their vectors;
//! - [`ortho`]: numerically stable incremental orthonormalization with
//!   projection/residual updates and triangular back-substitution;
//! - [`dictionary`]: finite, decaying-coordinate, and planar Heaviside
//!   ridge dictionaries with exact argmax-correlation oracles;
//! - [`greedy`]: the orthogonal, pure (with shrinkage), and relaxed
//!   greedy iterations with full per-iteration telemetry;
//! - [`analysis`]: convergence-order fitting, exact variation norms of
//!   finite dictionaries, and verification routines for the sharpness
//!   and unboundedness constructions.

pub mod analysis;
pub mod dictionary;
pub mod error;
pub mod greedy;
pub mod ortho;
pub mod space;

pub use error::{Error, Result};
