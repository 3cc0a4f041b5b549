//! Berezin–Toeplitz quantization of the projective line, computed exactly.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbolic`] – the closed algebra of smooth functions `N(z, z̄)/(1 + z z̄)^R` on `P¹`
//!   with exact Wirtinger calculus, Poisson bracket, Laplacian and integration.
//! * [`hilbert`] – holomorphic sections of `O(m)` in the monomial basis.
//! * [`operators`] – Toeplitz and geometric-quantization matrices (exact and quadrature).
//! * [`semiclassics`] – sweeps over `m` measuring the semiclassical laws.
//! * [`starproduct`] – truncated formal star products and their axioms.
//! * [`calibration`] – oracles fixing the sign and scale conventions.
//! * [`harness`] – configuration, matrix cache and report writers behind the `btlab` binary.

pub mod calibration;
pub mod error;
pub mod harness;
pub mod hilbert;
pub mod operators;
pub mod rational;
pub mod semiclassics;
pub mod starproduct;
pub mod symbolic;

pub use error::{Error, Result};
pub use operators::{ExactOperator, OperatorMatrix};
pub use symbolic::{CanonicalSymbol, ChartRational, Point};
