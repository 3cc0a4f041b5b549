//! Toeplitz, prequantum and geometric-quantization operators at level `m`.
//!
//! All matrices are written against the orthonormal monomial basis
//! `s̃_j = z^j / ‖z^j‖`, so the projection onto holomorphic sections never
//! appears as an explicit matrix.

mod analysis;
mod exact;
mod matrix;
mod quadrature;

pub use analysis::{
    adjoint, commutator, hermitian_eigenvalues, hermiticity_defect, is_hermitian, operator_norm,
};
pub use exact::ExactOperator;
pub use matrix::{OperatorKind, OperatorMatrix, Provenance};
pub use quadrature::{gauss_legendre, gram_quadrature, toeplitz_quadrature, QuadratureRule};

use crate::error::Result;
use crate::symbolic::CanonicalSymbol;

/// `T_f^{(m)}` from exact Beta integrals, rounded to `f64` once.
pub fn toeplitz_exact(f: &CanonicalSymbol, m: u32) -> OperatorMatrix {
    ExactOperator::toeplitz(f, m).to_matrix(OperatorKind::Toeplitz, f.fingerprint())
}

/// `Q_f^{(m)} = Π (−∇_{X_f^{(m)}} + i f) Π` from exact Beta integrals.
pub fn prequantum_geometric(f: &CanonicalSymbol, m: u32) -> Result<OperatorMatrix> {
    Ok(ExactOperator::prequantum(f, m)?.to_matrix(OperatorKind::Prequantum, f.fingerprint()))
}
