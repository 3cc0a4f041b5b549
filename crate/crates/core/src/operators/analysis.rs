//! Dense complex matrix primitives: norms, Hermitian spectra, commutators, adjoints.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_square(a: &DMatrix<Complex64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: (a.ncols(), a.nrows()),
        });
    }
    Ok(())
}

pub fn adjoint(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.adjoint()
}

/// `max |A − A*|` relative to `max(1, max |A|)`.
pub fn hermiticity_defect(a: &DMatrix<Complex64>) -> f64 {
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

pub fn is_hermitian(a: &DMatrix<Complex64>, tol: f64) -> bool {
    a.is_square() && hermiticity_defect(a) <= tol
}

/// Eigenvalues of the Hermitian part `(A + A*)/2`, sorted ascending.
pub fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_square(a)?;
    let sym = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut values: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest singular value; for Hermitian input, the largest `|λ|`.
pub fn operator_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    check_square(a)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    if hermiticity_defect(a) <= 1e-14 {
        let values = hermitian_eigenvalues(a)?;
        return Ok(values.iter().map(|v| v.abs()).fold(0.0, f64::max));
    }
    Ok(a.clone().singular_values().iter().copied().fold(0.0, f64::max))
}

pub fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(a * b - b * a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn diagonal_norm() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.25), c(0.5), c(0.75)]));
        assert!((operator_norm(&a).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(hermitian_eigenvalues(&a).unwrap(), vec![0.25, 0.5, 0.75]);
    }

    #[test]
    fn non_hermitian_norm_uses_singular_values() {
        // [[0, 2], [0, 0]] has singular values {2, 0}
        let a = DMatrix::from_row_slice(2, 2, &[c(0.0), c(2.0), c(0.0), c(0.0)]);
        assert!((operator_norm(&a).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn commutator_with_self_vanishes() {
        let a = DMatrix::from_fn(4, 4, |j, k| Complex64::new(j as f64 - k as f64, (j * k) as f64));
        assert_eq!(commutator(&a, &a).unwrap(), DMatrix::zeros(4, 4));
        let b = DMatrix::zeros(3, 3);
        assert!(matches!(commutator(&a, &b), Err(Error::ShapeMismatch { .. })));
        assert!(operator_norm(&DMatrix::zeros(2, 3)).is_err());
    }
}
