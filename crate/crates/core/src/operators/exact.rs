use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::{OperatorKind, OperatorMatrix, Provenance};
use crate::error::{Error, Result};
use crate::hilbert::basis_weight;
use crate::rational::{beta_int, coeff_to_c64, from_rational, imag_unit, ratio_to_f64, real, Coeff};
use crate::symbolic::{hamiltonian_field, CanonicalSymbol, ChartRational};

/// Operator at level `m` stored exactly through its Gram form
/// `G_{jk} = ⟨z^j, A z^k⟩ / 2π` in the unnormalised monomial basis.
///
/// With `ν_j = ‖z^j‖² / 2π` the orthonormal-basis matrix is
/// `A_{jk} = G_{jk} / √(ν_j ν_k)`. Since the `ν_j` are positive, adjoints are
/// conjugate transposes of `G`, and products compose as `G_A diag(ν)^{-1} G_B`, so every
/// identity between such operators can be checked in exact rational arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOperator {
    level: u32,
    gram: Vec<Coeff>,
    weights: Vec<BigRational>,
}

impl ExactOperator {
    fn empty(m: u32) -> Self {
        let n = m as usize + 1;
        Self {
            level: m,
            gram: vec![Coeff::zero(); n * n],
            weights: (0..=m).map(|j| basis_weight(m, j)).collect(),
        }
    }

    pub fn identity(m: u32) -> Self {
        let mut out = Self::empty(m);
        let n = out.dim();
        for j in 0..n {
            out.gram[j * n + j] = from_rational(out.weights[j].clone());
        }
        out
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.level as usize + 1
    }

    pub fn gram(&self, j: usize, k: usize) -> &Coeff {
        &self.gram[j * self.dim() + k]
    }

    /// Adds `(1/2π) ∫ z̄^j φ ĥ^m Ω` into column `k` for every `j`.
    fn accumulate_column(&mut self, k: usize, phi: &ChartRational) -> Result<()> {
        let m = self.level;
        let n = self.dim();
        let decay = phi.denom_exp + m;
        for (&(a, b), c) in phi.numerator.terms() {
            if a < b || a - b > m {
                continue;
            }
            let j = (a - b) as usize;
            if a > decay {
                return Err(Error::DivergentIntegral {
                    power: a,
                    decay: decay + 2,
                });
            }
            let slot = &mut self.gram[j * n + k];
            *slot = &*slot + c * from_rational(beta_int(a, decay - a));
        }
        Ok(())
    }

    /// `T_f^{(m)}`: angular selection `j + b = k + a` per numerator monomial and a
    /// radial Beta integral for each surviving term.
    pub fn toeplitz(f: &CanonicalSymbol, m: u32) -> Self {
        let mut out = Self::empty(m);
        for k in 0..=m {
            let phi = f.as_chart().mul_monomial(k, 0);
            out.accumulate_column(k as usize, &phi)
                .expect("canonical symbols give convergent Toeplitz integrals");
        }
        out
    }

    /// `Q_f^{(m)}` for the prequantum operator `P_f = −∇_{X_f^{(m)}} + i f` on `L^m`,
    /// where `X_f^{(m)} = X_f / m` is the Hamiltonian field of `m ω`.
    ///
    /// On a holomorphic section `s`, `∇_X s = X^z (∂_z s − m z̄ s / (1 + z z̄))`.
    pub fn prequantum(f: &CanonicalSymbol, m: u32) -> Result<Self> {
        if !f.is_real() {
            return Err(Error::NotReal("prequantum_geometric"));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("prequantum operator needs m >= 1".into()));
        }
        let xz = hamiltonian_field(f).comp_z;
        let mut out = Self::empty(m);
        let i_f = f.as_chart().scale(&imag_unit());
        for k in 0..=m {
            let mut phi = i_f.mul_monomial(k, 0);
            // −(1/m) X^z · m z̄ z^k / (1+zz̄) · (−1)
            phi = phi.add(&ChartRational::new(xz.numerator.shift(k, 1), xz.denom_exp + 1));
            if k > 0 {
                let derivative = xz
                    .mul_monomial(k - 1, 0)
                    .scale(&real(-(k as i64), m as i64));
                phi = phi.add(&derivative);
            }
            out.accumulate_column(k as usize, &phi)?;
        }
        Ok(out)
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::ShapeMismatch {
                left: (self.dim(), self.dim()),
                right: (other.dim(), other.dim()),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Coeff, &Coeff) -> Coeff) -> Result<Self> {
        self.check_level(other)?;
        Ok(Self {
            level: self.level,
            gram: self.gram.iter().zip(&other.gram).map(|(a, b)| op(a, b)).collect(),
            weights: self.weights.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self {
            level: self.level,
            gram: self.gram.iter().map(|g| g * c).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut gram = vec![Coeff::zero(); n * n];
        for j in 0..n {
            for k in 0..n {
                gram[k * n + j] = self.gram[j * n + k].conj();
            }
        }
        Self {
            level: self.level,
            gram,
            weights: self.weights.clone(),
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let n = self.dim();
        let mut out = Self::empty(self.level);
        for l in 0..n {
            let inv = from_rational(self.weights[l].recip());
            for j in 0..n {
                let left = &self.gram[j * n + l];
                if left.is_zero() {
                    continue;
                }
                let scaled = left * &inv;
                for k in 0..n {
                    let right = &other.gram[l * n + k];
                    if !right.is_zero() {
                        let slot = &mut out.gram[j * n + k];
                        *slot = &*slot + &scaled * right;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Orthonormal-basis diagonal `A_{jj} = G_{jj} / ν_j`, exact.
    pub fn diagonal(&self) -> Vec<Coeff> {
        (0..self.dim())
            .map(|j| self.gram(j, j) * from_rational(self.weights[j].recip()))
            .collect()
    }

    pub fn trace(&self) -> Coeff {
        self.diagonal().into_iter().fold(Coeff::zero(), |acc, d| acc + d)
    }

    pub fn is_zero(&self) -> bool {
        self.gram.iter().all(|g| g.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|k| j == k || self.gram[j * n + k].is_zero()))
    }

    /// `A_{jk} = (G_{jk} / ν_j) · √(ν_j / ν_k)` with both ratios taken exactly, so
    /// diagonal entries are correctly rounded.
    pub fn entries_f64(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let inv: Vec<Coeff> = self.weights.iter().map(|w| from_rational(w.recip())).collect();
        DMatrix::from_fn(n, n, |j, k| {
            let g = &self.gram[j * n + k];
            if g.is_zero() {
                return Complex64::new(0.0, 0.0);
            }
            let scaled = coeff_to_c64(&(g * &inv[j]));
            if j == k {
                scaled
            } else {
                scaled * ratio_to_f64(&(&self.weights[j] / &self.weights[k])).sqrt()
            }
        })
    }

    pub fn to_matrix(&self, kind: OperatorKind, source: String) -> OperatorMatrix {
        OperatorMatrix {
            level: self.level,
            entries: self.entries_f64(),
            provenance: Provenance::Exact,
            kind,
            source,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, real};
    use crate::symbolic::{laplacian, random_real_symbol};

    #[test]
    fn toeplitz_of_one_is_identity() {
        for m in 0..10 {
            assert_eq!(ExactOperator::toeplitz(&CanonicalSymbol::one(), m), ExactOperator::identity(m));
        }
    }

    #[test]
    fn toeplitz_of_f0_level_two() {
        let t = ExactOperator::toeplitz(&CanonicalSymbol::f0(), 2);
        assert!(t.is_diagonal());
        assert_eq!(t.diagonal(), vec![real(1, 4), real(2, 4), real(3, 4)]);
    }

    #[test]
    fn toeplitz_of_two_g0_level_one() {
        let f = CanonicalSymbol::g0().scale(&real(2, 1));
        let a = ExactOperator::toeplitz(&f, 1).entries_f64();
        let expected = [[0.0, 1.0 / 3.0], [1.0 / 3.0, 0.0]];
        for j in 0..2 {
            for k in 0..2 {
                assert!((a[(j, k)] - expected[j][k]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn prequantum_examples() {
        let one = ExactOperator::prequantum(&CanonicalSymbol::one(), 3).unwrap();
        assert_eq!(one, ExactOperator::identity(3).scale(&imag_unit()));

        // Q_{f0} at m = 1 equals i T_1(f0 − Δf0/2) = i diag(0, 1)
        let q = ExactOperator::prequantum(&CanonicalSymbol::f0(), 1).unwrap();
        assert!(q.is_diagonal());
        assert_eq!(q.diagonal(), vec![real(0, 1), imag_unit()]);
        let f = CanonicalSymbol::f0();
        let rhs = ExactOperator::toeplitz(&f.sub(&laplacian(&f).scale(&real(1, 2))), 1).scale(&imag_unit());
        assert_eq!(q, rhs);
    }

    #[test]
    fn prequantum_is_anti_hermitian() {
        for seed in 0..6 {
            let f = random_real_symbol(seed, 3).unwrap();
            let q = ExactOperator::prequantum(&f, 5).unwrap();
            assert!(q.add(&q.adjoint()).unwrap().is_zero());
        }
    }

    #[test]
    fn prequantum_rejects_complex_symbol_and_level_zero() {
        let f = CanonicalSymbol::f0().scale(&imag_unit());
        assert!(matches!(ExactOperator::prequantum(&f, 2), Err(Error::NotReal(_))));
        assert!(ExactOperator::prequantum(&CanonicalSymbol::f0(), 0).is_err());
    }

    #[test]
    fn exact_composition_matches_float_product() {
        let f = random_real_symbol(3, 2).unwrap();
        let g = random_real_symbol(4, 2).unwrap();
        let tf = ExactOperator::toeplitz(&f, 6);
        let tg = ExactOperator::toeplitz(&g, 6);
        let exact = tf.compose(&tg).unwrap().entries_f64();
        let float = tf.entries_f64() * tg.entries_f64();
        assert!((exact - float).norm() < 1e-13);
    }

    #[test]
    fn level_mismatch_is_reported() {
        let a = ExactOperator::identity(2);
        let b = ExactOperator::identity(3);
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch { .. })));
        assert_eq!(a.trace(), Coeff::new(rat(3, 1), rat(0, 1)));
    }
}
