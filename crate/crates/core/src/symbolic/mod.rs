//! Exact smooth functions on the projective line.
//!
//! Every function is written in the affine chart `z` as `N(z, z̄) / (1 + z z̄)^R`
//! with a polynomial numerator `N`. [`ChartRational`] is the raw chart expression;
//! [`CanonicalSymbol`] is a reduced representative that extends smoothly through
//! the second chart `w = 1/z`, which happens exactly when `deg_z N ≤ R` and
//! `deg_z̄ N ≤ R`.

mod calculus;
mod literal;
mod poly;
mod random;
mod supnorm;

pub use calculus::{
    hamiltonian_field, hamiltonian_field_with_phase, hamiltonian_phase, integrate, laplacian,
    laplacian_with_scale, poisson_bracket, wirtinger, Integral, VectorFieldChart, Wirtinger,
    LAPLACIAN_SCALE,
};
pub use literal::{SymbolLiteral, TermLiteral};
pub use poly::BiPoly;
pub use random::random_real_symbol;
pub use supnorm::{sup_norm, SupNorm, SupNormBudget};

use std::fmt;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rational::{real, Coeff};

/// A point of `P¹`: a finite chart value or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::Finite(z)
    }
}

/// `N(z, z̄) / (1 + z z̄)^R` without any smoothness requirement.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChartRational {
    pub numerator: BiPoly,
    pub denom_exp: u32,
}

impl ChartRational {
    pub fn new(numerator: BiPoly, denom_exp: u32) -> Self {
        Self {
            numerator,
            denom_exp,
        }
    }

    pub fn zero() -> Self {
        Self::new(BiPoly::zero(), 0)
    }

    pub fn constant(c: Coeff) -> Self {
        Self::new(BiPoly::constant(c), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Same function with denominator exponent raised to `r >= self.denom_exp`.
    pub fn lift_to(&self, r: u32) -> Self {
        debug_assert!(r >= self.denom_exp);
        Self::new(
            self.numerator.mul_one_plus_t_pow(r - self.denom_exp),
            r,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = self.denom_exp.max(other.denom_exp);
        Self::new(
            self.lift_to(r).numerator.add(&other.lift_to(r).numerator),
            r,
        )
        .cancel_common()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&real(-1, 1)))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::new(self.numerator.scale(c), self.denom_exp).cancel_common()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.numerator.mul(&other.numerator),
            self.denom_exp + other.denom_exp,
        )
        .cancel_common()
    }

    /// Multiply by `(1 + z z̄)^k`.
    pub fn mul_one_plus_t_pow(&self, k: u32) -> Self {
        if self.denom_exp >= k {
            Self::new(self.numerator.clone(), self.denom_exp - k)
        } else {
            Self::new(self.numerator.mul_one_plus_t_pow(k - self.denom_exp), 0)
        }
    }

    /// Multiply by `z^a z̄^b`.
    pub fn mul_monomial(&self, a: u32, b: u32) -> Self {
        Self::new(self.numerator.shift(a, b), self.denom_exp)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.numerator.conj(), self.denom_exp)
    }

    /// Divide out every common `(1 + z z̄)` factor between numerator and denominator.
    pub fn cancel_common(mut self) -> Self {
        if self.numerator.is_zero() {
            return Self::zero();
        }
        while self.denom_exp > 0 {
            match self.numerator.div_one_plus_t() {
                Some(q) => {
                    self.numerator = q;
                    self.denom_exp -= 1;
                }
                None => break,
            }
        }
        self
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let t = z.norm_sqr();
        self.numerator.eval(z) / (1.0 + t).powi(self.denom_exp as i32)
    }
}

impl fmt::Display for ChartRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (1+zz̄)^{}", self.numerator, self.denom_exp)
    }
}

/// A reduced, globally smooth function on `P¹`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalSymbol {
    inner: ChartRational,
    real: bool,
}

/// Canonicalize a chart expression that is supposed to be smooth on all of `P¹`.
pub fn reduce(raw: ChartRational) -> Result<CanonicalSymbol> {
    let inner = raw.cancel_common();
    let (deg_z, deg_zbar) = (inner.numerator.deg_z(), inner.numerator.deg_zbar());
    if deg_z > inner.denom_exp || deg_zbar > inner.denom_exp {
        return Err(Error::NotSmoothAtInfinity {
            deg_z,
            deg_zbar,
            denom_exp: inner.denom_exp,
        });
    }
    let real = inner.numerator.is_self_conjugate();
    Ok(CanonicalSymbol { inner, real })
}

impl CanonicalSymbol {
    /// Operations that stay inside the smooth algebra go through here; a failure
    /// means a derived formula left the algebra, which is a bug.
    fn from_derived(raw: ChartRational) -> Self {
        reduce(raw).expect("smooth-algebra operation produced a symbol singular at infinity")
    }

    pub fn zero() -> Self {
        Self::constant(real(0, 1))
    }

    pub fn one() -> Self {
        Self::constant(real(1, 1))
    }

    pub fn constant(c: Coeff) -> Self {
        Self::from_derived(ChartRational::constant(c))
    }

    /// `f₀ = z z̄ / (1 + z z̄)`
    pub fn f0() -> Self {
        Self::from_derived(ChartRational::new(BiPoly::monomial(1, 1, real(1, 1)), 1))
    }

    /// `g₀ = (z + z̄) / (2 (1 + z z̄))`
    pub fn g0() -> Self {
        Self::from_derived(ChartRational::new(
            BiPoly::from_terms([((1, 0), real(1, 2)), ((0, 1), real(1, 2))]),
            1,
        ))
    }

    pub fn as_chart(&self) -> &ChartRational {
        &self.inner
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.inner.numerator
    }

    pub fn denom_exp(&self) -> u32 {
        self.inner.denom_exp
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// `Some(c)` if the symbol is the constant `c`.
    pub fn as_constant(&self) -> Option<Coeff> {
        if self.inner.denom_exp == 0 && self.inner.numerator.deg_z() == 0 && self.inner.numerator.deg_zbar() == 0 {
            Some(self.inner.numerator.coeff(0, 0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_derived(self.inner.add(&other.inner))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_derived(self.inner.sub(&other.inner))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::from_derived(self.inner.scale(c))
    }

    pub fn multiply(&self, other: &Self) -> Self {
        Self::from_derived(self.inner.mul(&other.inner))
    }

    pub fn conjugate(&self) -> Self {
        Self::from_derived(self.inner.conj())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.multiply(self))
    }

    pub fn evaluate(&self, p: Point) -> Complex64 {
        match p {
            Point::Finite(z) => self.inner.eval(z),
            Point::Infinity => crate::rational::coeff_to_c64(
                &self.inner.numerator.coeff(self.inner.denom_exp, self.inner.denom_exp),
            ),
        }
    }

    /// The same function in the chart `w = 1/z`, as a chart expression in `w`.
    pub fn second_chart(&self) -> ChartRational {
        ChartRational::new(
            self.inner.numerator.invert_chart(self.inner.denom_exp),
            self.inner.denom_exp,
        )
    }

    /// Stable content hash of the canonical representative.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("R={};", self.inner.denom_exp).as_bytes());
        for ((a, b), re, im) in self.inner.numerator.coefficient_table() {
            hasher.update(format!("{a},{b},{re},{im};").as_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

impl fmt::Display for CanonicalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(terms: &[((u32, u32), i64)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().map(|&(k, c)| (k, real(c, 1))))
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let raw = ChartRational::new(poly(&[((1, 1), 1)]).mul(&BiPoly::one_plus_t()), 2);
        let s = reduce(raw).unwrap();
        assert_eq!(s.numerator(), &poly(&[((1, 1), 1)]));
        assert_eq!(s.denom_exp(), 1);
    }

    #[test]
    fn reduce_identity_on_constant_one() {
        let s = reduce(ChartRational::new(poly(&[((0, 0), 1)]), 0)).unwrap();
        assert_eq!(s, CanonicalSymbol::one());
        assert_eq!(s.denom_exp(), 0);
    }

    #[test]
    fn reduce_rejects_pole_at_infinity() {
        let err = reduce(ChartRational::new(poly(&[((2, 0), 1)]), 1)).unwrap_err();
        assert!(matches!(err, Error::NotSmoothAtInfinity { deg_z: 2, .. }));
    }

    #[test]
    fn algebra_examples() {
        let f0 = CanonicalSymbol::f0();
        let sq = f0.multiply(&f0);
        assert_eq!(sq.numerator(), &poly(&[((2, 2), 1)]));
        assert_eq!(sq.denom_exp(), 2);

        let g0 = CanonicalSymbol::g0();
        assert!(g0.is_real());
        assert_eq!(g0.conjugate(), g0);

        assert!(f0.add(&f0.scale(&real(-1, 1))).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let f0 = CanonicalSymbol::f0();
        assert_eq!(f0.evaluate(Point::Finite(Complex64::new(0.0, 0.0))).norm(), 0.0);
        assert!((f0.evaluate(Point::Infinity) - 1.0).norm() < 1e-15);
        let g0 = CanonicalSymbol::g0();
        assert!((g0.evaluate(Point::Finite(Complex64::new(1.0, 0.0))) - 0.5).norm() < 1e-15);
    }

    #[test]
    fn constant_minus_itself_is_canonical_zero() {
        let f = CanonicalSymbol::f0().add(&CanonicalSymbol::one());
        let z = f.sub(&f);
        assert!(z.is_zero());
        assert_eq!(z, CanonicalSymbol::zero());
    }

    proptest! {
        #[test]
        fn chart_transition_is_consistent(seed in 0u64..500, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let f = random_real_symbol(seed, 3).unwrap();
            let z = Complex64::new(re, im);
            let direct = f.evaluate(Point::Finite(z));
            let via_w = f.second_chart().eval(z.inv());
            prop_assert!((direct - via_w).norm() <= 1e-12 * (1.0 + direct.norm()));
        }

        #[test]
        fn conjugation_distributes_over_products(s1 in 0u64..200, s2 in 0u64..200) {
            let f = random_real_symbol(s1, 2).unwrap().scale(&Coeff::new(crate::rational::rat(1, 3), crate::rational::rat(2, 1)));
            let g = random_real_symbol(s2, 2).unwrap().add(&CanonicalSymbol::constant(Coeff::new(crate::rational::rat(0, 1), crate::rational::rat(1, 1))));
            prop_assert_eq!(f.multiply(&g).conjugate(), g.conjugate().multiply(&f.conjugate()));
        }
    }
}
