//! Sparse bivariate polynomials in `z` and `z̄` with exact complex-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::rational::{coeff_to_c64, is_zero, Coeff};

/// `Σ c_{ab} z^a z̄^b`, keyed by `(a, b)`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Coeff>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    /// `1 + z z̄`
    pub fn one_plus_t() -> Self {
        let mut p = Self::constant(crate::rational::real(1, 1));
        p.add_term(1, 1, crate::rational::real(1, 1));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Coeff)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: Coeff) {
        if is_zero(&c) {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert_with(Coeff::zero);
        *slot = &*slot + c;
        if is_zero(slot) {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Coeff {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_z(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    pub fn deg_zbar(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&crate::rational::real(-1, 1)))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if is_zero(c) {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    pub fn shift(&self, da: u32, db: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + da, b + db), c.clone()))
                .collect(),
        }
    }

    pub fn mul_one_plus_t_pow(&self, k: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.add(&out.shift(1, 1));
        }
        out
    }

    /// Exact division by `1 + z z̄`, or `None` if it does not divide.
    ///
    /// Works diagonal by diagonal: along `a - b = d` the polynomial is a univariate
    /// polynomial in `u = z z̄`, and `1 + u` divides it iff its value at `u = -1` vanishes.
    pub fn div_one_plus_t(&self) -> Option<Self> {
        let mut diagonals: BTreeMap<i64, BTreeMap<u32, Coeff>> = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            let d = a as i64 - b as i64;
            diagonals
                .entry(d)
                .or_default()
                .insert(a.min(b), c.clone());
        }
        let mut out = Self::zero();
        for (d, coeffs) in diagonals {
            let top = *coeffs.keys().next_back().expect("nonempty diagonal");
            // synthetic division by (u + 1), highest power first
            let mut carry = Coeff::zero();
            let mut quotient = vec![Coeff::zero(); top as usize];
            for k in (0..=top).rev() {
                let c = coeffs.get(&k).cloned().unwrap_or_else(Coeff::zero);
                let value = c - &carry;
                if k == 0 {
                    if !is_zero(&value) {
                        return None;
                    }
                } else {
                    quotient[(k - 1) as usize] = value.clone();
                    carry = value;
                }
            }
            let (za, zb) = if d >= 0 { (d as u32, 0) } else { (0, (-d) as u32) };
            for (k, q) in quotient.into_iter().enumerate() {
                out.add_term(za + k as u32, zb + k as u32, q);
            }
        }
        Some(out)
    }

    pub fn d_dz(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            if a > 0 {
                out.add_term(a - 1, b, c * crate::rational::real(a as i64, 1));
            }
        }
        out
    }

    pub fn d_dzbar(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            if b > 0 {
                out.add_term(a, b - 1, c * crate::rational::real(b as i64, 1));
            }
        }
        out
    }

    /// Complex conjugate of the function: transpose the table and conjugate entries.
    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.conj()))
                .collect(),
        }
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.terms
            .iter()
            .all(|(&(a, b), c)| self.coeff(b, a) == c.conj())
    }

    /// Largest coefficient magnitude bound, as `f64`.
    pub fn max_abs_f64(&self) -> f64 {
        self.terms
            .values()
            .map(|c| coeff_to_c64(c).norm())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|(&(a, b), c)| coeff_to_c64(c) * z.powu(a) * zb.powu(b))
            .sum()
    }

    /// Numerator of the same function in the second chart `w = 1/z`, for denominator exponent `r`:
    /// `Σ c_{ab} w^{r-a} w̄^{r-b}`. Requires both degrees `≤ r`.
    pub fn invert_chart(&self, r: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((r - a, r - b), c.clone()))
                .collect(),
        }
    }

    pub fn coefficient_table(&self) -> Vec<((u32, u32), BigRational, BigRational)> {
        self.terms
            .iter()
            .map(|(&k, c)| (k, c.re.clone(), c.im.clone()))
            .collect()
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im.is_zero() {
                write!(f, "{}", c.re)?;
            } else if c.re.is_zero() {
                write!(f, "{}i", c.im)?;
            } else {
                write!(f, "({} + {}i)", c.re, c.im)?;
            }
            match (a, b) {
                (0, 0) => {}
                _ => {
                    if a > 0 {
                        write!(f, "·z^{a}")?;
                    }
                    if b > 0 {
                        write!(f, "·z̄^{b}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::real;

    #[test]
    fn division_by_one_plus_t_round_trips() {
        let p = BiPoly::from_terms([((2, 0), real(3, 1)), ((1, 1), real(-1, 2)), ((0, 0), real(5, 1))]);
        let q = p.mul(&BiPoly::one_plus_t());
        assert_eq!(q.div_one_plus_t(), Some(p));
    }

    #[test]
    fn non_divisible_is_detected() {
        let p = BiPoly::from_terms([((1, 1), real(1, 1))]);
        assert_eq!(p.div_one_plus_t(), None);
        assert_eq!(BiPoly::one_plus_t().div_one_plus_t(), Some(BiPoly::constant(real(1, 1))));
    }

    #[test]
    fn derivatives_and_conjugation() {
        let p = BiPoly::from_terms([((2, 1), real(1, 1))]);
        assert_eq!(p.d_dz(), BiPoly::from_terms([((1, 1), real(2, 1))]));
        assert_eq!(p.d_dzbar(), BiPoly::from_terms([((2, 0), real(1, 1))]));
        assert_eq!(p.conj(), BiPoly::from_terms([((1, 2), real(1, 1))]));
    }
}
