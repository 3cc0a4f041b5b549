//! Holomorphic sections of `O(m)` over `P¹`.
//!
//! In the chart `z` a section is a polynomial of degree `≤ m` and the fibre metric is
//! `ĥ^m = (1 + z z̄)^{-m}`. The monomials `z^j` are orthogonal with
//! `‖z^j‖² = 2π · j! (m − j)! / (m + 1)!`.

use std::f64::consts::TAU;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{beta_int, from_rational, ratio_to_f64, Coeff};
use crate::symbolic::{ChartRational, Integral, Point};

/// Tensor power of the hyperplane bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelSpec {
    pub m: u32,
}

impl LevelSpec {
    pub fn new(m: u32) -> Self {
        Self { m }
    }

    pub fn dimension(self) -> usize {
        dimension(self.m)
    }
}

pub fn dimension(m: u32) -> usize {
    m as usize + 1
}

/// `‖z^j‖² / 2π = B(j + 1, m − j + 1)`.
pub fn basis_weight(m: u32, j: u32) -> BigRational {
    beta_int(j, m - j)
}

pub fn basis_norm_sq(m: u32, j: u32) -> Result<Integral> {
    if j > m {
        return Err(Error::IndexOutOfRange { index: j, level: m });
    }
    Ok(Integral {
        over_two_pi: from_rational(basis_weight(m, j)),
    })
}

/// `Σ_j |s̃_j(z)|² ĥ^m(z)` over an orthonormal basis, evaluated by the explicit sum.
pub fn bergman_density(m: u32, p: Point) -> f64 {
    match p {
        // In the w-chart the orthonormal basis is the same up to j ↔ m − j, so the
        // density at w = 0 is the contribution of the constant section.
        Point::Infinity => 1.0 / (TAU * ratio_to_f64(&basis_weight(m, m))),
        Point::Finite(z) => {
            let t = z.norm_sqr();
            // |z^j|² (1+t)^{-m} = s^j (1-s)^{m-j} with s = t/(1+t)
            let s = t / (1.0 + t);
            (0..=m)
                .map(|j| {
                    s.powi(j as i32) * (1.0 - s).powi((m - j) as i32)
                        / (TAU * ratio_to_f64(&basis_weight(m, j)))
                })
                .sum()
        }
    }
}

/// `(1/2π) ∫ z̄^j φ (1 + z z̄)^{-m} Ω` for a chart expression `φ`.
///
/// The angular integral keeps the monomials `z^a z̄^b` of `φ` with `a = b + j`;
/// each contributes `c · B(a + 1, S + m + 1 − a)` where `S` is the denominator exponent.
pub fn pairing(j: u32, phi: &ChartRational, m: u32) -> Result<Coeff> {
    let decay = phi.denom_exp + m;
    let mut total = Coeff::zero();
    for (&(a, b), c) in phi.numerator.terms() {
        if a != b + j {
            continue;
        }
        if a > decay {
            return Err(Error::DivergentIntegral { power: a, decay: decay + 2 });
        }
        total += c * from_rational(beta_int(a, decay - a));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::real;
    use crate::symbolic::BiPoly;
    use num_complex::Complex64;

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(0), 1);
        assert_eq!(dimension(1), 2);
        assert_eq!(dimension(10), 11);
        assert_eq!(LevelSpec::new(3).dimension(), 4);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(basis_norm_sq(1, 0).unwrap().over_two_pi, real(1, 2));
        assert_eq!(basis_norm_sq(2, 1).unwrap().over_two_pi, real(1, 6));
        for m in 0..12 {
            for j in 0..=m {
                assert_eq!(basis_norm_sq(m, j), basis_norm_sq(m, m - j));
            }
        }
        assert!(matches!(basis_norm_sq(2, 3), Err(Error::IndexOutOfRange { index: 3, level: 2 })));
    }

    #[test]
    fn pairing_reproduces_norms() {
        for m in 0..8 {
            for j in 0..=m {
                let zj = ChartRational::new(BiPoly::monomial(j, 0, real(1, 1)), 0);
                assert_eq!(pairing(j, &zj, m).unwrap(), from_rational(basis_weight(m, j)));
                if j > 0 {
                    assert!(pairing(j - 1, &zj, m).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn bergman_density_examples() {
        assert!((bergman_density(0, Point::Finite(Complex64::new(0.0, 0.0))) - 1.0 / TAU).abs() < 1e-15);
        let v = bergman_density(5, Point::Finite(Complex64::new(1.3, 0.2)));
        assert!((v - 6.0 / TAU).abs() < 1e-13);
        for m in [0, 3, 17] {
            let at_zero = bergman_density(m, Point::Finite(Complex64::new(0.0, 0.0)));
            let at_inf = bergman_density(m, Point::Infinity);
            assert!((at_zero - at_inf).abs() < 1e-13);
        }
    }

    #[test]
    fn bergman_density_integrates_to_dimension() {
        // Ω = ½ du dφ with u = (t − 1)/(t + 1); the density depends on u only
        let (nodes, weights) = crate::operators::gauss_legendre(48);
        for m in 0..20u32 {
            let integral: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&u, &w)| {
                    let t = (1.0 + u) / (1.0 - u);
                    w * bergman_density(m, Point::Finite(Complex64::new(t.sqrt(), 0.0)))
                })
                .sum::<f64>()
                * std::f64::consts::PI;
            assert!((integral - dimension(m) as f64).abs() < 1e-10, "m = {m}: {integral}");
        }
    }
}
