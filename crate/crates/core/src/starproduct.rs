//! Truncated formal star products on `P¹`.
//!
//! Only the coefficients `C₀, C₁` of the Berezin–Toeplitz product (and `D₀, D₁` of the
//! product obtained from geometric quantization) are known in closed form, so series
//! products are available to order 1, and to order 2 only when the unknown `C₂` term
//! is forced to vanish by a constant factor.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{coeff_to_c64, imag_unit, rat, real, Coeff};
use crate::symbolic::{
    integrate, laplacian, poisson_bracket, wirtinger, CanonicalSymbol, Wirtinger,
};

/// Highest coefficient order the engine knows in closed form.
pub const KNOWN_ORDER: usize = 1;

/// `Σ_{j ≤ order} ν^j a_j` with symbol coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<CanonicalSymbol>,
}

impl FormalSeries {
    pub fn new(coeffs: Vec<CanonicalSymbol>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a formal series needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// `f + 0·ν + … + 0·ν^order`.
    pub fn from_symbol(f: &CanonicalSymbol, order: usize) -> Self {
        let mut coeffs = vec![CanonicalSymbol::zero(); order + 1];
        coeffs[0] = f.clone();
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &CanonicalSymbol {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[CanonicalSymbol] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|j| self.coeffs[j].add(&other.coeffs[j])).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|j| self.coeffs[j].sub(&other.coeffs[j])).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Conjugation with `ν` treated as real.
    pub fn conjugate(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conjugate()).collect(),
        }
    }
}

/// `C₁(f, g) = −(1 + z z̄)² ∂f/∂z ∂g/∂z̄`.
pub fn c1(f: &CanonicalSymbol, g: &CanonicalSymbol) -> CanonicalSymbol {
    let fz = wirtinger(f.as_chart(), Wirtinger::Dz);
    let gzb = wirtinger(g.as_chart(), Wirtinger::Dzbar);
    let raw = fz.mul(&gzb).mul_one_plus_t_pow(2).scale(&real(-1, 1));
    crate::symbolic::reduce(raw).expect("C1 of smooth symbols is smooth")
}

/// `D₁(f, g) = C₁(f, g) + ½ (Δ(fg) − Δf·g − f·Δg)`.
pub fn d1(f: &CanonicalSymbol, g: &CanonicalSymbol) -> CanonicalSymbol {
    let correction = laplacian(&f.multiply(g))
        .sub(&laplacian(f).multiply(g))
        .sub(&f.multiply(&laplacian(g)));
    c1(f, g).add(&correction.scale(&real(1, 2)))
}

/// The bilinear coefficient maps of a star product, up to the known order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Product {
    BerezinToeplitz,
    Geometric,
}

impl Product {
    pub fn coefficient(self, j: usize, f: &CanonicalSymbol, g: &CanonicalSymbol) -> Result<CanonicalSymbol> {
        match (self, j) {
            (_, 0) => Ok(f.multiply(g)),
            (Product::BerezinToeplitz, 1) => Ok(c1(f, g)),
            (Product::Geometric, 1) => Ok(d1(f, g)),
            // null on constants holds at every order
            _ if f.as_constant().is_some() || g.as_constant().is_some() => Ok(CanonicalSymbol::zero()),
            _ => Err(Error::UnknownCoefficientOrder { order: j }),
        }
    }

    /// Cauchy product `Σ_n ν^n Σ_{i+k+l=n} C_l(F_i, G_k)` truncated at `order`.
    pub fn star(self, lhs: &FormalSeries, rhs: &FormalSeries, order: usize) -> Result<FormalSeries> {
        if order > lhs.order().min(rhs.order()) {
            return Err(Error::InvalidArgument(format!(
                "truncation order {order} exceeds operand orders {} and {}",
                lhs.order(),
                rhs.order()
            )));
        }
        if order > 2 {
            return Err(Error::UnknownCoefficientOrder { order });
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut total = CanonicalSymbol::zero();
            for l in 0..=n {
                for i in 0..=(n - l) {
                    let k = n - l - i;
                    let (a, b) = (lhs.coeff(i), rhs.coeff(k));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    total = total.add(&self.coefficient(l, a, b)?);
                }
            }
            coeffs.push(total);
        }
        FormalSeries::new(coeffs)
    }
}

pub fn star_bt(lhs: &FormalSeries, rhs: &FormalSeries, order: usize) -> Result<FormalSeries> {
    Product::BerezinToeplitz.star(lhs, rhs, order)
}

pub fn star_geometric(lhs: &FormalSeries, rhs: &FormalSeries, order: usize) -> Result<FormalSeries> {
    if order > 1 {
        return Err(Error::UnknownCoefficientOrder { order });
    }
    Product::Geometric.star(lhs, rhs, order)
}

/// `B = id − ν Δ/2`, applied coefficientwise and truncated.
pub fn b_map(series: &FormalSeries, order: usize) -> Result<FormalSeries> {
    apply_laplacian_series(series, order, |k| match k {
        0 => Some(real(1, 1)),
        1 => Some(real(-1, 2)),
        _ => None,
    })
}

/// `B⁻¹ = id + Σ_{k≥1} ν^k Δ^k / 2^k`, truncated.
pub fn b_inverse(series: &FormalSeries, order: usize) -> Result<FormalSeries> {
    apply_laplacian_series(series, order, |k| Some(Coeff::new(rat(1, 1 << k), rat(0, 1))))
}

/// `Σ_k ν^k w_k Δ^k` applied to a series.
fn apply_laplacian_series(
    series: &FormalSeries,
    order: usize,
    weight: impl Fn(u32) -> Option<Coeff>,
) -> Result<FormalSeries> {
    if order > 2 {
        return Err(Error::UnknownCoefficientOrder { order });
    }
    if order > series.order() {
        return Err(Error::InvalidArgument(format!(
            "truncation order {order} exceeds series order {}",
            series.order()
        )));
    }
    let mut coeffs = vec![CanonicalSymbol::zero(); order + 1];
    for (i, a) in series.coeffs().iter().enumerate().take(order + 1) {
        let mut power = a.clone();
        for k in 0..=(order - i) {
            if let Some(w) = weight(k as u32) {
                coeffs[i + k] = coeffs[i + k].add(&power.scale(&w));
            }
            power = laplacian(&power);
        }
    }
    FormalSeries::new(coeffs)
}

/// `ν¹` coefficient of `B(f) ⋆ B(g) − B(f ⋆_G g)`; the zero symbol when the products are
/// intertwined by `B`.
pub fn check_equivalence(f: &CanonicalSymbol, g: &CanonicalSymbol) -> Result<CanonicalSymbol> {
    let bf = b_map(&FormalSeries::from_symbol(f, 1), 1)?;
    let bg = b_map(&FormalSeries::from_symbol(g, 1), 1)?;
    let lhs = star_bt(&bf, &bg, 1)?;
    let fg = star_geometric(&FormalSeries::from_symbol(f, 1), &FormalSeries::from_symbol(g, 1), 1)?;
    let rhs = b_map(&fg, 1)?;
    Ok(lhs.sub(&rhs).coeff(1).clone())
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
}

/// Exact checks of unit, parity, order-1 associativity and trace antisymmetry.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

pub fn check_axioms(f: &CanonicalSymbol, g: &CanonicalSymbol, h: &CanonicalSymbol) -> AxiomReport {
    let one = CanonicalSymbol::one();
    let unit = [f, g, h].iter().all(|x| {
        one.multiply(x) == **x
            && x.multiply(&one) == **x
            && c1(&one, x).is_zero()
            && c1(x, &one).is_zero()
    });
    let parity = c1(f, g).conjugate() == c1(&g.conjugate(), &f.conjugate())
        && c1(g, h).conjugate() == c1(&h.conjugate(), &g.conjugate());
    // ν¹ part of (f⋆g)⋆h − f⋆(g⋆h)
    let assoc_lhs = f.multiply(&c1(g, h)).add(&c1(f, &g.multiply(h)));
    let assoc_rhs = c1(f, g).multiply(h).add(&c1(&f.multiply(g), h));
    let associativity = assoc_lhs == assoc_rhs;
    let trace_antisymmetry = integrate(&c1(f, g).sub(&c1(g, f))).is_zero()
        && integrate(&poisson_bracket(f, g)).is_zero();
    let cifa = c1(f, g).sub(&c1(g, f)) == poisson_bracket(f, g).scale(&-imag_unit());
    AxiomReport {
        checks: vec![
            AxiomCheck { name: "unit", passed: unit },
            AxiomCheck { name: "parity", passed: parity },
            AxiomCheck { name: "associativity_order1", passed: associativity },
            AxiomCheck { name: "trace_antisymmetry", passed: trace_antisymmetry },
            AxiomCheck { name: "antisymmetric_part", passed: cifa },
        ],
    }
}

/// `ν^{-1} Σ_k ν^k t_k` with exact coefficients `t_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalScalarSeries {
    /// Power of `ν` carried by `coeffs[0]`.
    pub leading_power: i32,
    pub coeffs: Vec<Coeff>,
}

impl FormalScalarSeries {
    pub fn to_c64(&self) -> Vec<num_complex::Complex64> {
        self.coeffs.iter().map(coeff_to_c64).collect()
    }
}

/// `Tr F = ν^{-1} Σ_j ν^j τ_j(F)` with `τ₀ = τ₁ = ∫ · Ω / 2π` on `P¹`.
pub fn formal_trace(series: &FormalSeries, order: usize) -> Result<FormalScalarSeries> {
    if order > 1 {
        return Err(Error::UnknownCoefficientOrder { order });
    }
    let mut coeffs = vec![Coeff::new(rat(0, 1), rat(0, 1)); order + 1];
    for (i, a) in series.coeffs().iter().enumerate().take(order + 1) {
        let tau = integrate(a).over_two_pi;
        coeffs[i] = &coeffs[i] + &tau;
        if i < order {
            coeffs[i + 1] = &coeffs[i + 1] + &tau;
        }
    }
    Ok(FormalScalarSeries {
        leading_power: -1,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{random_real_symbol, BiPoly, ChartRational};

    fn series(f: &CanonicalSymbol, order: usize) -> FormalSeries {
        FormalSeries::from_symbol(f, order)
    }

    #[test]
    fn c1_examples() {
        let f0 = CanonicalSymbol::f0();
        let expected = crate::symbolic::reduce(ChartRational::new(BiPoly::monomial(1, 1, real(-1, 1)), 2)).unwrap();
        assert_eq!(c1(&f0, &f0), expected);
        let g = random_real_symbol(11, 3).unwrap();
        assert!(c1(&CanonicalSymbol::one(), &g).is_zero());
        assert!(c1(&g, &CanonicalSymbol::one()).is_zero());
    }

    #[test]
    fn star_bt_examples() {
        let f0 = CanonicalSymbol::f0();
        let g = FormalSeries::new(vec![random_real_symbol(1, 2).unwrap(), random_real_symbol(2, 2).unwrap()]).unwrap();
        assert_eq!(star_bt(&series(&CanonicalSymbol::one(), 1), &g, 1).unwrap(), g);
        let sq = star_bt(&series(&f0, 1), &series(&f0, 1), 1).unwrap();
        assert_eq!(sq.coeff(0), &f0.multiply(&f0));
        assert_eq!(sq.coeff(1), &c1(&f0, &f0));
    }

    #[test]
    fn order_two_needs_a_constant_factor() {
        let f0 = CanonicalSymbol::f0();
        let g0 = CanonicalSymbol::g0();
        assert!(matches!(
            star_bt(&series(&f0, 2), &series(&g0, 2), 2),
            Err(Error::UnknownCoefficientOrder { order: 2 })
        ));
        let g = FormalSeries::new(vec![g0.clone(), f0.clone(), g0.multiply(&f0)]).unwrap();
        assert_eq!(star_bt(&series(&CanonicalSymbol::one(), 2), &g, 2).unwrap(), g);
        assert!(star_bt(&series(&f0, 1), &series(&g0, 1), 3).is_err());
    }

    #[test]
    fn d1_examples() {
        let f0 = CanonicalSymbol::f0();
        let g = random_real_symbol(9, 2).unwrap();
        assert!(d1(&CanonicalSymbol::one(), &g).is_zero());
        let direct = c1(&f0, &f0).add(
            &laplacian(&f0.multiply(&f0))
                .sub(&f0.multiply(&laplacian(&f0)).scale(&real(2, 1)))
                .scale(&real(1, 2)),
        );
        assert_eq!(d1(&f0, &f0), direct);
        for seed in 0..5 {
            let f = random_real_symbol(seed, 2).unwrap();
            let g = random_real_symbol(seed + 50, 2).unwrap();
            assert_eq!(d1(&f, &g).sub(&d1(&g, &f)), c1(&f, &g).sub(&c1(&g, &f)));
        }
    }

    #[test]
    fn b_map_examples() {
        let one = series(&CanonicalSymbol::one(), 2);
        assert_eq!(b_map(&one, 2).unwrap(), one);
        let f0 = CanonicalSymbol::f0();
        let bf = b_map(&series(&f0, 1), 1).unwrap();
        let expected = crate::symbolic::reduce(ChartRational::new(
            BiPoly::from_terms([((0, 0), real(-1, 1)), ((1, 1), real(1, 1))]),
            1,
        ))
        .unwrap();
        assert_eq!(bf.coeff(0), &f0);
        assert_eq!(bf.coeff(1), &expected);
        let f = FormalSeries::new(vec![
            random_real_symbol(3, 2).unwrap(),
            random_real_symbol(4, 2).unwrap(),
            random_real_symbol(5, 2).unwrap(),
        ])
        .unwrap();
        assert_eq!(b_inverse(&b_map(&f, 2).unwrap(), 2).unwrap(), f);
        assert_eq!(b_map(&b_inverse(&f, 2).unwrap(), 2).unwrap(), f);
    }

    #[test]
    fn equivalence_examples() {
        let g = random_real_symbol(21, 2).unwrap();
        assert!(check_equivalence(&CanonicalSymbol::one(), &g).unwrap().is_zero());
        let f0 = CanonicalSymbol::f0();
        assert!(check_equivalence(&f0, &f0).unwrap().is_zero());
    }

    #[test]
    fn axiom_examples() {
        let f0 = CanonicalSymbol::f0();
        let g0 = CanonicalSymbol::g0();
        let h = random_real_symbol(2, 2).unwrap();
        assert!(check_axioms(&CanonicalSymbol::one(), &g0, &h).all_passed());
        let report = check_axioms(&f0, &g0, &f0.multiply(&g0));
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.get("parity"), Some(true));
    }

    #[test]
    fn formal_trace_examples() {
        let one = formal_trace(&series(&CanonicalSymbol::one(), 1), 1).unwrap();
        assert_eq!(one.leading_power, -1);
        assert_eq!(one.coeffs, vec![real(1, 1), real(1, 1)]);
        let f0 = formal_trace(&series(&CanonicalSymbol::f0(), 1), 1).unwrap();
        assert_eq!(f0.coeffs, vec![real(1, 2), real(1, 2)]);
        let f = random_real_symbol(1, 2).unwrap();
        let g = random_real_symbol(2, 2).unwrap();
        let commutator = star_bt(&series(&f, 1), &series(&g, 1), 1)
            .unwrap()
            .sub(&star_bt(&series(&g, 1), &series(&f, 1), 1).unwrap());
        let tr = formal_trace(&commutator, 1).unwrap();
        assert!(tr.coeffs.iter().all(|c| c == &real(0, 1)));
        assert!(formal_trace(&series(&f, 2), 2).is_err());
    }
}
