//! Wirtinger calculus on the chart, Hamiltonian fields, Poisson bracket,
//! Laplacian and integration against the Liouville form
//! `Ω = ω = i (1 + z z̄)^{-2} dz ∧ dz̄`.

use num_complex::Complex64;
use num_traits::Zero;

use super::{BiPoly, CanonicalSymbol, ChartRational};
use crate::rational::{beta_int, coeff_to_c64, from_rational, imag_unit, rat, real, Coeff};

/// Convention constant of the Laplacian: `Δf = c · (1 + z z̄)² ∂²f/∂z∂z̄`.
/// Calibrated against the Tuynman relation (see [`crate::calibration`]).
pub const LAPLACIAN_SCALE: i64 = 2;

/// Phase `p` in `X_f^z = p · (1 + z z̄)² ∂f/∂z̄` (and `X_f^z̄ = p̄ · (1 + z z̄)² ∂f/∂z`).
/// Calibrated against `ω(X_f, ·) = df` by finite differences (see [`crate::calibration`]).
pub fn hamiltonian_phase() -> Coeff {
    Coeff::new(rat(0, 1), rat(-1, 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wirtinger {
    Dz,
    Dzbar,
}

/// Exact chart derivative `∂/∂z` or `∂/∂z̄` of `N / (1+zz̄)^R`.
pub fn wirtinger(f: &ChartRational, which: Wirtinger) -> ChartRational {
    let r = f.denom_exp;
    let n = &f.numerator;
    let (dn, factor) = match which {
        Wirtinger::Dz => (n.d_dz(), n.shift(0, 1)),
        Wirtinger::Dzbar => (n.d_dzbar(), n.shift(1, 0)),
    };
    let numerator = dn
        .mul(&BiPoly::one_plus_t())
        .sub(&factor.scale(&real(r as i64, 1)));
    ChartRational::new(numerator, r + 1).cancel_common()
}

/// Chart components of a vector field: `X = X^z ∂/∂z + X^z̄ ∂/∂z̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFieldChart {
    pub comp_z: ChartRational,
    pub comp_zbar: ChartRational,
}

impl VectorFieldChart {
    pub fn is_zero(&self) -> bool {
        self.comp_z.is_zero() && self.comp_zbar.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        (self.comp_z.eval(z), self.comp_zbar.eval(z))
    }
}

pub fn hamiltonian_field(f: &CanonicalSymbol) -> VectorFieldChart {
    hamiltonian_field_with_phase(f, &hamiltonian_phase())
}

/// Hamiltonian field for an arbitrary candidate phase; used by the calibration oracle.
pub fn hamiltonian_field_with_phase(f: &CanonicalSymbol, phase: &Coeff) -> VectorFieldChart {
    let chart = f.as_chart();
    let fz = wirtinger(chart, Wirtinger::Dz);
    let fzb = wirtinger(chart, Wirtinger::Dzbar);
    VectorFieldChart {
        comp_z: fzb.mul_one_plus_t_pow(2).scale(phase),
        comp_zbar: fz.mul_one_plus_t_pow(2).scale(&phase.conj()),
    }
}

/// `ω(X, Y) = i (1+zz̄)^{-2} (X^z Y^z̄ − X^z̄ Y^z)` as a chart expression.
pub fn omega(x: &VectorFieldChart, y: &VectorFieldChart) -> ChartRational {
    let antisym = x.comp_z.mul(&y.comp_zbar).sub(&x.comp_zbar.mul(&y.comp_z));
    antisym
        .mul(&ChartRational::new(BiPoly::constant(imag_unit()), 2))
}

/// `{f, g} = ω(X_f, X_g)`.
pub fn poisson_bracket(f: &CanonicalSymbol, g: &CanonicalSymbol) -> CanonicalSymbol {
    let bracket = omega(&hamiltonian_field(f), &hamiltonian_field(g));
    CanonicalSymbol::from_derived(bracket)
}

pub fn laplacian(f: &CanonicalSymbol) -> CanonicalSymbol {
    laplacian_with_scale(f, &real(LAPLACIAN_SCALE, 1))
}

pub fn laplacian_with_scale(f: &CanonicalSymbol, scale: &Coeff) -> CanonicalSymbol {
    let mixed = wirtinger(&wirtinger(f.as_chart(), Wirtinger::Dz), Wirtinger::Dzbar);
    CanonicalSymbol::from_derived(mixed.mul_one_plus_t_pow(2).scale(scale))
}

/// An exact integral, stored as its quotient by `2π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Integral {
    pub over_two_pi: Coeff,
}

impl Integral {
    pub fn value(&self) -> Complex64 {
        coeff_to_c64(&self.over_two_pi) * std::f64::consts::TAU
    }

    pub fn is_zero(&self) -> bool {
        self.over_two_pi.is_zero()
    }
}

/// `∫_{P¹} f Ω`: only diagonal monomials survive the angular integral, and the radial
/// integral in `t = |z|²` is `B(a + 1, R + 1 − a)`.
pub fn integrate(f: &CanonicalSymbol) -> Integral {
    let r = f.denom_exp();
    let mut total = Coeff::zero();
    for (&(a, b), c) in f.numerator().terms() {
        if a == b {
            total += c * from_rational(beta_int(a, r - a));
        }
    }
    Integral { over_two_pi: total }
}
