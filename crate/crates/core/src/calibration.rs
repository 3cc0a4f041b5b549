//! Oracles that pin the two convention constants of the symbolic core.
//!
//! * The phase in the chart formula of the Hamiltonian field is chosen among
//!   `{1, −1, i, −i}` by checking `ω(X_f, v) = df(v)` with central finite differences.
//! * The Laplacian scale `c` is fitted from the prequantum operator: with `Δ₁ = (1+zz̄)² ∂∂̄`,
//!   `Q_f − i T_f = c · (−i/2m) T_{Δ₁ f}` must hold for a single real `c`.
//!
//! The library uses the frozen values [`hamiltonian_phase`] and [`LAPLACIAN_SCALE`];
//! [`calibrate`] recomputes both from scratch so reports can record the outcome.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::operators::ExactOperator;
use crate::rational::{coeff_to_c64, rat, real, Coeff};
use crate::symbolic::{
    hamiltonian_field_with_phase, hamiltonian_phase, laplacian_with_scale, random_real_symbol,
    CanonicalSymbol, Point, LAPLACIAN_SCALE,
};

/// Max over sample points and directions of `|ω(X_f, v) − df(v)|`, with `df` by central
/// differences of step `1e-6`.
pub fn field_residual(f: &CanonicalSymbol, phase: &Coeff, seed: u64) -> f64 {
    let field = hamiltonian_field_with_phase(f, phase);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let z = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let rho = 1.0 / (1.0 + z.norm_sqr()).powi(2);
        let (xz, xzb) = field.eval(z);
        for _ in 0..2 {
            let v = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let df = (f.evaluate(Point::Finite(z + v * h)) - f.evaluate(Point::Finite(z - v * h))) / (2.0 * h);
            let contraction = Complex64::i() * rho * (xz * v.conj() - xzb * v);
            worst = worst.max((contraction - df).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseCalibration {
    /// Selected phase, written as `re + im i`.
    pub phase: (i64, i64),
    pub residual: f64,
    pub candidates: Vec<((i64, i64), f64)>,
}

pub fn calibrate_hamiltonian_phase() -> PhaseCalibration {
    let symbols: Vec<CanonicalSymbol> = (0..3)
        .map(|s| random_real_symbol(1000 + s, 3).expect("valid budget"))
        .chain([CanonicalSymbol::f0(), CanonicalSymbol::g0()])
        .collect();
    let candidates: Vec<((i64, i64), f64)> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        .into_iter()
        .map(|(re, im)| {
            let phase = Coeff::new(rat(re, 1), rat(im, 1));
            let residual = symbols
                .iter()
                .enumerate()
                .map(|(i, f)| field_residual(f, &phase, i as u64))
                .fold(0.0, f64::max);
            ((re, im), residual)
        })
        .collect();
    let &(phase, residual) = candidates
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty candidate list");
    PhaseCalibration {
        phase,
        residual,
        candidates,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LaplacianCalibration {
    /// Least-squares value of `c`.
    pub scale: f64,
    /// Relative Frobenius residual of the one-parameter fit.
    pub residual: f64,
}

pub fn calibrate_laplacian_scale() -> LaplacianCalibration {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut pairs = Vec::new();
    let symbols: Vec<CanonicalSymbol> = [CanonicalSymbol::f0(), CanonicalSymbol::g0()]
        .into_iter()
        .chain((0..3).map(|s| random_real_symbol(2000 + s, 3).expect("valid budget")))
        .collect();
    for f in &symbols {
        for m in [1u32, 2, 5] {
            let q = ExactOperator::prequantum(f, m).expect("real symbol, m >= 1");
            let t = ExactOperator::toeplitz(f, m);
            let lhs = q
                .sub(&t.scale(&Coeff::new(rat(0, 1), rat(1, 1))))
                .expect("same level")
                .entries_f64();
            let unit = laplacian_with_scale(f, &real(1, 1));
            let basis = ExactOperator::toeplitz(&unit, m)
                .scale(&Coeff::new(rat(0, 1), rat(-1, 2 * m as i64)))
                .entries_f64();
            num += basis.iter().zip(lhs.iter()).map(|(e, d)| (e.conj() * d).re).sum::<f64>();
            den += basis.iter().map(|e| e.norm_sqr()).sum::<f64>();
            pairs.push((basis, lhs));
        }
    }
    let scale = num / den;
    let (res, norm) = pairs.iter().fold((0.0, 0.0), |(r, n), (e, d)| {
        let diff = d - e * Complex64::new(scale, 0.0);
        (r + diff.norm_squared(), n + d.norm_squared())
    });
    LaplacianCalibration {
        scale,
        residual: (res / norm.max(1e-300)).sqrt(),
    }
}

/// Frozen constants together with the oracle outcomes that justify them.
#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub hamiltonian_phase: (i64, i64),
    pub laplacian_scale: i64,
    pub phase_oracle: PhaseCalibration,
    pub laplacian_oracle: LaplacianCalibration,
    /// Frozen constants agree with the oracles.
    pub consistent: bool,
}

pub fn frozen_phase() -> (i64, i64) {
    let p = coeff_to_c64(&hamiltonian_phase());
    (p.re.round() as i64, p.im.round() as i64)
}

pub fn calibrate() -> Calibration {
    let phase_oracle = calibrate_hamiltonian_phase();
    let laplacian_oracle = calibrate_laplacian_scale();
    let consistent = phase_oracle.phase == frozen_phase()
        && phase_oracle.residual < 1e-6
        && (laplacian_oracle.scale - LAPLACIAN_SCALE as f64).abs() < 1e-10
        && laplacian_oracle.residual < 1e-10;
    Calibration {
        hamiltonian_phase: frozen_phase(),
        laplacian_scale: LAPLACIAN_SCALE,
        phase_oracle,
        laplacian_oracle,
        consistent,
    }
}
