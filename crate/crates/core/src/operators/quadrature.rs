//! Tensor quadrature on the sphere: Gauss–Legendre in `u = cos θ = (t − 1)/(t + 1)` times
//! the uniform trapezoid rule in the phase. In these variables `Ω = ½ du dφ`.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{hermiticity_defect, OperatorKind, OperatorMatrix, Provenance};
use crate::error::{Error, Result};
use crate::hilbert::basis_weight;
use crate::rational::ratio_to_f64;
use crate::symbolic::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    pub n_radial: usize,
    pub n_angular: usize,
}

impl QuadratureRule {
    pub fn new(n_radial: usize, n_angular: usize) -> Self {
        Self { n_radial, n_angular }
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(64, 64)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

struct Grid {
    /// `(s = t/(1+t), point, weight)` for every node, `Ω`-weights included.
    samples: Vec<(f64, f64, Point, f64)>,
}

impl Grid {
    fn new(rule: QuadratureRule) -> Self {
        let (nodes, weights) = gauss_legendre(rule.n_radial);
        let dphi = TAU / rule.n_angular as f64;
        let mut samples = Vec::with_capacity(rule.n_radial * rule.n_angular);
        for (&u, &w) in nodes.iter().zip(&weights) {
            let s = 0.5 * (1.0 + u);
            let t = (1.0 + u) / (1.0 - u);
            for l in 0..rule.n_angular {
                let phi = dphi * l as f64;
                let point = Point::Finite(Complex64::from_polar(t.sqrt(), phi));
                samples.push((s, phi, point, 0.5 * w * dphi));
            }
        }
        Self { samples }
    }
}

/// `⟨z^j, f z^k⟩` (including the factor `2π`) for all `j, k`, unnormalised.
fn raw_pairings<F: Fn(Point) -> Complex64>(f: &F, m: u32, rule: QuadratureRule) -> (DMatrix<Complex64>, bool) {
    let grid = Grid::new(rule);
    let n = m as usize + 1;
    let values: Vec<Complex64> = grid.samples.iter().map(|&(_, _, p, _)| f(p)).collect();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let real_input = values.iter().all(|v| v.im.abs() <= 1e-14 * scale);
    let mut out = DMatrix::zeros(n, n);
    for (&(s, phi, _, w), &fv) in grid.samples.iter().zip(&values) {
        let base = fv * w;
        for j in 0..n {
            for k in 0..n {
                // |z|^{j+k} (1+t)^{-m} = s^{(j+k)/2} (1-s)^{m-(j+k)/2}
                let half = 0.5 * (j + k) as f64;
                let radial = s.powf(half) * (1.0 - s).powf(m as f64 - half);
                let phase = Complex64::from_polar(1.0, (k as f64 - j as f64) * phi);
                out[(j, k)] += base * radial * phase;
            }
        }
    }
    (out, real_input)
}

/// Gram matrix `⟨z^j, z^k⟩` of the monomial basis by quadrature.
pub fn gram_quadrature(m: u32, rule: QuadratureRule) -> DMatrix<Complex64> {
    raw_pairings(&|_| Complex64::new(1.0, 0.0), m, rule).0
}

/// `T_f^{(m)}` for a black-box evaluator `f`, normalised by the exact basis norms.
pub fn toeplitz_quadrature<F: Fn(Point) -> Complex64>(
    f: F,
    m: u32,
    rule: QuadratureRule,
    source: impl Into<String>,
) -> Result<OperatorMatrix> {
    if rule.n_radial == 0 || rule.n_angular == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node per axis".into()));
    }
    let (raw, real_input) = raw_pairings(&f, m, rule);
    let norms: Vec<f64> = (0..=m).map(|j| (TAU * ratio_to_f64(&basis_weight(m, j))).sqrt()).collect();
    let entries = DMatrix::from_fn(raw.nrows(), raw.ncols(), |j, k| raw[(j, k)] / (norms[j] * norms[k]));
    if real_input {
        let defect = hermiticity_defect(&entries);
        if defect > 1e-6 {
            return Err(Error::QuadratureBudgetTooSmall { defect });
        }
    }
    Ok(OperatorMatrix {
        level: m,
        entries,
        provenance: Provenance::Quadrature {
            n_radial: rule.n_radial,
            n_angular: rule.n_angular,
        },
        kind: OperatorKind::Toeplitz,
        source: source.into(),
    })
}
