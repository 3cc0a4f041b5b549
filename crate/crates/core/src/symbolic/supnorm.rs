use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{CanonicalSymbol, Point};

/// Grid sizes for [`sup_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupNormBudget {
    /// Points per axis of the initial uniform `(cos θ, φ)` grid.
    pub initial: usize,
    /// Number of local refinement passes around the current maximiser.
    pub passes: usize,
    /// Points per axis of each local refinement grid.
    pub local: usize,
}

impl Default for SupNormBudget {
    fn default() -> Self {
        Self {
            initial: 256,
            passes: 2,
            local: 64,
        }
    }
}

/// Result of a grid search for `max |f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorm {
    /// Largest sampled `|f|`; always a lower bound on `‖f‖∞`.
    pub value: f64,
    /// Sphere coordinates `(cos θ, φ)` of the sample attaining `value`.
    pub argmax: (f64, f64),
    /// Relative increase of the estimate during the last refinement pass.
    pub grid_change: f64,
}

/// Chart point of the sphere coordinates `(u, φ)`, `u = cos θ = (t − 1)/(t + 1)`, `t = |z|²`.
pub fn sphere_point(u: f64, phi: f64) -> Point {
    if u >= 1.0 {
        return Point::Infinity;
    }
    let t = (1.0 + u) / (1.0 - u);
    Point::Finite(Complex64::from_polar(t.sqrt(), phi))
}

fn sample(f: &CanonicalSymbol, u: f64, phi: f64) -> f64 {
    f.evaluate(sphere_point(u, phi)).norm()
}

fn scan(
    f: &CanonicalSymbol,
    (u_lo, u_hi): (f64, f64),
    (phi_lo, phi_hi): (f64, f64),
    n: usize,
    best: &mut (f64, (f64, f64)),
) {
    let n = n.max(2);
    for i in 0..n {
        let u = u_lo + (u_hi - u_lo) * i as f64 / (n - 1) as f64;
        for l in 0..n {
            let phi = phi_lo + (phi_hi - phi_lo) * l as f64 / (n - 1) as f64;
            let v = sample(f, u, phi);
            if v > best.0 {
                *best = (v, (u, phi));
            }
        }
    }
}

/// Certified lower bound on `‖f‖∞` from a uniform grid in `(cos θ, φ)` followed by
/// local refinement around the arg-max cell.
pub fn sup_norm(f: &CanonicalSymbol, budget: SupNormBudget) -> SupNorm {
    let n = budget.initial.max(2);
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0));
    for i in 0..n {
        let u = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        for l in 0..n {
            let phi = TAU * l as f64 / n as f64;
            let v = sample(f, u, phi);
            if v > best.0 {
                best = (v, (u, phi));
            }
        }
    }
    let mut du = 2.0 / (n - 1) as f64;
    let mut dphi = TAU / n as f64;
    let mut grid_change = 0.0;
    for _ in 0..budget.passes {
        let before = best.0;
        let (u0, phi0) = best.1;
        scan(
            f,
            ((u0 - du).max(-1.0), (u0 + du).min(1.0)),
            (phi0 - dphi, phi0 + dphi),
            budget.local,
            &mut best,
        );
        grid_change = if before > 0.0 { (best.0 - before) / before } else { 0.0 };
        du *= 4.0 / budget.local.max(2) as f64;
        dphi *= 4.0 / budget.local.max(2) as f64;
    }
    SupNorm {
        value: best.0,
        argmax: best.1,
        grid_change,
    }
}
