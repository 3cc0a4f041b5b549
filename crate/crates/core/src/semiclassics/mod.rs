//! Semiclassical sweeps over the level `m`.
//!
//! Each probe assembles exact-path matrices through an [`Assembler`], so the
//! experiment harness can interpose its matrix cache without this module knowing.

mod table;

pub use table::{loglog_slope, ConvergenceTable, Record, SlopeFit, EXACT_IDENTITY_THRESHOLD};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{
    commutator, hermitian_eigenvalues, operator_norm, prequantum_geometric, toeplitz_exact,
    ExactOperator, OperatorMatrix,
};
use crate::rational::{coeff_to_c64, real};
use crate::symbolic::{integrate, laplacian, poisson_bracket, sup_norm, CanonicalSymbol, SupNormBudget};

/// Default sweep grid.
pub const DEFAULT_SWEEP: [u32; 5] = [8, 16, 32, 64, 128];

/// Source of assembled operator matrices.
pub trait Assembler: Sync {
    fn toeplitz(&self, f: &CanonicalSymbol, m: u32) -> Result<OperatorMatrix>;
    fn prequantum(&self, f: &CanonicalSymbol, m: u32) -> Result<OperatorMatrix>;
}

/// Assembles every matrix from scratch on the exact path.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectAssembly;

impl Assembler for DirectAssembly {
    fn toeplitz(&self, f: &CanonicalSymbol, m: u32) -> Result<OperatorMatrix> {
        Ok(toeplitz_exact(f, m))
    }

    fn prequantum(&self, f: &CanonicalSymbol, m: u32) -> Result<OperatorMatrix> {
        prequantum_geometric(f, m)
    }
}

fn require_real(f: &CanonicalSymbol, what: &'static str) -> Result<()> {
    if f.is_real() {
        Ok(())
    } else {
        Err(Error::NotReal(what))
    }
}

/// Least-squares fit `Tr T_f^{(m)} ≈ τ₀ m + τ₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauFit {
    pub tau0: f64,
    pub tau1: f64,
    /// Largest absolute deviation of the data from the fitted line.
    pub residual: f64,
}

/// Outcome of a norm sweep: the two sides of `‖f‖∞ − C/m ≤ ‖T_f^{(m)}‖ ≤ ‖f‖∞`.
#[derive(Debug, Clone, Serialize)]
pub struct NormSweep {
    pub sup_norm: f64,
    pub defects: ConvergenceTable,
    /// `max_m (‖T_f^{(m)}‖ − ‖f‖∞)`; nonpositive up to rounding.
    pub max_excess: f64,
    /// `max_m m · defect`, the empirical constant `C`.
    pub constant: f64,
}

/// Semiclassical probes bound to a matrix source.
pub struct Probe<'a> {
    asm: &'a dyn Assembler,
    pub sup_budget: SupNormBudget,
}

impl<'a> Probe<'a> {
    pub fn new(asm: &'a dyn Assembler) -> Self {
        Self {
            asm,
            sup_budget: SupNormBudget::default(),
        }
    }

    fn t(&self, f: &CanonicalSymbol, m: u32) -> Result<DMatrix<Complex64>> {
        Ok(self.asm.toeplitz(f, m)?.entries)
    }

    /// `‖f‖∞ − ‖T_f^{(m)}‖`.
    pub fn norm_defect(&self, f: &CanonicalSymbol, m: u32) -> Result<f64> {
        require_real(f, "norm_defect")?;
        let sup = sup_norm(f, self.sup_budget).value;
        Ok(sup - operator_norm(&self.t(f, m)?)?)
    }

    pub fn norm_sweep(&self, f: &CanonicalSymbol, m_list: &[u32]) -> Result<NormSweep> {
        require_real(f, "norm_sweep")?;
        let sup = sup_norm(f, self.sup_budget).value;
        let norms = self.sweep_values(m_list, |m| operator_norm(&self.t(f, m)?))?;
        let mut defects = ConvergenceTable::new("norm_defect");
        let mut max_excess = f64::NEG_INFINITY;
        for (&m, &norm) in m_list.iter().zip(&norms) {
            max_excess = max_excess.max(norm - sup);
            defects.push(m, (sup - norm).max(0.0))?;
        }
        let constant = defects.scaled_max(1);
        Ok(NormSweep {
            sup_norm: sup,
            defects,
            max_excess,
            constant,
        })
    }

    /// `‖m i [T_f, T_g] − T_{{f,g}}‖`.
    pub fn dirac_defect(&self, f: &CanonicalSymbol, g: &CanonicalSymbol, m: u32) -> Result<f64> {
        require_real(f, "dirac_defect")?;
        require_real(g, "dirac_defect")?;
        let bracket = poisson_bracket(f, g);
        let lhs = commutator(&self.t(f, m)?, &self.t(g, m)?)? * Complex64::new(0.0, m as f64);
        operator_norm(&(lhs - self.t(&bracket, m)?))
    }

    /// `‖T_f T_g − Σ_{j<N} m^{−j} T_{C_j(f,g)}‖` for the supplied coefficients.
    pub fn sass_remainder(
        &self,
        f: &CanonicalSymbol,
        g: &CanonicalSymbol,
        coeffs: &[CanonicalSymbol],
        m: u32,
    ) -> Result<f64> {
        if coeffs.len() > 2 {
            return Err(Error::UnknownCoefficientOrder { order: coeffs.len() - 1 });
        }
        let mut rem = self.t(f, m)? * self.t(g, m)?;
        for (j, c) in coeffs.iter().enumerate() {
            let weight = (m as f64).powi(-(j as i32));
            rem -= self.t(c, m)? * Complex64::new(weight, 0.0);
        }
        operator_norm(&rem)
    }

    /// `‖Q_f^{(m)} − i T^{(m)}_{f − Δf/2m}‖`.
    pub fn tuynman_defect(&self, f: &CanonicalSymbol, m: u32) -> Result<f64> {
        require_real(f, "tuynman_defect")?;
        let q = self.asm.prequantum(f, m)?.entries;
        let shifted = f.sub(&laplacian(f).scale(&real(1, 2 * m as i64)));
        let rhs = self.t(&shifted, m)? * Complex64::new(0.0, 1.0);
        operator_norm(&(q - rhs))
    }

    /// `(1/m) Σ_i λ_i^k` over the spectrum of `T_f^{(m)}`.
    pub fn spectral_moment(&self, f: &CanonicalSymbol, m: u32, k: u32) -> Result<f64> {
        require_real(f, "spectral_moment")?;
        if k == 0 || m == 0 {
            return Err(Error::InvalidArgument("spectral moments need k >= 1 and m >= 1".into()));
        }
        let eig = hermitian_eigenvalues(&self.t(f, m)?)?;
        Ok(eig.iter().map(|l| l.powi(k as i32)).sum::<f64>() / m as f64)
    }

    /// `|spectral_moment − ∫ f^k Ω / 2π|`.
    pub fn spectral_moment_defect(&self, f: &CanonicalSymbol, m: u32, k: u32) -> Result<f64> {
        let limit = coeff_to_c64(&integrate(&f.pow(k)).over_two_pi).re;
        Ok((self.spectral_moment(f, m, k)? - limit).abs())
    }

    /// Evaluates `probe` at every level in parallel; results come back in `m_list` order.
    pub fn sweep_values<F>(&self, m_list: &[u32], probe: F) -> Result<Vec<f64>>
    where
        F: Fn(u32) -> Result<f64> + Sync,
    {
        m_list.par_iter().map(|&m| probe(m)).collect()
    }

    pub fn sweep<F>(&self, quantity: &str, m_list: &[u32], probe: F) -> Result<ConvergenceTable>
    where
        F: Fn(u32) -> Result<f64> + Sync,
    {
        let values = self.sweep_values(m_list, probe)?;
        ConvergenceTable::from_records(
            quantity,
            m_list
                .iter()
                .zip(values)
                .map(|(&m, value)| Record { m, value })
                .collect(),
        )
    }
}

/// `Tr T_f^{(m)}` for each level, from the exact diagonal.
pub fn trace_sequence(f: &CanonicalSymbol, m_list: &[u32]) -> Result<ConvergenceTable> {
    let values: Vec<f64> = m_list
        .par_iter()
        .map(|&m| coeff_to_c64(&ExactOperator::toeplitz(f, m).trace()).re)
        .collect();
    ConvergenceTable::from_records(
        "trace",
        m_list
            .iter()
            .zip(values)
            .map(|(&m, value)| Record { m, value })
            .collect(),
    )
}

/// Fits `Tr = τ₀ m + τ₁` to a trace table.
pub fn extract_tau(table: &ConvergenceTable) -> Result<TauFit> {
    if table.records.len() < 2 {
        return Err(Error::DegenerateTable("trace fit needs two levels".into()));
    }
    let n = table.records.len() as f64;
    let mx = table.records.iter().map(|r| r.m as f64).sum::<f64>() / n;
    let my = table.records.iter().map(|r| r.value).sum::<f64>() / n;
    let sxx: f64 = table.records.iter().map(|r| (r.m as f64 - mx).powi(2)).sum();
    let sxy: f64 = table.records.iter().map(|r| (r.m as f64 - mx) * (r.value - my)).sum();
    let tau0 = sxy / sxx;
    let tau1 = my - tau0 * mx;
    let residual = table
        .records
        .iter()
        .map(|r| (r.value - tau0 * r.m as f64 - tau1).abs())
        .fold(0.0, f64::max);
    Ok(TauFit { tau0, tau1, residual })
}

/// `(τ₀, τ₁)` of `f` over [`DEFAULT_SWEEP`].
pub fn extract_tau_for(f: &CanonicalSymbol) -> Result<TauFit> {
    extract_tau(&trace_sequence(f, &DEFAULT_SWEEP)?)
}

pub fn norm_defect(f: &CanonicalSymbol, m: u32) -> Result<f64> {
    Probe::new(&DirectAssembly).norm_defect(f, m)
}

pub fn dirac_defect(f: &CanonicalSymbol, g: &CanonicalSymbol, m: u32) -> Result<f64> {
    Probe::new(&DirectAssembly).dirac_defect(f, g, m)
}

pub fn sass_remainder(
    f: &CanonicalSymbol,
    g: &CanonicalSymbol,
    coeffs: &[CanonicalSymbol],
    m: u32,
) -> Result<f64> {
    Probe::new(&DirectAssembly).sass_remainder(f, g, coeffs, m)
}

pub fn tuynman_defect(f: &CanonicalSymbol, m: u32) -> Result<f64> {
    Probe::new(&DirectAssembly).tuynman_defect(f, m)
}

pub fn spectral_moment(f: &CanonicalSymbol, m: u32, k: u32) -> Result<f64> {
    Probe::new(&DirectAssembly).spectral_moment(f, m, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::random_real_symbol;

    #[test]
    fn norm_defect_examples() {
        let f0 = CanonicalSymbol::f0();
        for m in [1u32, 4, 9] {
            let d = norm_defect(&f0, m).unwrap();
            assert!((d - 1.0 / (m as f64 + 2.0)).abs() < 1e-12);
        }
        assert!(norm_defect(&CanonicalSymbol::one(), 7).unwrap().abs() < 1e-14);
        let two_g0 = CanonicalSymbol::g0().scale(&real(2, 1));
        assert!((norm_defect(&two_g0, 1).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn dirac_examples() {
        let f0 = CanonicalSymbol::f0();
        let g0 = CanonicalSymbol::g0();
        assert!(dirac_defect(&f0, &f0, 10).unwrap() < 1e-13);
        let a = dirac_defect(&f0, &g0, 12).unwrap();
        let b = dirac_defect(&g0, &f0, 12).unwrap();
        assert!((a - b).abs() < 1e-13);
        assert!(a > 0.0);
    }

    #[test]
    fn sass_examples() {
        let f0 = CanonicalSymbol::f0();
        let one = CanonicalSymbol::one();
        // diag entries -(j+1)(m+1-j)/((m+2)^2 (m+3)) at m = 2: -3/80, -4/80, -3/80
        let r = sass_remainder(&f0, &f0, &[f0.multiply(&f0)], 2).unwrap();
        assert!((r - 1.0 / 20.0).abs() < 1e-15);
        let g = random_real_symbol(5, 2).unwrap();
        assert!(sass_remainder(&one, &g, std::slice::from_ref(&g), 9).unwrap() < 1e-13);
        let too_many = vec![one.clone(), one.clone(), one];
        assert!(matches!(
            sass_remainder(&f0, &f0, &too_many, 2),
            Err(Error::UnknownCoefficientOrder { order: 2 })
        ));
    }

    #[test]
    fn trace_examples() {
        let table = trace_sequence(&CanonicalSymbol::f0(), &[1, 2, 3, 10]).unwrap();
        for r in &table.records {
            assert!((r.value - (r.m as f64 + 1.0) / 2.0).abs() < 1e-13);
        }
        let tau = extract_tau_for(&CanonicalSymbol::one()).unwrap();
        assert!((tau.tau0 - 1.0).abs() < 1e-12 && (tau.tau1 - 1.0).abs() < 1e-10);
        let tau = extract_tau_for(&CanonicalSymbol::f0()).unwrap();
        assert!((tau.tau0 - 0.5).abs() < 1e-12 && (tau.tau1 - 0.5).abs() < 1e-10);
    }

    #[test]
    fn spectral_moment_examples() {
        let f0 = CanonicalSymbol::f0();
        assert!((spectral_moment(&f0, 4, 1).unwrap() - 5.0 / 8.0).abs() < 1e-14);
        let one = CanonicalSymbol::one();
        assert!((spectral_moment(&one, 6, 1).unwrap() - 7.0 / 6.0).abs() < 1e-14);
        assert!(spectral_moment(&f0, 4, 0).is_err());
    }

    #[test]
    fn tuynman_examples() {
        assert!(tuynman_defect(&CanonicalSymbol::one(), 3).unwrap() < 1e-14);
        for m in [1u32, 2, 4, 8] {
            assert!(tuynman_defect(&CanonicalSymbol::f0(), m).unwrap() < 1e-10);
        }
    }

    #[test]
    fn real_symbols_required() {
        let f = CanonicalSymbol::f0().scale(&crate::rational::imag_unit());
        assert!(matches!(norm_defect(&f, 2), Err(Error::NotReal(_))));
        assert!(matches!(tuynman_defect(&f, 2), Err(Error::NotReal(_))));
    }
}
