use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use super::cache::{default_cache_root, MatrixCache};
use super::config::{Check, ExperimentConfig, Tolerances};
use super::report::{write_outputs, CacheRecord, CheckItem, CheckReport, RunReport, ToleranceRecord};
use super::HarnessError;
use crate::calibration::calibrate;
use crate::error::Result;
use crate::operators::ExactOperator;
use crate::rational::{coeff_to_c64, real};
use crate::semiclassics::{
    extract_tau, ConvergenceTable, Probe, Record, SlopeFit, EXACT_IDENTITY_THRESHOLD,
};
use crate::starproduct::{b_inverse, b_map, c1, check_axioms, check_equivalence, FormalSeries};
use crate::symbolic::{integrate, CanonicalSymbol};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` means one per level in `m_list`.
    pub jobs: Option<usize>,
    /// Overrides the configured output directory.
    pub out: Option<PathBuf>,
    /// Overrides `tolerances.slope`.
    pub slope_tolerance: Option<f64>,
    /// Overrides the cache root from the environment.
    pub cache_root: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub out_dir: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.all_passed {
            super::EXIT_OK
        } else {
            super::EXIT_CHECK_FAILED
        }
    }
}

type Named<'a> = (&'a str, &'a CanonicalSymbol);

struct Context<'a> {
    probe: Probe<'a>,
    m_list: &'a [u32],
    tol: Tolerances,
}

fn slope_verdict(table: &mut ConvergenceTable, order: f64, tolerance: f64) -> (bool, String) {
    let threshold = -order + tolerance;
    if table.records.iter().all(|r| r.value.abs() < EXACT_IDENTITY_THRESHOLD) {
        table.fit = Some(SlopeFit::ExactIdentity);
        return (true, "exact identity".into());
    }
    if table.records.len() < 4 {
        return (true, format!("{} levels, too few for a slope fit", table.records.len()));
    }
    match table.fit() {
        Ok(SlopeFit::ExactIdentity) => (true, "exact identity".into()),
        Ok(fit) => {
            let slope = fit.slope().expect("line fit has a slope");
            (slope <= threshold, format!("slope {slope:.4} (threshold {threshold:.4})"))
        }
        Err(e) => (false, e.to_string()),
    }
}

impl Context<'_> {
    fn norms(&self, (name, f): Named) -> Result<CheckItem> {
        let mut sweep = self.probe.norm_sweep(f, self.m_list)?;
        sweep.defects.quantity = format!("norms[{name}]");
        let (slope_ok, detail) = slope_verdict(&mut sweep.defects, 1.0, self.tol.slope);
        let bounded = sweep.max_excess <= 1e-9 * sweep.sup_norm.max(1.0);
        Ok(CheckItem {
            label: sweep.defects.quantity.clone(),
            passed: slope_ok && bounded,
            detail: format!(
                "{detail}; sup {:.6}, max excess {:.3e}, C = {:.4}",
                sweep.sup_norm, sweep.max_excess, sweep.constant
            ),
            tables: vec![sweep.defects],
        })
    }

    fn dirac(&self, (fname, f): Named, (gname, g): Named) -> Result<CheckItem> {
        let label = format!("dirac[{fname},{gname}]");
        let mut table = self.probe.sweep(&label, self.m_list, |m| self.probe.dirac_defect(f, g, m))?;
        let (passed, detail) = slope_verdict(&mut table, 1.0, self.tol.slope);
        Ok(CheckItem { label, passed, detail, tables: vec![table] })
    }

    fn product(&self, (fname, f): Named, (gname, g): Named) -> Result<CheckItem> {
        let label = format!("product[{fname},{gname}]");
        let coeffs = [f.multiply(g)];
        let mut table = self
            .probe
            .sweep(&label, self.m_list, |m| self.probe.sass_remainder(f, g, &coeffs, m))?;
        let (passed, detail) = slope_verdict(&mut table, 1.0, self.tol.slope);
        Ok(CheckItem { label, passed, detail, tables: vec![table] })
    }

    fn sass2(&self, (fname, f): Named, (gname, g): Named) -> Result<CheckItem> {
        let label = format!("sass2[{fname},{gname}]");
        let coeffs = [f.multiply(g), c1(f, g)];
        let mut table = self
            .probe
            .sweep(&label, self.m_list, |m| self.probe.sass_remainder(f, g, &coeffs, m))?;
        let (passed, detail) = slope_verdict(&mut table, 2.0, self.tol.slope_second_order);
        Ok(CheckItem { label, passed, detail, tables: vec![table] })
    }

    fn trace(&self, (name, f): Named) -> Result<CheckItem> {
        let label = format!("trace[{name}]");
        let integral = integrate(f).over_two_pi;
        let traces: Vec<_> = self
            .m_list
            .par_iter()
            .map(|&m| ExactOperator::toeplitz(f, m).trace())
            .collect();
        let exact_ok = self
            .m_list
            .iter()
            .zip(&traces)
            .all(|(&m, tr)| *tr == &integral * real(m as i64 + 1, 1));
        let records = self
            .m_list
            .iter()
            .zip(&traces)
            .map(|(&m, tr)| Record { m, value: coeff_to_c64(tr).re })
            .collect();
        let table = ConvergenceTable::from_records(&label, records)?;
        let target = coeff_to_c64(&integral).re;
        let mut detail = format!("exact Tr = (m+1)·∫f/2π: {exact_ok}");
        let mut passed = exact_ok;
        if table.records.len() >= 2 {
            let fit = extract_tau(&table)?;
            let err = (fit.tau0 - target).abs().max((fit.tau1 - target).abs());
            passed &= err <= self.tol.identity * target.abs().max(1.0);
            detail += &format!("; tau0 {:.12}, tau1 {:.12}, integral {:.12}", fit.tau0, fit.tau1, target);
        }
        Ok(CheckItem { label, passed, detail, tables: vec![table] })
    }

    fn spectrum(&self, (name, f): Named) -> Result<CheckItem> {
        let label = format!("spectrum[{name}]");
        let mut tables = Vec::new();
        let mut passed = true;
        let mut details = Vec::new();
        for k in 1..=3 {
            let q = format!("spectrum[{name},k={k}]");
            let mut table = self
                .probe
                .sweep(&q, self.m_list, |m| self.probe.spectral_moment_defect(f, m, k))?;
            let (ok, d) = slope_verdict(&mut table, 1.0, self.tol.slope);
            passed &= ok;
            details.push(format!("k={k}: {d}"));
            tables.push(table);
        }
        Ok(CheckItem { label, passed, detail: details.join("; "), tables })
    }

    fn tuynman(&self, (name, f): Named) -> Result<CheckItem> {
        let label = format!("tuynman[{name}]");
        let table = self.probe.sweep(&label, self.m_list, |m| self.probe.tuynman_defect(f, m))?;
        let worst = table.max_value();
        let scale = crate::symbolic::sup_norm(f, self.probe.sup_budget).value.max(1.0);
        Ok(CheckItem {
            passed: worst <= self.tol.identity * scale,
            detail: format!("max defect {worst:.3e}"),
            label,
            tables: vec![table],
        })
    }

    fn axioms(&self, names: [Named; 3]) -> CheckItem {
        let [(a, f), (b, g), (c, h)] = names;
        let report = check_axioms(f, g, h);
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        CheckItem {
            label: format!("staraxioms[{a},{b},{c}]"),
            passed: failed.is_empty(),
            detail: if failed.is_empty() {
                "all axioms hold exactly".into()
            } else {
                format!("failed: {}", failed.join(", "))
            },
            tables: Vec::new(),
        }
    }

    fn equivalence(&self, (fname, f): Named, (gname, g): Named) -> Result<CheckItem> {
        let defect = check_equivalence(f, g)?;
        let series = FormalSeries::new(vec![f.clone(), g.clone(), f.multiply(g)])?;
        let inverse_ok = b_inverse(&b_map(&series, 2)?, 2)?.sub(&series).is_zero();
        Ok(CheckItem {
            label: format!("equivalence[{fname},{gname}]"),
            passed: defect.is_zero() && inverse_ok,
            detail: format!("intertwining defect zero: {}; B⁻¹B = id: {inverse_ok}", defect.is_zero()),
            tables: Vec::new(),
        })
    }
}

/// Pairs `i < j`, or `i <= j` with `diagonal`. A single symbol pairs with itself.
fn pairs(n: usize, diagonal: bool) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|&(i, j)| diagonal || i < j)
        .collect();
    if out.is_empty() && n > 0 {
        out.push((0, 0));
    }
    out
}

fn triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn run_check(ctx: &Context, check: Check, symbols: &[Named]) -> Result<Vec<CheckItem>> {
    let n = symbols.len();
    let single = |f: &(dyn Fn(Named) -> Result<CheckItem> + Sync)| -> Result<Vec<CheckItem>> {
        symbols.par_iter().map(|&s| f(s)).collect()
    };
    let pairwise = |diagonal: bool, f: &(dyn Fn(Named, Named) -> Result<CheckItem> + Sync)| {
        pairs(n, diagonal)
            .into_par_iter()
            .map(|(i, j)| f(symbols[i], symbols[j]))
            .collect::<Result<Vec<_>>>()
    };
    match check {
        Check::Norms => single(&|s| ctx.norms(s)),
        Check::Trace => single(&|s| ctx.trace(s)),
        Check::Spectrum => single(&|s| ctx.spectrum(s)),
        Check::Tuynman => single(&|s| ctx.tuynman(s)),
        Check::Dirac => pairwise(false, &|f, g| ctx.dirac(f, g)),
        Check::Product => pairwise(true, &|f, g| ctx.product(f, g)),
        Check::Sass2 => pairwise(true, &|f, g| ctx.sass2(f, g)),
        Check::Equivalence => pairwise(true, &|f, g| ctx.equivalence(f, g)),
        Check::StarAxioms => Ok(triples(n)
            .into_par_iter()
            .map(|[i, j, k]| ctx.axioms([symbols[i], symbols[j], symbols[k]]))
            .collect()),
    }
}

pub fn output_dir(config: &ExperimentConfig, opts: &RunOptions) -> PathBuf {
    opts.out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("btlab-out").join(&config.name))
}

/// Runs every configured check and writes the outputs.
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> std::result::Result<RunOutcome, HarnessError> {
    let mut tol = config.tolerances;
    if let Some(s) = opts.slope_tolerance {
        if !(s.is_finite() && s > 0.0) {
            return Err(HarnessError::Config(super::ConfigError::Validation {
                field: "--tolerance-slope".into(),
                message: format!("{s} is not a positive number"),
            }));
        }
        tol.slope = s;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.unwrap_or(config.m_list.len()).max(1))
        .build()
        .map_err(|e| HarnessError::Internal(format!("thread pool: {e}")))?;

    let cache_root = opts.cache_root.clone().unwrap_or_else(default_cache_root);
    let cache = MatrixCache::new(&cache_root);
    let mut timings = BTreeMap::new();

    let started = Instant::now();
    let calibration = calibrate();
    timings.insert("calibration".to_string(), started.elapsed().as_secs_f64() * 1e3);
    if !calibration.consistent {
        return Err(HarnessError::Internal(format!(
            "convention oracles disagree with the frozen constants: {calibration:?}"
        )));
    }

    let symbols: Vec<Named> = config.symbols.iter().map(|(n, s)| (n.as_str(), s)).collect();
    let ctx = Context {
        probe: Probe::new(&cache),
        m_list: &config.m_list,
        tol,
    };
    let mut checks = Vec::new();
    for &check in &config.checks {
        let started = Instant::now();
        log::info!("running {check}");
        let items = pool.install(|| run_check(&ctx, check, &symbols))?;
        timings.insert(check.to_string(), started.elapsed().as_secs_f64() * 1e3);
        checks.push(CheckReport {
            check: check.to_string(),
            passed: items.iter().all(|i| i.passed),
            items,
        });
    }

    let all_passed = checks.iter().all(|c| c.passed);
    let report = RunReport {
        name: config.name.clone(),
        manifold: config.manifold.clone(),
        seed: config.seed,
        m_list: config.m_list.clone(),
        symbols: config.symbols.iter().map(|(n, _)| n.clone()).collect(),
        tolerances: ToleranceRecord {
            slope: tol.slope,
            slope_second_order: tol.slope_second_order,
            identity: tol.identity,
        },
        calibration: serde_json::to_value(&calibration).expect("calibration serialises"),
        checks,
        cache: CacheRecord::new(&cache_root, cache.stats()),
        warnings: cache.take_warnings(),
        timings_ms: timings,
        version: env!("CARGO_PKG_VERSION").to_string(),
        all_passed,
    };
    let out_dir = output_dir(config, opts);
    write_outputs(&report, &out_dir)?;
    Ok(RunOutcome { report, out_dir })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_and_triple_enumeration() {
        assert_eq!(pairs(1, false), vec![(0, 0)]);
        assert_eq!(pairs(3, false), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(pairs(2, true), vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(triples(2).len(), 4);
    }
}
