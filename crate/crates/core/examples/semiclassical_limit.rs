//! Convergence sweeps in the level m: norms, the Dirac condition and the product expansion.
//!
//! Run with `cargo run --release --example semiclassical_limit`.

use btlab::semiclassics::{DirectAssembly, Probe, DEFAULT_SWEEP};
use btlab::starproduct::c1;
use btlab::symbolic::random_real_symbol;

fn main() -> btlab::Result<()> {
    let f = random_real_symbol(101, 2)?;
    let g = random_real_symbol(201, 2)?;
    let probe = Probe::new(&DirectAssembly);
    let ms = &DEFAULT_SWEEP;

    let norms = probe.norm_sweep(&f, ms)?;
    let mut defects = norms.defects.clone();
    println!("‖f‖∞ = {:.6}, m·defect ≤ {:.4}", norms.sup_norm, norms.constant);
    report(&mut defects);

    let mut dirac = probe.sweep("dirac", ms, |m| probe.dirac_defect(&f, &g, m))?;
    report(&mut dirac);

    let first = [f.multiply(&g)];
    let mut sass1 = probe.sweep("sass N=1", ms, |m| probe.sass_remainder(&f, &g, &first, m))?;
    report(&mut sass1);

    let second = [f.multiply(&g), c1(&f, &g)];
    let mut sass2 = probe.sweep("sass N=2", ms, |m| probe.sass_remainder(&f, &g, &second, m))?;
    report(&mut sass2);
    Ok(())
}

fn report(table: &mut btlab::semiclassics::ConvergenceTable) {
    println!("{}:", table.quantity);
    for r in &table.records {
        println!("  m = {:>3}  {:.6e}", r.m, r.value);
    }
    match table.fit() {
        Ok(fit) => println!("  log-log slope: {:?}", fit.slope()),
        Err(e) => println!("  no fit: {e}"),
    }
}
