//! The prequantum operator compressed to holomorphic sections equals
//! `i T(f − Δf / 2m)`, exactly.
//!
//! Run with `cargo run --example tuynman_relation`.

use btlab::operators::ExactOperator;
use btlab::rational::{imag_unit, real};
use btlab::semiclassics::tuynman_defect;
use btlab::symbolic::{laplacian, random_real_symbol};
use btlab::CanonicalSymbol;

fn main() -> btlab::Result<()> {
    let f0 = CanonicalSymbol::f0();
    let q = ExactOperator::prequantum(&f0, 4)?;
    let diag: Vec<String> = q.diagonal().iter().map(|d| format!("{}i", d.im)).collect();
    println!("Q_f0 at m = 4 is diagonal: {}  [{}]", q.is_diagonal(), diag.join(", "));

    for seed in 0..3 {
        let f = random_real_symbol(seed, 3)?;
        for m in [1, 2, 5, 9] {
            let q = ExactOperator::prequantum(&f, m)?;
            let shifted = f.sub(&laplacian(&f).scale(&real(1, 2 * m as i64)));
            let rhs = ExactOperator::toeplitz(&shifted, m).scale(&imag_unit());
            println!(
                "seed {seed}, m = {m}: exact equality {}, float defect {:.1e}",
                q == rhs,
                tuynman_defect(&f, m)?
            );
        }
    }
    Ok(())
}
