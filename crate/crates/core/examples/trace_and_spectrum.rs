//! Traces grow like `(m + 1) ∫ f Ω / 2π`; spectral moments approach `∫ f^k Ω / 2π`.
//!
//! Run with `cargo run --release --example trace_and_spectrum`.

use btlab::rational::coeff_to_c64;
use btlab::semiclassics::{extract_tau, spectral_moment, trace_sequence, DEFAULT_SWEEP};
use btlab::symbolic::{integrate, random_real_symbol};

fn main() -> btlab::Result<()> {
    let f = random_real_symbol(3, 2)?;
    let table = trace_sequence(&f, &DEFAULT_SWEEP)?;
    let tau = extract_tau(&table)?;
    println!("∫ f Ω / 2π = {:.12}", coeff_to_c64(&integrate(&f).over_two_pi).re);
    println!("τ0 = {:.12}, τ1 = {:.12}, residual {:.1e}", tau.tau0, tau.tau1, tau.residual);

    for k in 1..=3 {
        let limit = coeff_to_c64(&integrate(&f.pow(k)).over_two_pi).re;
        print!("k = {k}: limit {limit:.6}; ");
        for m in [8, 32, 128] {
            print!("m={m}: {:.6}  ", spectral_moment(&f, m, k)?);
        }
        println!();
    }
    Ok(())
}
