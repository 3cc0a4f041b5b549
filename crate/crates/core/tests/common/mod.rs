#![allow(dead_code)]

use btlab::rational::imag_unit;
use btlab::symbolic::random_real_symbol;
use btlab::CanonicalSymbol;

pub fn rand_real(seed: u64) -> CanonicalSymbol {
    random_real_symbol(seed, 2).expect("valid budget")
}

/// `a + i b` with independent random real parts.
pub fn rand_complex(seed: u64) -> CanonicalSymbol {
    let a = random_real_symbol(seed, 2).expect("valid budget");
    let b = random_real_symbol(seed + 10_000, 2).expect("valid budget");
    a.add(&b.scale(&imag_unit()))
}

pub fn sweep() -> Vec<u32> {
    btlab::semiclassics::DEFAULT_SWEEP.to_vec()
}
