use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{reduce, BiPoly, CanonicalSymbol, ChartRational};
use crate::error::{Error, Result};
use crate::rational::{rat, Coeff};

fn small_rational(rng: &mut ChaCha8Rng) -> num_rational::BigRational {
    rat(rng.random_range(-4..=4), rng.random_range(1..=3))
}

/// Deterministic, non-constant real symbol with denominator exponent `≤ max_r`.
pub fn random_real_symbol(seed: u64, max_r: u32) -> Result<CanonicalSymbol> {
    if max_r < 1 {
        return Err(Error::InvalidArgument("max_R must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let r = rng.random_range(1..=max_r);
        let mut numerator = BiPoly::zero();
        for a in 0..=r {
            for b in a..=r {
                if a == b {
                    numerator.add_term(a, a, Coeff::new(small_rational(&mut rng), rat(0, 1)));
                } else {
                    let c = Coeff::new(small_rational(&mut rng), small_rational(&mut rng));
                    numerator.add_term(b, a, c.conj());
                    numerator.add_term(a, b, c);
                }
            }
        }
        let symbol = reduce(ChartRational::new(numerator, r))?;
        if symbol.as_constant().is_none() {
            return Ok(symbol);
        }
    }
}
