//! Exact complex-rational scalars and integer Beta values.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex rational coefficient.
pub type Coeff = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn real(num: i64, den: i64) -> Coeff {
    Coeff::new(rat(num, den), BigRational::zero())
}

pub fn from_rational(r: BigRational) -> Coeff {
    Coeff::new(r, BigRational::zero())
}

pub fn imag_unit() -> Coeff {
    Coeff::new(BigRational::zero(), BigRational::one())
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn coeff_to_c64(c: &Coeff) -> Complex64 {
    Complex64::new(ratio_to_f64(&c.re), ratio_to_f64(&c.im))
}

pub fn is_zero(c: &Coeff) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

/// `|c|` bounded above by `|re| + |im|`, used only for magnitude heuristics.
pub fn abs_bound(c: &Coeff) -> BigRational {
    c.re.abs() + c.im.abs()
}

fn factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

pub fn factorial(n: u32) -> BigInt {
    let n = n as usize;
    {
        let table = factorial_table().read().expect("factorial table poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = factorial_table().write().expect("factorial table poisoned");
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigInt::from(k);
        table.push(next);
    }
    table[n].clone()
}

/// `B(p + 1, q + 1) = p! q! / (p + q + 1)!`, i.e. `∫_0^∞ t^p (1+t)^{-(p+q+2)} dt`.
pub fn beta_int(p: u32, q: u32) -> BigRational {
    BigRational::new(factorial(p) * factorial(q), factorial(p + q + 1))
}
