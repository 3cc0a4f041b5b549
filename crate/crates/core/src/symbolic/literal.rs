//! Serializable symbol literal: a coefficient table plus the denominator exponent `R`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{reduce, BiPoly, CanonicalSymbol, ChartRational};
use crate::error::{Error, Result};
use crate::rational::Coeff;

/// One numerator monomial `(re_num/re_den + i im_num/im_den) z^a z̄^b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermLiteral {
    pub a: u32,
    pub b: u32,
    pub re_num: i64,
    #[serde(default = "one")]
    pub re_den: i64,
    #[serde(default)]
    pub im_num: i64,
    #[serde(default = "one")]
    pub im_den: i64,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolLiteral {
    #[serde(rename = "R", alias = "r")]
    pub denom_exp: u32,
    pub terms: Vec<TermLiteral>,
}

impl SymbolLiteral {
    pub fn to_symbol(&self) -> Result<CanonicalSymbol> {
        let mut numerator = BiPoly::zero();
        for t in &self.terms {
            if t.re_den == 0 || t.im_den == 0 {
                return Err(Error::InvalidArgument(format!(
                    "zero denominator in term (a = {}, b = {})",
                    t.a, t.b
                )));
            }
            let c = Coeff::new(
                BigRational::new(BigInt::from(t.re_num), BigInt::from(t.re_den)),
                BigRational::new(BigInt::from(t.im_num), BigInt::from(t.im_den)),
            );
            numerator.add_term(t.a, t.b, c);
        }
        reduce(ChartRational::new(numerator, self.denom_exp))
    }

    pub fn from_symbol(symbol: &CanonicalSymbol) -> Result<Self> {
        let small = |x: &BigInt| {
            x.to_i64()
                .ok_or_else(|| Error::InvalidArgument(format!("coefficient {x} does not fit in i64")))
        };
        let mut terms = Vec::new();
        for ((a, b), re, im) in symbol.numerator().coefficient_table() {
            terms.push(TermLiteral {
                a,
                b,
                re_num: small(re.numer())?,
                re_den: small(re.denom())?,
                im_num: small(im.numer())?,
                im_den: small(im.denom())?,
            });
        }
        Ok(Self {
            denom_exp: symbol.denom_exp(),
            terms,
        })
    }
}
