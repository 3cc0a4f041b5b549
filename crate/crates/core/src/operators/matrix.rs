use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// How the entries of an [`OperatorMatrix`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Exact,
    Quadrature { n_radial: usize, n_angular: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    Toeplitz,
    Prequantum,
}

impl OperatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorKind::Toeplitz => "toeplitz",
            OperatorKind::Prequantum => "prequantum",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "toeplitz" => Some(OperatorKind::Toeplitz),
            "prequantum" => Some(OperatorKind::Prequantum),
            _ => None,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Exact => write!(f, "exact"),
            Provenance::Quadrature { n_radial, n_angular } => {
                write!(f, "quadrature({n_radial},{n_angular})")
            }
        }
    }
}

impl Provenance {
    pub fn parse(s: &str) -> Option<Self> {
        if s == "exact" {
            return Some(Provenance::Exact);
        }
        let inner = s.strip_prefix("quadrature(")?.strip_suffix(')')?;
        let (r, a) = inner.split_once(',')?;
        Some(Provenance::Quadrature {
            n_radial: r.trim().parse().ok()?,
            n_angular: a.trim().parse().ok()?,
        })
    }
}

/// Dense matrix of an operator on `Γ_hol(P¹, O(m))` in the orthonormal monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub level: u32,
    pub entries: DMatrix<Complex64>,
    pub provenance: Provenance,
    pub kind: OperatorKind,
    /// Fingerprint of the source symbol, or a tag for opaque evaluators.
    pub source: String,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}
