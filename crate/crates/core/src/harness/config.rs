//! Experiment configuration files.
//!
//! A configuration is a TOML document with named sections:
//!
//! ```toml
//! [experiment]
//! name = "tuynman-f0"
//! manifold = "cp1"          # the only supported manifold
//! seed = 7                  # seeds the [random] symbols
//! m_list = [1, 2, 4]        # strictly increasing, positive
//! checks = ["tuynman"]      # norms, dirac, product, sass2, trace, spectrum,
//!                           # tuynman, staraxioms, equivalence
//! output = "out/tuynman"    # optional, overridden by --out
//!
//! [tolerances]              # optional
//! slope = 0.15              # O(1/m) checks pass if slope <= -1 + slope
//! slope_second_order = 0.2  # O(1/m²) checks pass if slope <= -2 + slope_second_order
//! identity = 1e-10          # identity-level checks (trace, tuynman)
//!
//! [random]                  # optional: adds rand0, rand1, ...
//! count = 2
//! max_r = 2
//!
//! [symbols]
//! f0 = "f0"                 # builtins: one, f0, g0, random:<seed>:<max_r>
//! h = { R = 1, terms = [ { a = 1, b = 0, re_num = 1, re_den = 2 },
//!                        { a = 0, b = 1, re_num = 1, re_den = 2 } ] }
//! ```
//!
//! Term fields `re_den`, `im_num`, `im_den` default to `1`, `0`, `1`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::symbolic::{random_real_symbol, CanonicalSymbol, SymbolLiteral};

pub const SUPPORTED_MANIFOLDS: &[&str] = &["cp1"];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: cannot read: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Norms,
    Dirac,
    Product,
    Sass2,
    Trace,
    Spectrum,
    Tuynman,
    StarAxioms,
    Equivalence,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Norms,
        Check::Dirac,
        Check::Product,
        Check::Sass2,
        Check::Trace,
        Check::Spectrum,
        Check::Tuynman,
        Check::StarAxioms,
        Check::Equivalence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Norms => "norms",
            Check::Dirac => "dirac",
            Check::Product => "product",
            Check::Sass2 => "sass2",
            Check::Trace => "trace",
            Check::Spectrum => "spectrum",
            Check::Tuynman => "tuynman",
            Check::StarAxioms => "staraxioms",
            Check::Equivalence => "equivalence",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// Checks whose probes are only defined for real symbols.
    pub fn needs_real_symbols(self) -> bool {
        matches!(
            self,
            Check::Norms | Check::Dirac | Check::Spectrum | Check::Tuynman
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub slope: f64,
    pub slope_second_order: f64,
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slope: 0.15,
            slope_second_order: 0.2,
            identity: 1e-10,
        }
    }
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub manifold: String,
    pub seed: u64,
    pub m_list: Vec<u32>,
    pub checks: Vec<Check>,
    pub tolerances: Tolerances,
    /// Named symbols in resolution order.
    pub symbols: Vec<(String, CanonicalSymbol)>,
    pub output: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: RawExperiment,
    #[serde(default)]
    tolerances: Option<RawTolerances>,
    #[serde(default)]
    random: Option<RawRandom>,
    #[serde(default)]
    symbols: BTreeMap<String, SymbolDef>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: String,
    manifold: String,
    #[serde(default)]
    seed: u64,
    m_list: Vec<i64>,
    checks: Vec<String>,
    #[serde(default)]
    output: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    slope: Option<f64>,
    slope_second_order: Option<f64>,
    identity: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRandom {
    count: usize,
    #[serde(default = "default_max_r")]
    max_r: u32,
}

fn default_max_r() -> u32 {
    2
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SymbolDef {
    Builtin(String),
    Literal(SymbolLiteral),
}

/// Resolves builtin symbol names: `one`, `f0`, `g0`, `random:<seed>:<max_r>`.
pub fn builtin_symbol(name: &str) -> Option<CanonicalSymbol> {
    match name {
        "one" => Some(CanonicalSymbol::one()),
        "f0" => Some(CanonicalSymbol::f0()),
        "g0" => Some(CanonicalSymbol::g0()),
        _ => {
            let rest = name.strip_prefix("random:")?;
            let (seed, max_r) = rest.split_once(':')?;
            random_real_symbol(seed.parse().ok()?, max_r.parse().ok()?).ok()
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        ConfigError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    validate(raw)
}

fn validate(raw: RawConfig) -> Result<ExperimentConfig, ConfigError> {
    let exp = raw.experiment;
    if !SUPPORTED_MANIFOLDS.contains(&exp.manifold.as_str()) {
        return Err(invalid(
            "experiment.manifold",
            format!(
                "unsupported manifold '{}'; supported manifolds: {}",
                exp.manifold,
                SUPPORTED_MANIFOLDS.join(", ")
            ),
        ));
    }
    if exp.m_list.is_empty() {
        return Err(invalid("experiment.m_list", "must not be empty"));
    }
    if let Some(m) = exp.m_list.iter().find(|&&m| m <= 0 || m > u32::MAX as i64) {
        return Err(invalid("experiment.m_list", format!("level {m} is not a positive integer")));
    }
    if exp.m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("experiment.m_list", "levels must be strictly increasing"));
    }
    let m_list: Vec<u32> = exp.m_list.iter().map(|&m| m as u32).collect();

    if exp.checks.is_empty() {
        return Err(invalid("experiment.checks", "at least one check is required"));
    }
    let mut checks = Vec::new();
    let mut seen = HashSet::new();
    for name in &exp.checks {
        let check = Check::parse(name).ok_or_else(|| {
            invalid(
                "experiment.checks",
                format!(
                    "unknown check '{name}'; known checks: {}",
                    Check::ALL.map(Check::as_str).join(", ")
                ),
            )
        })?;
        if !seen.insert(check) {
            return Err(invalid("experiment.checks", format!("check '{name}' listed twice")));
        }
        checks.push(check);
    }

    let defaults = Tolerances::default();
    let tolerances = match raw.tolerances {
        None => defaults,
        Some(t) => Tolerances {
            slope: t.slope.unwrap_or(defaults.slope),
            slope_second_order: t.slope_second_order.unwrap_or(defaults.slope_second_order),
            identity: t.identity.unwrap_or(defaults.identity),
        },
    };
    for (field, v) in [
        ("tolerances.slope", tolerances.slope),
        ("tolerances.slope_second_order", tolerances.slope_second_order),
        ("tolerances.identity", tolerances.identity),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(field, format!("{v} is not a positive number")));
        }
    }

    let mut symbols = Vec::new();
    for (name, def) in raw.symbols {
        let field = format!("symbols.{name}");
        let symbol = match def {
            SymbolDef::Builtin(b) => builtin_symbol(&b)
                .ok_or_else(|| invalid(&field, format!("unresolved symbol '{b}'")))?,
            SymbolDef::Literal(lit) => lit
                .to_symbol()
                .map_err(|e| invalid(&field, e.to_string()))?,
        };
        symbols.push((name, symbol));
    }
    if let Some(r) = raw.random {
        if r.max_r == 0 {
            return Err(invalid("random.max_r", "must be at least 1"));
        }
        for i in 0..r.count {
            let seed = exp.seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            let symbol = random_real_symbol(seed, r.max_r).map_err(|e| invalid("random", e.to_string()))?;
            symbols.push((format!("rand{i}"), symbol));
        }
    }
    if symbols.is_empty() {
        return Err(invalid("symbols", "no symbols defined"));
    }
    if let Some(check) = checks.iter().find(|c| c.needs_real_symbols()) {
        if let Some((name, _)) = symbols.iter().find(|(_, s)| !s.is_real()) {
            return Err(invalid(
                format!("symbols.{name}"),
                format!("check '{check}' requires real symbols"),
            ));
        }
    }

    Ok(ExperimentConfig {
        name: exp.name,
        manifold: exp.manifold,
        seed: exp.seed,
        m_list,
        checks,
        tolerances,
        symbols,
        output: exp.output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[experiment]
name = "minimal"
manifold = "cp1"
m_list = [1, 2, 4]
checks = ["norms"]

[symbols]
f0 = "f0"
"#;

    #[test]
    fn minimal_config_is_valid() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.checks, vec![Check::Norms]);
        assert_eq!(c.symbols.len(), 1);
        assert_eq!(c.symbols[0].1, CanonicalSymbol::f0());
        assert_eq!(c.tolerances, Tolerances::default());
    }

    #[test]
    fn decreasing_levels_are_rejected() {
        let text = MINIMAL.replace("[1, 2, 4]", "[8, 4]");
        let err = parse_config_str(&text).unwrap_err();
        assert!(matches!(err, ConfigError::Validation { ref field, .. } if field == "experiment.m_list"));
    }

    #[test]
    fn unsupported_manifold_lists_supported_ones() {
        let text = MINIMAL.replace("\"cp1\"", "\"cp2\"");
        let err = parse_config_str(&text).unwrap_err();
        assert!(err.to_string().contains("supported manifolds: cp1"), "{err}");
    }

    #[test]
    fn unknown_check_and_unresolved_symbol() {
        let err = parse_config_str(&MINIMAL.replace("[\"norms\"]", "[\"bogus\"]")).unwrap_err();
        assert!(err.to_string().contains("unknown check 'bogus'"));
        let err = parse_config_str(&MINIMAL.replace("f0 = \"f0\"", "f0 = \"nope\"")).unwrap_err();
        assert!(matches!(err, ConfigError::Validation { ref field, .. } if field == "symbols.f0"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_config_str("[experiment]\nname = \"x\"\nmanifold = \n").unwrap_err();
        match err {
            ConfigError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn literal_and_random_symbols() {
        let text = format!(
            "{MINIMAL}h = {{ R = 1, terms = [ {{ a = 1, b = 0, re_num = 1, re_den = 2 }}, {{ a = 0, b = 1, re_num = 1, re_den = 2 }} ] }}\n\n[random]\ncount = 2\n"
        );
        let c = parse_config_str(&text).unwrap();
        let names: Vec<&str> = c.symbols.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["f0", "h", "rand0", "rand1"]);
        assert_eq!(c.symbols[1].1, CanonicalSymbol::g0());
    }

    #[test]
    fn complex_symbols_rejected_for_real_checks() {
        let text = format!("{MINIMAL}c = {{ R = 0, terms = [ {{ a = 0, b = 0, re_num = 0, im_num = 1 }} ] }}\n");
        let err = parse_config_str(&text).unwrap_err();
        assert!(err.to_string().contains("requires real symbols"), "{err}");
    }
}
