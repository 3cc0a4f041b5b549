use std::process::Command;

use btlab::harness::{
    self, parse_config, parse_config_str, Check, ConfigError, MatrixCache, RunOptions, CACHE_ENV,
};
use btlab::operators::OperatorKind;
use btlab::semiclassics::Assembler;
use btlab::CanonicalSymbol;

const CONFIG: &str = r#"
[experiment]
name = "harness-test"
manifold = "cp1"
m_list = [2, 4, 8, 16]
checks = ["tuynman", "trace", "staraxioms"]

[symbols]
f0 = "f0"
g0 = "g0"
"#;

fn opts(dir: &std::path::Path, out: &str) -> RunOptions {
    RunOptions {
        out: Some(dir.join(out)),
        cache_root: Some(dir.join("cache")),
        jobs: Some(2),
        ..Default::default()
    }
}

#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config_str(CONFIG).unwrap();
    let outcome = harness::run(&config, &opts(dir.path(), "out")).unwrap();
    assert!(outcome.report.all_passed, "{}", outcome.report.summary());
    assert_eq!(outcome.exit_code(), harness::EXIT_OK);
    let out = dir.path().join("out");
    let csv = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.starts_with("check,m,value\n"));
    assert!(csv.contains("tuynman[f0],2,"));
    assert!(out.join("plots/trace_g0.dat").exists());
    let report = harness::read_report(&out).unwrap();
    assert_eq!(report, outcome.report);
    assert_eq!(report.checks.len(), 3);
    assert_eq!(report.checks[2].items.len(), 4);
    assert_eq!(report.calibration["laplacian_scale"], 2);
}

#[test]
fn tampered_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config_str(CONFIG).unwrap();
    let first = harness::run(&config, &opts(dir.path(), "a")).unwrap();

    let cache = MatrixCache::new(dir.path().join("cache"));
    let f0 = CanonicalSymbol::f0();
    let path = cache.entry_path(OperatorKind::Prequantum, &f0.fingerprint(), 4);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("e-1", "e-2", 1)).unwrap();

    let second = harness::run(&config, &opts(dir.path(), "b")).unwrap();
    assert_eq!(second.report.cache.corrupt, 1);
    assert_eq!(second.report.warnings.len(), 1);
    assert!(second.report.warnings[0].contains("checksum"));
    let csv = |d: &str| std::fs::read(dir.path().join(d).join("results.csv")).unwrap();
    assert_eq!(csv("a"), csv("b"));
    assert!(first.report.all_passed && second.report.all_passed);

    // repaired on the way through
    assert!(cache.load(OperatorKind::Prequantum, &f0.fingerprint(), 4).unwrap().is_some());
}

#[test]
fn entry_under_the_wrong_key_is_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = MatrixCache::new(dir.path());
    let (f0, g0) = (CanonicalSymbol::f0(), CanonicalSymbol::g0());
    cache.toeplitz(&f0, 3).unwrap();
    cache.toeplitz(&g0, 3).unwrap();
    let p = |f: &CanonicalSymbol| cache.entry_path(OperatorKind::Toeplitz, &f.fingerprint(), 3);
    std::fs::copy(p(&f0), p(&g0)).unwrap();
    assert!(cache.load(OperatorKind::Toeplitz, &g0.fingerprint(), 3).is_err());
    let fresh = btlab::operators::toeplitz_exact(&g0, 3);
    assert_eq!(cache.toeplitz(&g0, 3).unwrap(), fresh);
    assert_eq!(cache.stats().corrupt, 1);
}

#[test]
fn jobs_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config_str(&CONFIG.replace("\"tuynman\", \"trace\", \"staraxioms\"", "\"dirac\", \"sass2\", \"spectrum\"")).unwrap();
    let one = RunOptions { jobs: Some(1), cache_root: Some(dir.path().join("c1")), out: Some(dir.path().join("one")), ..Default::default() };
    let four = RunOptions { jobs: Some(4), cache_root: Some(dir.path().join("c4")), out: Some(dir.path().join("four")), ..Default::default() };
    harness::run(&config, &one).unwrap();
    harness::run(&config, &four).unwrap();
    let csv = |d: &str| std::fs::read(dir.path().join(d).join("results.csv")).unwrap();
    assert_eq!(csv("one"), csv("four"));
}

#[test]
fn config_errors_name_the_field() {
    let cases = [
        ("m_list = [2, 4, 8, 16]", "m_list = [4, 4]", "experiment.m_list"),
        ("m_list = [2, 4, 8, 16]", "m_list = [0, 4]", "experiment.m_list"),
        ("\"trace\",", "\"trace\", \"trace\",", "experiment.checks"),
        ("g0 = \"g0\"", "g0 = \"h7\"", "symbols.g0"),
        ("manifold = \"cp1\"", "manifold = \"torus\"", "experiment.manifold"),
    ];
    for (from, to, field) in cases {
        match parse_config_str(&CONFIG.replace(from, to)) {
            Err(ConfigError::Validation { field: f, .. }) => assert_eq!(f, field, "{to}"),
            other => panic!("{to}: {other:?}"),
        }
    }
    assert!(matches!(
        parse_config_str(&CONFIG.replace("name =", "nmae =")),
        Err(ConfigError::Parse { .. })
    ));
    assert_eq!(Check::parse("sass2"), Some(Check::Sass2));
}

#[test]
fn cli_exit_codes_and_cache_clear() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, CONFIG).unwrap();
    let btlab = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_btlab"))
            .args(args)
            .env(CACHE_ENV, dir.path().join("cache"))
            .output()
            .unwrap()
    };
    let out = dir.path().join("out");
    let run = btlab(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(dir.path().join("cache/matrices").read_dir().unwrap().next().is_some());

    let report = btlab(&["report", out.to_str().unwrap()]);
    assert_eq!(report.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&report.stdout).contains("PASS  tuynman"));

    let asm = btlab(&["assemble", "f0", "2"]);
    assert_eq!(asm.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&asm.stdout).contains("7.5000000000000000e-1"));
    assert_eq!(btlab(&["assemble", "nonsense", "2"]).status.code(), Some(3));
    assert_eq!(btlab(&["run", "/no/such/file.toml"]).status.code(), Some(2));
    assert_eq!(btlab(&["frobnicate"]).status.code(), Some(2));

    assert_eq!(btlab(&["cache", "clear"]).status.code(), Some(0));
    assert!(!dir.path().join("cache/matrices").exists());
}

#[test]
fn tuynman_on_f0_at_small_levels() {
    let dir = tempfile::tempdir().unwrap();
    let text = "[experiment]\nname = \"t\"\nmanifold = \"cp1\"\nm_list = [1, 2, 4]\nchecks = [\"tuynman\"]\n\n[symbols]\nf0 = \"f0\"\n";
    let outcome = harness::run(&parse_config_str(text).unwrap(), &opts(dir.path(), "out")).unwrap();
    assert!(outcome.report.all_passed);
    let table = &outcome.report.checks[0].items[0].tables[0];
    assert_eq!(table.records.len(), 3);
    assert!(table.records.iter().all(|r| r.value <= 1e-10));
}

#[test]
fn norms_of_constant_flag_exact_identity() {
    let dir = tempfile::tempdir().unwrap();
    let text = "[experiment]\nname = \"n\"\nmanifold = \"cp1\"\nm_list = [1, 2, 3]\nchecks = [\"norms\"]\n\n[symbols]\none = \"one\"\n";
    let outcome = harness::run(&parse_config_str(text).unwrap(), &opts(dir.path(), "out")).unwrap();
    let item = &outcome.report.checks[0].items[0];
    assert!(item.passed);
    assert!(item.detail.starts_with("exact identity"), "{}", item.detail);
    assert_eq!(item.tables[0].fit, Some(btlab::semiclassics::SlopeFit::ExactIdentity));
}

#[test]
fn cache_roundtrip_of_f0_at_level_eight_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cache = MatrixCache::new(dir.path());
    let t = btlab::operators::toeplitz_exact(&CanonicalSymbol::f0(), 8);
    let back = cache.roundtrip(&t).unwrap();
    assert_eq!((&back.entries - &t.entries).camax(), 0.0);
    assert_eq!(back.provenance, t.provenance);

    // a hit skips assembly
    cache.toeplitz(&CanonicalSymbol::f0(), 8).unwrap();
    let stats = cache.stats();
    assert_eq!((stats.hits, stats.assemblies), (1, 0));
}
