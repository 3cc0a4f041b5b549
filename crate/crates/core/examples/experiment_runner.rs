//! Runs an experiment from an inline config, twice, to show the matrix cache at work.
//!
//! Run with `cargo run --release --example experiment_runner`.

use btlab::harness::{parse_config_str, run, RunOptions};

const CONFIG: &str = r#"
[experiment]
name = "example"
manifold = "cp1"
seed = 3
m_list = [8, 16, 32, 64]
checks = ["dirac", "sass2", "tuynman", "staraxioms"]

[random]
count = 1

[symbols]
f0 = "f0"
g0 = "g0"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_config_str(CONFIG)?;
    let scratch = std::env::temp_dir().join(format!("btlab-example-{}", std::process::id()));
    let opts = RunOptions {
        out: Some(scratch.join("out")),
        cache_root: Some(scratch.join("cache")),
        ..Default::default()
    };
    for pass in ["cold", "warm"] {
        let outcome = run(&config, &opts)?;
        let c = &outcome.report.cache;
        println!("{pass} cache: {} hits, {} misses", c.hits, c.misses);
        if pass == "warm" {
            print!("{}", outcome.report.summary());
        }
    }
    println!("outputs in {}", scratch.join("out").display());
    Ok(())
}
