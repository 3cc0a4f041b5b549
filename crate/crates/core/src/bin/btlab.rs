use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use btlab::harness::{
    self, cache::encode_matrix, config::builtin_symbol, HarnessError, MatrixCache, RunOptions,
};
use btlab::semiclassics::Assembler;
use btlab::symbolic::SymbolLiteral;
use btlab::CanonicalSymbol;

/// Berezin-Toeplitz experiments on the projective line.
///
/// The matrix cache lives under $BTLAB_CACHE_DIR (default ./.btlab-cache).
#[derive(Parser)]
#[command(name = "btlab", version)]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Slack on first-order slope thresholds.
    #[arg(long = "tolerance-slope", global = true, value_name = "X")]
    tolerance_slope: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Assemble one operator matrix and print it.
    Assemble {
        /// `one`, `f0`, `g0`, `random:<seed>:<max_r>`, or a TOML file with `R` and `terms`.
        symbol: String,
        m: u32,
        #[arg(long, value_enum, default_value_t = Kind::Toeplitz)]
        kind: Kind,
    },
    /// Summarise a finished run.
    Report { dir: PathBuf },
    /// Manage the matrix cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Delete every cached matrix.
    Clear,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Toeplitz,
    Prequantum,
}

fn load_symbol(spec: &str) -> Result<CanonicalSymbol, HarnessError> {
    if let Some(s) = builtin_symbol(spec) {
        return Ok(s);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let literal: SymbolLiteral = toml::from_str(&text).map_err(|e| {
        harness::ConfigError::Validation {
            field: spec.to_string(),
            message: e.message().to_string(),
        }
    })?;
    literal.to_symbol().map_err(|e| {
        harness::ConfigError::Validation {
            field: spec.to_string(),
            message: e.to_string(),
        }
        .into()
    })
}

fn main_inner(cli: Cli) -> Result<i32, HarnessError> {
    let cache = MatrixCache::from_env();
    match cli.command {
        Command::Run { config } => {
            let config = harness::parse_config(&config)?;
            let opts = RunOptions {
                jobs: cli.jobs,
                out: cli.out,
                slope_tolerance: cli.tolerance_slope,
                cache_root: None,
            };
            let outcome = harness::run(&config, &opts)?;
            print!("{}", outcome.report.summary());
            println!("outputs in {}", outcome.out_dir.display());
            Ok(outcome.exit_code())
        }
        Command::Assemble { symbol, m, kind } => {
            let f = load_symbol(&symbol)?;
            let matrix = match kind {
                Kind::Toeplitz => cache.toeplitz(&f, m)?,
                Kind::Prequantum => cache.prequantum(&f, m)?,
            };
            let text = encode_matrix(&matrix);
            match cli.out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|source| HarnessError::Io {
                        path: dir.clone(),
                        source,
                    })?;
                    let path = dir.join(format!("{}-m{m}.mat", matrix.kind.as_str()));
                    std::fs::write(&path, text).map_err(|source| HarnessError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    println!("{}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(harness::EXIT_OK)
        }
        Command::Report { dir } => {
            let report = harness::read_report(&dir)?;
            print!("{}", report.summary());
            Ok(if report.all_passed {
                harness::EXIT_OK
            } else {
                harness::EXIT_CHECK_FAILED
            })
        }
        Command::Cache { action: CacheAction::Clear } => {
            cache.clear().map_err(|source| HarnessError::Io {
                path: cache.root().to_path_buf(),
                source,
            })?;
            println!("cleared {}", cache.root().display());
            Ok(harness::EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { harness::EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let code = main_inner(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
