//! The `weyllab` command line.
//!
//! Reports go to `--output` (or stdout) as CSV or JSON; a short human summary
//! goes to stderr. Exit codes: 0 success, 1 check failure, 2 usage error.

pub mod commands;
pub mod config;
pub mod table;

use crate::error::Error;
use clap::{Parser, Subcommand};
use config::{CommonArgs, RunConfig};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "weyllab", version, about = "Spectral counting and remainder experiments on rational Heisenberg manifolds")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// N(t), N_I(t), N_II(t), the Weyl main term and R(t).
    Count {
        #[arg(long)]
        t: f64,
    },
    /// E(u) and its normalizations on a u-grid.
    Scan {
        #[arg(long = "u-min")]
        u_min: f64,
        #[arg(long = "u-max")]
        u_max: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Samples the Vaaler majorant inequality.
    VaalerCheck {
        #[arg(long = "H")]
        order: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Compares dyadic exponential sums with their stationary-phase transform.
    TransformCheck {
        #[arg(long, default_value = "50,100,200")]
        u: String,
        #[arg(long, default_value = "1,2,3")]
        h: String,
        #[arg(long, default_value = "0,1")]
        j: String,
    },
    /// Smallest U >= T² with all ‖U·sqrt(h(2k-h))‖ <= 1/16.
    Dirichlet {
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Also write the plain-text certificate here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Mean-square integrals of R(t) and the fitted growth exponent.
    MeanSquare {
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long = "n-grid", default_value_t = 32)]
        n_grid: usize,
        /// Decades of T covered by the grid below t-max.
        #[arg(long, default_value_t = crate::hunt::DEFAULT_DECADES)]
        decades: f64,
        /// Use R(t) = t^{l-1/4} instead of the spectral remainder.
        #[arg(long)]
        synthetic: bool,
    },
    /// Fejér-smoothed exponential against its closed form.
    Lemma3 {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "Q")]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
    },
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidManifold(_) | Error::Domain(_) | Error::Parse(_) | Error::OddEllUnsupported { .. } => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

/// `WEYLLAB_*` variables of the current process.
pub fn process_env() -> BTreeMap<String, String> {
    std::env::vars().filter(|(k, _)| k.starts_with(config::ENV_PREFIX)).collect()
}

/// Runs with the process environment and standard streams.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let out = std::io::stdout();
    let err = std::io::stderr();
    run_with(args, &process_env(), &mut out.lock(), &mut err.lock())
}

/// Runs against an explicit environment and output streams.
pub fn run_with<I, S>(args: I, env: &BTreeMap<String, String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    let cfg = match RunConfig::resolve(&cli.common, env) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match cfg.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli.command, &cfg)),
            Err(e) => Err(Error::Domain(format!("thread pool: {e}"))),
        },
        None => commands::execute(&cli.command, &cfg),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let rendered = outcome.table.render(cfg.format);
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, rendered.as_bytes()),
        None => stdout.write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: writing report: {e}");
        return EXIT_CHECK_FAILED;
    }
    for line in &outcome.summary {
        let _ = writeln!(stderr, "{line}");
    }
    if outcome.check_failed {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}
