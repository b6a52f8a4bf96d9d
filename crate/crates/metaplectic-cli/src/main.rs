use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use metaplectic::report::tables::{dump, emit_table, Format, TableKind, DUMP_NAMES};
use metaplectic::report::{run_suite, SuiteConfig, CONFIG_ENV};
use metaplectic::{Error, Result};

#[derive(Parser)]
#[command(name = "metaplectic", version, about = "Verification harness for the metaplectic representation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite.
    Check {
        /// Check name or glob, e.g. "lie.*". Negative controls run only when named.
        #[arg(long)]
        filter: Option<String>,
        /// Ranks to run, comma separated.
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<usize>>,
        /// Truncation degree D.
        #[arg(long)]
        degree: Option<u32>,
        /// Gauss–Hermite order per dimension, applied to every rank.
        #[arg(long)]
        quad_order: Option<usize>,
        #[arg(long)]
        tol_scale: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "json")]
        format: String,
        /// Record per-check runtimes.
        #[arg(long)]
        timings: bool,
        /// JSON configuration file; command-line flags override it.
        #[arg(long, env = CONFIG_ENV)]
        config: Option<PathBuf>,
    },
    /// Print a table computed from the closed forms.
    Table {
        /// norms, brackets, kernel-map or ktypes.
        #[arg(long)]
        what: String,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Upper bound for m, n or K.
        #[arg(long)]
        max: Option<u32>,
    },
    /// Serialize an operator matrix, a special element or the 𝔭-basis.
    Dump {
        /// Object name; `list` prints the available names.
        what: String,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 12)]
        degree: u32,
    },
}

fn check(
    filter: Option<String>,
    cfg: SuiteConfig,
    format: Format,
) -> Result<(String, bool)> {
    cfg.validate()?;
    let report = run_suite(&cfg, filter.as_deref())?;
    let out = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    Ok((out, report.all_pass()))
}

fn run(cli: Cli) -> Result<(String, bool)> {
    match cli.command {
        Command::Check { filter, r, degree, quad_order, tol_scale, seed, format, timings, config } => {
            let mut cfg = match config {
                Some(p) if !p.as_os_str().is_empty() => SuiteConfig::from_file(&p)?,
                _ => SuiteConfig::default(),
            };
            if let Some(r) = r {
                cfg.r_values = r;
            }
            if let Some(d) = degree {
                cfg.degree = d;
            }
            if let Some(q) = quad_order {
                cfg.quad_orders = cfg.r_values.iter().map(|&r| (r, q)).collect();
            }
            if let Some(t) = tol_scale {
                cfg.tol_scale = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.timings |= timings;
            check(filter, cfg, format.parse()?)
        }
        Command::Table { what, format, r, max } => {
            let kind: TableKind = what.parse()?;
            let format: Format = format.parse()?;
            Ok((emit_table(kind, r, max)?.render(format), true))
        }
        Command::Dump { what, format, r, degree } => {
            if what == "list" {
                return Ok((DUMP_NAMES.join("\n") + "\n", true));
            }
            let format: Format = format.parse()?;
            if format == Format::Text {
                return Err(Error::InvalidConfig("dump supports json and csv".into()));
            }
            Ok((dump(&what, r, degree, format)?, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, pass)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
