//! Batch CLI: run a task file and emit reports.
//!
//! Exit codes: 0 when no task fails, 1 when some task fails, 2 on usage or
//! parse errors. The `LPALG_OUT` environment variable supplies a default
//! output directory.

use clap::{Parser, ValueEnum};
use lpalg::cli::{emit_report, parse_spec, run, ReportFormat, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    JsonLike,
}

#[derive(Parser, Debug)]
#[command(name = "lpalg", about = "Run a task file against the workbench", disable_help_subcommand = true)]
struct Args {
    /// Task file to execute.
    spec_file: PathBuf,
    /// Stdout format; `--out` always writes both forms.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Directory for report.txt and report.json (default: $LPALG_OUT).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance overrides, KEY=VAL (power_tol, tau, sandwich, max_iter,
    /// random_starts, max_bisections, max_nodes, samples).
    #[arg(long = "tolerance", value_name = "KEY=VAL")]
    tolerances: Vec<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            // Help/version requests are not usage errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(2);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let text = match std::fs::read_to_string(&args.spec_file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.spec_file.display());
            return ExitCode::from(2);
        }
    };
    let spec = match parse_spec(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", args.spec_file.display());
            return ExitCode::from(2);
        }
    };
    let mut cfg = RunConfig { seed: args.seed, ..RunConfig::default() };
    for pair in &args.tolerances {
        let Some((k, v)) = pair.split_once('=') else {
            eprintln!("--tolerance needs KEY=VAL, got '{pair}'");
            return ExitCode::from(2);
        };
        if let Err(e) = cfg.apply_tolerance(k, v) {
            eprintln!("--tolerance {pair}: {e}");
            return ExitCode::from(2);
        }
    }
    let out_dir = args.out.or_else(|| std::env::var_os("LPALG_OUT").map(PathBuf::from));
    let report = run(&spec, &cfg);
    let format = match args.format {
        FormatArg::Text => ReportFormat::Text,
        FormatArg::JsonLike => ReportFormat::JsonLike,
    };
    match emit_report(&report, format, out_dir.as_deref()) {
        Ok(rendered) => print!("{rendered}"),
        Err(e) => {
            eprintln!("cannot write report: {e}");
            return ExitCode::from(2);
        }
    }
    if report.any_failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
