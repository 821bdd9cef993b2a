use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nambu_cli::{emit, exit_code, parse_scenarios, run_batch, Context, Format};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Runs Nambu-mechanics and dispersionless-hierarchy checks from JSON
/// scenario files.
///
/// Exit status: 0 all checks pass, 1 some check fails, 2 bad input,
/// 3 a truncation window left a check indeterminate.
#[derive(Debug, Parser)]
#[command(name = "nambu", version)]
struct Args {
    /// Scenario file: one scenario object or an array of them.
    #[arg(long)]
    scenario: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Seed for randomized sweeps; overrides `options.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Suppress the per-scenario summary on stderr.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let fail = |msg: String| {
        eprintln!("nambu: {msg}");
        ExitCode::from(2)
    };
    let ctx = match Context::from_env(args.seed) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let text = match std::fs::read_to_string(&args.scenario) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", args.scenario.display())),
    };
    let scenarios = match parse_scenarios(&text) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string()),
    };
    let outcomes = run_batch(&scenarios, &ctx);
    if !args.quiet {
        for (i, o) in outcomes.iter().enumerate() {
            match o {
                Ok(r) => eprintln!(
                    "[{i}] {} {:?} in {:.3} s",
                    r.command.name(),
                    r.verdict,
                    r.elapsed.as_secs_f64()
                ),
                Err(e) => eprintln!("[{i}] {e}"),
            }
        }
    }
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    if let Err(e) = emit(&outcomes, format, args.out.as_deref()) {
        eprintln!("nambu: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(exit_code(&outcomes) as u8)
}
