//! Scenario runner for the `nambu-core` checks.
//!
//! A [`Scenario`] names a command, an input payload and options; [`run`]
//! dispatches it and returns a [`Report`] of per-check verdicts, and
//! [`emit`] writes reports as JSON or CSV. Batches run in parallel.

mod commands;
mod emit;
mod error;
mod input;
mod report;
mod scenario;

use std::time::Instant;

use nambu_core::hierarchy::Verdict;
use rayon::prelude::*;

pub use emit::{emit, render, Format};
pub use error::{CliError, CliResult};
pub use report::{exit_code, float, Check, Report};
pub use scenario::{parse_scenarios, Command, Scenario};

use scenario::Options;

/// Jet order used when neither the scenario nor `NAMBU_MAX_JET` sets one.
pub const DEFAULT_MAX_JET: u32 = 3;

/// Settings that come from the command line and environment rather than
/// the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Context {
    /// `--seed`; overrides `options.seed`.
    pub seed: Option<u64>,
    /// `NAMBU_MAX_JET`; upper bound for `options.max_jet` and its default.
    pub max_jet: Option<u32>,
}

impl Context {
    pub fn from_env(seed: Option<u64>) -> CliResult<Self> {
        let max_jet = match std::env::var("NAMBU_MAX_JET") {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| CliError::Input(format!("NAMBU_MAX_JET must be a non-negative integer, got `{v}`")))?,
            ),
            Err(_) => None,
        };
        Ok(Self { seed, max_jet })
    }

    pub(crate) fn seed(&self, opts: &Options) -> CliResult<u64> {
        let from_file = match opts.raw("seed") {
            Some(v) => Some(
                v.as_u64()
                    .ok_or_else(|| CliError::Input("option `seed` must be a non-negative integer".into()))?,
            ),
            None => None,
        };
        let seed = self.seed.or(from_file).unwrap_or(0);
        opts.record("seed", seed.into());
        Ok(seed)
    }

    pub(crate) fn max_jet(&self, opts: &Options) -> CliResult<u32> {
        let bound = self.max_jet.unwrap_or(u32::MAX);
        let default = self.max_jet.unwrap_or(DEFAULT_MAX_JET);
        let v = opts.usize_in("max_jet", default as usize, 0, bound.min(16) as usize)? as u32;
        Ok(v)
    }
}

pub fn run(scenario: &Scenario, ctx: &Context) -> CliResult<Report> {
    let start = Instant::now();
    let opts = Options::new(&scenario.options);
    let outcome = commands::dispatch(scenario.command, &scenario.input, &opts, ctx)?;
    opts.finish()?;
    let verdict = outcome
        .checks
        .iter()
        .fold(Verdict::Pass, |acc, c| acc.combine(c.verdict));
    Ok(Report {
        command: scenario.command,
        scenario: scenario.clone(),
        resolved_options: opts.resolved(),
        verdict,
        checks: outcome.checks,
        results: outcome.results,
        trajectory: outcome.trajectory,
        elapsed: start.elapsed(),
    })
}

/// Runs scenarios in parallel; results keep the input order.
pub fn run_batch(scenarios: &[Scenario], ctx: &Context) -> Vec<CliResult<Report>> {
    scenarios.par_iter().map(|s| run(s, ctx)).collect()
}
