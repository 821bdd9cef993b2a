mod flows;
mod forms;
mod hierarchy;
mod nambu;

use nambu_core::flows::Trajectory;
use serde_json::{Map, Value};

use crate::error::CliResult;
use crate::report::Check;
use crate::scenario::{Command, Options};
use crate::Context;

#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub checks: Vec<Check>,
    pub results: Map<String, Value>,
    pub trajectory: Option<Trajectory>,
}

pub(crate) fn dispatch(command: Command, input: &Value, opts: &Options, ctx: &Context) -> CliResult<Outcome> {
    match command {
        Command::Bracket => nambu::bracket(input, opts),
        Command::FiCheck => nambu::fi_check(input, opts, ctx),
        Command::Decompose => nambu::decompose(input, opts, ctx),
        Command::RigidBody => flows::rigid_body(opts),
        Command::EulerTop => flows::euler_top(opts),
        Command::DkpZc => hierarchy::dkp_zc(opts, ctx),
        Command::DkpFlow => hierarchy::flow(input, opts, ctx),
        Command::VpVacuum => hierarchy::vp_vacuum(input, opts),
        Command::VpCheck => hierarchy::vp_check(input, opts),
        Command::TwistorData => hierarchy::twistor_data(input, opts),
        Command::Plebanski => forms::plebanski(input, opts, ctx),
        Command::Pencil => forms::pencil(input, opts),
        Command::Metric3 => forms::metric3(input),
        Command::Hydro => forms::hydro(input, opts),
    }
}
