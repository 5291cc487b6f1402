mod discs;
mod elasticity;
mod r0;
mod simulate;
mod wave;

use std::process::ExitCode;

use crate::args::{Cli, Command};
use crate::error::CliError;
use crate::output::ensure_dir;
use crate::params::resolve;

pub fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let resolved = resolve(&cli.global)?;
    let out = &cli.global.out;
    match &cli.command {
        Command::R0 => {
            ensure_dir(out)?;
            r0::run(&resolved, out)
        }
        Command::Elasticity(args) => elasticity::run(&resolved, args, out),
        Command::Discs(args) => discs::run(&resolved, args, out),
        Command::Wave(args) => wave::run(&resolved, args, out),
        Command::Simulate(args) => simulate::run(&resolved, args, out),
    }
}
