use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hbv_core::pde::Scheme;
use hbv_core::presets::{Preset, REFERENCE_WAVE_SPEED};
use hbv_core::wave::Launch;

#[derive(Debug, Parser)]
#[command(
    name = "hbv",
    version,
    about = "Within-host HBV model: R0, elasticities, wave conditions, shooting and diffusion runs"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Named parameter set: table1, table1-dv0.2, paper-rho, reference.
    #[arg(long, global = true, conflicts_with_all = ["params", "params_scaled"])]
    pub preset: Option<Preset>,
    /// Dimensional parameters as JSON.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "params_scaled")]
    pub params: Option<PathBuf>,
    /// Scaled groups as JSON (`rho1` … `rho5`, `Dv`).
    #[arg(long = "params-scaled", global = true, value_name = "FILE")]
    pub params_scaled: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "hbv-out")]
    pub out: PathBuf,
    /// Replace one parameter, e.g. `mu=0.02` or `rho1=3`. Repeatable.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basic reproduction number, rate groups and equilibria.
    R0,
    /// Closed-form and finite-difference elasticities of R0.
    Elasticity(ElasticityArgs),
    /// Gershgorin discs, their components and the spectrum of a matrix.
    Discs(DiscsArgs),
    /// Existence conditions, discs and a shooting profile for each wave speed.
    Wave(WaveArgs),
    /// Method-of-lines run from the Gaussian seed.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct ElasticityArgs {
    /// Relative finite-difference step.
    #[arg(long, default_value_t = 1e-6)]
    pub h: f64,
    /// Every parameter instead of alpha, beta, gamma.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct DiscsArgs {
    /// Wave speed for the disease-free wave block.
    #[arg(long, conflicts_with = "matrix")]
    pub c: Option<f64>,
    /// Arbitrary square matrix as nested JSON arrays.
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
}

impl DiscsArgs {
    pub fn speed(&self) -> f64 {
        self.c.unwrap_or(REFERENCE_WAVE_SPEED)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LaunchArg {
    Slowest,
    Unique,
}

impl From<LaunchArg> for Launch {
    fn from(l: LaunchArg) -> Self {
        match l {
            LaunchArg::Slowest => Launch::Slowest,
            LaunchArg::Unique => Launch::Unique,
        }
    }
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    /// Wave speeds, comma separated or repeated.
    #[arg(long = "c", required = true, value_delimiter = ',', num_args = 1..)]
    pub c: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    /// Convergence radius around the endemic point.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long = "s-max", default_value_t = 1e4)]
    pub s_max: f64,
    #[arg(long, value_enum, default_value_t = LaunchArg::Slowest)]
    pub launch: LaunchArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Imex,
    #[value(name = "explicit-rk4")]
    ExplicitRk4,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Imex => Scheme::Imex,
            SchemeArg::ExplicitRk4 => Scheme::ExplicitRk4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DvUnits {
    /// `--dv` is the scaled diffusivity.
    Scaled,
    /// `--dv` is `d_v`; needs dimensional parameters.
    Dimensional,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 201)]
    pub nx: usize,
    /// Domain length.
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    #[arg(long, default_value_t = 100.0)]
    pub tmax: f64,
    #[arg(long = "out-every", default_value_t = 1.0)]
    pub out_every: f64,
    /// Step cap; derived from the reaction stiffness when omitted.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Imex)]
    pub scheme: SchemeArg,
    /// Diffusivity replacing the parameter set's value.
    #[arg(long)]
    pub dv: Option<f64>,
    #[arg(long = "dv-units", value_enum, default_value_t = DvUnits::Scaled)]
    pub dv_units: DvUnits,
    /// Also run with diffusion switched off, into `no_diffusion/` and `diffusion/`.
    #[arg(long = "compare-diffusion")]
    pub compare_diffusion: bool,
    #[arg(long = "t0", default_value_t = 1.0)]
    pub t0: f64,
    #[arg(long = "i0", default_value_t = 0.0)]
    pub i0: f64,
    #[arg(long = "d0", default_value_t = 0.0)]
    pub d0: f64,
    #[arg(long = "v0", default_value_t = 1.0)]
    pub v0: f64,
    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,
    /// Length of the fine-step start.
    #[arg(long, default_value_t = 1.0)]
    pub warmup: f64,
    #[arg(long = "warmup-dt", default_value_t = 1e-4)]
    pub warmup_dt: f64,
}
