//! Method-of-lines solver for the scaled reaction-diffusion system on
//! `[0, L]` with zero-flux ends. Only the virus field diffuses.

mod grid;
mod ops;
mod series;
mod stepper;
mod tridiag;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ParamError;

pub use grid::{initial_state, FieldState, Grid, InitialConditionSpec, FIELD_NAMES};
pub use ops::{
    boundary_flux, diffusion_operator, half_max_width, peak_location, reaction_jacobian, reaction_rhs, suggested_dt,
    MAX_SUGGESTED_DT,
};
pub use series::{
    simulate, simulate_partial, simulate_with_source, FluxMax, SeriesMeta, SimulationConfig, SpaceTimeSeries, Warmup,
};
pub use stepper::{explicit_stability_limit, step, ImexTableau, Source, Stepper, IMEX_ARS443};
pub use tridiag::Tridiagonal;

/// Values in `[-NEGATIVE_TOL, 0)` are clamped to zero; anything lower is an error.
pub const NEGATIVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Classical fourth-order Runge–Kutta on the whole semi-discrete system.
    ExplicitRk4,
    /// ARS(4,4,3): diffusion implicit via tridiagonal solves, reactions explicit.
    Imex,
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "explicit-rk4" | "rk4" | "explicit" => Ok(Scheme::ExplicitRk4),
            "imex" => Ok(Scheme::Imex),
            other => Err(format!("unknown scheme `{other}` (expected `imex` or `explicit-rk4`)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PdeError {
    #[error("grid needs at least 3 nodes, got {0}")]
    GridTooSmall(usize),
    #[error("domain length must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("invalid initial condition: {0}")]
    InvalidInitialCondition(&'static str),
    #[error("time step must be positive and finite, got {0}")]
    InvalidTimeStep(f64),
    #[error("invalid output schedule: tmax = {tmax}, out_every = {out_every}")]
    InvalidSchedule { tmax: f64, out_every: f64 },
    #[error("explicit step dt = {dt} exceeds the stability limit {limit} for dx = {dx}")]
    StabilityViolation { dt: f64, dx: f64, limit: f64 },
    #[error("field {field} went negative at node {node}: {value:e}")]
    NegativeState {
        node: usize,
        field: &'static str,
        value: f64,
    },
    #[error("state does not match the grid: expected {expected} nodes, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Params(#[from] ParamError),
}
