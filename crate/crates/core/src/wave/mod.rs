//! Traveling-wave reduction `s = x + ct` of the scaled reaction-diffusion
//! system, its existence-condition checker, and a shooting solver for the
//! connecting orbit.

mod conditions;
mod integrate;
mod metrics;
mod shoot;
mod system;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ParamError, ScaledParams};
use crate::spectral::SpectralError;

pub use conditions::{
    check_existence, ConditionReport, Diagnostic, EigenNature, GroupClassification, Inequality, DISC_LABELS,
};
pub use integrate::{Dopri5, StepControl};
pub use metrics::{profile_metrics, ComponentMetrics, Hump, ProfileMetrics};
pub use shoot::{shoot, Launch, ShootOptions, Verdict, WaveProfile};
pub use system::{boundary_states, jacobian_disease_free, minimal_wave_speed, submatrix, wave_rhs, wave_rhs_into};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveError {
    #[error("wave speed must be positive and finite, got {0}")]
    InvalidSpeed(f64),
    #[error("the wave system needs a positive diffusion coefficient, got Dv = {0}")]
    NonPositiveDiffusion(f64),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("no endemic equilibrium: R0 = {r0} does not exceed 1")]
    NoEndemicEquilibrium { r0: f64 },
    #[error("the disease-free Jacobian has no real unstable direction")]
    NoUnstableDirection,
    #[error("the disease-free Jacobian has {0} unstable directions, expected exactly one")]
    MultipleUnstableDirections(usize),
    #[error(transparent)]
    Spectral(SpectralError),
    #[error("profile has no samples")]
    EmptyProfile,
}

impl From<SpectralError> for WaveError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NoUnstableDirection => WaveError::NoUnstableDirection,
            SpectralError::MultipleUnstableDirections(k) => WaveError::MultipleUnstableDirections(k),
            other => WaveError::Spectral(other),
        }
    }
}

/// Scaled parameters plus a wave speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub sp: ScaledParams,
    pub c: f64,
}

impl WaveParams {
    pub fn new(sp: ScaledParams, c: f64) -> Result<Self, WaveError> {
        sp.check()?;
        if !(sp.dv > 0.0) {
            return Err(WaveError::NonPositiveDiffusion(sp.dv));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(WaveError::InvalidSpeed(c));
        }
        Ok(Self { sp, c })
    }
}

/// `(u1, u2, u3, u4, u5)` with `u5 = u4'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveState(pub [f64; 5]);

impl WaveState {
    pub const DISEASE_FREE: WaveState = WaveState([1.0, 0.0, 0.0, 0.0, 0.0]);

    /// Sup-norm distance over the four compartments, ignoring `u5`.
    pub fn compartment_distance(&self, other: &WaveState) -> f64 {
        self.0[..4]
            .iter()
            .zip(&other.0[..4])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}
