use serde::{Deserialize, Serialize};

use crate::model::EquilibriumPoint;

use super::PdeError;

pub const FIELD_NAMES: [&str; 4] = ["T1", "I1", "D1", "V1"];

/// Uniform nodes `x_i = i·dx`, `dx = L/(nx − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub length: f64,
    pub nx: usize,
}

impl Grid {
    pub fn new(length: f64, nx: usize) -> Result<Self, PdeError> {
        if nx < 3 {
            return Err(PdeError::GridTooSmall(nx));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(PdeError::InvalidLength(length));
        }
        Ok(Self { length, nx })
    }

    pub fn dx(&self) -> f64 {
        self.length / (self.nx - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nx).map(|i| self.x(i))
    }
}

/// The four fields `T1, I1, D1, V1` on the grid at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub t: f64,
    pub fields: [Vec<f64>; 4],
}

impl FieldState {
    pub fn uniform(grid: &Grid, point: &EquilibriumPoint, t: f64) -> Self {
        let fields = point.to_array().map(|v| vec![v; grid.nx]);
        Self { t, fields }
    }

    pub fn len(&self) -> usize {
        self.fields[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn t1(&self) -> &[f64] {
        &self.fields[0]
    }

    pub fn i1(&self) -> &[f64] {
        &self.fields[1]
    }

    pub fn d1(&self) -> &[f64] {
        &self.fields[2]
    }

    pub fn v1(&self) -> &[f64] {
        &self.fields[3]
    }

    /// Sup-norm distance from a spatially uniform point.
    pub fn distance_to(&self, point: &EquilibriumPoint) -> f64 {
        self.fields
            .iter()
            .zip(point.to_array())
            .flat_map(|(f, p)| f.iter().map(move |v| (v - p).abs()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_difference(&self, other: &FieldState) -> f64 {
        self.fields
            .iter()
            .zip(&other.fields)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Gaussian seed at `x = 0`: `T1 = T0(1 − g)`, `I1 = I0·g`, `D1 = D0·g`,
/// `V1 = V0·g` with `g = exp(−x²/ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialConditionSpec {
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "I0")]
    pub i0: f64,
    #[serde(rename = "D0")]
    pub d0: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    pub epsilon: f64,
}

impl Default for InitialConditionSpec {
    fn default() -> Self {
        Self {
            t0: 1.0,
            i0: 0.0,
            d0: 0.0,
            v0: 1.0,
            epsilon: 0.02,
        }
    }
}

impl InitialConditionSpec {
    pub fn check(&self) -> Result<(), PdeError> {
        let amps = [self.t0, self.i0, self.d0, self.v0];
        if amps.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(PdeError::InvalidInitialCondition(
                "amplitudes must be finite and non-negative",
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(PdeError::InvalidInitialCondition("epsilon must be positive"));
        }
        Ok(())
    }
}

pub fn initial_state(grid: &Grid, ic: &InitialConditionSpec) -> Result<FieldState, PdeError> {
    ic.check()?;
    let g: Vec<f64> = grid.nodes().map(|x| (-x * x / ic.epsilon).exp()).collect();
    let fields = [
        g.iter().map(|g| ic.t0 * (1.0 - g)).collect(),
        g.iter().map(|g| ic.i0 * g).collect(),
        g.iter().map(|g| ic.d0 * g).collect(),
        g.iter().map(|g| ic.v0 * g).collect(),
    ];
    Ok(FieldState { t: 0.0, fields })
}
