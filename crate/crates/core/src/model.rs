//! Parameters, nondimensionalization, basic reproduction number, equilibria
//! and elasticities of the within-host HBV model.
//!
//! The dimensional model tracks uninfected hepatocytes `T`, infected
//! hepatocytes `I`, intracellular capsids `D` and free virus `V`:
//!
//! ```text
//! T' = λ − μT − kVT
//! I' = kVT − δI
//! D' = aI − R_s D,          R_s = αβ − γ(1 − α) + δ
//! V' = d_v V_xx + αβD − δ_v V
//! ```
//!
//! Scaling by `T₁ = μT/λ`, `I₁ = μI/λ`, `D₁ = μD/λ`, `V₁ = kV/μ`, `t₁ = μt`
//! leaves five rate groups `ρ₁ … ρ₅` plus the scaled diffusivity `𝒟_v`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter `{0}` must be strictly positive and finite")]
    NonPositiveParameter(&'static str),
    #[error("parameter `alpha` must lie in (0, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("capsid loss rate R_s = alpha*beta - gamma*(1-alpha) + delta must be positive, got {0}")]
    NonPositiveRs(f64),
    #[error("relative step h must lie in (0, 1e-3], got {0}")]
    InvalidStep(f64),
    #[error("perturbing `{param}` by a relative step {h} leaves the valid parameter region")]
    StepTooLarge { param: Parameter, h: f64 },
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
}

/// The ten dimensional model quantities (rates per day).
///
/// The virus clearance rate is called `delta_v` here; the symbol `c` is
/// reserved for the wave speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalParams {
    #[serde(rename = "lambda_")]
    pub lambda: f64,
    pub k: f64,
    pub mu: f64,
    pub delta: f64,
    pub a: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta_v: f64,
    pub d_v: f64,
}

/// Names of the dimensional parameters, used for overrides and elasticities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Lambda,
    K,
    Mu,
    Delta,
    A,
    Gamma,
    Alpha,
    Beta,
    DeltaV,
    DV,
}

impl Parameter {
    pub const ALL: [Parameter; 10] = [
        Parameter::Lambda,
        Parameter::K,
        Parameter::Mu,
        Parameter::Delta,
        Parameter::A,
        Parameter::Gamma,
        Parameter::Alpha,
        Parameter::Beta,
        Parameter::DeltaV,
        Parameter::DV,
    ];

    /// Field name as used in parameter files.
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Lambda => "lambda_",
            Parameter::K => "k",
            Parameter::Mu => "mu",
            Parameter::Delta => "delta",
            Parameter::A => "a",
            Parameter::Gamma => "gamma",
            Parameter::Alpha => "alpha",
            Parameter::Beta => "beta",
            Parameter::DeltaV => "delta_v",
            Parameter::DV => "d_v",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parameter {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p = match s {
            "lambda_" | "lambda" => Parameter::Lambda,
            "k" => Parameter::K,
            "mu" => Parameter::Mu,
            "delta" => Parameter::Delta,
            "a" => Parameter::A,
            "gamma" => Parameter::Gamma,
            "alpha" => Parameter::Alpha,
            "beta" => Parameter::Beta,
            "delta_v" => Parameter::DeltaV,
            "d_v" => Parameter::DV,
            other => return Err(ParamError::UnknownParameter(other.to_string())),
        };
        Ok(p)
    }
}

impl DimensionalParams {
    pub fn get(&self, which: Parameter) -> f64 {
        match which {
            Parameter::Lambda => self.lambda,
            Parameter::K => self.k,
            Parameter::Mu => self.mu,
            Parameter::Delta => self.delta,
            Parameter::A => self.a,
            Parameter::Gamma => self.gamma,
            Parameter::Alpha => self.alpha,
            Parameter::Beta => self.beta,
            Parameter::DeltaV => self.delta_v,
            Parameter::DV => self.d_v,
        }
    }

    pub fn set(&mut self, which: Parameter, value: f64) {
        let slot = match which {
            Parameter::Lambda => &mut self.lambda,
            Parameter::K => &mut self.k,
            Parameter::Mu => &mut self.mu,
            Parameter::Delta => &mut self.delta,
            Parameter::A => &mut self.a,
            Parameter::Gamma => &mut self.gamma,
            Parameter::Alpha => &mut self.alpha,
            Parameter::Beta => &mut self.beta,
            Parameter::DeltaV => &mut self.delta_v,
            Parameter::DV => &mut self.d_v,
        };
        *slot = value;
    }

    pub fn with(mut self, which: Parameter, value: f64) -> Self {
        self.set(which, value);
        self
    }

    /// Net capsid loss rate `αβ − γ(1 − α) + δ`.
    pub fn capsid_loss_rate(&self) -> f64 {
        self.alpha * self.beta - self.gamma * (1.0 - self.alpha) + self.delta
    }

    pub fn validate(self) -> Result<ValidatedParams, ParamError> {
        validate(self)
    }
}

/// Dimensional parameters that passed [`validate`], with `R_s` cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidatedParams {
    params: DimensionalParams,
    rs: f64,
}

impl ValidatedParams {
    pub fn params(&self) -> &DimensionalParams {
        &self.params
    }

    pub fn rs(&self) -> f64 {
        self.rs
    }

    pub fn scale(&self) -> ScaledParams {
        scale(self)
    }

    /// `akλαβ / (R_s δ δ_v μ)`, evaluated without going through the ρ's.
    pub fn basic_reproduction_number(&self) -> f64 {
        let p = &self.params;
        p.a * p.k * p.lambda * p.alpha * p.beta / (self.rs * p.delta * p.delta_v * p.mu)
    }
}

pub fn validate(p: DimensionalParams) -> Result<ValidatedParams, ParamError> {
    for which in Parameter::ALL {
        let v = p.get(which);
        if !(v.is_finite() && v > 0.0) {
            return Err(ParamError::NonPositiveParameter(which.name()));
        }
    }
    if p.alpha > 1.0 {
        return Err(ParamError::AlphaOutOfRange(p.alpha));
    }
    let rs = p.capsid_loss_rate();
    if !(rs > 0.0) {
        return Err(ParamError::NonPositiveRs(rs));
    }
    Ok(ValidatedParams { params: p, rs })
}

/// Dimensionless rate groups of the scaled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledParams {
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub rho4: f64,
    pub rho5: f64,
    #[serde(rename = "Dv")]
    pub dv: f64,
}

impl ScaledParams {
    /// Checks that every group is finite and positive. `dv` may be zero,
    /// which switches diffusion off.
    pub fn check(&self) -> Result<(), ParamError> {
        let named = [
            ("rho1", self.rho1),
            ("rho2", self.rho2),
            ("rho3", self.rho3),
            ("rho4", self.rho4),
            ("rho5", self.rho5),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(ParamError::NonPositiveParameter(name));
            }
        }
        if !(self.dv.is_finite() && self.dv >= 0.0) {
            return Err(ParamError::NonPositiveParameter("Dv"));
        }
        Ok(())
    }

    pub fn with_dv(mut self, dv: f64) -> Self {
        self.dv = dv;
        self
    }

    pub fn basic_reproduction_number(&self) -> f64 {
        basic_reproduction_number(self)
    }

    pub fn equilibria(&self) -> (EquilibriumPoint, Option<EquilibriumPoint>) {
        equilibria(self)
    }
}

pub fn scale(p: &ValidatedParams) -> ScaledParams {
    let d = &p.params;
    let mu = d.mu;
    ScaledParams {
        rho1: d.delta / mu,
        rho2: d.a / mu,
        rho3: p.rs / mu,
        rho4: d.k * d.alpha * d.beta * d.lambda / (mu * mu * mu),
        rho5: d.delta_v / mu,
        dv: mu * d.d_v,
    }
}

/// `ρ₂ρ₄ / (ρ₁ρ₃ρ₅)`.
pub fn basic_reproduction_number(sp: &ScaledParams) -> f64 {
    sp.rho2 * sp.rho4 / (sp.rho1 * sp.rho3 * sp.rho5)
}

/// A steady state `(T₁, I₁, D₁, V₁)` of the scaled reaction system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPoint {
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "D1")]
    pub d1: f64,
    #[serde(rename = "V1")]
    pub v1: f64,
}

impl EquilibriumPoint {
    pub const DISEASE_FREE: EquilibriumPoint = EquilibriumPoint {
        t1: 1.0,
        i1: 0.0,
        d1: 0.0,
        v1: 0.0,
    };

    pub fn to_array(&self) -> [f64; 4] {
        [self.t1, self.i1, self.d1, self.v1]
    }
}

/// Disease-free point and, when `R0 > 1` strictly, the endemic point.
pub fn equilibria(sp: &ScaledParams) -> (EquilibriumPoint, Option<EquilibriumPoint>) {
    let gain = sp.rho2 * sp.rho4;
    let loss = sp.rho1 * sp.rho3 * sp.rho5;
    let excess = gain - loss;
    let endemic = (excess > 0.0).then(|| EquilibriumPoint {
        t1: loss / gain,
        i1: excess / (sp.rho1 * gain),
        d1: excess / (sp.rho1 * sp.rho3 * sp.rho4),
        v1: excess / loss,
    });
    (EquilibriumPoint::DISEASE_FREE, endemic)
}

/// Closed-form elasticities of `R0` with respect to α, β and γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticityReport {
    pub e_alpha: f64,
    pub e_beta: f64,
    pub e_gamma: f64,
}

pub fn elasticities(p: &ValidatedParams) -> ElasticityReport {
    ElasticityReport {
        e_alpha: closed_form_elasticity(p, Parameter::Alpha),
        e_beta: closed_form_elasticity(p, Parameter::Beta),
        e_gamma: closed_form_elasticity(p, Parameter::Gamma),
    }
}

/// `(p / R0) ∂R0/∂p` for any single parameter.
///
/// `R0 = akλαβ / (R_s δ δ_v μ)` is a monomial in everything except α, β, γ
/// and δ, which also enter through `R_s`.
pub fn closed_form_elasticity(p: &ValidatedParams, which: Parameter) -> f64 {
    let d = &p.params;
    let rs = p.rs;
    match which {
        Parameter::Lambda | Parameter::K | Parameter::A => 1.0,
        Parameter::Mu | Parameter::DeltaV => -1.0,
        Parameter::DV => 0.0,
        Parameter::Delta => -1.0 - d.delta / rs,
        Parameter::Alpha => (d.delta - d.gamma) / rs,
        Parameter::Beta => ((d.alpha - 1.0) * d.gamma + d.delta) / rs,
        Parameter::Gamma => d.gamma * (1.0 - d.alpha) / rs,
    }
}

/// Central-difference elasticity `(p/R0)(R0(p + hp) − R0(p − hp)) / (2hp)`.
pub fn elasticity_fd(p: &ValidatedParams, which: Parameter, h: f64) -> Result<f64, ParamError> {
    if !(h > 0.0 && h <= 1e-3) {
        return Err(ParamError::InvalidStep(h));
    }
    let base = *p.params();
    let value = base.get(which);
    let step = h * value;
    let perturbed = |v: f64| {
        validate(base.with(which, v))
            .map(|vp| vp.basic_reproduction_number())
            .map_err(|_| ParamError::StepTooLarge { param: which, h })
    };
    let up = perturbed(value + step)?;
    let down = perturbed(value - step)?;
    let r0 = p.basic_reproduction_number();
    Ok(value / r0 * (up - down) / (2.0 * step))
}
