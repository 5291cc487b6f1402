//! Named parameter sets.
//!
//! `table1` carries the baseline dimensional values. `paper-rho` carries a
//! second set of scaled groups that cannot be obtained from `table1` through
//! the scaling map; both are shipped and neither is treated as authoritative. `reference` is a scaled set that satisfies all
//! three wave-existence inequalities at `c = 20`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{DimensionalParams, ScaledParams};

pub const TABLE1_JSON: &str = include_str!("../presets/table1.json");

/// Wave speed paired with [`reference_wave`].
pub const REFERENCE_WAVE_SPEED: f64 = 20.0;

/// Alternative virus diffusion coefficient `d_v`.
pub const ALT_DIFFUSION: f64 = 0.2;

pub fn table1() -> DimensionalParams {
    serde_json::from_str(TABLE1_JSON).expect("bundled table1.json is well-formed")
}

/// `table1` with `d_v` replaced by [`ALT_DIFFUSION`].
pub fn table1_alt_dv() -> DimensionalParams {
    DimensionalParams {
        d_v: ALT_DIFFUSION,
        ..table1()
    }
}

/// Scaled groups that come without a diffusivity; `Dv` is taken as `μ·d_v`
/// from `table1`.
pub fn paper_rho() -> ScaledParams {
    ScaledParams {
        rho1: 2.81,
        rho2: 25.0,
        rho3: 70.71,
        rho4: 0.84,
        rho5: 170.0,
        dv: 0.01 * 0.08,
    }
}

pub fn reference_wave() -> ScaledParams {
    ScaledParams {
        rho1: 21.5,
        rho2: 30.0,
        rho3: 50.5,
        rho4: 19.0,
        rho5: 0.5,
        dv: 0.1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSource {
    Dimensional(DimensionalParams),
    Scaled(ScaledParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Table1,
    Table1AltDv,
    PaperRho,
    Reference,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Table1, Preset::Table1AltDv, Preset::PaperRho, Preset::Reference];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Table1AltDv => "table1-dv0.2",
            Preset::PaperRho => "paper-rho",
            Preset::Reference => "reference",
        }
    }

    pub fn source(self) -> ParamSource {
        match self {
            Preset::Table1 => ParamSource::Dimensional(table1()),
            Preset::Table1AltDv => ParamSource::Dimensional(table1_alt_dv()),
            Preset::PaperRho => ParamSource::Scaled(paper_rho()),
            Preset::Reference => ParamSource::Scaled(reference_wave()),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let known: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            format!("unknown preset `{s}` (known: {})", known.join(", "))
        })
    }
}
