use std::path::Path;
use std::process::ExitCode;

use hbv_core::model::{EquilibriumPoint, ScaledParams};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{to_json, write_text};
use crate::params::{Resolved, SourceInfo};

#[derive(Serialize)]
struct Equilibria {
    disease_free: EquilibriumPoint,
    endemic: Option<EquilibriumPoint>,
}

#[derive(Serialize)]
struct Report<'a> {
    source: &'a SourceInfo,
    /// Only defined for dimensional input.
    #[serde(rename = "R_s")]
    rs: Option<f64>,
    rho: ScaledParams,
    #[serde(rename = "R0")]
    r0: f64,
    equilibria: Equilibria,
}

pub fn run(resolved: &Resolved, out: &Path) -> Result<ExitCode, CliError> {
    let sp = resolved.scaled();
    let (disease_free, endemic) = sp.equilibria();
    let report = Report {
        source: resolved.info(),
        rs: resolved.dimensional().map(|p| p.rs()),
        rho: sp,
        r0: sp.basic_reproduction_number(),
        equilibria: Equilibria { disease_free, endemic },
    };
    let text = to_json(&report);
    write_text(&out.join("r0.json"), &text)?;
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}
