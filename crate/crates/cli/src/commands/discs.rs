use std::fs;
use std::path::Path;
use std::process::ExitCode;

use hbv_core::spectral::{
    connected_components, eigenvalues, gershgorin_discs, passes_det_residual, DiscPartition, SquareMatrix,
};
use hbv_core::wave::{submatrix, WaveParams};
use num_complex::Complex64;
use serde::Serialize;

use crate::args::DiscsArgs;
use crate::error::CliError;
use crate::output::{ensure_dir, to_json, write_text};
use crate::params::{Resolved, SourceInfo};

#[derive(Serialize)]
pub struct LabeledDisc {
    pub label: String,
    pub center: f64,
    pub radius: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Serialize)]
pub struct DiscReport<'a> {
    pub source: Option<&'a SourceInfo>,
    pub c: Option<f64>,
    pub matrix: SquareMatrix,
    pub discs: Vec<LabeledDisc>,
    pub partition: DiscPartition,
    /// `[re, im]` pairs sorted by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub residuals_pass: bool,
}

pub fn disc_report<'a>(
    matrix: SquareMatrix,
    source: Option<&'a SourceInfo>,
    c: Option<f64>,
) -> Result<DiscReport<'a>, CliError> {
    let discs = gershgorin_discs(&matrix);
    let partition = connected_components(&discs);
    let ev = eigenvalues(&matrix).map_err(|e| CliError::Solver(e.to_string()))?;
    let residuals_pass = ev.iter().all(|z| passes_det_residual(&matrix, *z));
    let discs = discs
        .iter()
        .enumerate()
        .map(|(i, d)| LabeledDisc {
            label: format!("G{}", i + 1),
            center: d.center,
            radius: d.radius,
            left: d.left(),
            right: d.right(),
        })
        .collect();
    Ok(DiscReport {
        source,
        c,
        matrix,
        discs,
        partition,
        eigenvalues: ev,
        residuals_pass,
    })
}

pub fn run(resolved: &Resolved, args: &DiscsArgs, out: &Path) -> Result<ExitCode, CliError> {
    let report = match &args.matrix {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Input {
                path: path.clone(),
                source,
            })?;
            let m: SquareMatrix = serde_json::from_str(&text).map_err(|source| CliError::Parse {
                path: path.clone(),
                source,
            })?;
            disc_report(m, None, None)?
        }
        None => {
            let c = args.speed();
            let wp = WaveParams::new(resolved.scaled(), c).map_err(|e| CliError::Invalid(e.to_string()))?;
            disc_report(submatrix(&wp), Some(resolved.info()), Some(c))?
        }
    };
    ensure_dir(out)?;
    let text = to_json(&report);
    write_text(&out.join("discs.json"), &text)?;
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}
