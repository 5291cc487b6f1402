use std::fs;
use std::path::Path;

use hbv_core::model::{DimensionalParams, Parameter, ScaledParams, ValidatedParams};
use hbv_core::presets::{ParamSource, Preset};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::Global;
use crate::error::CliError;

/// Where the parameters came from, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceInfo {
    pub kind: &'static str,
    pub name: String,
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Resolved {
    Dimensional { info: SourceInfo, params: ValidatedParams },
    Scaled { info: SourceInfo, sp: ScaledParams },
}

impl Resolved {
    pub fn info(&self) -> &SourceInfo {
        match self {
            Resolved::Dimensional { info, .. } | Resolved::Scaled { info, .. } => info,
        }
    }

    pub fn scaled(&self) -> ScaledParams {
        match self {
            Resolved::Dimensional { params, .. } => params.scale(),
            Resolved::Scaled { sp, .. } => *sp,
        }
    }

    pub fn dimensional(&self) -> Option<&ValidatedParams> {
        match self {
            Resolved::Dimensional { params, .. } => Some(params),
            Resolved::Scaled { .. } => None,
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn split_override(raw: &str) -> Result<(&str, f64), CliError> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| CliError::Invalid(format!("override `{raw}` is not KEY=VALUE")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("override `{key}`: `{value}` is not a number")))?;
    Ok((key.trim(), value))
}

fn apply_scaled(sp: &mut ScaledParams, key: &str, value: f64) -> Result<(), CliError> {
    let slot = match key {
        "rho1" => &mut sp.rho1,
        "rho2" => &mut sp.rho2,
        "rho3" => &mut sp.rho3,
        "rho4" => &mut sp.rho4,
        "rho5" => &mut sp.rho5,
        "Dv" | "dv" => &mut sp.dv,
        other => {
            return Err(CliError::Invalid(format!(
                "unknown scaled parameter `{other}` (expected rho1..rho5 or Dv)"
            )))
        }
    };
    *slot = value;
    Ok(())
}

pub fn resolve(g: &Global) -> Result<Resolved, CliError> {
    let (kind, name, source) = if let Some(path) = &g.params {
        (
            "file",
            path.display().to_string(),
            ParamSource::Dimensional(read_json::<DimensionalParams>(path)?),
        )
    } else if let Some(path) = &g.params_scaled {
        (
            "file-scaled",
            path.display().to_string(),
            ParamSource::Scaled(read_json::<ScaledParams>(path)?),
        )
    } else {
        let preset = g.preset.unwrap_or(Preset::Table1);
        ("preset", preset.name().to_string(), preset.source())
    };
    let info = SourceInfo {
        kind,
        name,
        overrides: g.overrides.clone(),
    };

    match source {
        ParamSource::Dimensional(mut p) => {
            for raw in &g.overrides {
                let (key, value) = split_override(raw)?;
                let which: Parameter = key.parse()?;
                p.set(which, value);
            }
            Ok(Resolved::Dimensional {
                info,
                params: p.validate()?,
            })
        }
        ParamSource::Scaled(mut sp) => {
            for raw in &g.overrides {
                let (key, value) = split_override(raw)?;
                apply_scaled(&mut sp, key, value)?;
            }
            sp.check()?;
            Ok(Resolved::Scaled { info, sp })
        }
    }
}
