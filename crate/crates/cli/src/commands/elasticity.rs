use std::path::Path;
use std::process::ExitCode;

use hbv_core::format::real;
use hbv_core::model::{closed_form_elasticity, elasticity_fd, Parameter};
use serde::Serialize;

use crate::args::ElasticityArgs;
use crate::error::CliError;
use crate::output::{ensure_dir, write_json, write_text};
use crate::params::{Resolved, SourceInfo};

#[derive(Serialize)]
struct Row {
    param: &'static str,
    closed_form: f64,
    finite_difference: f64,
}

#[derive(Serialize)]
struct Report<'a> {
    source: &'a SourceInfo,
    h: f64,
    rows: Vec<Row>,
}

pub fn run(resolved: &Resolved, args: &ElasticityArgs, out: &Path) -> Result<ExitCode, CliError> {
    let params = resolved.dimensional().ok_or_else(|| {
        CliError::Invalid("elasticities need dimensional parameters (use --preset table1 or --params)".into())
    })?;
    let which: Vec<Parameter> = if args.all {
        Parameter::ALL.to_vec()
    } else {
        vec![Parameter::Alpha, Parameter::Beta, Parameter::Gamma]
    };

    let mut rows = Vec::with_capacity(which.len());
    for p in which {
        rows.push(Row {
            param: p.name(),
            closed_form: closed_form_elasticity(params, p),
            finite_difference: elasticity_fd(params, p, args.h)?,
        });
    }

    let mut csv = String::from("param,closed_form,finite_difference\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{}\n",
            r.param,
            real(r.closed_form),
            real(r.finite_difference)
        ));
    }
    ensure_dir(out)?;
    write_text(&out.join("elasticity.csv"), &csv)?;
    write_json(
        &out.join("elasticity.json"),
        &Report {
            source: resolved.info(),
            h: args.h,
            rows,
        },
    )?;
    print!("{csv}");
    Ok(ExitCode::SUCCESS)
}
