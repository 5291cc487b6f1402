use std::path::Path;
use std::process::ExitCode;
use std::thread;

use hbv_core::wave::{
    check_existence, profile_metrics, shoot, submatrix, ConditionReport, Hump, Launch, ShootOptions, Verdict,
    WaveParams, WaveProfile,
};
use serde::Serialize;

use super::discs::disc_report;
use crate::args::WaveArgs;
use crate::error::CliError;
use crate::output::{ensure_dir, speed_tag, write_json, write_with};
use crate::params::{Resolved, SourceInfo};

#[derive(Serialize)]
struct Conditions<'a> {
    source: &'a SourceInfo,
    #[serde(flatten)]
    report: &'a ConditionReport,
}

#[derive(Serialize)]
struct SpeedSummary {
    c: f64,
    overall: bool,
    cond1: bool,
    cond2: bool,
    cond3: bool,
    separated: bool,
    unstable_count: usize,
    verdict: Option<Verdict>,
    terminal_distance: Option<f64>,
    launch_eigenvalue: Option<f64>,
    unstable_dimension: Option<usize>,
    samples: usize,
    u1_monotone: Option<bool>,
    u1_hump: Option<Hump>,
    /// Conditions hold and the shot produced a classified profile.
    succeeded: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct Summary<'a> {
    source: &'a SourceInfo,
    options: ShootOptions,
    runs: Vec<SpeedSummary>,
}

struct Outcome {
    report: ConditionReport,
    shot: Result<WaveProfile, String>,
}

fn evaluate(wp: &WaveParams, opts: &ShootOptions) -> Outcome {
    let report = check_existence(wp);
    let shot = shoot(wp, opts).map_err(|e| e.to_string());
    Outcome { report, shot }
}

pub fn run(resolved: &Resolved, args: &WaveArgs, out: &Path) -> Result<ExitCode, CliError> {
    let sp = resolved.scaled();
    let speeds: Vec<WaveParams> = args
        .c
        .iter()
        .map(|&c| WaveParams::new(sp, c).map_err(|e| CliError::Invalid(e.to_string())))
        .collect::<Result<_, _>>()?;
    let opts = ShootOptions {
        epsilon: args.epsilon,
        tol: args.tol,
        s_max: args.s_max,
        launch: Launch::from(args.launch),
        ..ShootOptions::default()
    };
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if !(positive(opts.epsilon) && positive(opts.tol) && positive(opts.s_max)) {
        return Err(CliError::Invalid(
            "--epsilon, --tol and --s-max must be positive".into(),
        ));
    }
    ensure_dir(out)?;

    // independent speeds run side by side; results keep the input order
    let outcomes: Vec<Outcome> = thread::scope(|scope| {
        let handles: Vec<_> = speeds.iter().map(|wp| scope.spawn(|| evaluate(wp, &opts))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("wave worker panicked"))
            .collect()
    });

    let info = resolved.info();
    let mut runs = Vec::with_capacity(outcomes.len());
    for (wp, outcome) in speeds.iter().zip(&outcomes) {
        let tag = speed_tag(wp.c);
        let report = &outcome.report;
        write_json(
            &out.join(format!("conditions_{tag}.json")),
            &Conditions { source: info, report },
        )?;
        write_json(
            &out.join(format!("discs_{tag}.json")),
            &disc_report(submatrix(wp), Some(info), Some(wp.c))?,
        )?;

        let mut summary = SpeedSummary {
            c: wp.c,
            overall: report.overall,
            cond1: report.cond1.holds,
            cond2: report.cond2.holds,
            cond3: report.cond3.holds,
            separated: report.separated,
            unstable_count: report.unstable_count,
            verdict: None,
            terminal_distance: None,
            launch_eigenvalue: None,
            unstable_dimension: None,
            samples: 0,
            u1_monotone: None,
            u1_hump: None,
            succeeded: false,
            error: None,
        };
        match &outcome.shot {
            Ok(profile) => {
                write_with(&out.join(format!("profile_{tag}.csv")), |w| profile.write_csv(w))?;
                summary.verdict = Some(profile.verdict);
                summary.terminal_distance = Some(profile.terminal_distance).filter(|d| d.is_finite());
                summary.launch_eigenvalue = Some(profile.launch_eigenvalue);
                summary.unstable_dimension = Some(profile.unstable_dimension);
                summary.samples = profile.samples.len();
                if let Ok(m) = profile_metrics(profile) {
                    summary.u1_monotone = Some(m.u1_monotone());
                    summary.u1_hump = Some(m.u1_hump);
                }
                summary.succeeded = report.overall;
                if !report.overall {
                    summary.error = Some("existence conditions not satisfied".into());
                }
            }
            Err(e) => summary.error = Some(e.clone()),
        }
        runs.push(summary);
    }

    println!(
        "{:>12} {:>8} {:>16} {:>12} {:>10}",
        "c", "overall", "verdict", "hump", "status"
    );
    for r in &runs {
        let verdict = r.verdict.map(|v| format!("{v:?}")).unwrap_or_else(|| "-".into());
        let hump = r
            .u1_hump
            .map(|h| format!("{:.3e}", h.height))
            .unwrap_or_else(|| "-".into());
        let status = if r.succeeded { "ok" } else { "failed" };
        println!(
            "{:>12} {:>8} {:>16} {:>12} {:>10}",
            r.c, r.overall, verdict, hump, status
        );
    }

    let any = runs.iter().any(|r| r.succeeded);
    write_json(
        &out.join("summary.json"),
        &Summary {
            source: info,
            options: opts,
            runs,
        },
    )?;
    if any {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::AllWavesFailed)
    }
}
