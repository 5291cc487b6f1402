use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use hbv_core::model::ScaledParams;
use hbv_core::pde::{
    explicit_stability_limit, half_max_width, initial_state, peak_location, simulate_partial, suggested_dt, FluxMax,
    Grid, InitialConditionSpec, PdeError, Scheme, SimulationConfig, SpaceTimeSeries, FIELD_NAMES,
};
use serde::Serialize;

use crate::args::{DvUnits, SimulateArgs};
use crate::error::CliError;
use crate::output::{ensure_dir, write_json, write_with};
use crate::params::{Resolved, SourceInfo};

#[derive(Serialize)]
struct SpreadSample {
    t: f64,
    half_max_width: f64,
    peak_index: usize,
    peak_x: f64,
}

#[derive(Serialize)]
struct Meta<'a> {
    source: &'a SourceInfo,
    status: &'static str,
    error: Option<String>,
    grid: Grid,
    dx: f64,
    scheme: Scheme,
    config: SimulationConfig,
    params: ScaledParams,
    initial_condition: InitialConditionSpec,
    snapshots: usize,
    t_final: f64,
    clamp_events: usize,
    boundary_flux_max: FluxMax,
    v1_spread: Vec<SpreadSample>,
}

#[derive(Serialize)]
struct Comparison {
    times: Vec<f64>,
    half_max_width_no_diffusion: Vec<f64>,
    half_max_width_diffusion: Vec<f64>,
    /// Snapshots where the diffusive run is strictly wider.
    diffusion_wider: Vec<bool>,
}

struct Run {
    dir: PathBuf,
    sp: ScaledParams,
    series: SpaceTimeSeries,
    failure: Option<PdeError>,
}

fn diffusivity(resolved: &Resolved, args: &SimulateArgs) -> Result<f64, CliError> {
    let base = resolved.scaled().dv;
    let Some(value) = args.dv else { return Ok(base) };
    if !(value.is_finite() && value >= 0.0) {
        return Err(CliError::Invalid(format!(
            "--dv must be finite and non-negative, got {value}"
        )));
    }
    match args.dv_units {
        DvUnits::Scaled => Ok(value),
        DvUnits::Dimensional => {
            let p = resolved
                .dimensional()
                .ok_or_else(|| CliError::Invalid("--dv-units dimensional needs dimensional parameters".into()))?;
            Ok(p.params().mu * value)
        }
    }
}

fn invalid(e: PdeError) -> CliError {
    CliError::Invalid(e.to_string())
}

fn spread(series: &SpaceTimeSeries) -> Vec<SpreadSample> {
    series
        .snapshots
        .iter()
        .map(|s| {
            let (peak_index, peak_x) = peak_location(s.v1(), &series.grid);
            SpreadSample {
                t: s.t,
                half_max_width: half_max_width(s.v1(), &series.grid),
                peak_index,
                peak_x,
            }
        })
        .collect()
}

fn write_run(
    run: &Run,
    info: &SourceInfo,
    ic: &InitialConditionSpec,
    config: &SimulationConfig,
) -> Result<(), CliError> {
    ensure_dir(&run.dir)?;
    for (k, name) in FIELD_NAMES.iter().enumerate() {
        write_with(&run.dir.join(format!("{name}.csv")), |w| {
            run.series.write_field_csv(k, w)
        })?;
    }
    let m = run.series.meta();
    let meta = Meta {
        source: info,
        status: if run.failure.is_some() { "failed" } else { "ok" },
        error: run.failure.as_ref().map(|e| e.to_string()),
        grid: m.grid,
        dx: m.dx,
        scheme: m.scheme,
        config: *config,
        params: run.sp,
        initial_condition: *ic,
        snapshots: m.snapshots,
        t_final: m.t_final,
        clamp_events: m.clamp_events,
        boundary_flux_max: m.boundary_flux_max,
        v1_spread: spread(&run.series),
    };
    write_json(&run.dir.join("meta.json"), &meta)
}

pub fn run(resolved: &Resolved, args: &SimulateArgs, out: &Path) -> Result<ExitCode, CliError> {
    let grid = Grid::new(args.length, args.nx).map_err(invalid)?;
    let ic = InitialConditionSpec {
        t0: args.t0,
        i0: args.i0,
        d0: args.d0,
        v0: args.v0,
        epsilon: args.epsilon,
    };
    let initial = initial_state(&grid, &ic).map_err(invalid)?;
    let sp = resolved.scaled().with_dv(diffusivity(resolved, args)?);
    let scheme = Scheme::from(args.scheme);

    let mut variants = Vec::new();
    if args.compare_diffusion {
        if !(sp.dv > 0.0) {
            return Err(CliError::Invalid(
                "--compare-diffusion needs a positive diffusivity".into(),
            ));
        }
        variants.push((out.join("no_diffusion"), sp.with_dv(0.0)));
        variants.push((out.join("diffusion"), sp));
    } else {
        variants.push((out.to_path_buf(), sp));
    }

    // one step cap for every variant so the pair stays comparable
    let dt = match args.dt {
        Some(dt) => dt,
        None => suggested_dt(&sp, &grid, scheme),
    };
    let mut config = SimulationConfig::new(args.tmax, args.out_every, dt, scheme);
    if args.warmup > 0.0 {
        config = config.with_warmup(args.warmup, args.warmup_dt);
    }
    if scheme == Scheme::ExplicitRk4 {
        let limit = explicit_stability_limit(&sp, &grid);
        let first = config.warmup.map_or(dt, |w| w.dt.min(dt));
        if dt > limit || first > limit {
            return Err(invalid(PdeError::StabilityViolation {
                dt,
                dx: grid.dx(),
                limit,
            }));
        }
    }

    let results: Vec<Result<Run, PdeError>> = thread::scope(|scope| {
        let handles: Vec<_> = variants
            .iter()
            .map(|(dir, sp)| {
                let initial = initial.clone();
                scope.spawn(move || {
                    simulate_partial(sp, &grid, initial, &config).map(|(series, failure)| Run {
                        dir: dir.clone(),
                        sp: *sp,
                        series,
                        failure,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .collect()
    });
    let runs: Vec<Run> = results.into_iter().collect::<Result<_, _>>().map_err(invalid)?;

    let info = resolved.info();
    for run in &runs {
        write_run(run, info, &ic, &config)?;
    }
    if let [plain, diffusive] = runs.as_slice() {
        let a: Vec<f64> = spread(&plain.series).iter().map(|s| s.half_max_width).collect();
        let b: Vec<f64> = spread(&diffusive.series).iter().map(|s| s.half_max_width).collect();
        let n = a.len().min(b.len());
        let comparison = Comparison {
            times: plain.series.times()[..n].to_vec(),
            diffusion_wider: (0..n).map(|i| b[i] > a[i]).collect(),
            half_max_width_no_diffusion: a[..n].to_vec(),
            half_max_width_diffusion: b[..n].to_vec(),
        };
        write_json(&out.join("compare.json"), &comparison)?;
    }

    let failures: Vec<String> = runs
        .iter()
        .filter_map(|r| r.failure.as_ref().map(|e| format!("{}: {e}", r.dir.display())))
        .collect();
    for run in &runs {
        println!(
            "{}: {} snapshots to t = {}, clamp events {}",
            run.dir.display(),
            run.series.snapshots.len(),
            run.series.final_state().t,
            run.series.clamp_events
        );
    }
    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Solver(failures.join("; ")))
    }
}
