use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::format::real;
use crate::model::ScaledParams;

use super::ops::boundary_flux;
use super::stepper::{Source, Stepper};
use super::{initial_state, FieldState, Grid, InitialConditionSpec, PdeError, Scheme, FIELD_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub tmax: f64,
    pub out_every: f64,
    /// Upper bound; each output interval is split into equal substeps.
    pub dt: f64,
    pub scheme: Scheme,
    /// Finer steps while the seed is still sharp.
    #[serde(default)]
    pub warmup: Option<Warmup>,
}

/// Caps the step at `dt` for `t < duration`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Warmup {
    pub duration: f64,
    pub dt: f64,
}

impl SimulationConfig {
    pub fn new(tmax: f64, out_every: f64, dt: f64, scheme: Scheme) -> Self {
        Self {
            tmax,
            out_every,
            dt,
            scheme,
            warmup: None,
        }
    }

    pub fn with_warmup(mut self, duration: f64, dt: f64) -> Self {
        self.warmup = Some(Warmup { duration, dt });
        self
    }

    fn check(&self) -> Result<(), PdeError> {
        let bad = !(self.tmax.is_finite() && self.tmax >= 0.0) || !(self.out_every.is_finite() && self.out_every > 0.0);
        if bad {
            return Err(PdeError::InvalidSchedule {
                tmax: self.tmax,
                out_every: self.out_every,
            });
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(PdeError::InvalidTimeStep(self.dt));
        }
        if let Some(w) = self.warmup {
            if !(w.dt.is_finite() && w.dt > 0.0) {
                return Err(PdeError::InvalidTimeStep(w.dt));
            }
            if !(w.duration.is_finite() && w.duration >= 0.0) {
                return Err(PdeError::InvalidSchedule {
                    tmax: self.tmax,
                    out_every: self.out_every,
                });
            }
        }
        Ok(())
    }

    /// `0, out_every, 2·out_every, …`, closed by `tmax` when it is not on the cadence.
    pub fn output_times(&self) -> Vec<f64> {
        let mut times = Vec::new();
        let mut k = 0u64;
        loop {
            let t = k as f64 * self.out_every;
            if t > self.tmax * (1.0 + 1e-12) {
                break;
            }
            times.push(t.min(self.tmax));
            k += 1;
        }
        let last = *times.last().unwrap_or(&0.0);
        if self.tmax - last > 1e-12 * self.tmax.max(1.0) {
            times.push(self.tmax);
        }
        times
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeSeries {
    pub grid: Grid,
    pub params: ScaledParams,
    pub scheme: Scheme,
    pub dt: f64,
    pub snapshots: Vec<FieldState>,
    /// `(left, right)` estimates of `∂V1/∂x` per snapshot.
    pub boundary_flux: Vec<(f64, f64)>,
    pub clamp_events: usize,
}

/// Run summary written next to the field CSVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub grid: Grid,
    pub dx: f64,
    pub scheme: Scheme,
    pub dt: f64,
    pub params: ScaledParams,
    pub snapshots: usize,
    pub t_final: f64,
    pub clamp_events: usize,
    pub boundary_flux_max: FluxMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxMax {
    pub left: f64,
    pub right: f64,
}

impl SpaceTimeSeries {
    pub fn final_state(&self) -> &FieldState {
        self.snapshots
            .last()
            .expect("a series holds at least the initial snapshot")
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn meta(&self) -> SeriesMeta {
        let fold = |pick: fn(&(f64, f64)) -> f64| self.boundary_flux.iter().map(|f| pick(f).abs()).fold(0.0, f64::max);
        SeriesMeta {
            grid: self.grid,
            dx: self.grid.dx(),
            scheme: self.scheme,
            dt: self.dt,
            params: self.params,
            snapshots: self.snapshots.len(),
            t_final: self.final_state().t,
            clamp_events: self.clamp_events,
            boundary_flux_max: FluxMax {
                left: fold(|f| f.0),
                right: fold(|f| f.1),
            },
        }
    }

    /// One row per snapshot: `t,x0,x1,…` with `field` indexing `T1, I1, D1, V1`.
    pub fn write_field_csv<W: Write>(&self, field: usize, mut w: W) -> io::Result<()> {
        assert!(field < FIELD_NAMES.len(), "field index {field} out of range");
        let mut header = String::from("t");
        for i in 0..self.grid.nx {
            header.push_str(&format!(",x{i}"));
        }
        writeln!(w, "{header}")?;
        for snap in &self.snapshots {
            let mut line = real(snap.t);
            for v in &snap.fields[field] {
                line.push(',');
                line.push_str(&real(*v));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Runs from the Gaussian seed.
pub fn simulate(
    sp: &ScaledParams,
    grid: &Grid,
    ic: &InitialConditionSpec,
    config: &SimulationConfig,
) -> Result<SpaceTimeSeries, PdeError> {
    let initial = initial_state(grid, ic)?;
    let (series, failure) = run(Stepper::new(*sp, *grid, config.scheme)?, initial, config)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(series),
    }
}

/// Runs from an arbitrary state with an additive forcing term.
pub fn simulate_with_source(
    sp: &ScaledParams,
    grid: &Grid,
    initial: FieldState,
    config: &SimulationConfig,
    source: Box<dyn Source>,
) -> Result<SpaceTimeSeries, PdeError> {
    let stepper = Stepper::new(*sp, *grid, config.scheme)?.with_source(source);
    let (series, failure) = run(stepper, initial, config)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(series),
    }
}

/// Like [`simulate`], but a solver error mid-run still returns the snapshots
/// collected so far alongside the error.
pub fn simulate_partial(
    sp: &ScaledParams,
    grid: &Grid,
    initial: FieldState,
    config: &SimulationConfig,
) -> Result<(SpaceTimeSeries, Option<PdeError>), PdeError> {
    run(Stepper::new(*sp, *grid, config.scheme)?, initial, config)
}

fn run(
    mut stepper: Stepper,
    initial: FieldState,
    config: &SimulationConfig,
) -> Result<(SpaceTimeSeries, Option<PdeError>), PdeError> {
    config.check()?;
    let grid = *stepper.grid();
    if let Some(f) = initial.fields.iter().find(|f| f.len() != grid.nx) {
        return Err(PdeError::ShapeMismatch {
            expected: grid.nx,
            got: f.len(),
        });
    }
    let times = config.output_times();
    let mut state = initial;
    state.t = 0.0;
    let mut series = SpaceTimeSeries {
        grid,
        params: *stepper.params(),
        scheme: stepper.scheme(),
        dt: config.dt,
        boundary_flux: vec![boundary_flux(&state, &grid)],
        snapshots: vec![state.clone()],
        clamp_events: 0,
    };

    let mut failure = None;
    'outer: for pair in times.windows(2) {
        let (t0, t1) = (pair[0], pair[1]);
        for (a, b, dt) in legs(t0, t1, config) {
            let substeps = (((b - a) / dt) * (1.0 - 1e-12)).ceil().max(1.0) as u64;
            let h = (b - a) / substeps as f64;
            for j in 0..substeps {
                state.t = a + j as f64 * h;
                if let Err(e) = stepper.advance(&mut state, h) {
                    failure = Some(e);
                    break 'outer;
                }
            }
        }
        state.t = t1;
        series.boundary_flux.push(boundary_flux(&state, &grid));
        series.snapshots.push(state.clone());
    }
    series.clamp_events = stepper.clamp_events();
    Ok((series, failure))
}

/// Splits `[t0, t1]` at the end of the warmup, each leg with its step cap.
fn legs(t0: f64, t1: f64, config: &SimulationConfig) -> Vec<(f64, f64, f64)> {
    match config.warmup {
        Some(w) if t0 < w.duration => {
            let fine = w.dt.min(config.dt);
            if t1 <= w.duration {
                vec![(t0, t1, fine)]
            } else {
                vec![(t0, w.duration, fine), (w.duration, t1, config.dt)]
            }
        }
        _ => vec![(t0, t1, config.dt)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn config(tmax: f64, out_every: f64) -> SimulationConfig {
        SimulationConfig::new(tmax, out_every, 0.01, Scheme::Imex)
    }

    #[test]
    fn warmup_legs() {
        let c = config(10.0, 2.0).with_warmup(3.0, 0.001);
        assert_eq!(legs(0.0, 2.0, &c), vec![(0.0, 2.0, 0.001)]);
        assert_eq!(legs(2.0, 4.0, &c), vec![(2.0, 3.0, 0.001), (3.0, 4.0, 0.01)]);
        assert_eq!(legs(4.0, 6.0, &c), vec![(4.0, 6.0, 0.01)]);
    }

    #[test]
    fn output_schedule() {
        assert_eq!(config(0.0, 1.0).output_times(), vec![0.0]);
        assert_eq!(config(3.0, 1.0).output_times(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(config(2.5, 1.0).output_times(), vec![0.0, 1.0, 2.0, 2.5]);
        assert_eq!(config(0.3, 0.1).output_times().len(), 4);
    }

    #[test]
    fn zero_horizon_echoes_initial_state() {
        let sp = presets::reference_wave();
        let grid = Grid::new(1.0, 11).unwrap();
        let ic = InitialConditionSpec::default();
        let s = simulate(&sp, &grid, &ic, &config(0.0, 1.0)).unwrap();
        assert_eq!(s.snapshots.len(), 1);
        assert_eq!(s.snapshots[0], initial_state(&grid, &ic).unwrap());
    }

    #[test]
    fn rejects_bad_schedule() {
        let sp = presets::reference_wave();
        let grid = Grid::new(1.0, 11).unwrap();
        let ic = InitialConditionSpec::default();
        assert!(matches!(
            simulate(&sp, &grid, &ic, &config(1.0, 0.0)),
            Err(PdeError::InvalidSchedule { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let sp = presets::reference_wave();
        let grid = Grid::new(1.0, 3).unwrap();
        let s = simulate(&sp, &grid, &InitialConditionSpec::default(), &config(0.02, 0.01)).unwrap();
        let mut buf = Vec::new();
        s.write_field_csv(3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x0,x1,x2");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0.0000000000000000e0,1.0000000000000000e0,"));
        let meta = s.meta();
        assert_eq!(meta.snapshots, 3);
        assert_eq!(meta.t_final, 0.02);
    }
}
