use crate::model::ScaledParams;

use super::ops::{laplacian_into, reaction_into};
use super::tridiag::Tridiagonal;
use super::{FieldState, Grid, PdeError, Scheme, FIELD_NAMES, NEGATIVE_TOL};

/// Additive forcing `S(t, x)` on the four fields.
pub trait Source: Send + Sync {
    fn eval(&self, t: f64, x: f64) -> [f64; 4];
}

impl<F> Source for F
where
    F: Fn(f64, f64) -> [f64; 4] + Send + Sync,
{
    fn eval(&self, t: f64, x: f64) -> [f64; 4] {
        self(t, x)
    }
}

/// Additive Runge–Kutta pair; stage 0 is explicit in both halves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImexTableau {
    pub c: [f64; 5],
    pub explicit: [[f64; 5]; 5],
    pub implicit: [[f64; 5]; 5],
}

/// Third-order, L-stable, stiffly accurate in both halves: the last stage is the step.
pub const IMEX_ARS443: ImexTableau = ImexTableau {
    c: [0.0, 0.5, 2.0 / 3.0, 0.5, 1.0],
    explicit: [
        [0.0; 5],
        [0.5, 0.0, 0.0, 0.0, 0.0],
        [11.0 / 18.0, 1.0 / 18.0, 0.0, 0.0, 0.0],
        [5.0 / 6.0, -5.0 / 6.0, 0.5, 0.0, 0.0],
        [0.25, 1.75, 0.75, -1.75, 0.0],
    ],
    implicit: [
        [0.0; 5],
        [0.0, 0.5, 0.0, 0.0, 0.0],
        [0.0, 1.0 / 6.0, 0.5, 0.0, 0.0],
        [0.0, -0.5, 0.5, 0.5, 0.0],
        [0.0, 1.5, -1.5, 0.5, 0.5],
    ],
};

const STAGES: usize = 5;
const IMPLICIT_DIAG: f64 = 0.5;

/// Largest explicit step the guard admits, `0.9·dx²/(2Dv)`; infinite for `Dv = 0`.
pub fn explicit_stability_limit(sp: &ScaledParams, grid: &Grid) -> f64 {
    if sp.dv > 0.0 {
        0.9 * grid.dx() * grid.dx() / (2.0 * sp.dv)
    } else {
        f64::INFINITY
    }
}

type Fields = [Vec<f64>; 4];

fn zeros(n: usize) -> Fields {
    [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]]
}

/// Advances one step with a throwaway [`Stepper`].
pub fn step(
    state: &FieldState,
    sp: &ScaledParams,
    grid: &Grid,
    dt: f64,
    scheme: Scheme,
) -> Result<FieldState, PdeError> {
    let mut s = Stepper::new(*sp, *grid, scheme)?;
    let mut next = state.clone();
    s.advance(&mut next, dt)?;
    Ok(next)
}

/// Time stepper holding scratch buffers and the factored implicit matrix.
/// One caller at a time; independent steppers share nothing.
pub struct Stepper {
    sp: ScaledParams,
    grid: Grid,
    scheme: Scheme,
    source: Option<Box<dyn Source>>,
    clamp_events: usize,
    resolvent: Option<(f64, Tridiagonal)>,
    stages: Vec<Fields>,
    rates: Vec<Fields>,
    diffusion: Vec<Vec<f64>>,
    work: Fields,
}

impl Stepper {
    pub fn new(sp: ScaledParams, grid: Grid, scheme: Scheme) -> Result<Self, PdeError> {
        sp.check()?;
        let n = grid.nx;
        Ok(Self {
            sp,
            grid,
            scheme,
            source: None,
            clamp_events: 0,
            resolvent: None,
            stages: (0..STAGES).map(|_| zeros(n)).collect(),
            rates: (0..STAGES).map(|_| zeros(n)).collect(),
            diffusion: vec![vec![0.0; n]; STAGES],
            work: zeros(n),
        })
    }

    pub fn with_source(mut self, source: Box<dyn Source>) -> Self {
        self.source = Some(source);
        self
    }

    pub fn params(&self) -> &ScaledParams {
        &self.sp
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Values in `[−1e−12, 0)` reset to zero so far.
    pub fn clamp_events(&self) -> usize {
        self.clamp_events
    }

    /// Advances `state` by `dt` in place, then enforces non-negativity.
    pub fn advance(&mut self, state: &mut FieldState, dt: f64) -> Result<(), PdeError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(PdeError::InvalidTimeStep(dt));
        }
        if let Some(f) = state.fields.iter().find(|f| f.len() != self.grid.nx) {
            return Err(PdeError::ShapeMismatch {
                expected: self.grid.nx,
                got: f.len(),
            });
        }
        match self.scheme {
            Scheme::ExplicitRk4 => {
                let limit = explicit_stability_limit(&self.sp, &self.grid);
                if dt > limit {
                    return Err(PdeError::StabilityViolation {
                        dt,
                        dx: self.grid.dx(),
                        limit,
                    });
                }
                self.rk4(state, dt);
            }
            Scheme::Imex => self.imex(state, dt),
        }
        state.t += dt;
        self.enforce_sign(state)
    }

    fn enforce_sign(&mut self, state: &mut FieldState) -> Result<(), PdeError> {
        for (field, values) in FIELD_NAMES.iter().zip(state.fields.iter_mut()) {
            for (node, v) in values.iter_mut().enumerate() {
                if *v >= 0.0 {
                    continue;
                }
                if *v >= -NEGATIVE_TOL {
                    *v = 0.0;
                    self.clamp_events += 1;
                } else {
                    return Err(PdeError::NegativeState { node, field, value: *v });
                }
            }
        }
        // NaN fails both comparisons above without being caught
        for (field, values) in FIELD_NAMES.iter().zip(&state.fields) {
            if let Some(node) = values.iter().position(|v| !v.is_finite()) {
                return Err(PdeError::NegativeState {
                    node,
                    field,
                    value: values[node],
                });
            }
        }
        Ok(())
    }

    /// Reactions plus forcing at time `t`; diffusion of V1 added when `with_diffusion`.
    fn rate(&self, t: f64, u: &Fields, with_diffusion: bool, out: &mut Fields) {
        reaction_into(u, &self.sp, out);
        if let Some(src) = &self.source {
            for k in 0..self.grid.nx {
                let s = src.eval(t, self.grid.x(k));
                for f in 0..4 {
                    out[f][k] += s[f];
                }
            }
        }
        if with_diffusion && self.sp.dv > 0.0 {
            let dx = self.grid.dx();
            let v = &u[3];
            let n = v.len();
            let f = self.sp.dv / (dx * dx);
            let dv = &mut out[3];
            dv[0] += f * 2.0 * (v[1] - v[0]);
            for k in 1..n - 1 {
                dv[k] += f * (v[k - 1] - 2.0 * v[k] + v[k + 1]);
            }
            dv[n - 1] += f * 2.0 * (v[n - 2] - v[n - 1]);
        }
    }

    fn rk4(&mut self, state: &mut FieldState, dt: f64) {
        let t = state.t;
        let weights = [1.0, 2.0, 2.0, 1.0];
        let offsets = [0.0, 0.5, 0.5, 1.0];
        let mut rates = std::mem::take(&mut self.rates);
        let mut work = std::mem::take(&mut self.work);
        for s in 0..4 {
            if s == 0 {
                self.rate(t, &state.fields, true, &mut rates[0]);
            } else {
                let h = offsets[s] * dt;
                for f in 0..4 {
                    for k in 0..self.grid.nx {
                        work[f][k] = state.fields[f][k] + h * rates[s - 1][f][k];
                    }
                }
                self.rate(t + h, &work, true, &mut rates[s]);
            }
        }
        for f in 0..4 {
            for k in 0..self.grid.nx {
                let incr: f64 = (0..4).map(|s| weights[s] * rates[s][f][k]).sum();
                state.fields[f][k] += dt / 6.0 * incr;
            }
        }
        self.rates = rates;
        self.work = work;
    }

    fn resolvent(&mut self, dt: f64) -> Option<&Tridiagonal> {
        if self.sp.dv == 0.0 {
            return None;
        }
        let stale = !matches!(&self.resolvent, Some((h, _)) if *h == dt);
        if stale {
            let dx = self.grid.dx();
            let r = IMPLICIT_DIAG * dt * self.sp.dv / (dx * dx);
            self.resolvent = Some((dt, Tridiagonal::neumann_resolvent(self.grid.nx, r)));
        }
        self.resolvent.as_ref().map(|(_, m)| m)
    }

    fn imex(&mut self, state: &mut FieldState, dt: f64) {
        let tab = &IMEX_ARS443;
        let t = state.t;
        let n = self.grid.nx;
        let dx = self.grid.dx();
        let mut stages = std::mem::take(&mut self.stages);
        let mut rates = std::mem::take(&mut self.rates);
        let mut diffusion = std::mem::take(&mut self.diffusion);

        for f in 0..4 {
            stages[0][f].copy_from_slice(&state.fields[f]);
        }
        self.rate(t, &stages[0], false, &mut rates[0]);
        laplacian_into(&stages[0][3], dx, self.sp.dv, &mut diffusion[0]);

        for i in 1..STAGES {
            let (done, rest) = stages.split_at_mut(i);
            let y = &mut rest[0];
            for f in 0..4 {
                for k in 0..n {
                    let mut acc = 0.0;
                    for j in 0..i {
                        acc += tab.explicit[i][j] * rates[j][f][k];
                    }
                    if f == 3 {
                        for j in 0..i {
                            acc += tab.implicit[i][j] * diffusion[j][k];
                        }
                    }
                    y[f][k] = done[0][f][k] + dt * acc;
                }
            }
            if let Some(m) = self.resolvent(dt) {
                m.solve_in_place(&mut y[3]);
            }
            if i + 1 < STAGES {
                self.rate(t + tab.c[i] * dt, y, false, &mut rates[i]);
                laplacian_into(&y[3], dx, self.sp.dv, &mut diffusion[i]);
            }
        }
        for f in 0..4 {
            state.fields[f].copy_from_slice(&stages[STAGES - 1][f]);
        }
        self.stages = stages;
        self.rates = rates;
        self.diffusion = diffusion;
    }
}
