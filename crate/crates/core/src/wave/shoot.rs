//! Shooting from the disease-free rest point along an unstable direction.
//!
//! The launch state is `E1* + ε·v` with `v` a unit eigenvector of the
//! disease-free Jacobian for a positive real eigenvalue, oriented so that the
//! virus component grows. The orbit is integrated forward in `s` until it
//! lands near the endemic rest point, blows up, or runs out of budget.
//!
//! Whenever `R0 > 1` the Jacobian has at least two positive eigenvalues
//! (one near `c/Dv`, one small), so [`Launch::Slowest`] is the default: it
//! leaves along the slow direction, which is the tangent of every orbit on
//! the unstable manifold except the strong-unstable one.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::format::real;
use crate::spectral::{eigenvalues, real_eigenvector, unstable_eigenvector};

use super::integrate::{Dopri5, StepControl, StepFailure};
use super::system::{boundary_states, jacobian_disease_free, wave_rhs_into};
use super::{WaveError, WaveParams, WaveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Launch {
    /// Require exactly one unstable eigenvalue and use it.
    Unique,
    /// Use the smallest positive real eigenvalue.
    Slowest,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootOptions {
    pub epsilon: f64,
    /// Sup-norm distance to `E2*` (first four components) declaring convergence.
    pub tol: f64,
    pub blowup: f64,
    pub s_max: f64,
    /// Minimum spacing in `s` between recorded samples.
    pub stride: f64,
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub launch: Launch,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            tol: 1e-6,
            blowup: 1e6,
            s_max: 1e4,
            stride: 1e-2,
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 2_000_000,
            launch: Launch::Slowest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converged,
    Diverged,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveProfile {
    pub samples: Vec<(f64, WaveState)>,
    pub c: f64,
    pub terminal_distance: f64,
    pub verdict: Verdict,
    pub launch_eigenvalue: f64,
    /// Number of Jacobian eigenvalues with positive real part at `E1*`.
    pub unstable_dimension: usize,
}

impl WaveProfile {
    pub fn final_state(&self) -> Option<&WaveState> {
        self.samples.last().map(|(_, u)| u)
    }

    /// CSV with header `s,u1,u2,u3,u4,u5`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "s,u1,u2,u3,u4,u5")?;
        for (s, u) in &self.samples {
            write!(w, "{}", real(*s))?;
            for v in u.0 {
                write!(w, ",{}", real(v))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

pub fn shoot(wp: &WaveParams, opts: &ShootOptions) -> Result<WaveProfile, WaveError> {
    let (e1, e2) = boundary_states(&wp.sp)?;
    let jac = jacobian_disease_free(wp);
    let spectrum = eigenvalues(&jac)?;
    let unstable_dimension = spectrum.iter().filter(|z| z.re > 0.0).count();

    let (lambda, v) = match opts.launch {
        Launch::Unique => unstable_eigenvector(&jac)?,
        Launch::Slowest => {
            let lambda = slowest_real_unstable(&spectrum).ok_or(WaveError::NoUnstableDirection)?;
            (lambda, real_eigenvector(&jac, lambda)?)
        }
    };

    let mut start = e1.0;
    for (x, vi) in start.iter_mut().zip(&v) {
        *x += opts.epsilon * vi;
    }

    let params = *wp;
    let rhs = move |_s: f64, u: &[f64; 5], du: &mut [f64; 5]| wave_rhs_into(u, &params, du);
    let control = StepControl {
        rtol: opts.rtol,
        atol: opts.atol,
        ..StepControl::default()
    };
    let mut solver = Dopri5::new(rhs, 0.0, start, control);

    let mut samples = vec![(0.0, WaveState(start))];
    let mut last_recorded = 0.0;
    let converged = |u: &WaveState| u.compartment_distance(&e2) <= opts.tol && u.0[4].abs() <= 10.0 * opts.tol;

    let verdict = loop {
        let u = WaveState(*solver.y());
        if converged(&u) {
            break Verdict::Converged;
        }
        if solver.s() >= opts.s_max || solver.accepted >= opts.max_steps {
            break Verdict::BudgetExhausted;
        }
        match solver.step(opts.s_max) {
            Ok(()) => {}
            Err(StepFailure::NonFinite) => break Verdict::Diverged,
            Err(StepFailure::StepSizeUnderflow) => break Verdict::Diverged,
        }
        let u = WaveState(*solver.y());
        if u.sup_norm() > opts.blowup {
            samples.push((solver.s(), u));
            break Verdict::Diverged;
        }
        if solver.s() - last_recorded >= opts.stride {
            samples.push((solver.s(), u));
            last_recorded = solver.s();
        }
    };

    let last = WaveState(*solver.y());
    if samples.last().map(|(s, _)| *s) != Some(solver.s()) {
        samples.push((solver.s(), last));
    }
    Ok(WaveProfile {
        samples,
        c: wp.c,
        terminal_distance: last.compartment_distance(&e2),
        verdict,
        launch_eigenvalue: lambda,
        unstable_dimension,
    })
}

fn slowest_real_unstable(spectrum: &[Complex64]) -> Option<f64> {
    spectrum
        .iter()
        .filter(|z| z.im == 0.0 && z.re > 0.0)
        .map(|z| z.re)
        .min_by(f64::total_cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ScaledParams;
    use crate::presets;

    #[test]
    fn zero_offset_stays_at_rest() {
        let wp = WaveParams::new(presets::reference_wave(), 20.0).unwrap();
        let opts = ShootOptions {
            epsilon: 0.0,
            s_max: 50.0,
            ..ShootOptions::default()
        };
        let p = shoot(&wp, &opts).unwrap();
        assert_eq!(p.verdict, Verdict::BudgetExhausted);
        for (_, u) in &p.samples {
            assert_eq!(u.0, WaveState::DISEASE_FREE.0);
        }
        assert_eq!(p.samples.last().unwrap().0, 50.0);
    }

    #[test]
    fn subcritical_has_nothing_to_connect() {
        let sp = ScaledParams {
            rho1: 10.0,
            rho2: 1.0,
            rho3: 10.0,
            rho4: 1.0,
            rho5: 2.0,
            dv: 1.0,
        };
        let wp = WaveParams::new(sp, 1.0).unwrap();
        assert!(matches!(
            shoot(&wp, &ShootOptions::default()),
            Err(WaveError::NoEndemicEquilibrium { .. })
        ));
    }

    #[test]
    fn unique_launch_rejects_two_dimensional_unstable_manifold() {
        let wp = WaveParams::new(presets::reference_wave(), 20.0).unwrap();
        let opts = ShootOptions {
            launch: Launch::Unique,
            ..ShootOptions::default()
        };
        assert_eq!(shoot(&wp, &opts), Err(WaveError::MultipleUnstableDirections(2)));
    }

    #[test]
    fn csv_header_and_rows() {
        let profile = WaveProfile {
            samples: vec![
                (0.0, WaveState::DISEASE_FREE),
                (0.5, WaveState([0.5, 0.1, 0.2, 0.3, -0.4])),
            ],
            c: 2.0,
            terminal_distance: 0.0,
            verdict: Verdict::Converged,
            launch_eigenvalue: 1.0,
            unstable_dimension: 1,
        };
        let mut buf = Vec::new();
        profile.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s,u1,u2,u3,u4,u5");
        assert_eq!(lines.len(), 3);
        let parsed: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(parsed, vec![0.5, 0.5, 0.1, 0.2, 0.3, -0.4]);
    }
}
