//! Dormand–Prince 5(4) pair with FSAL and elementary step-size control.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            h_init: 1e-4,
            h_max: f64::INFINITY,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFailure {
    NonFinite,
    StepSizeUnderflow,
}

pub struct Dopri5<F, const N: usize>
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
{
    f: F,
    control: StepControl,
    s: f64,
    y: [f64; N],
    h: f64,
    k1: [f64; N],
    pub accepted: usize,
    pub rejected: usize,
}

impl<F, const N: usize> Dopri5<F, N>
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
{
    pub fn new(mut f: F, s0: f64, y0: [f64; N], control: StepControl) -> Self {
        let mut k1 = [0.0; N];
        f(s0, &y0, &mut k1);
        Self {
            f,
            control,
            s: s0,
            y: y0,
            h: control.h_init,
            k1,
            accepted: 0,
            rejected: 0,
        }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    /// Takes one accepted step, never stepping past `s_end`.
    pub fn step(&mut self, s_end: f64) -> Result<(), StepFailure> {
        let mut k = [[0.0; N]; 7];
        loop {
            let h = self.h.min(self.control.h_max).min(s_end - self.s);
            if !(h > 1e-14 * self.s.abs().max(1.0)) {
                return Err(StepFailure::StepSizeUnderflow);
            }
            k[0] = self.k1;
            for stage in 1..7 {
                let mut tmp = self.y;
                for (j, kj) in k.iter().enumerate().take(stage) {
                    let a = A[stage][j];
                    if a != 0.0 {
                        for i in 0..N {
                            tmp[i] += h * a * kj[i];
                        }
                    }
                }
                let mut out = [0.0; N];
                (self.f)(self.s + C[stage] * h, &tmp, &mut out);
                k[stage] = out;
            }
            // 7th stage argument is the fifth-order solution (FSAL)
            let mut y_new = self.y;
            for (j, kj) in k.iter().enumerate().take(6) {
                for i in 0..N {
                    y_new[i] += h * A[6][j] * kj[i];
                }
            }
            if y_new.iter().any(|v| !v.is_finite()) {
                return Err(StepFailure::NonFinite);
            }
            let mut err = 0.0;
            for i in 0..N {
                let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * h;
                let sc = self.control.atol + self.control.rtol * self.y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() {
                return Err(StepFailure::NonFinite);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                self.s += h;
                self.y = y_new;
                self.k1 = k[6];
                self.h = h * factor;
                self.accepted += 1;
                return Ok(());
            }
            self.h = h * factor.min(1.0);
            self.rejected += 1;
        }
    }
}
