use crate::model::{equilibria, EquilibriumPoint, ScaledParams};
use crate::spectral::SquareMatrix;

use super::{WaveError, WaveParams, WaveState};

/// Right-hand side of the first-order wave system:
///
/// ```text
/// u1' = (1 − u1 − u1·u4) / c
/// u2' = (u1·u4 − ρ1·u2) / c
/// u3' = (ρ2·u2 − ρ3·u3) / c
/// u4' = u5
/// u5' = (c·u5 − ρ4·u3 + ρ5·u4) / Dv
/// ```
pub fn wave_rhs(u: &WaveState, wp: &WaveParams) -> WaveState {
    let mut out = [0.0; 5];
    wave_rhs_into(&u.0, wp, &mut out);
    WaveState(out)
}

pub fn wave_rhs_into(u: &[f64; 5], wp: &WaveParams, out: &mut [f64; 5]) {
    let sp = &wp.sp;
    let c = wp.c;
    let [u1, u2, u3, u4, u5] = *u;
    out[0] = (1.0 - u1 - u1 * u4) / c;
    out[1] = (u1 * u4 - sp.rho1 * u2) / c;
    out[2] = (sp.rho2 * u2 - sp.rho3 * u3) / c;
    out[3] = u5;
    out[4] = (c * u5 - sp.rho4 * u3 + sp.rho5 * u4) / sp.dv;
}

/// `E1* = (1,0,0,0,0)` and the endemic point extended by `u5 = 0`.
pub fn boundary_states(sp: &ScaledParams) -> Result<(WaveState, WaveState), WaveError> {
    let (_, endemic) = equilibria(sp);
    let EquilibriumPoint { t1, i1, d1, v1 } = endemic.ok_or(WaveError::NoEndemicEquilibrium {
        r0: sp.basic_reproduction_number(),
    })?;
    Ok((WaveState::DISEASE_FREE, WaveState([t1, i1, d1, v1, 0.0])))
}

/// Jacobian of [`wave_rhs`] at `E1*`.
pub fn jacobian_disease_free(wp: &WaveParams) -> SquareMatrix {
    let sp = &wp.sp;
    let c = wp.c;
    let dv = sp.dv;
    let rows = [
        [-1.0 / c, 0.0, 0.0, -1.0 / c, 0.0],
        [0.0, -sp.rho1 / c, 0.0, 1.0 / c, 0.0],
        [0.0, sp.rho2 / c, -sp.rho3 / c, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -sp.rho4 / dv, sp.rho5 / dv, c / dv],
    ];
    SquareMatrix::from_row_major(5, rows.concat()).expect("wave Jacobian entries are finite")
}

/// The 4×4 block left after removing the decoupled `u1` row and column.
/// Its spectrum plus `−1/c` is the spectrum of the full Jacobian.
pub fn submatrix(wp: &WaveParams) -> SquareMatrix {
    jacobian_disease_free(wp).delete(0).expect("5x5 minus one row is 4x4")
}

/// Sufficient speed bound `c* = Dv + ρ4 + ρ5`.
pub fn minimal_wave_speed(sp: &ScaledParams) -> f64 {
    sp.dv + sp.rho4 + sp.rho5
}
