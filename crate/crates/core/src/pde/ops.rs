use crate::model::{EquilibriumPoint, ScaledParams};
use crate::spectral::{eigenvalues, SquareMatrix};

use super::stepper::explicit_stability_limit;
use super::{FieldState, Grid, Scheme};

/// Largest step [`suggested_dt`] returns.
pub const MAX_SUGGESTED_DT: f64 = 0.02;

/// Nodewise reaction terms `(dT1, dI1, dD1, dV1)`.
pub fn reaction_rhs(state: &FieldState, sp: &ScaledParams) -> [Vec<f64>; 4] {
    let n = state.len();
    let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    reaction_into(&state.fields, sp, &mut out);
    out
}

pub(crate) fn reaction_into(u: &[Vec<f64>; 4], sp: &ScaledParams, out: &mut [Vec<f64>; 4]) {
    let [t, i, d, v] = u;
    let [dt, di, dd, dv] = out;
    for k in 0..t.len() {
        let infection = v[k] * t[k];
        dt[k] = 1.0 - t[k] - infection;
        di[k] = infection - sp.rho1 * i[k];
        dd[k] = sp.rho2 * i[k] - sp.rho3 * d[k];
        dv[k] = sp.rho4 * d[k] - sp.rho5 * v[k];
    }
}

/// Jacobian of the nodewise reaction terms at `p`.
pub fn reaction_jacobian(sp: &ScaledParams, p: &EquilibriumPoint) -> SquareMatrix {
    let rows = [
        [-1.0 - p.v1, 0.0, 0.0, -p.t1],
        [p.v1, -sp.rho1, 0.0, p.t1],
        [0.0, sp.rho2, -sp.rho3, 0.0],
        [0.0, 0.0, sp.rho4, -sp.rho5],
    ];
    SquareMatrix::from_row_major(4, rows.concat()).expect("finite parameters give a finite Jacobian")
}

/// Step cap `min(0.02, 1/r)` with `r` the largest reaction spectral radius
/// over the equilibria; the explicit scheme is further held to half the
/// diffusive stability bound.
pub fn suggested_dt(sp: &ScaledParams, grid: &Grid, scheme: Scheme) -> f64 {
    let (e1, e2) = sp.equilibria();
    let radius = std::iter::once(e1)
        .chain(e2)
        .filter_map(|p| eigenvalues(&reaction_jacobian(sp, &p)).ok())
        .flat_map(|ev| ev.into_iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    let mut dt = MAX_SUGGESTED_DT;
    if radius > 0.0 {
        dt = dt.min(1.0 / radius);
    }
    if scheme == Scheme::ExplicitRk4 {
        dt = dt.min(0.5 * explicit_stability_limit(sp, grid));
    }
    dt
}

/// Second difference with ghost-node reflection at both ends.
pub fn diffusion_operator(v: &[f64], grid: &Grid) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    laplacian_into(v, grid.dx(), 1.0, &mut out);
    out
}

/// `out = scale · L v`.
pub(crate) fn laplacian_into(v: &[f64], dx: f64, scale: f64, out: &mut [f64]) {
    let n = v.len();
    let f = scale / (dx * dx);
    out[0] = f * 2.0 * (v[1] - v[0]);
    for k in 1..n - 1 {
        out[k] = f * (v[k - 1] - 2.0 * v[k] + v[k + 1]);
    }
    out[n - 1] = f * 2.0 * (v[n - 2] - v[n - 1]);
}

/// One-sided second-order estimates of `∂V1/∂x` at `x = 0` and `x = L`.
pub fn boundary_flux(state: &FieldState, grid: &Grid) -> (f64, f64) {
    let v = state.v1();
    let n = v.len();
    let h2 = 2.0 * grid.dx();
    let left = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / h2;
    let right = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / h2;
    (left, right)
}

/// First node of the maximum and its coordinate.
pub fn peak_location(v: &[f64], grid: &Grid) -> (usize, f64) {
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = k;
        }
    }
    (best, grid.x(best))
}

/// Extent `x_last − x_first` of the nodes where `v` exceeds half its maximum.
/// Zero for a non-positive field.
pub fn half_max_width(v: &[f64], grid: &Grid) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return 0.0;
    }
    let half = 0.5 * max;
    let first = v.iter().position(|x| *x > half);
    let last = v.iter().rposition(|x| *x > half);
    match (first, last) {
        (Some(a), Some(b)) => grid.x(b) - grid.x(a),
        _ => 0.0,
    }
}
