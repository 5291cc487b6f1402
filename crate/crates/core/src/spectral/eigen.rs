//! Eigenvalues of small dense real matrices.
//!
//! Pipeline: diagonal balancing, Householder reduction to upper Hessenberg
//! form, then Francis double-shift QR sweeps with deflation when a
//! subdiagonal entry drops below `1e-12·(|h_ii| + |h_jj|)`.
//! Eigenvectors for real eigenvalues come from inverse iteration on the
//! original matrix.

use num_complex::Complex64;

use super::{SpectralError, SquareMatrix};

const DEFLATION_TOL: f64 = 1e-12;
const SWEEPS_PER_DIM: usize = 500;

/// Relative bound for `|det(A − λI)|`, applied to `(2·max(‖A‖∞, |λ|, 1))ⁿ`.
pub const DET_RESIDUAL_TOL: f64 = 1e-9;

/// All `n` eigenvalues with multiplicity, sorted by real part then
/// imaginary part, so conjugate pairs sit next to each other.
pub fn eigenvalues(a: &SquareMatrix) -> Result<Vec<Complex64>, SpectralError> {
    let n = a.dim();
    let mut h: Vec<Vec<f64>> = a.rows();
    balance(&mut h);
    hessenberg(&mut h);
    let mut values = hqr(&mut h, SWEEPS_PER_DIM * n)?;
    values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(values)
}

/// Scale-adjusted characteristic-polynomial residual check.
pub fn passes_det_residual(a: &SquareMatrix, lambda: Complex64) -> bool {
    let scale = 2.0 * a.norm_inf().max(lambda.norm()).max(1.0);
    let bound = DET_RESIDUAL_TOL * scale.powi(a.dim() as i32);
    a.shifted_determinant(lambda).norm() <= bound
}

/// The unique eigenvalue with positive real part, which must be real, and a
/// unit eigenvector whose largest-magnitude component among the last
/// coordinates is oriented positive (see [`real_eigenvector`]).
pub fn unstable_eigenvector(a: &SquareMatrix) -> Result<(f64, Vec<f64>), SpectralError> {
    let values = eigenvalues(a)?;
    let unstable: Vec<Complex64> = values.into_iter().filter(|z| z.re > 0.0).collect();
    match unstable.as_slice() {
        [] => Err(SpectralError::NoUnstableDirection),
        [z] if z.im == 0.0 => {
            let v = real_eigenvector(a, z.re)?;
            Ok((z.re, v))
        }
        [_] => Err(SpectralError::NoUnstableDirection),
        many => Err(SpectralError::MultipleUnstableDirections(many.len())),
    }
}

/// Unit eigenvector for a real eigenvalue via inverse iteration, residual
/// checked against `1e-9·‖A‖∞`. The sign is fixed so that component
/// `n − 2` is positive when it is nonzero (for the 5-dimensional wave
/// Jacobian this is the `u4` slot); otherwise the first nonzero component
/// is made positive.
pub fn real_eigenvector(a: &SquareMatrix, lambda: f64) -> Result<Vec<f64>, SpectralError> {
    let n = a.dim();
    let norm = a.norm_inf().max(f64::MIN_POSITIVE);
    let mut shifted = a.rows();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    let lu = Lu::factor(shifted, f64::EPSILON * norm);

    let mut v = vec![1.0; n];
    for _ in 0..4 {
        let mut w = lu.solve(&v);
        let len = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(len.is_finite() && len > 0.0) {
            return Err(SpectralError::EigenvectorResidual {
                residual: f64::INFINITY,
            });
        }
        w.iter_mut().for_each(|x| *x /= len);
        v = w;
    }

    let pivot = if n >= 2 && v[n - 2].abs() > 1e-12 {
        n - 2
    } else {
        v.iter().position(|x| x.abs() > 1e-12).unwrap_or(0)
    };
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }

    let av = a.mul_vec(&v);
    let residual = av
        .iter()
        .zip(&v)
        .map(|(x, y)| (x - lambda * y).powi(2))
        .sum::<f64>()
        .sqrt();
    if residual > 1e-9 * norm {
        return Err(SpectralError::EigenvectorResidual { residual });
    }
    Ok(v)
}

struct Lu {
    m: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl Lu {
    /// Partial pivoting; exactly-zero pivots are replaced by `floor` so that
    /// inverse iteration at an exact eigenvalue still produces a direction.
    fn factor(mut m: Vec<Vec<f64>>, floor: f64) -> Self {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let p = (col..n)
                .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
                .unwrap_or(col);
            m.swap(col, p);
            perm.swap(col, p);
            if m[col][col].abs() < floor {
                m[col][col] = if m[col][col] < 0.0 { -floor } else { floor };
            }
            for r in col + 1..n {
                let f = m[r][col] / m[col][col];
                m[r][col] = f;
                for j in col + 1..n {
                    m[r][j] -= f * m[col][j];
                }
            }
        }
        Self { m, perm }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.m[i][j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.m[i][j] * x[j];
            }
            x[i] /= self.m[i][i];
        }
        x
    }
}

/// Diagonal similarity scaling by powers of two so that row and column
/// off-diagonal norms are comparable.
fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    let n = a.len();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[i][j] *= g;
                }
                for row in a.iter_mut() {
                    row[i] *= f;
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form in place.
fn hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        if (k + 2..n).all(|i| a[i][k] == 0.0) {
            continue;
        }
        let alpha_sq: f64 = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum();
        let norm = alpha_sq.sqrt();
        let x0 = a[k + 1][k];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // A ← H A
        for j in 0..n {
            let dot: f64 = (k + 1..n).map(|i| v[i - k - 1] * a[i][j]).sum();
            let f = 2.0 * dot / vnorm_sq;
            for i in k + 1..n {
                a[i][j] -= f * v[i - k - 1];
            }
        }
        // A ← A H
        for row in a.iter_mut() {
            let dot: f64 = (k + 1..n).map(|j| row[j] * v[j - k - 1]).sum();
            let f = 2.0 * dot / vnorm_sq;
            for j in k + 1..n {
                row[j] -= f * v[j - k - 1];
            }
        }
        a[k + 1][k] = alpha;
        for row in a.iter_mut().skip(k + 2) {
            row[k] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix.
fn hqr(a: &mut [Vec<f64>], budget: usize) -> Result<Vec<Complex64>, SpectralError> {
    let n = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }

    let mut total = 0usize;
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            // find a negligible subdiagonal element
            let mut l = nu;
            while l >= 1 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= DEFLATION_TOL * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }

            let mut x = a[nu][nu];
            if l == nu {
                out[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    let hi = x + z;
                    let lo = if z != 0.0 { x - w / z } else { hi };
                    out[nu - 1] = Complex64::new(hi, 0.0);
                    out[nu] = Complex64::new(lo, 0.0);
                } else {
                    out[nu - 1] = Complex64::new(x + p, -z);
                    out[nu] = Complex64::new(x + p, z);
                }
                nn -= 2;
                break;
            }

            if total >= budget {
                return Err(SpectralError::NoConvergence(total));
            }
            if its == 10 || its == 20 {
                // exceptional shift
                t += x;
                for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                    row[i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total += 1;

            // two consecutive small subdiagonal elements
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }

            // double QR step on rows l..=nu and columns m..=nu
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k != nu - 1 { a[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nu - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for row in a.iter_mut().take(mmin + 1).skip(l) {
                        let mut pp = x * row[k] + y * row[k + 1];
                        if k != nu - 1 {
                            pp += z * row[k + 2];
                            row[k + 2] -= pp * r;
                        }
                        row[k + 1] -= pp * q;
                        row[k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(out)
}
