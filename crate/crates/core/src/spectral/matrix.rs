use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SpectralError;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 16;

/// Dense real square matrix, row-major, `2 ≤ n ≤ 16`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SpectralError> {
        let n = rows.len();
        check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SpectralError::RaggedRow {
                    row: i,
                    len: row.len(),
                    n,
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self, SpectralError> {
        check_dim(n)?;
        if data.len() != n * n {
            return Err(SpectralError::RaggedRow {
                row: 0,
                len: data.len(),
                n,
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Result<Self, SpectralError> {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self, SpectralError> {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Self::from_row_major(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Copy with row and column `k` removed.
    pub fn delete(&self, k: usize) -> Result<Self, SpectralError> {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != k).collect();
        let data = keep
            .iter()
            .flat_map(|&i| keep.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self[(i, j)])
            .collect();
        Self::from_row_major(keep.len(), data)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `det(A − zI)` by Gaussian elimination with partial pivoting in
    /// complex arithmetic.
    pub fn shifted_determinant(&self, z: Complex64) -> Complex64 {
        let n = self.n;
        let mut m: Vec<Complex64> = self.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        for i in 0..n {
            m[i * n + i] -= z;
        }
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| m[a * n + col].norm().total_cmp(&m[b * n + col].norm()))
                .unwrap_or(col);
            if m[pivot * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = m[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = m[r * n + col] / p;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let upd = f * m[col * n + j];
                    m[r * n + j] -= upd;
                }
            }
        }
        det
    }

    pub fn determinant(&self) -> f64 {
        self.shifted_determinant(Complex64::new(0.0, 0.0)).re
    }
}

fn check_dim(n: usize) -> Result<(), SpectralError> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(SpectralError::UnsupportedDimension(n))
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl TryFrom<Vec<Vec<f64>>> for SquareMatrix {
    type Error = SpectralError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Self::from_rows(&rows)
    }
}

impl From<SquareMatrix> for Vec<Vec<f64>> {
    fn from(m: SquareMatrix) -> Self {
        m.rows()
    }
}
