/// Factored tridiagonal matrix for repeated Thomas solves.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    lower: Vec<f64>,
    /// Modified super-diagonal `c'_i`.
    cp: Vec<f64>,
    /// Pivots `b_i − a_i c'_{i−1}`.
    pivot: Vec<f64>,
}

impl Tridiagonal {
    /// `lower[0]` and `upper[n−1]` are ignored.
    pub fn new(lower: Vec<f64>, diag: &[f64], upper: &[f64]) -> Self {
        let n = diag.len();
        let mut cp = vec![0.0; n];
        let mut pivot = vec![0.0; n];
        pivot[0] = diag[0];
        cp[0] = upper[0] / pivot[0];
        for i in 1..n {
            pivot[i] = diag[i] - lower[i] * cp[i - 1];
            cp[i] = if i + 1 < n { upper[i] / pivot[i] } else { 0.0 };
        }
        Self { lower, cp, pivot }
    }

    /// `I − r·dx²·L` for the reflected-ghost Laplacian `L`.
    pub fn neumann_resolvent(n: usize, r: f64) -> Self {
        let mut lower = vec![-r; n];
        let mut upper = vec![-r; n];
        let diag = vec![1.0 + 2.0 * r; n];
        upper[0] = -2.0 * r;
        lower[n - 1] = -2.0 * r;
        Self::new(lower, &diag, &upper)
    }

    pub fn len(&self) -> usize {
        self.pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivot.is_empty()
    }

    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.len();
        rhs[0] /= self.pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) / self.pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.cp[i] * rhs[i + 1];
        }
    }
}
