//! Dense small-matrix spectral utilities: Gershgorin row discs, their
//! connected components, and a real eigensolver.

mod discs;
mod eigen;
mod matrix;

use thiserror::Error;

pub use discs::{
    connected_components, deleted_row_sums, distance_to_union, gershgorin_discs, strictly_disjoint, Disc, DiscPartition,
};
pub use eigen::{eigenvalues, passes_det_residual, real_eigenvector, unstable_eigenvector, DET_RESIDUAL_TOL};
pub use matrix::{SquareMatrix, MAX_DIM, MIN_DIM};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix dimension {0} is outside the supported range 2..=16")]
    UnsupportedDimension(usize),
    #[error("row {row} has {len} entries, expected {n}")]
    RaggedRow { row: usize, len: usize, n: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("QR iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("no real eigenvalue with positive real part")]
    NoUnstableDirection,
    #[error("{0} eigenvalues have positive real part, expected exactly one")]
    MultipleUnstableDirections(usize),
    #[error("eigenvector residual {residual:e} exceeds tolerance")]
    EigenvectorResidual { residual: f64 },
}
