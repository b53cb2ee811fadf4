//! Dense and sparse kernels used by the solver: products, economy QR,
//! triangular solves, power iteration and the matrix exponential.

mod dense;
mod expm;
mod power;
mod qr;
mod sparse;
mod triangular;

pub use dense::{dist2, dist_inf, dot, norm2, norm_inf, DenseMatrix};
pub use expm::{matrix_exponential, zero_order_hold};
pub use power::{
    power_iteration_max_eig, PowerIteration, DEFAULT_POWER_MAX_ITERS, DEFAULT_POWER_TOL,
};
pub use qr::{qr_economy, EconomyQr, RANK_TOL};
pub use sparse::CscMatrix;
pub use triangular::{solve_lower_triangular, solve_upper_transpose};

use crate::error::Result;

/// Bytes per stored value and per stored index in the storage accounting.
pub const VALUE_BYTES: usize = 8;
pub const INDEX_BYTES: usize = 8;

/// A matrix in either storage format; products dispatch on the variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Dense(DenseMatrix),
    Sparse(CscMatrix),
}

impl Matrix {
    pub fn rows(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.rows(),
            Matrix::Sparse(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.cols(),
            Matrix::Sparse(m) => m.cols(),
        }
    }

    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        match self {
            Matrix::Dense(m) => m.mul_vec_into(x, out),
            Matrix::Sparse(m) => m.mul_vec_into(x, out),
        }
    }

    pub fn mul_vec_transpose_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        match self {
            Matrix::Dense(m) => m.mul_vec_transpose_into(x, out),
            Matrix::Sparse(m) => m.mul_vec_transpose_into(x, out),
        }
    }

    /// `M x` (or `Mᵀ x` when `transpose`) as a fresh vector.
    pub fn matvec(&self, x: &[f64], transpose: bool) -> Result<Vec<f64>> {
        if transpose {
            let mut out = vec![0.0; self.cols()];
            self.mul_vec_transpose_into(x, &mut out)?;
            Ok(out)
        } else {
            let mut out = vec![0.0; self.rows()];
            self.mul_vec_into(x, &mut out)?;
            Ok(out)
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Matrix::Dense(m) => m.clone(),
            Matrix::Sparse(m) => m.to_dense(),
        }
    }

    /// Storage footprint: dense keeps every value, CSC keeps values, row
    /// indices and `cols + 1` column pointers.
    pub fn storage_bytes(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.rows() * m.cols() * VALUE_BYTES,
            Matrix::Sparse(m) => {
                m.nnz() * (VALUE_BYTES + INDEX_BYTES) + (m.cols() + 1) * INDEX_BYTES
            }
        }
    }
}

impl From<DenseMatrix> for Matrix {
    fn from(m: DenseMatrix) -> Self {
        Matrix::Dense(m)
    }
}

impl From<CscMatrix> for Matrix {
    fn from(m: CscMatrix) -> Self {
        Matrix::Sparse(m)
    }
}
