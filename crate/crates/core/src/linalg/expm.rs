use super::DenseMatrix;
use crate::error::{check_len, Error, Result};

const TAYLOR_TERMS: usize = 24;

/// `exp(A t)` by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1/2, summed to
/// 24 terms and squared back `s` times.
pub fn matrix_exponential(a: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    let n = a.rows();
    check_len("matrix_exponential square", n, a.cols())?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument("time must be finite".into()));
    }
    let mut at = a.clone();
    at.scale(t);

    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| at[(i, j)].abs()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let mut squarings = 0u32;
    if norm1 > 0.5 {
        squarings = (norm1 / 0.5).log2().ceil() as u32;
    }
    at.scale(0.5_f64.powi(squarings as i32));

    let mut result = DenseMatrix::identity(n);
    let mut term = DenseMatrix::identity(n);
    for k in 1..=TAYLOR_TERMS {
        term = term.matmul(&at)?;
        term.scale(1.0 / k as f64);
        if term.max_abs() == 0.0 {
            break;
        }
        result = result.add(&term)?;
    }
    for _ in 0..squarings {
        result = result.matmul(&result)?;
    }
    Ok(result)
}

/// Zero-order-hold discretization of `ẋ = A x + B u` with sample time `dt`.
///
/// Returns `(A_d, B_d)` read off `exp([[A, B], [0, 0]] dt)`.
pub fn zero_order_hold(
    a: &DenseMatrix,
    b: &DenseMatrix,
    dt: f64,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let (nx, nu) = (a.rows(), b.cols());
    check_len("zero_order_hold A square", nx, a.cols())?;
    check_len("zero_order_hold B rows", nx, b.rows())?;
    let mut aug = DenseMatrix::zeros(nx + nu, nx + nu);
    for i in 0..nx {
        for j in 0..nx {
            aug[(i, j)] = a[(i, j)];
        }
        for j in 0..nu {
            aug[(i, nx + j)] = b[(i, j)];
        }
    }
    let e = matrix_exponential(&aug, dt)?;
    let mut ad = DenseMatrix::zeros(nx, nx);
    let mut bd = DenseMatrix::zeros(nx, nu);
    for i in 0..nx {
        for j in 0..nx {
            ad[(i, j)] = e[(i, j)];
        }
        for j in 0..nu {
            bd[(i, j)] = e[(i, nx + j)];
        }
    }
    Ok((ad, bd))
}
