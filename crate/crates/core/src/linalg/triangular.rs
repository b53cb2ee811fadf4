use super::DenseMatrix;
use crate::error::{check_len, Error, Result};

/// Forward substitution for `L x = b`. Only the lower triangle of `l` is read.
pub fn solve_lower_triangular(l: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = l.rows();
    check_len("solve_lower_triangular square", n, l.cols())?;
    check_len("solve_lower_triangular rhs", n, b.len())?;
    let tiny = f64::EPSILON * l.max_abs();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let row = l.row(i);
        let acc: f64 = row[..i].iter().zip(&x[..i]).map(|(a, b)| a * b).sum();
        let d = row[i];
        if d.abs() <= tiny || d == 0.0 {
            return Err(Error::Singular { index: i });
        }
        x[i] = (b[i] - acc) / d;
    }
    Ok(x)
}

/// Solves `Rᵀ x = b` for upper-triangular `r` without forming the transpose.
pub fn solve_upper_transpose(r: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = r.rows();
    check_len("solve_upper_transpose square", n, r.cols())?;
    check_len("solve_upper_transpose rhs", n, b.len())?;
    let tiny = f64::EPSILON * r.max_abs();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for (k, xk) in x.iter().enumerate().take(i) {
            acc += r[(k, i)] * xk;
        }
        let d = r[(i, i)];
        if d.abs() <= tiny || d == 0.0 {
            return Err(Error::Singular { index: i });
        }
        x[i] = (b[i] - acc) / d;
    }
    Ok(x)
}
