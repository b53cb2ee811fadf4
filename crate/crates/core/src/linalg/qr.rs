use super::DenseMatrix;
use crate::error::{Error, Result};

/// Economy QR factorization `A = Q R` of a tall matrix.
#[derive(Debug, Clone)]
pub struct EconomyQr {
    /// `rows × cols`, orthonormal columns.
    pub q: DenseMatrix,
    /// `cols × cols`, upper triangular with strictly positive diagonal.
    pub r: DenseMatrix,
}

/// Relative factor of the rank test: a diagonal entry of `R` counts as zero
/// when it falls below `RANK_TOL * ‖A‖_max * max(rows, cols)`.
pub const RANK_TOL: f64 = 1e-10;

/// Householder economy QR with the sign convention `R[i,i] > 0`.
///
/// Fails with [`Error::RankDeficient`] when `A` does not have full column rank.
pub fn qr_economy(a: &DenseMatrix) -> Result<EconomyQr> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "economy QR needs rows >= cols, got {m}x{n}"
        )));
    }
    let tol = RANK_TOL * a.max_abs() * m.max(n) as f64;

    // Columns stored contiguously; every reflector touches whole column tails.
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)]).collect())
        .collect();
    let mut reflectors: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n);
    let mut r = DenseMatrix::zeros(n, n);

    for k in 0..n {
        let mut v = cols[k][k..].to_vec();
        let x0 = v[0];
        let norm_x = v.iter().map(|e| e * e).sum::<f64>().sqrt();
        let alpha = if x0 >= 0.0 { -norm_x } else { norm_x };
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|e| e * e).sum();
        let beta = if vtv > 0.0 { 2.0 / vtv } else { 0.0 };

        for col in cols.iter_mut().skip(k + 1) {
            let tail = &mut col[k..];
            let s = beta * v.iter().zip(tail.iter()).map(|(a, b)| a * b).sum::<f64>();
            if s != 0.0 {
                tail.iter_mut().zip(&v).for_each(|(t, vi)| *t -= s * vi);
            }
        }
        // Column k becomes (alpha, 0, ..., 0) below the diagonal.
        let diag = if beta == 0.0 { x0 } else { alpha };
        if diag.abs() <= tol || !diag.is_finite() {
            return Err(Error::RankDeficient {
                index: k,
                value: diag.abs(),
                tol,
            });
        }
        r[(k, k)] = diag;
        for j in k + 1..n {
            r[(k, j)] = cols[j][k];
        }
        reflectors.push((v, beta));
    }

    // Q = H_0 H_1 ... H_{n-1} [I_n; 0], accumulated backwards one column at a time.
    let mut q_cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            e
        })
        .collect();
    for (k, (v, beta)) in reflectors.iter().enumerate().rev() {
        if *beta == 0.0 {
            continue;
        }
        // Columns j < k are e_j with zeros in rows k.., so H_k leaves them alone.
        for col in q_cols.iter_mut().skip(k) {
            let tail = &mut col[k..];
            let s = beta * v.iter().zip(tail.iter()).map(|(a, b)| a * b).sum::<f64>();
            if s != 0.0 {
                tail.iter_mut().zip(v).for_each(|(t, vi)| *t -= s * vi);
            }
        }
    }

    // Flip signs so that diag(R) > 0; Q absorbs the matching column flips.
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            for j in k..n {
                r[(k, j)] = -r[(k, j)];
            }
            q_cols[k].iter_mut().for_each(|v| *v = -*v);
        }
    }

    let mut q = DenseMatrix::zeros(m, n);
    for (j, col) in q_cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            q[(i, j)] = v;
        }
    }
    Ok(EconomyQr { q, r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &DenseMatrix, b: &DenseMatrix, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                assert!(
                    (a[(i, j)] - b[(i, j)]).abs() <= tol,
                    "entry ({i},{j}): {} vs {}",
                    a[(i, j)],
                    b[(i, j)]
                );
            }
        }
    }

    #[test]
    fn identity_factors_trivially() {
        let f = qr_economy(&DenseMatrix::identity(3)).unwrap();
        assert_close(&f.q, &DenseMatrix::identity(3), 1e-15);
        assert_close(&f.r, &DenseMatrix::identity(3), 1e-15);
    }

    #[test]
    fn three_four_five() {
        let a = DenseMatrix::from_rows(&[vec![3.0], vec![4.0]]).unwrap();
        let f = qr_economy(&a).unwrap();
        assert_close(
            &f.q,
            &DenseMatrix::from_rows(&[vec![0.6], vec![0.8]]).unwrap(),
            1e-15,
        );
        assert!((f.r[(0, 0)] - 5.0).abs() < 1e-14);
        // oracle: QR = A and QᵀQ = I
        assert_close(&f.q.matmul(&f.r).unwrap(), &a, 1e-14);
        assert_close(
            &f.q.transpose().matmul(&f.q).unwrap(),
            &DenseMatrix::identity(1),
            1e-15,
        );
    }

    #[test]
    fn diagonal_input_keeps_positive_diagonal() {
        let a = DenseMatrix::from_diagonal(&[2.0, 3.0]);
        let f = qr_economy(&a).unwrap();
        assert_close(&f.q, &DenseMatrix::identity(2), 1e-15);
        assert_close(&f.r, &a, 1e-15);
    }

    #[test]
    fn negative_column_gets_sign_flipped() {
        let a =
            DenseMatrix::from_rows(&[vec![-2.0, 1.0], vec![0.0, -1.0], vec![0.0, 0.0]]).unwrap();
        let f = qr_economy(&a).unwrap();
        assert!(f.r[(0, 0)] > 0.0 && f.r[(1, 1)] > 0.0);
        assert_close(&f.q.matmul(&f.r).unwrap(), &a, 1e-14);
    }

    #[test]
    fn detects_rank_deficiency() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]).unwrap();
        assert!(matches!(
            qr_economy(&a),
            Err(Error::RankDeficient { index: 1, .. })
        ));
    }

    #[test]
    fn rejects_wide_input() {
        assert!(qr_economy(&DenseMatrix::zeros(1, 2)).is_err());
    }
}
