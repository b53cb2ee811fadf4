use nalgebra::DMatrix;
use pipg_core::linalg::{
    power_iteration_max_eig, qr_economy, solve_upper_transpose, CscMatrix, DenseMatrix,
};
use proptest::prelude::*;

fn dense(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-5.0..5.0f64, rows * cols)
        .prop_map(move |d| DenseMatrix::from_row_major(rows, cols, d).unwrap())
}

fn tall() -> impl Strategy<Value = DenseMatrix> {
    (1usize..12).prop_flat_map(|cols| (cols..20).prop_flat_map(move |rows| dense(rows, cols)))
}

/// Zeroes roughly half the entries so CSC storage is exercised.
fn sparse(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    (
        dense(rows, cols),
        prop::collection::vec(any::<bool>(), rows * cols),
    )
        .prop_map(move |(d, keep)| {
            let data = d
                .as_slice()
                .iter()
                .zip(keep)
                .map(|(v, k)| if k { *v } else { 0.0 })
                .collect();
            DenseMatrix::from_row_major(rows, cols, data).unwrap()
        })
}

fn to_na(d: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(d.rows(), d.cols(), d.as_slice())
}

proptest! {
    #[test]
    fn qr_reconstructs(a in tall()) {
        // Random Gaussian-like matrices have full column rank almost surely;
        // skip the rare rank-deficient draw.
        let Ok(f) = qr_economy(&a) else { return Ok(()) };
        let back = f.q.matmul(&f.r).unwrap();
        let scale = 1.0 + a.max_abs();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                prop_assert!((back[(i, j)] - a[(i, j)]).abs() <= 1e-10 * scale);
            }
        }
        let qtq = f.q.transpose().matmul(&f.q).unwrap();
        for i in 0..a.cols() {
            prop_assert!(f.r[(i, i)] > 0.0);
            for j in 0..a.cols() {
                let e = if i == j { 1.0 } else { 0.0 };
                prop_assert!((qtq[(i, j)] - e).abs() <= 1e-12);
                if i > j {
                    prop_assert_eq!(f.r[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn triangular_solve_inverts(a in tall(), b in prop::collection::vec(-5.0..5.0f64, 12)) {
        let Ok(f) = qr_economy(&a) else { return Ok(()) };
        let n = a.cols();
        let x = solve_upper_transpose(&f.r, &b[..n]).unwrap();
        // Rᵀx = b
        let mut rtx = vec![0.0; n];
        f.r.mul_vec_transpose_into(&x, &mut rtx).unwrap();
        let cond = to_na(&f.r).singular_values();
        let kappa = cond.max() / cond.min();
        for (u, v) in rtx.iter().zip(&b[..n]) {
            prop_assert!((u - v).abs() <= 1e-12 * kappa * (1.0 + v.abs()) * 10.0);
        }
    }

    #[test]
    fn power_iteration_matches_eigenvalues(m in (2usize..10).prop_flat_map(|n| dense(n, n))) {
        let n = m.rows();
        let a = to_na(&m);
        let spd = a.transpose() * &a;
        let top = spd.symmetric_eigenvalues().max();
        let r = power_iteration_max_eig(
            |x, y| {
                let v = &spd * nalgebra::DVector::from_column_slice(x);
                y.copy_from_slice(v.as_slice());
            },
            n,
            1e-12,
            100_000,
            7,
        );
        prop_assert!(r.value <= top * (1.0 + 1e-9));
        if r.converged {
            prop_assert!((r.value - top).abs() <= 1e-6 * top.max(1e-12));
        }
    }

    #[test]
    fn csc_matches_dense((d, x, y) in (1usize..10, 1usize..10).prop_flat_map(|(r, c)| {
        (sparse(r, c), prop::collection::vec(-5.0..5.0f64, c), prop::collection::vec(-5.0..5.0f64, r))
    })) {
        let s = CscMatrix::from_dense(&d);
        prop_assert_eq!(s.to_dense(), d.clone());
        let mut a = vec![0.0; d.rows()];
        let mut b = vec![0.0; d.rows()];
        s.mul_vec_into(&x, &mut a).unwrap();
        d.mul_vec_into(&x, &mut b).unwrap();
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
        let mut a = vec![0.0; d.cols()];
        let mut b = vec![0.0; d.cols()];
        s.mul_vec_transpose_into(&y, &mut a).unwrap();
        d.mul_vec_transpose_into(&y, &mut b).unwrap();
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
        prop_assert_eq!(s.transpose().to_dense(), d.transpose());
    }
}
