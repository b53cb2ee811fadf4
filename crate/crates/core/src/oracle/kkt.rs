use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::problem::CanonicalProblem;

/// Largest `n + m` for which the dense KKT system is formed.
pub const MAX_DENSE_KKT: usize = 2000;

/// Solves `[[P, Hᵀ], [H, 0]] (z, w) = (−q, g)` by dense LU. Only valid when `D`
/// is the whole space.
pub fn kkt_direct_solve(prob: &CanonicalProblem) -> Result<(Vec<f64>, Vec<f64>)> {
    if !prob.d.is_full_space() {
        return Err(Error::InvalidArgument(
            "direct KKT solve needs D to be the whole space".into(),
        ));
    }
    let (n, m) = (prob.n(), prob.m());
    if n + m > MAX_DENSE_KKT {
        return Err(Error::InvalidArgument(format!(
            "dense KKT system of size {} exceeds {MAX_DENSE_KKT}",
            n + m
        )));
    }
    let p = prob.p.to_dense();
    let h = prob.h.to_dense();
    let mut k = DMatrix::<f64>::zeros(n + m, n + m);
    for i in 0..n {
        for j in 0..n {
            k[(i, j)] = p[(i, j)];
        }
    }
    for i in 0..m {
        for j in 0..n {
            k[(n + i, j)] = h[(i, j)];
            k[(j, n + i)] = h[(i, j)];
        }
    }
    let rhs = DVector::from_iterator(
        n + m,
        prob.q.iter().map(|v| -v).chain(prob.g.iter().copied()),
    );
    let sol = k
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::OracleFailure("KKT matrix is singular".into()))?;
    let z = sol.rows(0, n).iter().copied().collect();
    let w = sol.rows(n, m).iter().copied().collect();
    Ok((z, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::problem::{kkt_residual, CostHessian};
    use crate::projections::{ProductSet, SetDescriptor};

    #[test]
    fn averaging_problem() {
        let prob = CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0, 1.0]),
            vec![0.0, 0.0],
            DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
            vec![1.0],
            ProductSet::full_space(2),
        )
        .unwrap();
        let (z, w) = kkt_direct_solve(&prob).unwrap();
        assert!((z[0] - 0.5).abs() < 1e-15 && (z[1] - 0.5).abs() < 1e-15);
        assert!((w[0] + 0.5).abs() < 1e-15);
        assert!(kkt_residual(&prob, &z, &w, 1.0 / 3.0).unwrap() < 1e-12);
    }

    #[test]
    fn unconstrained_and_zero() {
        let prob = CanonicalProblem::new(
            CostHessian::Diagonal(vec![2.0, 4.0]),
            vec![-2.0, 1.0],
            DenseMatrix::zeros(0, 2),
            vec![],
            ProductSet::full_space(2),
        )
        .unwrap();
        let (z, w) = kkt_direct_solve(&prob).unwrap();
        assert_eq!(z, vec![1.0, -0.25]);
        assert!(w.is_empty());

        let zero = CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0, 1.0]),
            vec![0.0, 0.0],
            DenseMatrix::from_rows(&[vec![1.0, 2.0]]).unwrap(),
            vec![0.0],
            ProductSet::full_space(2),
        )
        .unwrap();
        let (z, w) = kkt_direct_solve(&zero).unwrap();
        assert!(z.iter().chain(&w).all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn refuses_constrained_sets() {
        let prob = CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0]),
            vec![0.0],
            DenseMatrix::zeros(0, 1),
            vec![],
            ProductSet::from_sets([(SetDescriptor::symmetric_box(1, 1.0), 1)]).unwrap(),
        )
        .unwrap();
        assert!(kkt_direct_solve(&prob).is_err());
    }
}
