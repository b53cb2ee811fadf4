//! The canonical problem `min ½zᵀPz + qᵀz  s.t.  Hz = g, z ∈ D`, its spectral
//! data, the KKT condition-number bound and solution-quality metrics.

mod io;
mod metrics;
mod spectral;

pub use io::{problem_from_json, problem_to_json};
pub use metrics::{error_metrics, kkt_residual, lagrangian};
pub use spectral::{
    hessian_extremes, kkt_bound_arguments, kkt_condition_bound, kkt_condition_bound_from,
    kkt_eigen_intervals, optimal_singular_value, spectral_estimates, with_sigma_min, SpectralData,
};

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, qr_economy, DenseMatrix, Matrix};
use crate::projections::ProductSet;

/// The quadratic cost Hessian `P`.
#[derive(Debug, Clone, PartialEq)]
pub enum CostHessian {
    Diagonal(Vec<f64>),
    Dense(DenseMatrix),
}

impl CostHessian {
    pub fn dim(&self) -> usize {
        match self {
            CostHessian::Diagonal(d) => d.len(),
            CostHessian::Dense(m) => m.rows(),
        }
    }

    /// `out = P x`
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        match self {
            CostHessian::Diagonal(d) => {
                for ((o, di), xi) in out.iter_mut().zip(d).zip(x) {
                    *o = di * xi;
                }
            }
            CostHessian::Dense(m) => m.mul_vec_into(x, out).expect("dimensions checked"),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            CostHessian::Diagonal(d) => DenseMatrix::from_diagonal(d),
            CostHessian::Dense(m) => m.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CostHessian::Diagonal(d) => {
                if d.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(Error::InvalidArgument(
                        "diagonal cost Hessian must have positive entries".into(),
                    ));
                }
            }
            CostHessian::Dense(m) => {
                check_len("dense cost Hessian square", m.rows(), m.cols())?;
                let n = m.rows();
                let scale = m.max_abs().max(1.0);
                for i in 0..n {
                    for j in 0..i {
                        if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                            return Err(Error::InvalidArgument(
                                "cost Hessian must be symmetric".into(),
                            ));
                        }
                    }
                }
                let mat = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
                if nalgebra::linalg::Cholesky::new(mat).is_none() {
                    return Err(Error::InvalidArgument(
                        "cost Hessian must be positive definite".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Problem data `(P, q, H, g, D)` with `H ∈ R^{m×n}`, `m ≤ n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalProblem {
    pub p: CostHessian,
    pub q: Vec<f64>,
    pub h: Matrix,
    pub g: Vec<f64>,
    pub d: ProductSet,
}

impl CanonicalProblem {
    /// Checks dimensions, `m ≤ n` and positive definiteness of `P`. Full row
    /// rank of `H` is checked separately by [`CanonicalProblem::check_full_row_rank`].
    pub fn new(
        p: CostHessian,
        q: Vec<f64>,
        h: impl Into<Matrix>,
        g: Vec<f64>,
        d: ProductSet,
    ) -> Result<Self> {
        let h = h.into();
        let n = q.len();
        check_len("P dimension", n, p.dim())?;
        check_len("H columns", n, h.cols())?;
        check_len("g length", h.rows(), g.len())?;
        check_len("D dimension", n, d.dim())?;
        if h.rows() > n {
            return Err(Error::InvalidArgument(format!(
                "more equality rows ({}) than variables ({n})",
                h.rows()
            )));
        }
        if q.iter().chain(&g).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("q and g must be finite".into()));
        }
        p.validate()?;
        Ok(Self { p, q, h, g, d })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn m(&self) -> usize {
        self.g.len()
    }

    pub fn objective(&self, z: &[f64]) -> f64 {
        let mut pz = vec![0.0; self.n()];
        self.p.apply(z, &mut pz);
        0.5 * dot(z, &pz) + dot(&self.q, z)
    }

    /// `Hz − g`
    pub fn equality_residual(&self, z: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.h.matvec(z, false)?;
        r.iter_mut().zip(&self.g).for_each(|(ri, gi)| *ri -= gi);
        Ok(r)
    }

    /// Full row rank of `H`, tested by economy QR of `Hᵀ`.
    pub fn check_full_row_rank(&self) -> Result<()> {
        if self.m() == 0 {
            return Ok(());
        }
        qr_economy(&self.h.to_dense().transpose()).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projections::ProductSet;

    #[test]
    fn rejects_bad_dimensions() {
        let h = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let err = CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0, 1.0]),
            vec![0.0, 0.0],
            h.clone(),
            vec![1.0, 2.0],
            ProductSet::full_space(2),
        );
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        let err = CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0, 0.0]),
            vec![0.0, 0.0],
            h,
            vec![1.0],
            ProductSet::full_space(2),
        );
        assert!(err.is_err());
    }

    #[test]
    fn rejects_indefinite_dense_hessian() {
        let p = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let err = CanonicalProblem::new(
            CostHessian::Dense(p),
            vec![0.0, 0.0],
            DenseMatrix::zeros(0, 2),
            vec![],
            ProductSet::full_space(2),
        );
        assert!(err.is_err());
    }

    #[test]
    fn rank_check() {
        let h = DenseMatrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]]).unwrap();
        let prob = CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0; 3]),
            vec![0.0; 3],
            h,
            vec![0.0, 0.0],
            ProductSet::full_space(3),
        )
        .unwrap();
        assert!(matches!(
            prob.check_full_row_rank(),
            Err(Error::RankDeficient { .. })
        ));
    }
}
