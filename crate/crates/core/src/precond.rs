//! QR preconditioning of the equality constraints.
//!
//! With `Hᵀ = QR` (economy), `Hz = g` is equivalent to `ηQᵀz = ηR⁻ᵀg`. The new
//! constraint matrix `Ĥ = ηQᵀ` has orthogonal rows of length `η`, so all its
//! singular values equal `η`. Picking `η = √(λmax·λmin + λmin²)` minimizes the
//! KKT condition-number bound. The set `D` is left untouched.

use crate::error::{Error, Result};
use crate::linalg::{qr_economy, solve_upper_transpose, DenseMatrix, Matrix};
use crate::problem::{optimal_singular_value, CanonicalProblem, SpectralData};
use crate::solver::ProblemView;

/// Preconditioned equality constraints `Ĥz = ĝ` for a source problem.
#[derive(Debug, Clone)]
pub struct PreconditionedProblem<'a> {
    pub source: &'a CanonicalProblem,
    pub eta: f64,
    /// `ηQᵀ`, stored dense.
    pub h_hat: Matrix,
    pub g_hat: Vec<f64>,
    /// Triangular factor of `Hᵀ = QR`.
    pub r: DenseMatrix,
    /// Spectral data of the source `P` with `σ = σ_min = η²`.
    pub spectral: SpectralData,
}

pub fn qr_precondition<'a>(
    prob: &'a CanonicalProblem,
    s: &SpectralData,
) -> Result<PreconditionedProblem<'a>> {
    let eta = optimal_singular_value(s.lambda_max, s.lambda_min)?;
    let (m, n) = (prob.m(), prob.n());
    let spectral = SpectralData {
        sigma: if m == 0 { s.sigma } else { eta * eta },
        sigma_min: Some(eta * eta),
        ..*s
    };
    if m == 0 {
        return Ok(PreconditionedProblem {
            source: prob,
            eta,
            h_hat: Matrix::Dense(DenseMatrix::zeros(0, n)),
            g_hat: Vec::new(),
            r: DenseMatrix::zeros(0, 0),
            spectral,
        });
    }

    let ht = prob.h.to_dense().transpose();
    let qr = qr_economy(&ht).map_err(|e| Error::Preconditioning(Box::new(e)))?;
    let mut h_hat = qr.q.transpose();
    h_hat.scale(eta);
    let mut g_hat =
        solve_upper_transpose(&qr.r, &prob.g).map_err(|e| Error::Preconditioning(Box::new(e)))?;
    g_hat.iter_mut().for_each(|v| *v *= eta);

    Ok(PreconditionedProblem {
        source: prob,
        eta,
        h_hat: Matrix::Dense(h_hat),
        g_hat,
        r: qr.r,
        spectral,
    })
}

impl PreconditionedProblem<'_> {
    /// The preconditioned problem as seen by the solver: source `P, q, D`
    /// with `Ĥ, ĝ`.
    pub fn view(&self) -> ProblemView<'_> {
        ProblemView {
            p: &self.source.p,
            q: &self.source.q,
            h: &self.h_hat,
            g: &self.g_hat,
            d: &self.source.d,
        }
    }

    /// Standalone problem with the preconditioned constraints.
    pub fn to_problem(&self) -> Result<CanonicalProblem> {
        CanonicalProblem::new(
            self.source.p.clone(),
            self.source.q.clone(),
            self.h_hat.clone(),
            self.g_hat.clone(),
            self.source.d.clone(),
        )
    }

    /// Reuses the factorization for a problem sharing `P` and `H` with the
    /// source. Only `ĝ = ηR⁻ᵀg` is recomputed.
    pub fn retarget<'b>(&self, prob: &'b CanonicalProblem) -> Result<PreconditionedProblem<'b>> {
        if prob.p != self.source.p || prob.h != self.source.h {
            return Err(Error::InvalidArgument(
                "retarget needs the same P and H as the factorized problem".into(),
            ));
        }
        let g_hat = if prob.m() == 0 {
            Vec::new()
        } else {
            let mut g_hat = solve_upper_transpose(&self.r, &prob.g)
                .map_err(|e| Error::Preconditioning(Box::new(e)))?;
            g_hat.iter_mut().for_each(|v| *v *= self.eta);
            g_hat
        };
        Ok(PreconditionedProblem {
            source: prob,
            eta: self.eta,
            h_hat: self.h_hat.clone(),
            g_hat,
            r: self.r.clone(),
            spectral: self.spectral,
        })
    }
}

/// `‖ĤĤᵀ − η²I‖_max`
pub fn verify_orthogonality(pp: &PreconditionedProblem<'_>) -> f64 {
    let h = pp.h_hat.to_dense();
    let m = h.rows();
    let eta2 = pp.eta * pp.eta;
    let mut worst = 0.0_f64;
    for i in 0..m {
        for j in i..m {
            let g: f64 = h.row(i).iter().zip(h.row(j)).map(|(a, b)| a * b).sum();
            let target = if i == j { eta2 } else { 0.0 };
            worst = worst.max((g - target).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{spectral_estimates, CostHessian};
    use crate::projections::ProductSet;

    fn problem(h: DenseMatrix, g: Vec<f64>) -> CanonicalProblem {
        let n = h.cols();
        CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0; n]),
            vec![0.0; n],
            h,
            g,
            ProductSet::full_space(n),
        )
        .unwrap()
    }

    #[test]
    fn identity_constraints() {
        let prob = problem(DenseMatrix::identity(2), vec![1.0, 2.0]);
        let s = spectral_estimates(&prob, 0);
        let pp = qr_precondition(&prob, &s).unwrap();
        let r2 = 2f64.sqrt();
        assert!((pp.eta - r2).abs() < 1e-15);
        let h = pp.h_hat.to_dense();
        assert!((h[(0, 0)] - r2).abs() < 1e-15 && h[(0, 1)] == 0.0);
        assert!((pp.g_hat[0] - r2).abs() < 1e-15);
        assert!((pp.g_hat[1] - 2.0 * r2).abs() < 1e-14);
        assert!(verify_orthogonality(&pp) < 1e-15);
        assert_eq!(pp.spectral.sigma, pp.eta * pp.eta);
    }

    #[test]
    fn single_row() {
        let prob = problem(
            DenseMatrix::from_rows(&[vec![1.0, 0.0]]).unwrap(),
            vec![2.0],
        );
        let s = spectral_estimates(&prob, 0);
        let pp = qr_precondition(&prob, &s).unwrap();
        let h = pp.h_hat.to_dense();
        assert!((h[(0, 0)] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(h[(0, 1)], 0.0);
        assert!((pp.g_hat[0] - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn preserves_feasible_set() {
        let h = DenseMatrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![0.5, -1.0, 3.0]]).unwrap();
        let z0 = [0.3, -0.2, 1.1];
        let mut g = vec![0.0; 2];
        h.mul_vec_into(&z0, &mut g).unwrap();
        let prob = problem(h, g);
        let pp = qr_precondition(&prob, &spectral_estimates(&prob, 0)).unwrap();
        let r = pp.h_hat.matvec(&z0, false).unwrap();
        for (a, b) in r.iter().zip(&pp.g_hat) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let h = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        let prob = problem(h, vec![1.0, 2.0]);
        let err = qr_precondition(&prob, &spectral_estimates(&prob, 0)).unwrap_err();
        assert!(matches!(err, Error::Preconditioning(_)));
    }
}
