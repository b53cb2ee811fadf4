use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{dist_inf, norm_inf};
use crate::problem::{CanonicalProblem, CostHessian};

const RELAXATION: f64 = 1.6;
const RHO_UPDATE_EVERY: usize = 25;
const RHO_MIN: f64 = 1e-6;
const RHO_MAX: f64 = 1e6;
/// Iterations between checks that the primal residual still decreases.
const STALL_WINDOW: usize = 1000;

/// Outcome of [`splitting_reference_solve`].
#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    /// Solution estimate, always inside `D`.
    pub z: Vec<f64>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

/// Factorized linear system for the `z`-update
/// `min ½zᵀPz + qᵀz + ρ/2‖z − r‖²  s.t.  Hz = g`.
enum ZSolver {
    /// Diagonal `P`: Schur complement `H (P + ρI)⁻¹ Hᵀ`, Cholesky factorized.
    Schur {
        inv_diag: Vec<f64>,
        h: DMatrix<f64>,
        chol: Option<nalgebra::linalg::Cholesky<f64, nalgebra::Dyn>>,
    },
    /// Dense `P`: LU of the full KKT matrix.
    Full {
        lu: nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    },
}

impl ZSolver {
    fn new(prob: &CanonicalProblem, h: &DMatrix<f64>, rho: f64) -> Result<Self> {
        let (n, m) = (prob.n(), prob.m());
        match &prob.p {
            CostHessian::Diagonal(d) => {
                let inv_diag: Vec<f64> = d.iter().map(|v| 1.0 / (v + rho)).collect();
                let chol = if m == 0 {
                    None
                } else {
                    let mut scaled = h.clone();
                    for (j, s) in inv_diag.iter().enumerate() {
                        scaled.column_mut(j).scale_mut(*s);
                    }
                    let schur = &scaled * h.transpose();
                    Some(schur.cholesky().ok_or_else(|| {
                        Error::OracleFailure("Schur complement is not positive definite".into())
                    })?)
                };
                Ok(ZSolver::Schur {
                    inv_diag,
                    h: h.clone(),
                    chol,
                })
            }
            CostHessian::Dense(p) => {
                let mut k = DMatrix::<f64>::zeros(n + m, n + m);
                for i in 0..n {
                    for j in 0..n {
                        k[(i, j)] = p[(i, j)];
                    }
                    k[(i, i)] += rho;
                }
                for i in 0..m {
                    for j in 0..n {
                        k[(n + i, j)] = h[(i, j)];
                        k[(j, n + i)] = h[(i, j)];
                    }
                }
                Ok(ZSolver::Full { lu: k.lu() })
            }
        }
    }

    /// Solves `(P + ρI) z + Hᵀλ = rhs`, `Hz = g`.
    fn solve(&self, rhs: &[f64], g: &[f64]) -> Result<Vec<f64>> {
        match self {
            ZSolver::Schur { inv_diag, h, chol } => {
                let base: Vec<f64> = rhs.iter().zip(inv_diag).map(|(r, s)| r * s).collect();
                let Some(chol) = chol else {
                    return Ok(base);
                };
                let base_v = DVector::from_column_slice(&base);
                let mut lhs = h * &base_v;
                for (l, gi) in lhs.iter_mut().zip(g) {
                    *l -= gi;
                }
                let lambda = chol.solve(&lhs);
                let correction = h.tr_mul(&lambda);
                Ok(base
                    .iter()
                    .zip(correction.iter())
                    .zip(inv_diag)
                    .map(|((b, c), s)| b - s * c)
                    .collect())
            }
            ZSolver::Full { lu } => {
                let n = rhs.len();
                let full = DVector::from_iterator(
                    n + g.len(),
                    rhs.iter().copied().chain(g.iter().copied()),
                );
                let sol = lu
                    .solve(&full)
                    .ok_or_else(|| Error::OracleFailure("KKT matrix is singular".into()))?;
                Ok(sol.rows(0, n).iter().copied().collect())
            }
        }
    }
}

/// High-accuracy reference solution by ADMM on the splitting
/// `z ∈ {Hz = g}`, `y ∈ D`, `z = y`, with over-relaxation and adaptive penalty.
///
/// Stops when both the primal residual `‖z − y‖∞` and the dual residual
/// `ρ‖yᵏ⁺¹ − yᵏ‖∞` fall below `tol` relative to `1 + ` the iterate scale.
/// Fails when the relative primal residual stops decreasing, which is how an
/// empty intersection of `{Hz = g}` and `D` shows up.
pub fn splitting_reference_solve(
    prob: &CanonicalProblem,
    tol: f64,
    max_iters: usize,
) -> Result<ReferenceSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let n = prob.n();
    let hd = prob.h.to_dense();
    let h = DMatrix::from_fn(hd.rows(), hd.cols(), |i, j| hd[(i, j)]);

    let mut rho = 1.0;
    let mut lin = ZSolver::new(prob, &h, rho)?;
    let mut y = vec![0.0; n];
    prob.d.project_in_place(&mut y);
    let mut u = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut y_prev = y.clone();
    let mut checkpoint = f64::INFINITY;

    for k in 1..=max_iters {
        for i in 0..n {
            rhs[i] = rho * (y[i] - u[i]) - prob.q[i];
        }
        let z = lin.solve(&rhs, &prob.g)?;
        y_prev.copy_from_slice(&y);
        for i in 0..n {
            let relaxed = RELAXATION * z[i] + (1.0 - RELAXATION) * y_prev[i];
            y[i] = relaxed + u[i];
        }
        prob.d.project_in_place(&mut y);
        for i in 0..n {
            let relaxed = RELAXATION * z[i] + (1.0 - RELAXATION) * y_prev[i];
            u[i] += relaxed - y[i];
        }
        if y.iter().chain(&u).any(|v| !v.is_finite()) {
            return Err(Error::OracleFailure(format!(
                "ADMM diverged at iteration {k}"
            )));
        }

        let primal = dist_inf(&z, &y);
        let dual = rho * dist_inf(&y, &y_prev);
        let primal_scale = 1.0 + norm_inf(&z).max(norm_inf(&y));
        let dual_scale = 1.0 + rho * norm_inf(&u);
        if primal <= tol * primal_scale && dual <= tol * dual_scale {
            return Ok(ReferenceSolution {
                z: y,
                iterations: k,
                primal_residual: primal,
                dual_residual: dual,
            });
        }

        if k % STALL_WINDOW == 0 {
            let rel = primal / primal_scale;
            if k >= 3 * STALL_WINDOW && rel > 0.99 * checkpoint {
                return Err(Error::OracleFailure(format!(
                    "ADMM primal residual stalled at {rel:e}; the problem is likely infeasible"
                )));
            }
            checkpoint = rel;
        }
        if k % RHO_UPDATE_EVERY == 0 {
            let ratio = ((primal / primal_scale) / (dual / dual_scale).max(1e-300)).sqrt();
            if !(0.2..=5.0).contains(&ratio) {
                let new_rho = (rho * ratio).clamp(RHO_MIN, RHO_MAX);
                if new_rho != rho {
                    // u is the scaled dual, so it rescales with 1/ρ.
                    u.iter_mut().for_each(|v| *v *= rho / new_rho);
                    rho = new_rho;
                    lin = ZSolver::new(prob, &h, rho)?;
                }
            }
        }
    }
    Err(Error::OracleFailure(format!(
        "ADMM did not reach tolerance {tol:e} in {max_iters} iterations"
    )))
}
