use serde::{Deserialize, Serialize};

use super::{CanonicalProblem, CostHessian};
use crate::error::{Error, Result};
use crate::linalg::{power_iteration_max_eig, DEFAULT_POWER_MAX_ITERS, DEFAULT_POWER_TOL};

/// Extremal eigenvalues of `P` and `HᵀH`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub lambda_max: f64,
    pub lambda_min: f64,
    /// Largest eigenvalue of `HᵀH` (squared largest singular value of `H`).
    pub sigma: f64,
    /// Smallest eigenvalue of `HHᵀ` (squared smallest singular value of `H`),
    /// only computed on request.
    pub sigma_min: Option<f64>,
    /// `false` if any power iteration stopped at its iteration cap.
    pub converged: bool,
}

/// `(λmax, λmin, converged)` of the cost Hessian.
pub fn hessian_extremes(p: &CostHessian, seed: u64) -> (f64, f64, bool) {
    match p {
        CostHessian::Diagonal(d) => (
            d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            d.iter().copied().fold(f64::INFINITY, f64::min),
            true,
        ),
        CostHessian::Dense(p) => {
            let n = p.rows();
            let top = power_iteration_max_eig(
                |x, y| p.mul_vec_into(x, y).expect("square"),
                n,
                DEFAULT_POWER_TOL,
                DEFAULT_POWER_MAX_ITERS,
                seed,
            );
            let shift = top.value;
            let gap = power_iteration_max_eig(
                |x, y| {
                    p.mul_vec_into(x, y).expect("square");
                    y.iter_mut()
                        .zip(x)
                        .for_each(|(yi, xi)| *yi = shift * xi - *yi);
                },
                n,
                DEFAULT_POWER_TOL,
                DEFAULT_POWER_MAX_ITERS,
                seed.wrapping_add(1),
            );
            (shift, shift - gap.value, top.converged && gap.converged)
        }
    }
}

/// Eigenvalue bounds of `P` and the largest eigenvalue of `HᵀH`.
///
/// Diagonal `P` is read off exactly. Dense `P` uses power iteration for
/// `λmax` and shifted power iteration on `λmax·I − P` for `λmin`. `σ` always
/// comes from power iteration on `x ↦ Hᵀ(Hx)`.
pub fn spectral_estimates(prob: &CanonicalProblem, seed: u64) -> SpectralData {
    let n = prob.n();
    let (lambda_max, lambda_min, mut converged) = hessian_extremes(&prob.p, seed);

    let sigma = if prob.m() == 0 {
        // No equality rows: β never multiplies anything, any positive σ works.
        1.0
    } else {
        let mut hx = vec![0.0; prob.m()];
        let est = power_iteration_max_eig(
            |x, y| {
                prob.h.mul_vec_into(x, &mut hx).expect("dimensions checked");
                prob.h
                    .mul_vec_transpose_into(&hx, y)
                    .expect("dimensions checked");
            },
            n,
            DEFAULT_POWER_TOL,
            DEFAULT_POWER_MAX_ITERS,
            seed.wrapping_add(2),
        );
        converged &= est.converged;
        est.value
    };

    SpectralData {
        lambda_max,
        lambda_min,
        sigma,
        sigma_min: None,
        converged,
    }
}

/// Fills in `sigma_min` from a dense SVD of `H`. Intended for desk-scale
/// diagnostics only.
pub fn with_sigma_min(prob: &CanonicalProblem, s: SpectralData) -> SpectralData {
    let dense = prob.h.to_dense();
    let (m, n) = (dense.rows(), dense.cols());
    if m == 0 {
        return s;
    }
    let mat = nalgebra::DMatrix::from_fn(m, n, |i, j| dense[(i, j)]);
    let sv = mat.singular_values();
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    SpectralData {
        sigma_min: Some(smin * smin),
        ..s
    }
}

/// The two arguments of the KKT condition-number bound, as functions of the
/// extremal eigenvalues of `P` and singular values of `H`.
pub fn kkt_bound_arguments(
    lambda_max: f64,
    lambda_min: f64,
    sigma_max: f64,
    sigma_min: f64,
) -> (f64, f64) {
    let top = lambda_max + (lambda_max * lambda_max + 4.0 * sigma_max * sigma_max).sqrt();
    let first = if sigma_min <= 0.0 {
        f64::INFINITY
    } else {
        // √(λ² + 4σ²) − λ rewritten as 4σ² / (√(λ² + 4σ²) + λ).
        let s2 = 4.0 * sigma_min * sigma_min;
        top * ((lambda_max * lambda_max + s2).sqrt() + lambda_max) / s2
    };
    (first, top / (2.0 * lambda_min))
}

/// Upper bound on the spectral condition number of `[[P, Hᵀ], [H, 0]]`.
pub fn kkt_condition_bound_from(
    lambda_max: f64,
    lambda_min: f64,
    sigma_max: f64,
    sigma_min: f64,
) -> f64 {
    let (a, b) = kkt_bound_arguments(lambda_max, lambda_min, sigma_max, sigma_min);
    a.max(b)
}

/// Condition-number bound from spectral data; `sigma` and `sigma_min` hold
/// squared singular values. Returns `+∞` when `sigma_min = 0`.
pub fn kkt_condition_bound(s: &SpectralData) -> Result<f64> {
    let smin = s
        .sigma_min
        .ok_or_else(|| Error::InvalidArgument("condition bound needs sigma_min".into()))?;
    if smin < 0.0 {
        return Err(Error::InvalidArgument(
            "sigma_min must be non-negative".into(),
        ));
    }
    Ok(kkt_condition_bound_from(
        s.lambda_max,
        s.lambda_min,
        s.sigma.sqrt(),
        smin.sqrt(),
    ))
}

/// Intervals `(I⁻, I⁺)` containing the KKT matrix eigenvalues.
pub fn kkt_eigen_intervals(
    lambda_max: f64,
    lambda_min: f64,
    sigma_max: f64,
    sigma_min: f64,
) -> ((f64, f64), (f64, f64)) {
    let neg = (
        0.5 * (lambda_min - (lambda_min * lambda_min + 4.0 * sigma_max * sigma_max).sqrt()),
        0.5 * (lambda_max - (lambda_max * lambda_max + 4.0 * sigma_min * sigma_min).sqrt()),
    );
    let pos = (
        lambda_min,
        0.5 * (lambda_max + (lambda_max * lambda_max + 4.0 * sigma_max * sigma_max).sqrt()),
    );
    (neg, pos)
}

/// Common singular value of `H` minimizing the condition bound:
/// `√(λmax·λmin + λmin²)`.
pub fn optimal_singular_value(lambda_max: f64, lambda_min: f64) -> Result<f64> {
    if !(lambda_min > 0.0 && lambda_max >= lambda_min && lambda_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < lambda_min <= lambda_max, got {lambda_min} and {lambda_max}"
        )));
    }
    Ok((lambda_max * lambda_min + lambda_min * lambda_min).sqrt())
}
