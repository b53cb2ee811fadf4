use super::CanonicalProblem;
use crate::error::{check_len, Error, Result};
use crate::linalg::{dist_inf, dot, norm_inf};

/// `L(z, w) = ½zᵀPz + qᵀz + wᵀ(Hz − g)`
pub fn lagrangian(prob: &CanonicalProblem, z: &[f64], w: &[f64]) -> Result<f64> {
    check_len("lagrangian z", prob.n(), z.len())?;
    check_len("lagrangian w", prob.m(), w.len())?;
    let r = prob.equality_residual(z)?;
    Ok(prob.objective(z) + dot(w, &r))
}

/// Relative distance to the optimum and relative infeasibility,
/// `(‖zᵏ − z⋆‖∞ / ‖z⋆‖∞,  ‖Hzᵏ − g‖∞ / ‖z⋆‖∞)`, always against the problem's
/// own `H` and `g`.
pub fn error_metrics(prob: &CanonicalProblem, z_k: &[f64], z_star: &[f64]) -> Result<(f64, f64)> {
    check_len("error_metrics z_k", prob.n(), z_k.len())?;
    check_len("error_metrics z_star", prob.n(), z_star.len())?;
    let scale = norm_inf(z_star);
    if scale == 0.0 {
        return Err(Error::InvalidArgument(
            "relative error undefined for z_star = 0".into(),
        ));
    }
    let feas = norm_inf(&prob.equality_residual(z_k)?);
    Ok((dist_inf(z_k, z_star) / scale, feas / scale))
}

/// Projected-stationarity residual
/// `max(‖z − Π_D[z − α(Pz + q + Hᵀw)]‖∞, ‖Hz − g‖∞)`.
///
/// Zero exactly when `(z, w)` satisfies the KKT conditions.
pub fn kkt_residual(
    prob: &CanonicalProblem,
    z: &[f64],
    w: &[f64],
    alpha_probe: f64,
) -> Result<f64> {
    check_len("kkt_residual z", prob.n(), z.len())?;
    check_len("kkt_residual w", prob.m(), w.len())?;
    if !(alpha_probe > 0.0) {
        return Err(Error::InvalidArgument("probe step must be positive".into()));
    }
    let mut grad = vec![0.0; prob.n()];
    prob.p.apply(z, &mut grad);
    let htw = prob.h.matvec(w, true)?;
    let mut trial: Vec<f64> = z
        .iter()
        .zip(grad.iter().zip(&prob.q).zip(&htw))
        .map(|(zi, ((pz, qi), hw))| zi - alpha_probe * (pz + qi + hw))
        .collect();
    prob.d.project_in_place(&mut trial);
    let stationarity = dist_inf(z, &trial);
    let feas = norm_inf(&prob.equality_residual(z)?);
    Ok(stationarity.max(feas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::problem::CostHessian;
    use crate::projections::ProductSet;

    fn averaging_problem() -> CanonicalProblem {
        CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0, 1.0]),
            vec![0.0, 0.0],
            DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
            vec![1.0],
            ProductSet::full_space(2),
        )
        .unwrap()
    }

    #[test]
    fn lagrangian_examples() {
        let p = averaging_problem();
        assert!((lagrangian(&p, &[0.5, 0.5], &[-0.5]).unwrap() - 0.25).abs() < 1e-15);
        // feasible point: penalty vanishes
        assert_eq!(
            lagrangian(&p, &[1.0, 0.0], &[7.0]).unwrap(),
            p.objective(&[1.0, 0.0])
        );

        let zero = CanonicalProblem::new(
            CostHessian::Diagonal(vec![2.0]),
            vec![0.0],
            DenseMatrix::from_rows(&[vec![1.0]]).unwrap(),
            vec![0.0],
            ProductSet::full_space(1),
        )
        .unwrap();
        assert_eq!(lagrangian(&zero, &[0.0], &[3.0]).unwrap(), 0.0);
    }

    #[test]
    fn error_metric_examples() {
        let p = CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0, 1.0]),
            vec![0.0, 0.0],
            DenseMatrix::identity(2),
            vec![1.0, 1.0],
            ProductSet::full_space(2),
        )
        .unwrap();
        let zs = [1.0, 1.0];
        assert_eq!(error_metrics(&p, &zs, &zs).unwrap(), (0.0, 0.0));
        assert_eq!(error_metrics(&p, &[2.0, 2.0], &zs).unwrap(), (1.0, 1.0));
        let (opt, _) = error_metrics(&p, &[1.0 + 1e-3, 1.0], &zs).unwrap();
        assert!((opt - 1e-3).abs() < 1e-15);
        assert!(error_metrics(&p, &zs, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn kkt_residual_examples() {
        let unconstrained = CanonicalProblem::new(
            CostHessian::Diagonal(vec![1.0, 1.0]),
            vec![-1.0, 0.0],
            DenseMatrix::zeros(0, 2),
            vec![],
            ProductSet::full_space(2),
        )
        .unwrap();
        assert_eq!(
            kkt_residual(&unconstrained, &[1.0, 0.0], &[], 0.5).unwrap(),
            0.0
        );

        let p = averaging_problem();
        assert!(kkt_residual(&p, &[0.5, 0.5], &[-0.5], 1.0 / 3.0).unwrap() < 1e-15);

        let infeasible = [2.0, 0.0];
        let r = kkt_residual(&p, &infeasible, &[0.0], 0.5).unwrap();
        assert!(r >= 1.0);
    }
}
