//! A two-variable problem whose equality constraints are two nearly parallel
//! lines. Unpreconditioned, the dual iterates crawl along the narrow valley
//! between the lines; after QR preconditioning the rows are orthogonal.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::problem::{CanonicalProblem, CostHessian};
use crate::projections::{ProductSet, SetDescriptor};
use crate::solver::{pipg_run, SolverConfig, SolverResult};

pub const DEMO_ANGLE_DEG: f64 = 5.0;
pub const DEMO_FIXED_POINT_TOL: f64 = 1e-8;
pub const DEMO_K_MAX: usize = 200_000;

/// `min ½‖z‖² − 1ᵀz  s.t.  (1, 0)ᵀz = 1, (cos θ, sin θ)ᵀz = cos θ + sin θ,
/// z ∈ [−3, 3]²`, with unique solution `(1, 1)`.
pub fn geometric_demo_problem(angle_deg: f64) -> Result<CanonicalProblem> {
    if !(angle_deg > 0.0 && angle_deg < 180.0) {
        return Err(Error::InvalidArgument(
            "angle between the constraint rows must lie in (0, 180) degrees".into(),
        ));
    }
    let (s, c) = angle_deg.to_radians().sin_cos();
    let h = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![c, s]])?;
    CanonicalProblem::new(
        CostHessian::Diagonal(vec![1.0, 1.0]),
        vec![-1.0, -1.0],
        h,
        vec![1.0, c + s],
        ProductSet::from_sets([(SetDescriptor::symmetric_box(2, 3.0), 2)])?,
    )
}

/// Runs PIPG with fixed step sizes (`γ = σ`) on the demo problem until the
/// fixed-point residual drops below [`DEMO_FIXED_POINT_TOL`], recording every
/// `stride`-th iterate.
pub fn run_geometric_demo(
    angle_deg: f64,
    precondition: bool,
    stride: usize,
) -> Result<SolverResult> {
    let prob = geometric_demo_problem(angle_deg)?;
    let config = SolverConfig {
        k_max: DEMO_K_MAX,
        tol_opt: DEMO_FIXED_POINT_TOL / 1e-2,
        use_precondition: precondition,
        use_step_selection: false,
        history_stride: stride.max(1),
        record_iterates: true,
        ..SolverConfig::default()
    };
    pipg_run(&prob, &config, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Status;

    #[test]
    fn solution_is_one_one() {
        let prob = geometric_demo_problem(DEMO_ANGLE_DEG).unwrap();
        let r = prob.equality_residual(&[1.0, 1.0]).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-15));
        assert!(geometric_demo_problem(0.0).is_err());
    }

    #[test]
    fn preconditioning_helps() {
        let plain = run_geometric_demo(DEMO_ANGLE_DEG, false, 100).unwrap();
        let qr = run_geometric_demo(DEMO_ANGLE_DEG, true, 1).unwrap();
        assert_eq!(qr.status, Status::Converged);
        assert_eq!(plain.status, Status::Converged);
        assert!(plain.iterations > qr.iterations);
        assert!((qr.z_final[0] - 1.0).abs() < 1e-6 && (qr.z_final[1] - 1.0).abs() < 1e-6);
    }
}
