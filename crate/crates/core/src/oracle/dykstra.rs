use crate::error::{Error, Result};
use crate::linalg::dist2;
use crate::projections::SetDescriptor;

pub const DYKSTRA_MAX_CYCLES: usize = 100_000;

/// Projection onto the intersection of `sets` by Dykstra's alternating
/// projections with correction terms. Stops once a full cycle moves the iterate
/// and the corrections by at most `tol`.
pub fn dykstra_project(z: &[f64], sets: &[SetDescriptor], tol: f64) -> Result<Vec<f64>> {
    if sets.is_empty() {
        return Ok(z.to_vec());
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    for s in sets {
        s.validate()?;
        s.check_block_len(z.len())?;
    }
    let n = z.len();
    let mut x = z.to_vec();
    let mut corrections = vec![vec![0.0; n]; sets.len()];
    let mut y = vec![0.0; n];

    for _ in 0..DYKSTRA_MAX_CYCLES {
        let start = x.clone();
        let mut corr_change = 0.0_f64;
        for (set, p) in sets.iter().zip(corrections.iter_mut()) {
            for ((yi, xi), pi) in y.iter_mut().zip(&x).zip(p.iter()) {
                *yi = xi + pi;
            }
            set.project_in_place(&mut y);
            let mut delta = 0.0;
            for ((pi, xi), yi) in p.iter_mut().zip(&x).zip(&y) {
                let next = *xi + *pi - yi;
                delta += (next - *pi) * (next - *pi);
                *pi = next;
            }
            corr_change = corr_change.max(delta.sqrt());
            x.copy_from_slice(&y);
        }
        if dist2(&x, &start) <= tol && corr_change <= tol {
            return Ok(x);
        }
    }
    Err(Error::OracleFailure(format!(
        "Dykstra projection did not reach tolerance {tol:e} in {DYKSTRA_MAX_CYCLES} cycles"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projections::project_ball_cap_cone;

    #[test]
    fn single_set_matches_closed_form() {
        let ball = SetDescriptor::ball(2, 1.0);
        let z = [3.0, 4.0];
        let p = dykstra_project(&z, std::slice::from_ref(&ball), 1e-14).unwrap();
        assert_eq!(p, ball.project(&z));
    }

    #[test]
    fn nested_balls() {
        let sets = [SetDescriptor::ball(2, 1.0), SetDescriptor::ball(2, 2.0)];
        let p = dykstra_project(&[3.0, 4.0], &sets, 1e-14).unwrap();
        assert!((p[0] - 0.6).abs() < 1e-12 && (p[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn ball_cone_example() {
        let sets = [
            SetDescriptor::SecondOrderCone { ratio: 1.0 },
            SetDescriptor::ball(3, 1.0),
        ];
        let z = [2.0, 0.0, 0.0];
        let oracle = dykstra_project(&z, &sets, 1e-14).unwrap();
        let closed = project_ball_cap_cone(&z, 1.0, 1.0).unwrap();
        assert!(dist2(&oracle, &closed) < 1e-8);
    }
}
