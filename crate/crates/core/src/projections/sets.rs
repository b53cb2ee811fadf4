use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm2};

/// A closed convex set with a closed-form Euclidean projection.
///
/// Cone-type sets treat the last coordinate of their block as the axis
/// coordinate `t` and the leading coordinates as `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "snake_case")]
pub enum SetDescriptor {
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Ball {
        radius: f64,
        center: Vec<f64>,
    },
    HalfSpace {
        normal: Vec<f64>,
        offset: f64,
    },
    /// `{(x, t) : ‖x‖ ≤ ratio · t}`
    SecondOrderCone {
        ratio: f64,
    },
    /// Origin-centered ball of `radius` intersected with the cone of `ratio`.
    BallCapCone {
        radius: f64,
        ratio: f64,
    },
    FullSpace {
        dim: usize,
    },
}

impl SetDescriptor {
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        SetDescriptor::Box { lower, upper }
    }

    /// Box `[-bound, bound]^dim`, the ∞-norm ball.
    pub fn symmetric_box(dim: usize, bound: f64) -> Self {
        SetDescriptor::Box {
            lower: vec![-bound; dim],
            upper: vec![bound; dim],
        }
    }

    pub fn ball(dim: usize, radius: f64) -> Self {
        SetDescriptor::Ball {
            radius,
            center: vec![0.0; dim],
        }
    }

    /// Dimension fixed by the descriptor itself, if any. Cones accept any block
    /// of length at least 2.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            SetDescriptor::Box { lower, .. } => Some(lower.len()),
            SetDescriptor::Ball { center, .. } => Some(center.len()),
            SetDescriptor::HalfSpace { normal, .. } => Some(normal.len()),
            SetDescriptor::FullSpace { dim } => Some(*dim),
            SetDescriptor::SecondOrderCone { .. } | SetDescriptor::BallCapCone { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        match self {
            SetDescriptor::Box { lower, upper } => {
                check_len("box bounds", lower.len(), upper.len())?;
                if lower
                    .iter()
                    .zip(upper)
                    .any(|(l, u)| !(l <= u) || l.is_nan())
                {
                    return bad("box requires lower <= upper");
                }
            }
            SetDescriptor::Ball { radius, center } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad("ball radius must be positive");
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return bad("ball center must be finite");
                }
            }
            SetDescriptor::HalfSpace { normal, offset } => {
                if normal.iter().all(|a| *a == 0.0) || !offset.is_finite() {
                    return bad("half-space normal must be nonzero");
                }
            }
            SetDescriptor::SecondOrderCone { ratio } => {
                if !(*ratio > 0.0 && ratio.is_finite()) {
                    return bad("cone ratio must be positive");
                }
            }
            SetDescriptor::BallCapCone { radius, ratio } => {
                if !(*radius > 0.0 && radius.is_finite()) || !(*ratio > 0.0 && ratio.is_finite()) {
                    return bad("ball-cap-cone radius and ratio must be positive");
                }
            }
            SetDescriptor::FullSpace { .. } => {}
        }
        Ok(())
    }

    /// Checks that the descriptor can act on a block of `len` coordinates.
    pub fn check_block_len(&self, len: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) => check_len("set block length", d, len),
            None if len >= 2 => Ok(()),
            None => Err(Error::InvalidArgument(
                "cone blocks need at least two coordinates".into(),
            )),
        }
    }

    /// Projects `z` in place.
    pub fn project_in_place(&self, z: &mut [f64]) {
        match self {
            SetDescriptor::Box { lower, upper } => {
                for ((v, l), u) in z.iter_mut().zip(lower).zip(upper) {
                    *v = v.clamp(*l, *u);
                }
            }
            SetDescriptor::Ball { radius, center } => ball_in_place(z, *radius, center),
            SetDescriptor::HalfSpace { normal, offset } => {
                let excess = dot(normal, z) - offset;
                if excess > 0.0 {
                    let s = excess / dot(normal, normal);
                    z.iter_mut().zip(normal).for_each(|(v, a)| *v -= s * a);
                }
            }
            SetDescriptor::SecondOrderCone { ratio } => soc_in_place(z, *ratio),
            SetDescriptor::BallCapCone { radius, ratio } => {
                soc_in_place(z, *ratio);
                origin_ball_in_place(z, *radius);
            }
            SetDescriptor::FullSpace { .. } => {}
        }
    }

    pub fn project(&self, z: &[f64]) -> Vec<f64> {
        let mut out = z.to_vec();
        self.project_in_place(&mut out);
        out
    }

    /// Membership test with absolute slack `tol`.
    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        match self {
            SetDescriptor::Box { lower, upper } => z
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
            SetDescriptor::Ball { radius, center } => {
                let d: f64 = z
                    .iter()
                    .zip(center)
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum::<f64>()
                    .sqrt();
                d <= radius + tol
            }
            SetDescriptor::HalfSpace { normal, offset } => dot(normal, z) <= offset + tol,
            SetDescriptor::SecondOrderCone { ratio } => soc_contains(z, *ratio, tol),
            SetDescriptor::BallCapCone { radius, ratio } => {
                soc_contains(z, *ratio, tol) && norm2(z) <= radius + tol
            }
            SetDescriptor::FullSpace { .. } => true,
        }
    }
}

fn soc_contains(z: &[f64], ratio: f64, tol: f64) -> bool {
    let (x, t) = z.split_at(z.len() - 1);
    norm2(x) <= ratio * t[0] + tol
}

fn ball_in_place(z: &mut [f64], radius: f64, center: &[f64]) {
    let d: f64 = z
        .iter()
        .zip(center)
        .map(|(a, c)| (a - c) * (a - c))
        .sum::<f64>()
        .sqrt();
    if d > radius {
        let s = radius / d;
        z.iter_mut()
            .zip(center)
            .for_each(|(v, c)| *v = c + s * (*v - c));
    }
}

fn origin_ball_in_place(z: &mut [f64], radius: f64) {
    let d = norm2(z);
    if d > radius {
        let s = radius / d;
        z.iter_mut().for_each(|v| *v *= s);
    }
}

fn soc_in_place(z: &mut [f64], ratio: f64) {
    let last = z.len() - 1;
    let t = z[last];
    let nx = norm2(&z[..last]);
    if nx <= ratio * t {
        return;
    }
    if ratio * nx <= -t {
        z.fill(0.0);
        return;
    }
    let lambda = (ratio * nx + t) / (ratio * ratio + 1.0);
    let s = lambda * ratio / nx;
    z[..last].iter_mut().for_each(|v| *v *= s);
    z[last] = lambda;
}

/// Componentwise clamp onto `[lower, upper]`.
pub fn project_box(z: &[f64], lower: &[f64], upper: &[f64]) -> Result<Vec<f64>> {
    check_len("project_box lower", z.len(), lower.len())?;
    check_len("project_box upper", z.len(), upper.len())?;
    let set = SetDescriptor::boxed(lower.to_vec(), upper.to_vec());
    set.validate()?;
    Ok(set.project(z))
}

pub fn project_ball(z: &[f64], radius: f64, center: &[f64]) -> Result<Vec<f64>> {
    check_len("project_ball center", z.len(), center.len())?;
    let set = SetDescriptor::Ball {
        radius,
        center: center.to_vec(),
    };
    set.validate()?;
    Ok(set.project(z))
}

pub fn project_halfspace(z: &[f64], normal: &[f64], offset: f64) -> Result<Vec<f64>> {
    check_len("project_halfspace normal", z.len(), normal.len())?;
    let set = SetDescriptor::HalfSpace {
        normal: normal.to_vec(),
        offset,
    };
    set.validate()?;
    Ok(set.project(z))
}

/// Projection onto `{(x, t) : ‖x‖ ≤ ratio · t}`; `t` is the last entry of `z`.
pub fn project_soc(z: &[f64], ratio: f64) -> Result<Vec<f64>> {
    let set = SetDescriptor::SecondOrderCone { ratio };
    set.validate()?;
    set.check_block_len(z.len())?;
    Ok(set.project(z))
}

/// Projection onto the origin-centered ball of `radius` intersected with the
/// cone of `ratio`, computed as ball-after-cone.
pub fn project_ball_cap_cone(z: &[f64], radius: f64, ratio: f64) -> Result<Vec<f64>> {
    let set = SetDescriptor::BallCapCone { radius, ratio };
    set.validate()?;
    set.check_block_len(z.len())?;
    Ok(set.project(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn box_examples() {
        let lo = [-0.75, -0.75];
        let hi = [0.75, 0.75];
        assert_eq!(
            project_box(&[2.0, -2.0], &lo, &hi).unwrap(),
            vec![0.75, -0.75]
        );
        assert_eq!(project_box(&[0.1, 0.2], &lo, &hi).unwrap(), vec![0.1, 0.2]);
        assert_eq!(project_box(&[0.75], &[-0.75], &[0.75]).unwrap(), vec![0.75]);
        assert!(project_box(&[0.0], &lo, &hi).is_err());
        assert!(project_box(&[0.0], &[1.0], &[0.0]).is_err());
    }

    #[test]
    fn ball_examples() {
        assert!(close(
            &project_ball(&[3.0, 4.0], 1.0, &[0.0, 0.0]).unwrap(),
            &[0.6, 0.8]
        ));
        assert_eq!(
            project_ball(&[0.1, 0.0], 1.0, &[0.0, 0.0]).unwrap(),
            vec![0.1, 0.0]
        );
        assert_eq!(
            project_ball(&[2.0, 0.0], 1.0, &[1.0, 0.0]).unwrap(),
            vec![2.0, 0.0]
        );
    }

    #[test]
    fn halfspace_examples() {
        assert_eq!(
            project_halfspace(&[2.0, 3.0], &[1.0, 0.0], 0.0).unwrap(),
            vec![0.0, 3.0]
        );
        assert_eq!(
            project_halfspace(&[-1.0, 1.0], &[1.0, 0.0], 0.0).unwrap(),
            vec![-1.0, 1.0]
        );
        assert_eq!(
            project_halfspace(&[1.0, 1.0], &[1.0, 1.0], 0.0).unwrap(),
            vec![0.0, 0.0]
        );
        assert!(project_halfspace(&[1.0, 1.0], &[0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn soc_examples() {
        assert_eq!(
            project_soc(&[1.0, 0.0, 2.0], 1.0).unwrap(),
            vec![1.0, 0.0, 2.0]
        );
        assert_eq!(
            project_soc(&[3.0, 0.0, -4.0], 1.0).unwrap(),
            vec![0.0, 0.0, 0.0]
        );
        assert!(close(
            &project_soc(&[1.0, 0.0, 0.0], 1.0).unwrap(),
            &[0.5, 0.0, 0.5]
        ));
        assert!(project_soc(&[1.0], 1.0).is_err());
        assert!(project_soc(&[1.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn soc_zero_x_negative_t() {
        assert_eq!(
            project_soc(&[0.0, 0.0, -1.0], 2.0).unwrap(),
            vec![0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn soc_boundary_is_fixed() {
        for eps in [0.0, 1e-9, 0.5] {
            let x = [0.3, -0.4];
            let z = [x[0], x[1], 0.5 * (1.0 + eps)];
            assert_eq!(project_soc(&z, 1.0).unwrap(), z.to_vec());
        }
    }

    #[test]
    fn ball_cap_cone_examples() {
        let inside = [0.1, 0.0, 0.5];
        assert_eq!(
            project_ball_cap_cone(&inside, 1.0, 1.0).unwrap(),
            inside.to_vec()
        );
        assert!(close(
            &project_ball_cap_cone(&[0.0, 0.0, 5.0], 1.0, 1.0).unwrap(),
            &[0.0, 0.0, 1.0]
        ));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(
            &project_ball_cap_cone(&[2.0, 0.0, 0.0], 1.0, 1.0).unwrap(),
            &[h, 0.0, h]
        ));
    }

    #[test]
    fn serde_tagging() {
        let s = SetDescriptor::SecondOrderCone { ratio: 0.5 };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"type":"second_order_cone","params":{"ratio":0.5}}"#
        );
        let back: SetDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
