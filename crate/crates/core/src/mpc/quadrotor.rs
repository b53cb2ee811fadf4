use serde::{Deserialize, Serialize};

use super::{dynamics_constraints, stacked_diagonal, StackedLayout};
use crate::error::{check_len, Error, Result};
use crate::linalg::DenseMatrix;
use crate::problem::{CanonicalProblem, CostHessian};
use crate::projections::{ProductSet, SetDescriptor};

/// How the rotating half-space `a_tᵀ r ≤ b_t` around the keep-out cylinder is
/// parameterized, with `a_t = (cos θ_t, −sin θ_t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeepOutConvention {
    /// `θ_t = ψ·t·Δt + φ`, `b_t = a_tᵀ r_c − ρ`: the plane stays at distance
    /// `ρ` from the cylinder axis and turns at `ψ` radians per second.
    #[default]
    Separating,
    /// `θ_t = ψ·t + φ`, `b_t = −a_tᵀ r_c − ρ`. With the default data this
    /// excludes the initial position, so the problem is infeasible.
    AsPrinted,
}

/// Point-mass quadrotor with thrust input `u ∈ R³`, state `x = (r, v)` and
/// gravity along the third axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadrotorParams {
    pub horizon: usize,
    pub dt: f64,
    pub mass: f64,
    pub psi: f64,
    pub phi: f64,
    pub r_c: [f64; 2],
    pub rho: f64,
    pub v_max: f64,
    pub u_max: f64,
    pub theta_max: f64,
    pub grav: f64,
    pub q_diag: [f64; 6],
    pub r_diag: [f64; 3],
    pub x_init: [f64; 6],
    pub x_target: [f64; 6],
    #[serde(default)]
    pub convention: KeepOutConvention,
}

impl Default for QuadrotorParams {
    fn default() -> Self {
        Self {
            horizon: 30,
            dt: 0.2,
            mass: 3.0,
            psi: -0.5,
            phi: -std::f64::consts::FRAC_PI_4,
            r_c: [2.5, 2.5],
            rho: 0.25,
            v_max: 1.5,
            u_max: 35.0,
            theta_max: 0.1745,
            grav: 9.8,
            q_diag: [2.0, 2.0, 2.0, 1.0, 1.0, 1.0],
            r_diag: [0.5; 3],
            x_init: [0.0, 0.0, 5.0, 0.0, 0.0, 0.0],
            x_target: [5.0, 5.0, 5.0, 0.0, 0.0, 0.0],
            convention: KeepOutConvention::Separating,
        }
    }
}

impl QuadrotorParams {
    pub fn layout(&self) -> StackedLayout {
        StackedLayout::new(6, 3, self.horizon)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if self.horizon < 2 {
            return bad("horizon must be at least 2");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("sample time must be positive");
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return bad("mass must be positive");
        }
        if !(self.rho > 0.0) {
            return bad("keep-out radius must be positive");
        }
        if !(self.theta_max > 0.0 && self.theta_max < std::f64::consts::FRAC_PI_2) {
            return bad("tilt limit must lie in (0, π/2)");
        }
        if !(self.v_max > 0.0 && self.u_max > 0.0) {
            return bad("speed and thrust limits must be positive");
        }
        if self
            .q_diag
            .iter()
            .chain(&self.r_diag)
            .any(|w| !(*w > 0.0 && w.is_finite()))
        {
            return bad("weights must be positive");
        }
        let data = [self.psi, self.phi, self.grav, self.r_c[0], self.r_c[1]];
        if data
            .iter()
            .chain(&self.x_init)
            .chain(&self.x_target)
            .any(|v| !v.is_finite())
        {
            return bad("parameters must be finite");
        }
        Ok(())
    }

    /// `(A, B, c)` of `x_{t+1} = A x_t + B u_t + c`.
    pub fn dynamics(&self) -> (DenseMatrix, DenseMatrix, Vec<f64>) {
        let dt = self.dt;
        let mut a = DenseMatrix::identity(6);
        let mut b = DenseMatrix::zeros(6, 3);
        for i in 0..3 {
            a[(i, 3 + i)] = dt;
            b[(i, i)] = 0.5 * dt * dt / self.mass;
            b[(3 + i, i)] = dt / self.mass;
        }
        let c = vec![
            0.0,
            0.0,
            -0.5 * self.grav * dt * dt,
            0.0,
            0.0,
            -self.grav * dt,
        ];
        (a, b, c)
    }

    /// Reference state `x̂_t`, linear from `x_init` (t = 1) to `x_target` (t = T).
    pub fn reference(&self, t: usize) -> [f64; 6] {
        let s = (t - 1) as f64 / (self.horizon - 1) as f64;
        std::array::from_fn(|i| self.x_init[i] + s * (self.x_target[i] - self.x_init[i]))
    }
}

/// `(a_t, b_t)` of the keep-out half-space at time step `t`.
pub fn keep_out_halfspace(p: &QuadrotorParams, t: usize) -> ([f64; 2], f64) {
    let tf = t as f64;
    let theta = match p.convention {
        KeepOutConvention::Separating => p.psi * tf * p.dt + p.phi,
        KeepOutConvention::AsPrinted => p.psi * tf + p.phi,
    };
    let a = [theta.cos(), -theta.sin()];
    let ar = a[0] * p.r_c[0] + a[1] * p.r_c[1];
    let b = match p.convention {
        KeepOutConvention::Separating => ar - p.rho,
        KeepOutConvention::AsPrinted => -ar - p.rho,
    };
    (a, b)
}

pub fn build_quadrotor(p: &QuadrotorParams) -> Result<CanonicalProblem> {
    p.validate()?;
    let layout = p.layout();
    let (a, b, c) = p.dynamics();
    let (h, g) = dynamics_constraints(&layout, &a, &b, &c, &p.x_init)?;
    let diag = stacked_diagonal(&layout, &p.q_diag, &p.r_diag);

    let mut q = vec![0.0; layout.n()];
    let mut sets = Vec::with_capacity(4 * layout.horizon);
    for t in 1..=layout.horizon {
        let xr = p.reference(t);
        for (qi, (w, r)) in q[layout.state(t)].iter_mut().zip(p.q_diag.iter().zip(xr)) {
            *qi = -w * r;
        }
        let (normal, offset) = keep_out_halfspace(p, t);
        sets.push((
            SetDescriptor::HalfSpace {
                normal: normal.to_vec(),
                offset,
            },
            2,
        ));
        sets.push((SetDescriptor::FullSpace { dim: 1 }, 1));
        sets.push((SetDescriptor::ball(3, p.v_max), 3));
        if t < layout.horizon {
            sets.push((
                SetDescriptor::BallCapCone {
                    radius: p.u_max,
                    ratio: p.theta_max.tan(),
                },
                3,
            ));
        }
    }
    let d = ProductSet::from_sets(sets)?;
    check_len("quadrotor set dimension", layout.n(), d.dim())?;
    CanonicalProblem::new(CostHessian::Diagonal(diag), q, h, g, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpc::simulate_stacked;

    #[test]
    fn default_dimensions() {
        let prob = build_quadrotor(&QuadrotorParams::default()).unwrap();
        assert_eq!(prob.n(), 267);
        assert_eq!(prob.m(), 180);
        prob.check_full_row_rank().unwrap();
    }

    #[test]
    fn gravity_offset() {
        let (_, b, c) = QuadrotorParams::default().dynamics();
        assert!((c[2] + 0.196).abs() < 1e-12);
        assert!((c[5] + 1.96).abs() < 1e-12);
        assert!((b[(5, 2)] - 0.2 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_angle_halfspace() {
        let p = QuadrotorParams {
            psi: 0.0,
            phi: 0.0,
            convention: KeepOutConvention::AsPrinted,
            ..QuadrotorParams::default()
        };
        for t in [1, 7, 30] {
            let (a, b) = keep_out_halfspace(&p, t);
            assert_eq!(a, [1.0, -0.0]);
            assert!((b + 2.75).abs() < 1e-15);
        }
        let p = QuadrotorParams {
            convention: KeepOutConvention::Separating,
            ..p
        };
        assert!((keep_out_halfspace(&p, 3).1 - 2.25).abs() < 1e-15);
    }

    #[test]
    fn separating_plane_keeps_distance_rho() {
        let p = QuadrotorParams::default();
        for t in 1..=p.horizon {
            let (a, b) = keep_out_halfspace(&p, t);
            let signed = a[0] * p.r_c[0] + a[1] * p.r_c[1] - b;
            assert!((signed - p.rho).abs() < 1e-12);
        }
        // The start position is admissible only under the separating form.
        let (a, b) = keep_out_halfspace(&p, 1);
        assert!(a[0] * p.x_init[0] + a[1] * p.x_init[1] <= b);
        let printed = QuadrotorParams {
            convention: KeepOutConvention::AsPrinted,
            ..p
        };
        let (a, b) = keep_out_halfspace(&printed, 1);
        assert!(a[0] * p.x_init[0] + a[1] * p.x_init[1] > b);
    }

    #[test]
    fn reference_endpoints_and_linear_cost() {
        let p = QuadrotorParams::default();
        assert_eq!(p.reference(1), p.x_init);
        assert_eq!(p.reference(30), p.x_target);
        let prob = build_quadrotor(&p).unwrap();
        let l = p.layout();
        assert_eq!(&prob.q[l.state(1)], &[0.0, 0.0, -10.0, 0.0, 0.0, 0.0]);
        assert_eq!(&prob.q[l.state(30)], &[-10.0, -10.0, -10.0, 0.0, 0.0, 0.0]);
        assert!(prob.q[l.control(4)].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rollout_satisfies_constraints() {
        let p = QuadrotorParams::default();
        let layout = p.layout();
        let (a, b, c) = p.dynamics();
        let hover = p.mass * p.grav;
        let us: Vec<Vec<f64>> = (0..layout.horizon - 1)
            .map(|t| vec![0.1 * (t as f64).cos(), -0.2, hover + 0.5 * (t as f64).sin()])
            .collect();
        let z = simulate_stacked(&layout, &a, &b, &c, &p.x_init, &us).unwrap();
        let prob = build_quadrotor(&p).unwrap();
        let r = prob.equality_residual(&z).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn rejects_bad_params() {
        for p in [
            QuadrotorParams {
                rho: 0.0,
                ..Default::default()
            },
            QuadrotorParams {
                theta_max: 1.6,
                ..Default::default()
            },
            QuadrotorParams {
                mass: -1.0,
                ..Default::default()
            },
            QuadrotorParams {
                dt: 0.0,
                ..Default::default()
            },
        ] {
            assert!(build_quadrotor(&p).is_err());
        }
    }
}
