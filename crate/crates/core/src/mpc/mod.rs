//! Stacked-form generators for two model predictive control benchmarks:
//! regulation of a chain of oscillating masses and quadrotor path planning
//! around a keep-out zone.

mod mass_spring;
mod quadrotor;

pub use mass_spring::{build_mass_spring, sample_initial_state, MassSpringParams};
pub use quadrotor::{build_quadrotor, keep_out_halfspace, KeepOutConvention, QuadrotorParams};

use std::ops::Range;

/// One vector per time step.
pub type Trajectory = Vec<Vec<f64>>;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result};
use crate::linalg::{CscMatrix, DenseMatrix};

/// Position map for the stacked decision vector
/// `z = (x₁, u₁, x₂, u₂, …, u_{T−1}, x_T)`. Time indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackedLayout {
    pub nx: usize,
    pub nu: usize,
    pub horizon: usize,
}

impl StackedLayout {
    pub fn new(nx: usize, nu: usize, horizon: usize) -> Self {
        Self { nx, nu, horizon }
    }

    /// Range of `x_t` in `z`, `1 ≤ t ≤ T`.
    pub fn state(&self, t: usize) -> Range<usize> {
        debug_assert!(t >= 1 && t <= self.horizon);
        let start = (t - 1) * (self.nx + self.nu);
        start..start + self.nx
    }

    /// Range of `u_t` in `z`, `1 ≤ t ≤ T − 1`.
    pub fn control(&self, t: usize) -> Range<usize> {
        debug_assert!(t >= 1 && t < self.horizon);
        let start = (t - 1) * (self.nx + self.nu) + self.nx;
        start..start + self.nu
    }

    pub fn n(&self) -> usize {
        self.horizon * self.nx + (self.horizon - 1) * self.nu
    }

    /// Initial-condition rows plus dynamics rows.
    pub fn m_eq(&self) -> usize {
        self.nx + (self.horizon - 1) * self.nx
    }

    /// Splits a stacked vector into state and control trajectories.
    pub fn unstack(&self, z: &[f64]) -> Result<(Trajectory, Trajectory)> {
        check_len("stacked vector", self.n(), z.len())?;
        let xs = (1..=self.horizon)
            .map(|t| z[self.state(t)].to_vec())
            .collect();
        let us = (1..self.horizon)
            .map(|t| z[self.control(t)].to_vec())
            .collect();
        Ok((xs, us))
    }

    /// Inverse of [`StackedLayout::unstack`].
    pub fn stack(&self, xs: &[Vec<f64>], us: &[Vec<f64>]) -> Result<Vec<f64>> {
        check_len("state trajectory length", self.horizon, xs.len())?;
        check_len("control trajectory length", self.horizon - 1, us.len())?;
        let mut z = vec![0.0; self.n()];
        for (t, x) in xs.iter().enumerate() {
            check_len("state size", self.nx, x.len())?;
            z[self.state(t + 1)].copy_from_slice(x);
        }
        for (t, u) in us.iter().enumerate() {
            check_len("control size", self.nu, u.len())?;
            z[self.control(t + 1)].copy_from_slice(u);
        }
        Ok(z)
    }
}

/// Equality constraints `x₁ = x_init` and `x_{t+1} − A x_t − B u_t = c`.
fn dynamics_constraints(
    layout: &StackedLayout,
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: &[f64],
    x_init: &[f64],
) -> Result<(CscMatrix, Vec<f64>)> {
    let (nx, nu) = (layout.nx, layout.nu);
    check_len("A rows", nx, a.rows())?;
    check_len("B rows", nx, b.rows())?;
    check_len("B columns", nu, b.cols())?;
    check_len("affine offset", nx, c.len())?;
    check_len("initial state", nx, x_init.len())?;

    let mut trip = Vec::new();
    let mut g = Vec::with_capacity(layout.m_eq());
    for (i, col) in layout.state(1).enumerate() {
        trip.push((i, col, 1.0));
    }
    g.extend_from_slice(x_init);
    for t in 1..layout.horizon {
        let row0 = nx * t;
        let (xs, us, xn) = (layout.state(t), layout.control(t), layout.state(t + 1));
        for i in 0..nx {
            trip.push((row0 + i, xn.start + i, 1.0));
            for j in 0..nx {
                trip.push((row0 + i, xs.start + j, -a[(i, j)]));
            }
            for j in 0..nu {
                trip.push((row0 + i, us.start + j, -b[(i, j)]));
            }
        }
        g.extend_from_slice(c);
    }
    let h = CscMatrix::from_triplets(layout.m_eq(), layout.n(), &trip)?;
    Ok((h, g))
}

/// Cost diagonal with `q_diag` on every state block and `r_diag` on every
/// control block.
fn stacked_diagonal(layout: &StackedLayout, q_diag: &[f64], r_diag: &[f64]) -> Vec<f64> {
    let mut d = vec![0.0; layout.n()];
    for t in 1..=layout.horizon {
        d[layout.state(t)].copy_from_slice(q_diag);
        if t < layout.horizon {
            d[layout.control(t)].copy_from_slice(r_diag);
        }
    }
    d
}

/// Rolls `x_{t+1} = A x_t + B u_t + c` forward from `x_init` and stacks the
/// result.
pub fn simulate_stacked(
    layout: &StackedLayout,
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: &[f64],
    x_init: &[f64],
    us: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let mut xs = vec![x_init.to_vec()];
    let mut ax = vec![0.0; layout.nx];
    let mut bu = vec![0.0; layout.nx];
    for u in us {
        let x = xs.last().expect("non-empty");
        a.mul_vec_into(x, &mut ax)?;
        b.mul_vec_into(u, &mut bu)?;
        xs.push((0..layout.nx).map(|i| ax[i] + bu[i] + c[i]).collect());
    }
    layout.stack(&xs, us)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_positions() {
        let l = StackedLayout::new(2, 1, 3);
        assert_eq!(l.n(), 8);
        assert_eq!(l.m_eq(), 6);
        assert_eq!(l.state(1), 0..2);
        assert_eq!(l.control(1), 2..3);
        assert_eq!(l.state(2), 3..5);
        assert_eq!(l.control(2), 5..6);
        assert_eq!(l.state(3), 6..8);
        let z: Vec<f64> = (0..8).map(f64::from).collect();
        let (xs, us) = l.unstack(&z).unwrap();
        assert_eq!(l.stack(&xs, &us).unwrap(), z);
    }

    #[test]
    fn constraints_match_simulation() {
        let l = StackedLayout::new(2, 1, 4);
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.1], vec![0.0, 1.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![0.0], vec![0.1]]).unwrap();
        let c = [0.0, -0.2];
        let x0 = [1.0, -1.0];
        let (h, g) = dynamics_constraints(&l, &a, &b, &c, &x0).unwrap();
        let z = simulate_stacked(&l, &a, &b, &c, &x0, &[vec![0.3], vec![-0.7], vec![2.0]]).unwrap();
        let mut hz = vec![0.0; l.m_eq()];
        h.mul_vec_into(&z, &mut hz).unwrap();
        for (r, gi) in hz.iter().zip(&g) {
            assert!((r - gi).abs() < 1e-14);
        }
    }
}
