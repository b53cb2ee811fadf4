use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{dynamics_constraints, stacked_diagonal, StackedLayout};
use crate::error::{check_len, Error, Result};
use crate::linalg::{zero_order_hold, DenseMatrix};
use crate::problem::{CanonicalProblem, CostHessian};
use crate::projections::{ProductSet, SetDescriptor};

/// A chain of unit masses joined by unit springs, with walls at both ends.
/// State `x = (r, v)` stacks positions and velocities; each mass has its own
/// force input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassSpringParams {
    pub horizon: usize,
    pub dt: f64,
    pub masses: usize,
    pub r_max: f64,
    pub v_max: f64,
    pub u_max: f64,
    /// Diagonal of the state weight, length `2N`.
    pub q_diag: Vec<f64>,
    /// Diagonal of the control weight, length `N`.
    pub r_diag: Vec<f64>,
    pub x_init: Vec<f64>,
}

impl Default for MassSpringParams {
    fn default() -> Self {
        Self::with_initial_state(sample_initial_state(0, 8))
    }
}

impl MassSpringParams {
    /// Default parameters for 8 masses with the given initial state.
    pub fn with_initial_state(x_init: Vec<f64>) -> Self {
        let n = x_init.len() / 2;
        let mut q_diag = vec![1.0; n];
        q_diag.extend(std::iter::repeat_n(5.0, n));
        Self {
            horizon: 30,
            dt: 0.1,
            masses: n,
            r_max: 0.75,
            v_max: 0.75,
            u_max: 0.5,
            q_diag,
            r_diag: vec![1.0; n],
            x_init,
        }
    }

    pub fn layout(&self) -> StackedLayout {
        StackedLayout::new(2 * self.masses, self.masses, self.horizon)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if self.masses == 0 {
            return bad("need at least one mass");
        }
        if self.horizon < 2 {
            return bad("horizon must be at least 2");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("sample time must be positive");
        }
        if [self.r_max, self.v_max, self.u_max]
            .iter()
            .any(|b| !(*b > 0.0))
        {
            return bad("bounds must be positive");
        }
        check_len("state weight", 2 * self.masses, self.q_diag.len())?;
        check_len("control weight", self.masses, self.r_diag.len())?;
        check_len("initial state", 2 * self.masses, self.x_init.len())?;
        if self
            .q_diag
            .iter()
            .chain(&self.r_diag)
            .any(|w| !(*w > 0.0 && w.is_finite()))
        {
            return bad("weights must be positive");
        }
        if self.x_init.iter().any(|v| !v.is_finite()) {
            return bad("initial state must be finite");
        }
        Ok(())
    }

    /// Continuous-time `(A_c, B_c)`.
    pub fn continuous_dynamics(&self) -> (DenseMatrix, DenseMatrix) {
        let n = self.masses;
        let mut a = DenseMatrix::zeros(2 * n, 2 * n);
        let mut b = DenseMatrix::zeros(2 * n, n);
        for i in 0..n {
            a[(i, n + i)] = 1.0;
            a[(n + i, i)] = -2.0;
            if i > 0 {
                a[(n + i, i - 1)] = 1.0;
            }
            if i + 1 < n {
                a[(n + i, i + 1)] = 1.0;
            }
            b[(n + i, i)] = 1.0;
        }
        (a, b)
    }

    /// Zero-order-hold discretization `(A, B)`.
    pub fn discrete_dynamics(&self) -> Result<(DenseMatrix, DenseMatrix)> {
        let (ac, bc) = self.continuous_dynamics();
        zero_order_hold(&ac, &bc, self.dt)
    }
}

/// `2N` entries i.i.d. uniform on `[−0.5, 0.5]`.
pub fn sample_initial_state(seed: u64, masses: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..2 * masses)
        .map(|_| rng.random_range(-0.5..=0.5))
        .collect()
}

pub fn build_mass_spring(p: &MassSpringParams) -> Result<CanonicalProblem> {
    p.validate()?;
    let layout = p.layout();
    let (a, b) = p.discrete_dynamics()?;
    let (h, g) = dynamics_constraints(&layout, &a, &b, &vec![0.0; layout.nx], &p.x_init)?;
    let diag = stacked_diagonal(&layout, &p.q_diag, &p.r_diag);

    let n = p.masses;
    let mut state_lower = vec![-p.r_max; n];
    state_lower.extend(std::iter::repeat_n(-p.v_max, n));
    let state_upper: Vec<f64> = state_lower.iter().map(|v| -v).collect();
    let mut sets = Vec::with_capacity(2 * layout.horizon);
    for t in 1..=layout.horizon {
        sets.push((
            SetDescriptor::boxed(state_lower.clone(), state_upper.clone()),
            layout.nx,
        ));
        if t < layout.horizon {
            sets.push((SetDescriptor::symmetric_box(n, p.u_max), n));
        }
    }
    CanonicalProblem::new(
        CostHessian::Diagonal(diag),
        vec![0.0; layout.n()],
        h,
        g,
        ProductSet::from_sets(sets)?,
    )
}
