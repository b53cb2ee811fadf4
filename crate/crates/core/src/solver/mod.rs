//! The PIPG iteration, its step-size parameterization, the adaptive step-size
//! rule and the combined driver with optional QR preconditioning.

pub(crate) mod clock;
mod pipg;
mod steps;

pub use pipg::{
    pipg_iterate, pipg_run, pipg_run_preconditioned, pipg_run_with_spectral, IterationWorkspace,
};
pub use steps::{
    gap_surrogate, step_selection, steps_from_gamma, StepRule, StepSelection, StepSizes,
    DEGENERATE_NORM,
};

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::problem::{CanonicalProblem, CostHessian, SpectralData};
use crate::projections::ProductSet;

/// Borrowed problem data `(P, q, H, g, D)` the iteration runs on; `H, g` may be
/// the original or the preconditioned constraints.
#[derive(Debug, Clone, Copy)]
pub struct ProblemView<'a> {
    pub p: &'a CostHessian,
    pub q: &'a [f64],
    pub h: &'a Matrix,
    pub g: &'a [f64],
    pub d: &'a ProductSet,
}

impl CanonicalProblem {
    pub fn view(&self) -> ProblemView<'_> {
        ProblemView {
            p: &self.p,
            q: &self.q,
            h: &self.h,
            g: &self.g,
            d: &self.d,
        }
    }
}

/// Optional starting point; defaults to `z¹ = Π_D[0]`, `v¹ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarmStart {
    pub z: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub k_max: usize,
    pub k_update: usize,
    pub tol_opt: f64,
    /// Initial `γ`; `None` means `γ = σ`, i.e. `β = 1`.
    pub gamma_init: Option<f64>,
    pub use_precondition: bool,
    pub use_step_selection: bool,
    pub step_rule: StepRule,
    pub history_stride: usize,
    /// Keep a copy of `zᵏ` at every history point.
    pub record_iterates: bool,
    /// When present, stop on `error_opt < tol_opt` against this solution;
    /// otherwise stop on the relative fixed-point residual.
    pub reference_solution: Option<Vec<f64>>,
    pub warm_start: Option<WarmStart>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k_max: 50_000,
            k_update: 25,
            tol_opt: 1e-4,
            gamma_init: None,
            use_precondition: true,
            use_step_selection: true,
            step_rule: StepRule::Minimizer,
            history_stride: 1,
            record_iterates: false,
            reference_solution: None,
            warm_start: None,
        }
    }
}

impl SolverConfig {
    /// Fixed-point threshold used when no reference solution is given.
    pub fn fixed_point_tol(&self) -> f64 {
        self.tol_opt * 1e-2
    }
}

/// Iterates `(zᵏ, vᵏ, wᵏ)` of the PIPG recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub z: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub k: usize,
    pub steps: StepSizes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIters,
}

/// One history sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub k: usize,
    /// `‖zᵏ − z⋆‖∞ / ‖z⋆‖∞`, only with a reference solution.
    pub error_opt: Option<f64>,
    /// `‖Hzᵏ − g‖∞` for the original constraints, divided by `‖z⋆‖∞` when a
    /// reference solution is present.
    pub error_feas: f64,
    pub gamma: f64,
}

/// One firing of the adaptive step-size rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepEvent {
    pub k: usize,
    pub selection: StepSelection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub z_final: Vec<f64>,
    pub w_final: Vec<f64>,
    /// Number of PIPG updates performed.
    pub iterations: usize,
    pub status: Status,
    pub history: Vec<HistoryEntry>,
    pub iterates: Vec<Vec<f64>>,
    pub step_events: Vec<StepEvent>,
    pub initial_steps: StepSizes,
    /// Spectral data of the problem actually iterated on.
    pub spectral: SpectralData,
    pub solve_time: Duration,
    pub precondition_time: Duration,
}

#[derive(Serialize, Deserialize)]
struct ResultWire {
    status: Status,
    iterations: usize,
    solve_time_ms: f64,
    precondition_time_ms: f64,
    history: Vec<(usize, Option<f64>, f64, f64)>,
    z_final: Vec<f64>,
}

impl SolverResult {
    /// Every step size the run applied: the initial ones and each accepted update.
    pub fn applied_steps(&self) -> impl Iterator<Item = StepSizes> + '_ {
        std::iter::once(self.initial_steps).chain(
            self.step_events
                .iter()
                .filter(|e| e.selection.applied)
                .map(|e| e.selection.steps),
        )
    }

    /// JSON document
    /// `{status, iterations, solve_time_ms, precondition_time_ms, history: [[k, error_opt, error_feas, gamma], ...], z_final}`.
    pub fn to_json(&self) -> String {
        let wire = ResultWire {
            status: self.status,
            iterations: self.iterations,
            solve_time_ms: self.solve_time.as_secs_f64() * 1e3,
            precondition_time_ms: self.precondition_time.as_secs_f64() * 1e3,
            history: self
                .history
                .iter()
                .map(|h| (h.k, h.error_opt, h.error_feas, h.gamma))
                .collect(),
            z_final: self.z_final.clone(),
        };
        serde_json::to_string(&wire).expect("result serializes")
    }
}
