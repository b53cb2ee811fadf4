use std::time::Duration;

use super::clock::Stopwatch;
use super::{
    step_selection, steps_from_gamma, HistoryEntry, ProblemView, SolverConfig, SolverResult,
    SolverState, Status, StepEvent, StepSizes,
};
use crate::error::{check_len, Error, Result};
use crate::linalg::{dist_inf, norm_inf};
use crate::precond::{qr_precondition, PreconditionedProblem};
use crate::problem::{hessian_extremes, spectral_estimates, CanonicalProblem, SpectralData};

/// Scratch buffers for the PIPG update, including the cached product `H zᵏ`.
#[derive(Debug, Clone)]
pub struct IterationWorkspace {
    hz: Vec<f64>,
    hz_next: Vec<f64>,
    grad: Vec<f64>,
    z_next: Vec<f64>,
}

impl IterationWorkspace {
    pub fn new(view: &ProblemView<'_>, z: &[f64]) -> Result<Self> {
        let (m, n) = (view.g.len(), view.q.len());
        check_len("workspace z", n, z.len())?;
        let mut hz = vec![0.0; m];
        view.h.mul_vec_into(z, &mut hz)?;
        Ok(Self {
            hz,
            hz_next: vec![0.0; m],
            grad: vec![0.0; n],
            z_next: vec![0.0; n],
        })
    }

    /// `H zᵏ` for the current iterate.
    pub fn hz(&self) -> &[f64] {
        &self.hz
    }

    /// One PIPG update in place:
    ///
    /// ```text
    /// wᵏ⁺¹ = vᵏ + β(Hzᵏ − g)
    /// zᵏ⁺¹ = Π_D[zᵏ − α(Pzᵏ + q + Hᵀwᵏ⁺¹)]
    /// vᵏ⁺¹ = wᵏ⁺¹ + βH(zᵏ⁺¹ − zᵏ)
    /// ```
    ///
    /// Returns `‖zᵏ⁺¹ − zᵏ‖∞ / (1 + ‖zᵏ‖∞)`.
    pub fn step(
        &mut self,
        view: &ProblemView<'_>,
        state: &mut SolverState,
        steps: StepSizes,
    ) -> Result<f64> {
        let StepSizes { alpha, beta, .. } = steps;
        for ((w, v), (hz, g)) in state
            .w
            .iter_mut()
            .zip(&state.v)
            .zip(self.hz.iter().zip(view.g))
        {
            *w = v + beta * (hz - g);
        }

        view.h.mul_vec_transpose_into(&state.w, &mut self.grad)?;
        view.p.apply(&state.z, &mut self.z_next);
        for (((zn, gr), z), q) in self
            .z_next
            .iter_mut()
            .zip(&self.grad)
            .zip(&state.z)
            .zip(view.q)
        {
            *zn = z - alpha * (*zn + q + gr);
        }
        view.d.project_in_place(&mut self.z_next);
        if self.z_next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { iteration: state.k });
        }

        view.h.mul_vec_into(&self.z_next, &mut self.hz_next)?;
        for ((v, w), (hn, h)) in state
            .v
            .iter_mut()
            .zip(&state.w)
            .zip(self.hz_next.iter().zip(&self.hz))
        {
            *v = w + beta * (hn - h);
        }

        let change = dist_inf(&self.z_next, &state.z) / (1.0 + norm_inf(&state.z));
        std::mem::swap(&mut state.z, &mut self.z_next);
        std::mem::swap(&mut self.hz, &mut self.hz_next);
        state.k += 1;
        state.steps = steps;
        Ok(change)
    }
}

/// A single PIPG update from `state` with `steps`.
pub fn pipg_iterate(
    view: &ProblemView<'_>,
    state: &SolverState,
    steps: StepSizes,
) -> Result<SolverState> {
    check_len("pipg_iterate v", view.g.len(), state.v.len())?;
    check_len("pipg_iterate w", view.g.len(), state.w.len())?;
    let mut ws = IterationWorkspace::new(view, &state.z)?;
    let mut next = state.clone();
    ws.step(view, &mut next, steps)?;
    Ok(next)
}

/// Solves `prob` with PIPG, optionally preconditioning the equality
/// constraints and adapting the step sizes every `k_update` iterations.
pub fn pipg_run(prob: &CanonicalProblem, config: &SolverConfig, seed: u64) -> Result<SolverResult> {
    validate_config(prob, config)?;
    if config.use_precondition {
        let sw = Stopwatch::start();
        let (lambda_max, lambda_min, converged) = hessian_extremes(&prob.p, seed);
        let partial = SpectralData {
            lambda_max,
            lambda_min,
            sigma: 1.0,
            sigma_min: None,
            converged,
        };
        let pp = qr_precondition(prob, &partial)?;
        let elapsed = sw.elapsed();
        run_loop(&pp.view(), prob, pp.spectral, config, true, elapsed)
    } else {
        let s = spectral_estimates(prob, seed);
        run_loop(&prob.view(), prob, s, config, false, Duration::ZERO)
    }
}

/// Runs on an existing preconditioned problem; `precondition_time` is reported
/// as given. `config.use_precondition` is ignored.
pub fn pipg_run_preconditioned(
    pp: &PreconditionedProblem<'_>,
    config: &SolverConfig,
    precondition_time: Duration,
) -> Result<SolverResult> {
    validate_config(pp.source, config)?;
    run_loop(
        &pp.view(),
        pp.source,
        pp.spectral,
        config,
        true,
        precondition_time,
    )
}

/// Runs without preconditioning using precomputed spectral data, e.g. shared
/// across problems with the same `P` and `H`. `config.use_precondition` is
/// ignored.
pub fn pipg_run_with_spectral(
    prob: &CanonicalProblem,
    config: &SolverConfig,
    s: SpectralData,
) -> Result<SolverResult> {
    validate_config(prob, config)?;
    run_loop(&prob.view(), prob, s, config, false, Duration::ZERO)
}

fn validate_config(prob: &CanonicalProblem, c: &SolverConfig) -> Result<()> {
    if c.k_max == 0 || c.k_update == 0 || c.history_stride == 0 {
        return Err(Error::InvalidArgument(
            "k_max, k_update and history_stride must be at least 1".into(),
        ));
    }
    if !(c.tol_opt > 0.0) {
        return Err(Error::InvalidArgument("tol_opt must be positive".into()));
    }
    if let Some(r) = &c.reference_solution {
        check_len("reference solution", prob.n(), r.len())?;
        if norm_inf(r) == 0.0 {
            return Err(Error::InvalidArgument(
                "reference solution must be nonzero for relative errors".into(),
            ));
        }
    }
    if let Some(ws) = &c.warm_start {
        check_len("warm start z", prob.n(), ws.z.len())?;
        check_len("warm start v", prob.m(), ws.v.len())?;
    }
    Ok(())
}

fn run_loop(
    view: &ProblemView<'_>,
    original: &CanonicalProblem,
    s: SpectralData,
    config: &SolverConfig,
    preconditioned: bool,
    precondition_time: Duration,
) -> Result<SolverResult> {
    let sw = Stopwatch::start();
    let (z1, v1) = match &config.warm_start {
        Some(ws) => {
            // Starting points outside D are projected.
            let mut z = ws.z.clone();
            view.d.project_in_place(&mut z);
            (z, ws.v.clone())
        }
        None => {
            let mut z = vec![0.0; original.n()];
            view.d.project_in_place(&mut z);
            (z, vec![0.0; original.m()])
        }
    };

    let initial_steps = steps_from_gamma(config.gamma_init.unwrap_or(s.sigma), &s)?;
    let mut steps = initial_steps;
    let mut state = SolverState {
        z: z1.clone(),
        v: v1.clone(),
        w: v1.clone(),
        k: 1,
        steps,
    };
    let mut ws = IterationWorkspace::new(view, &state.z)?;
    let reference = config.reference_solution.as_deref();
    let ref_scale = reference.map(norm_inf);
    let fp_tol = config.fixed_point_tol();
    let g_scale = 1.0 + norm_inf(view.g);

    let mut history = Vec::new();
    let mut iterates = Vec::new();
    let mut step_events = Vec::new();
    let mut orig_hz = vec![0.0; original.m()];
    let mut status = Status::MaxIters;
    let mut iterations = 0;

    for k in 1..=config.k_max {
        if config.use_step_selection && k % config.k_update == 0 {
            let sel = step_selection(&z1, &v1, &state.z, &state.w, &s, steps, config.step_rule);
            if sel.applied {
                steps = sel.steps;
            }
            step_events.push(StepEvent { k, selection: sel });
        }

        let change = ws.step(view, &mut state, steps).map_err(|e| match e {
            Error::Divergence { .. } => Error::Divergence { iteration: k },
            other => other,
        })?;
        iterations = k;

        let error_opt = match (reference, ref_scale) {
            (Some(r), Some(scale)) => Some(dist_inf(&state.z, r) / scale),
            _ => None,
        };
        let converged = match error_opt {
            Some(e) => e < config.tol_opt,
            None => {
                change < fp_tol
                    && ws
                        .hz()
                        .iter()
                        .zip(view.g)
                        .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
                        < fp_tol * g_scale
            }
        };

        if k % config.history_stride == 0 || converged || k == config.k_max {
            let feas_abs = if preconditioned {
                original.h.mul_vec_into(&state.z, &mut orig_hz)?;
                dist_inf(&orig_hz, &original.g)
            } else {
                dist_inf(ws.hz(), &original.g)
            };
            history.push(HistoryEntry {
                k,
                error_opt,
                error_feas: feas_abs / ref_scale.unwrap_or(1.0),
                gamma: steps.gamma,
            });
            if config.record_iterates {
                iterates.push(state.z.clone());
            }
        }

        if converged {
            status = Status::Converged;
            break;
        }
    }

    Ok(SolverResult {
        z_final: state.z,
        w_final: state.w,
        iterations,
        status,
        history,
        iterates,
        step_events,
        initial_steps,
        spectral: s,
        solve_time: sw.elapsed(),
        precondition_time,
    })
}
