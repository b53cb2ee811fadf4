//! Benchmark harness: solves a family of instances under the four solver
//! configurations against a shared reference solution and aggregates
//! iteration counts and timings.

mod report;

pub use report::{emit_report, ReportFormat};

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpc::{
    build_mass_spring, build_quadrotor, sample_initial_state, MassSpringParams, QuadrotorParams,
};
use crate::oracle::splitting_reference_solve;
use crate::precond::{qr_precondition, PreconditionedProblem};
use crate::problem::{hessian_extremes, spectral_estimates, CanonicalProblem, SpectralData};
use crate::solver::clock::Stopwatch;
use crate::solver::{
    pipg_run_preconditioned, pipg_run_with_spectral, HistoryEntry, SolverConfig, SolverResult,
    Status, StepEvent,
};

/// Preconditioning on/off crossed with step-size selection on/off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Configuration {
    #[serde(rename = "plain")]
    Plain,
    #[serde(rename = "qr")]
    Qr,
    #[serde(rename = "step")]
    Step,
    #[serde(rename = "qr+step")]
    QrStep,
}

impl Configuration {
    pub const ALL: [Configuration; 4] = [
        Configuration::Plain,
        Configuration::Qr,
        Configuration::Step,
        Configuration::QrStep,
    ];

    pub fn uses_precondition(self) -> bool {
        matches!(self, Configuration::Qr | Configuration::QrStep)
    }

    pub fn uses_step_selection(self) -> bool {
        matches!(self, Configuration::Step | Configuration::QrStep)
    }

    pub fn name(self) -> &'static str {
        match self {
            Configuration::Plain => "plain",
            Configuration::Qr => "qr",
            Configuration::Step => "step",
            Configuration::QrStep => "qr+step",
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Configuration::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown configuration `{s}`")))
    }
}

/// Instance family of an experiment.
#[derive(Debug, Clone)]
pub enum ProblemKind {
    /// Each run draws its own initial state from the run seed.
    MassSpring(MassSpringParams),
    /// Deterministic; runs repeat the same instance.
    Quadrotor(QuadrotorParams),
    Custom {
        name: String,
        problem: Box<CanonicalProblem>,
    },
}

impl ProblemKind {
    pub fn label(&self) -> &str {
        match self {
            ProblemKind::MassSpring(_) => "mass_spring",
            ProblemKind::Quadrotor(_) => "quadrotor",
            ProblemKind::Custom { name, .. } => name,
        }
    }

    /// The instance for one run and its initial condition, if any.
    fn instance(&self, run_seed: u64) -> Result<(CanonicalProblem, Vec<f64>)> {
        match self {
            ProblemKind::MassSpring(base) => {
                let p = MassSpringParams {
                    x_init: sample_initial_state(run_seed, base.masses),
                    ..base.clone()
                };
                Ok((build_mass_spring(&p)?, p.x_init))
            }
            ProblemKind::Quadrotor(p) => Ok((build_quadrotor(p)?, p.x_init.to_vec())),
            ProblemKind::Custom { problem, .. } => Ok(((**problem).clone(), Vec::new())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub problem: ProblemKind,
    pub configurations: Vec<Configuration>,
    pub runs: usize,
    /// Run `r` uses seed `seed + r`.
    pub seed: u64,
    pub k_max: usize,
    pub tol: f64,
    /// Solves per (configuration, run) cell; timings report mean and minimum.
    pub timing_repeats: usize,
    pub history_stride: usize,
    pub oracle_tol: f64,
    pub oracle_max_iters: usize,
    /// Run cells one after another so timings do not contend for cores.
    pub timing_strict: bool,
    /// Draw further seeds in place of runs whose reference solve failed, up
    /// to `2 · runs` attempts. Only meaningful for randomized families.
    pub resample_invalid: bool,
}

impl ExperimentSpec {
    /// Defaults for a problem family: 50 seeded runs for the mass-spring chain,
    /// one instance timed 100 times for the quadrotor.
    pub fn new(problem: ProblemKind) -> Self {
        let (runs, timing_repeats, resample_invalid) = match problem {
            ProblemKind::MassSpring(_) => (50, 1, true),
            ProblemKind::Quadrotor(_) => (1, 100, false),
            ProblemKind::Custom { .. } => (1, 1, false),
        };
        Self {
            problem,
            configurations: Configuration::ALL.to_vec(),
            runs,
            seed: 0,
            k_max: 50_000,
            tol: 1e-4,
            timing_repeats,
            history_stride: 1,
            oracle_tol: 1e-10,
            oracle_max_iters: 200_000,
            timing_strict: false,
            resample_invalid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 || self.timing_repeats == 0 || self.history_stride == 0 {
            return Err(Error::InvalidArgument(
                "runs, timing repeats and history stride must be at least 1".into(),
            ));
        }
        if self.configurations.is_empty() {
            return Err(Error::InvalidArgument("no configurations selected".into()));
        }
        if self.k_max == 0 || !(self.tol > 0.0) || !(self.oracle_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "k_max and tolerances must be positive".into(),
            ));
        }
        Ok(())
    }

    fn solver_config(&self, c: Configuration, reference: Vec<f64>) -> SolverConfig {
        SolverConfig {
            k_max: self.k_max,
            tol_opt: self.tol,
            use_precondition: c.uses_precondition(),
            use_step_selection: c.uses_step_selection(),
            history_stride: self.history_stride,
            reference_solution: Some(reference),
            ..SolverConfig::default()
        }
    }
}

/// One (configuration, run) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: Configuration,
    pub run: usize,
    pub status: Status,
    pub iterations: usize,
    /// Mean over timing repeats; excludes preconditioning.
    pub solve_ms: f64,
    pub solve_ms_min: f64,
    pub precond_ms: f64,
    /// Spectral data of the problem the iteration ran on.
    pub spectral: SpectralData,
    pub step_events: Vec<StepEvent>,
    /// Largest `α(λmax + σβ)` over all step sizes the run applied.
    pub max_step_product: f64,
    pub history: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub run: usize,
    pub seed: u64,
    pub initial_condition: Vec<f64>,
    pub reference_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub config: Configuration,
    pub runs: usize,
    pub converged: usize,
    /// Non-converged runs enter at `k_max`.
    pub mean_iterations: f64,
    pub min_iterations: usize,
    pub max_iterations: usize,
    pub mean_solve_ms: f64,
    pub min_solve_ms: f64,
    pub mean_precond_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub problem: String,
    pub seed: u64,
    pub k_max: usize,
    pub tol: f64,
    pub runs: Vec<RunInfo>,
    pub records: Vec<RunRecord>,
    pub summaries: Vec<ConfigSummary>,
    /// Runs dropped because the reference solver failed.
    pub invalid_runs: usize,
    pub warnings: Vec<String>,
}

impl BenchmarkReport {
    pub fn summary(&self, c: Configuration) -> Option<&ConfigSummary> {
        self.summaries.iter().find(|s| s.config == c)
    }
}

/// Work shared by all runs: problems of one family share `P` and `H`, so the
/// QR factorization and the plain spectral estimate are computed once.
struct SharedSetup<'a> {
    factor: Option<PreconditionedProblem<'a>>,
    factor_ms: f64,
    plain: Option<SpectralData>,
}

enum RunOutcome {
    Valid(RunInfo, Vec<RunRecord>),
    Invalid(String),
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<BenchmarkReport> {
    spec.validate()?;
    let mut configs = spec.configurations.clone();
    configs.sort();
    configs.dedup();

    let (base, _) = spec.problem.instance(spec.seed)?;
    let mut setup = SharedSetup {
        factor: None,
        factor_ms: 0.0,
        plain: None,
    };
    if configs.iter().any(|c| c.uses_precondition()) {
        let sw = Stopwatch::start();
        let (lambda_max, lambda_min, converged) = hessian_extremes(&base.p, spec.seed);
        let partial = SpectralData {
            lambda_max,
            lambda_min,
            sigma: 1.0,
            sigma_min: None,
            converged,
        };
        setup.factor = Some(qr_precondition(&base, &partial)?);
        setup.factor_ms = millis(sw.elapsed());
    }
    if configs.iter().any(|c| !c.uses_precondition()) {
        setup.plain = Some(spectral_estimates(&base, spec.seed));
    }

    let mut report = BenchmarkReport {
        problem: spec.problem.label().to_string(),
        seed: spec.seed,
        k_max: spec.k_max,
        tol: spec.tol,
        runs: Vec::new(),
        records: Vec::new(),
        summaries: Vec::new(),
        invalid_runs: 0,
        warnings: Vec::new(),
    };
    let max_attempts = if spec.resample_invalid {
        2 * spec.runs
    } else {
        spec.runs
    };
    let mut attempted = 0;
    while report.runs.len() < spec.runs && attempted < max_attempts {
        let batch = (spec.runs - report.runs.len()).min(max_attempts - attempted);
        let outcomes = execute_runs(spec, &configs, &setup, attempted..attempted + batch)?;
        for (run, outcome) in (attempted..).zip(outcomes) {
            match outcome {
                RunOutcome::Valid(info, records) => {
                    report.runs.push(info);
                    report.records.extend(records);
                }
                RunOutcome::Invalid(msg) => {
                    report.invalid_runs += 1;
                    report.warnings.push(format!("run {run} excluded: {msg}"));
                }
            }
        }
        attempted += batch;
    }
    report.summaries = configs
        .iter()
        .filter_map(|&c| summarize(c, &report.records))
        .collect();
    Ok(report)
}

fn execute_runs(
    spec: &ExperimentSpec,
    configs: &[Configuration],
    setup: &SharedSetup<'_>,
    runs: std::ops::Range<usize>,
) -> Result<Vec<RunOutcome>> {
    let count = runs.len();
    let workers = if spec.timing_strict || cfg!(target_arch = "wasm32") {
        1
    } else {
        std::thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(count)
    };
    if workers <= 1 {
        return runs.map(|r| solve_run(spec, configs, setup, r)).collect();
    }
    let first = runs.start;
    let mut slots: Vec<Option<Result<RunOutcome>>> = (0..count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (first + w..first + count)
                        .step_by(workers)
                        .map(|r| (r, solve_run(spec, configs, setup, r)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (r, out) in h.join().expect("benchmark worker panicked") {
                slots[r - first] = Some(out);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every run assigned"))
        .collect()
}

fn solve_run(
    spec: &ExperimentSpec,
    configs: &[Configuration],
    setup: &SharedSetup<'_>,
    run: usize,
) -> Result<RunOutcome> {
    let seed = spec.seed.wrapping_add(run as u64);
    let (prob, initial_condition) = spec.problem.instance(seed)?;
    let reference = match splitting_reference_solve(&prob, spec.oracle_tol, spec.oracle_max_iters) {
        Ok(r) if r.z.iter().any(|v| *v != 0.0) => r,
        Ok(_) => return Ok(RunOutcome::Invalid("reference solution is zero".into())),
        Err(e) => return Ok(RunOutcome::Invalid(e.to_string())),
    };

    let mut retargeted = None;
    let mut retarget_ms = 0.0;
    if let Some(factor) = &setup.factor {
        let sw = Stopwatch::start();
        let pp = factor
            .retarget(&prob)
            .or_else(|_| qr_precondition(&prob, &factor.spectral))?;
        retarget_ms = millis(sw.elapsed());
        retargeted = Some(pp);
    }

    let mut records = Vec::with_capacity(configs.len());
    for &c in configs {
        let config = spec.solver_config(c, reference.z.clone());
        let solve = || -> Result<SolverResult> {
            match (&retargeted, setup.plain) {
                (Some(pp), _) if c.uses_precondition() => {
                    pipg_run_preconditioned(pp, &config, Duration::ZERO)
                }
                (_, Some(s)) => pipg_run_with_spectral(&prob, &config, s),
                _ => unreachable!("shared setup covers every configuration"),
            }
        };
        let first = solve()?;
        let mut times = vec![millis(first.solve_time)];
        for _ in 1..spec.timing_repeats {
            times.push(millis(solve()?.solve_time));
        }
        let s = first.spectral;
        let max_step_product = first
            .applied_steps()
            .map(|st| st.alpha * (s.lambda_max + s.sigma * st.beta))
            .fold(0.0, f64::max);
        records.push(RunRecord {
            config: c,
            run,
            status: first.status,
            iterations: first.iterations,
            solve_ms: times.iter().sum::<f64>() / times.len() as f64,
            solve_ms_min: times.iter().copied().fold(f64::INFINITY, f64::min),
            precond_ms: if c.uses_precondition() {
                setup.factor_ms + retarget_ms
            } else {
                0.0
            },
            spectral: s,
            step_events: first.step_events,
            max_step_product,
            history: first.history,
        });
    }
    let info = RunInfo {
        run,
        seed,
        initial_condition,
        reference_iterations: reference.iterations,
    };
    Ok(RunOutcome::Valid(info, records))
}

fn summarize(c: Configuration, records: &[RunRecord]) -> Option<ConfigSummary> {
    let rs: Vec<&RunRecord> = records.iter().filter(|r| r.config == c).collect();
    if rs.is_empty() {
        return None;
    }
    let count = rs.len() as f64;
    Some(ConfigSummary {
        config: c,
        runs: rs.len(),
        converged: rs.iter().filter(|r| r.status == Status::Converged).count(),
        mean_iterations: rs.iter().map(|r| r.iterations as f64).sum::<f64>() / count,
        min_iterations: rs.iter().map(|r| r.iterations).min().unwrap_or(0),
        max_iterations: rs.iter().map(|r| r.iterations).max().unwrap_or(0),
        mean_solve_ms: rs.iter().map(|r| r.solve_ms).sum::<f64>() / count,
        min_solve_ms: rs
            .iter()
            .map(|r| r.solve_ms_min)
            .fold(f64::INFINITY, f64::min),
        mean_precond_ms: rs.iter().map(|r| r.precond_ms).sum::<f64>() / count,
    })
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}
