mod args;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use pipg_core::bench::{
    emit_report, run_experiment, Configuration, ExperimentSpec, ProblemKind, ReportFormat,
};
use pipg_core::mpc::{
    build_mass_spring, build_quadrotor, sample_initial_state, KeepOutConvention, MassSpringParams,
    QuadrotorParams,
};
use pipg_core::oracle::splitting_reference_solve;
use pipg_core::precond::verify_orthogonality;
use pipg_core::problem::{hessian_extremes, problem_from_json, problem_to_json};
use pipg_core::solver::{pipg_run, SolverConfig};
use pipg_core::{qr_precondition, SetDescriptor, SpectralData};

use args::{
    BenchArgs, Cli, Command, ConventionArg, GenerateProblem, MassSpringArgs, QuadrotorArgs,
    SolveArgs,
};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] pipg_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(pipg_core::Error::Divergence { .. }) => 3,
            CliError::Core(pipg_core::Error::OracleFailure(_)) => 4,
            CliError::Io { .. } => 1,
            CliError::Usage(_) | CliError::Core(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Generate { problem, output } => {
            let prob = match problem {
                GenerateProblem::MassSpring(a) => build_mass_spring(&mass_spring_params(a)?)?,
                GenerateProblem::Quadrotor(a) => build_quadrotor(&quadrotor_params(a)?)?,
            };
            write_output(output.as_deref(), &problem_to_json(&prob))
        }
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Precondition {
            problem,
            output,
            seed,
        } => {
            let prob = read_problem(&problem)?;
            prob.check_full_row_rank()?;
            let (lambda_max, lambda_min, converged) = hessian_extremes(&prob.p, seed);
            let partial = SpectralData {
                lambda_max,
                lambda_min,
                sigma: 1.0,
                sigma_min: None,
                converged,
            };
            let pp = qr_precondition(&prob, &partial)?;
            eprintln!(
                "eta = {}, max |ĤĤᵀ − η²I| = {:e}, H storage {} bytes, Ĥ storage {} bytes",
                pp.eta,
                verify_orthogonality(&pp),
                prob.h.storage_bytes(),
                pp.h_hat.storage_bytes()
            );
            write_output(output.as_deref(), &problem_to_json(&pp.to_problem()?))
        }
        Command::Project { set, point } => {
            let set: SetDescriptor = serde_json::from_str(&set)
                .map_err(|e| CliError::Usage(format!("invalid set descriptor: {e}")))?;
            set.validate()?;
            set.check_block_len(point.len())?;
            let projected = set.project(&point);
            let text = serde_json::to_string(&projected).expect("finite floats serialize");
            write_output(None, &text)
        }
    }
}

fn solve(a: SolveArgs) -> CliResult<()> {
    let prob = read_problem(&a.problem)?;
    prob.check_full_row_rank()?;
    let c: Configuration = a.config.parse()?;
    let reference = if a.reference {
        Some(splitting_reference_solve(&prob, 1e-10, 200_000)?.z)
    } else {
        None
    };
    let config = SolverConfig {
        k_max: a.k_max,
        k_update: a.k_update,
        tol_opt: a.tol,
        use_precondition: c.uses_precondition(),
        use_step_selection: c.uses_step_selection(),
        history_stride: a.history_stride,
        reference_solution: reference,
        ..SolverConfig::default()
    };
    let result = pipg_run(&prob, &config, a.seed)?;
    eprintln!(
        "{:?} after {} iterations ({:.3} ms solve, {:.3} ms preconditioning)",
        result.status,
        result.iterations,
        result.solve_time.as_secs_f64() * 1e3,
        result.precondition_time.as_secs_f64() * 1e3
    );
    write_output(a.output.as_deref(), &result.to_json())
}

fn bench(a: BenchArgs) -> CliResult<()> {
    let problem = match a.problem.as_str() {
        "mass-spring" | "mass_spring" => ProblemKind::MassSpring(MassSpringParams::default()),
        "quadrotor" => ProblemKind::Quadrotor(QuadrotorParams::default()),
        path => {
            let path = Path::new(path);
            let prob = read_problem(path)?;
            prob.check_full_row_rank()?;
            let name = path
                .file_stem()
                .map_or("problem".into(), |s| s.to_string_lossy().into_owned());
            ProblemKind::Custom {
                name,
                problem: Box::new(prob),
            }
        }
    };
    let configurations = a
        .configs
        .iter()
        .map(|s| s.parse::<Configuration>())
        .collect::<Result<Vec<_>, _>>()?;
    let format: ReportFormat = a.format.parse()?;
    let extra = a
        .emit
        .iter()
        .map(|spec| {
            let (fmt, path) = spec.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("--emit expects FORMAT=PATH, got `{spec}`"))
            })?;
            Ok((fmt.parse::<ReportFormat>()?, PathBuf::from(path)))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let defaults = ExperimentSpec::new(problem);
    let spec = ExperimentSpec {
        configurations,
        runs: a.runs.unwrap_or(defaults.runs),
        timing_repeats: a.timing_repeats.unwrap_or(defaults.timing_repeats),
        seed: a.seed,
        k_max: a.k_max,
        tol: a.tol,
        history_stride: a.history_stride,
        timing_strict: a.timing_strict,
        ..defaults
    };
    let report = run_experiment(&spec)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.records.is_empty() {
        return Err(pipg_core::Error::OracleFailure(format!(
            "all {} runs failed the reference solve",
            report.invalid_runs
        ))
        .into());
    }
    for (fmt, path) in extra {
        write_output(Some(&path), &emit_report(&report, fmt)?)?;
    }
    write_output(a.output.as_deref(), &emit_report(&report, format)?)
}

fn mass_spring_params(a: MassSpringArgs) -> CliResult<MassSpringParams> {
    let x_init = a
        .x_init
        .unwrap_or_else(|| sample_initial_state(a.seed, a.masses));
    if x_init.len() != 2 * a.masses {
        return Err(CliError::Usage(format!(
            "--x-init needs {} entries for {} masses",
            2 * a.masses,
            a.masses
        )));
    }
    let mut p = MassSpringParams::with_initial_state(x_init);
    p.horizon = a.horizon;
    p.dt = a.dt;
    p.r_max = a.r_max;
    p.v_max = a.v_max;
    p.u_max = a.u_max;
    if let Some(q) = a.q_diag {
        p.q_diag = q;
    }
    if let Some(r) = a.r_diag {
        p.r_diag = r;
    }
    Ok(p)
}

fn fixed<const N: usize>(
    name: &str,
    v: Option<Vec<f64>>,
    default: [f64; N],
) -> CliResult<[f64; N]> {
    match v {
        None => Ok(default),
        Some(v) => v
            .try_into()
            .map_err(|_| CliError::Usage(format!("--{name} needs {N} comma-separated values"))),
    }
}

fn quadrotor_params(a: QuadrotorArgs) -> CliResult<QuadrotorParams> {
    let d = QuadrotorParams::default();
    Ok(QuadrotorParams {
        horizon: a.horizon,
        dt: a.dt,
        mass: a.mass,
        psi: a.psi,
        phi: a.phi,
        r_c: fixed("r-c", a.r_c, d.r_c)?,
        rho: a.rho,
        v_max: a.v_max,
        u_max: a.u_max,
        theta_max: a.theta_max,
        grav: a.grav,
        q_diag: fixed("q-diag", a.q_diag, d.q_diag)?,
        r_diag: fixed("r-diag", a.r_diag, d.r_diag)?,
        x_init: fixed("x-init", a.x_init, d.x_init)?,
        x_target: fixed("x-target", a.x_target, d.x_target)?,
        convention: match a.convention {
            ConventionArg::Separating => KeepOutConvention::Separating,
            ConventionArg::AsPrinted => KeepOutConvention::AsPrinted,
        },
    })
}

fn read_problem(path: &Path) -> CliResult<pipg_core::CanonicalProblem> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(problem_from_json(&text)?)
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        out.write_all(b"\n")
                    }
                })
                .or_else(|e| match e.kind() {
                    // Output piped into a reader that quit early, e.g. `head`.
                    std::io::ErrorKind::BrokenPipe => Ok(()),
                    _ => Err(CliError::Io {
                        path: PathBuf::from("<stdout>"),
                        source: e,
                    }),
                })
        }
    }
}
