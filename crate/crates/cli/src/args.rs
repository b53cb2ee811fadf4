use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default seed when `--seed` is omitted.
pub const SEED_ENV: &str = "PIPG_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "pipg",
    version,
    about = "PIPG conic QP solver with QR preconditioning"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a benchmark problem as JSON.
    Generate {
        #[command(subcommand)]
        problem: GenerateProblem,
        /// Output file; stdout if omitted.
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Solve a problem file and write the result as JSON.
    Solve(SolveArgs),
    /// Run the configuration matrix on a benchmark family or problem file.
    Bench(BenchArgs),
    /// Write the QR-preconditioned problem as JSON.
    Precondition {
        problem: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Seed for the eigenvalue estimates of a dense cost Hessian.
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Project a point onto a single set.
    Project {
        /// Set descriptor as JSON, e.g. '{"type":"ball","params":{"radius":1,"center":[0,0]}}'.
        #[arg(long)]
        set: String,
        /// Comma-separated coordinates.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        point: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenerateProblem {
    MassSpring(MassSpringArgs),
    Quadrotor(QuadrotorArgs),
}

#[derive(Debug, Args)]
pub struct MassSpringArgs {
    #[arg(long, default_value_t = 30)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 8)]
    pub masses: usize,
    #[arg(long, default_value_t = 0.75)]
    pub r_max: f64,
    #[arg(long, default_value_t = 0.75)]
    pub v_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub u_max: f64,
    /// State weight diagonal (2N entries); default `(1,…,1, 5,…,5)`.
    #[arg(long, value_delimiter = ',')]
    pub q_diag: Option<Vec<f64>>,
    /// Control weight diagonal (N entries); default all ones.
    #[arg(long, value_delimiter = ',')]
    pub r_diag: Option<Vec<f64>>,
    /// Initial state (2N entries); drawn uniformly from `[−0.5, 0.5]` with
    /// `--seed` if omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x_init: Option<Vec<f64>>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Separating,
    AsPrinted,
}

#[derive(Debug, Args)]
pub struct QuadrotorArgs {
    #[arg(long, default_value_t = 30)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0.2)]
    pub dt: f64,
    #[arg(long, default_value_t = 3.0)]
    pub mass: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub psi: f64,
    #[arg(long, default_value_t = -std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub r_c: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.25)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.5)]
    pub v_max: f64,
    #[arg(long, default_value_t = 35.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 0.1745)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 9.8)]
    pub grav: f64,
    #[arg(long, value_delimiter = ',')]
    pub q_diag: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub r_diag: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x_init: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x_target: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Separating)]
    pub convention: ConventionArg,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub problem: PathBuf,
    /// One of plain, qr, step, qr+step.
    #[arg(long, default_value = "qr+step")]
    pub config: String,
    #[arg(long, default_value_t = 50_000)]
    pub k_max: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 25)]
    pub k_update: usize,
    #[arg(long, default_value_t = 1)]
    pub history_stride: usize,
    /// Compute a reference solution first and stop on the relative error
    /// against it.
    #[arg(long)]
    pub reference: bool,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// `mass-spring`, `quadrotor`, or a problem JSON file.
    pub problem: String,
    /// Comma-separated subset of plain, qr, step, qr+step.
    #[arg(long, value_delimiter = ',', default_value = "plain,qr,step,qr+step")]
    pub configs: Vec<String>,
    /// Defaults to 50 for mass-spring and 1 otherwise.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Solves per cell for timing; defaults to 100 for quadrotor and 1 otherwise.
    #[arg(long)]
    pub timing_repeats: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50_000)]
    pub k_max: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub history_stride: usize,
    /// csv, history-csv, json or markdown.
    #[arg(long, default_value = "markdown")]
    pub format: String,
    /// Additional report files as FORMAT=PATH, e.g. `csv=runs.csv`.
    #[arg(long = "emit")]
    pub emit: Vec<String>,
    /// Run cells sequentially so timings do not contend for cores.
    #[arg(long)]
    pub timing_strict: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
