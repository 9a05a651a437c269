//! Command-line front end: parse a problem file, run checks or witness
//! searches, and emit machine-readable reports.
//!
//! Exit codes: 0 when a verdict was computed (whatever it is), 2 for parse
//! or validation errors, 3 when a size cap was exceeded, 4 for numerical
//! failures. The verdict itself lives in the report, never in the exit
//! code.

mod problem;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use majorize::criteria::{
    build_grid, check_aubrun_nechita, check_jensen, check_klimesh, check_matrix_necessary,
    check_matrix_sufficient, check_relative, tabulate_spectrum, CheckConfig, CheckReport,
    SpectrumGrid,
};
use majorize::majorization::{bistochastic_majorizes, matrix_majorizes, FeasibilityResult};
use majorize::tuple::tuple_boxtimes;
use majorize::vector::{tensor_power, ProbVector};
use majorize::witness::{
    approx_catalytic_search, bistochastic_witness, build_catalyst_tuple, build_catalyst_vector,
    find_asymptotic_n, find_asymptotic_n_vector, CatalyticOutcome,
};
use majorize::{caps, tol, Error};

use problem::{parse_problem, Problem, ProblemError};
use report::{emit, Body, EffectiveConfig, Matrix, Report, WitnessOutcome};

#[derive(Parser)]
#[command(
    name = "majorize",
    version,
    about = "Decide majorization orders between probability vectors and tuples, scan their \
             monotone spectra, and construct transition witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a one-shot feasibility or criterion check on a problem file
    Check(CheckArgs),
    /// Search for tensor-power or approximate-catalytic witnesses
    Witness(WitnessArgs),
    /// Tabulate every monotone of the test spectrum on both tuples
    Scan(ScanArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Problem file (JSON; numbers may be written as exact fractions "a/b")
    problem: PathBuf,
    /// Grid density per simplex axis [default: 16 for d <= 3, 8 at d = 4, 4 above]
    #[arg(long)]
    resolution: Option<usize>,
    /// Largest finite trajectory parameter in the grid [default: 64]
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Margin below which a point counts as violated [default: 1e-9]
    #[arg(long)]
    tol_cmp: Option<f64>,
    /// Margin a point must exceed to count as strict [default: 1e-7]
    #[arg(long)]
    tol_strict: Option<f64>,
    /// Seed recorded in the report for reproducibility
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which criterion to run
    #[arg(long, value_enum)]
    mode: Mode,
    /// Decide one-shot feasibility in exact rational arithmetic
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest tensor power to try [default: 8]
    #[arg(long)]
    n_max: Option<usize>,
    /// Accuracy of the approximate-catalytic target; omitting it searches
    /// for a plain tensor-power witness
    #[arg(long)]
    epsilon: Option<f64>,
    /// Column of the target to reproduce exactly in the mixed target
    #[arg(long)]
    fixed_column: Option<usize>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Oneshot,
    AubrunNechita,
    Klimesh,
    Jensen,
    MatrixSufficient,
    MatrixNecessary,
    Relative,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Oneshot => "oneshot",
            Mode::AubrunNechita => "aubrun-nechita",
            Mode::Klimesh => "klimesh",
            Mode::Jensen => "jensen",
            Mode::MatrixSufficient => "matrix-sufficient",
            Mode::MatrixNecessary => "matrix-necessary",
            Mode::Relative => "relative",
        }
    }
}

enum CliError {
    Validation(String),
    CapExceeded(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::CapExceeded(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m)
            | CliError::CapExceeded(m)
            | CliError::Numerical(m)
            | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeCapExceeded(m) => CliError::CapExceeded(m),
            Error::NumericalFailure(m) => CliError::Numerical(format!("numerical failure: {m}")),
            Error::CrossCheckFailed(m) => CliError::Numerical(format!("cross-check failed: {m}")),
            Error::InvalidValue(m) | Error::DimensionMismatch(m) => CliError::Validation(m),
            Error::ColumnsNotDistinct(m) => CliError::Validation(m),
        }
    }
}

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => run_check(args),
        Command::Witness(args) => run_witness(args),
        Command::Scan(args) => run_scan(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("majorize: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Merged settings: flags win over file options, which win over defaults.
struct Effective {
    resolution: usize,
    lambda_max: f64,
    n_max: usize,
    epsilon: Option<f64>,
    cfg: CheckConfig,
    exact: bool,
    seed: Option<u64>,
    fixed_column: Option<usize>,
}

fn default_resolution(d: usize) -> usize {
    match d {
        0..=3 => 16,
        4 => 8,
        _ => 4,
    }
}

fn merge(
    common: &CommonArgs,
    problem: &Problem,
    exact_flag: bool,
    n_max: Option<usize>,
    epsilon: Option<f64>,
    fixed_column: Option<usize>,
) -> Effective {
    let o = &problem.options;
    Effective {
        resolution: common
            .resolution
            .or(o.resolution)
            .unwrap_or_else(|| default_resolution(problem.d)),
        lambda_max: common.lambda_max.or(o.lambda_max).unwrap_or(64.0),
        n_max: n_max.or(o.n_max).unwrap_or(8),
        epsilon: epsilon.or(o.epsilon),
        cfg: CheckConfig {
            tol_cmp: common.tol_cmp.or(o.tol_cmp).unwrap_or(tol::CMP),
            tol_strict: common.tol_strict.or(o.tol_strict).unwrap_or(tol::STRICT),
        },
        exact: exact_flag || o.exact.unwrap_or(false),
        seed: common.seed.or(o.seed),
        fixed_column: fixed_column.or(o.fixed_column),
    }
}

fn effective_config(problem: &Problem, eff: &Effective) -> EffectiveConfig {
    EffectiveConfig {
        d: problem.d,
        resolution: eff.resolution,
        lambda_max: eff.lambda_max,
        n_max: eff.n_max,
        epsilon: eff.epsilon,
        tol_cmp: eff.cfg.tol_cmp,
        tol_strict: eff.cfg.tol_strict,
        exact: eff.exact,
        seed: eff.seed,
        fixed_column: eff.fixed_column,
        tensor_len_cap: caps::TENSOR_LEN,
        lp_var_cap: caps::LP_VARS,
    }
}

fn load(path: &PathBuf) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_problem(&text)?)
}

fn vector_pair(problem: &Problem) -> Result<(ProbVector, ProbVector), CliError> {
    if problem.d != 1 {
        return Err(CliError::Validation(format!(
            "this mode works on simple-majorization problems (d = 1), got d = {}",
            problem.d
        )));
    }
    let p = ProbVector::new(problem.p.column(0).clone())
        .map_err(|e| CliError::Validation(format!("p: {e}")))?;
    let q = ProbVector::new(problem.q.column(0).clone())
        .map_err(|e| CliError::Validation(format!("q: {e}")))?;
    Ok((p, q))
}

fn grid_for(d: usize, eff: &Effective) -> Result<SpectrumGrid, CliError> {
    Ok(build_grid(d.max(2), eff.resolution, eff.lambda_max)?)
}

fn feasibility_body(result: &FeasibilityResult) -> Body {
    Body::Feasibility {
        feasible: result.feasible,
        residual: result.feasible.then_some(result.residual),
        transition: result.witness.as_ref().map(Matrix::from),
    }
}

fn criterion_body(report: &CheckReport, grid: &SpectrumGrid) -> Body {
    Body::Criterion {
        verdict: report.verdict,
        margin: report.margin,
        worst_point: report.worst_point.clone(),
        points_evaluated: report.points_evaluated,
        points_incomparable: report.points_incomparable,
        pairwise_tropical: report.pairwise_tropical,
        grid_alpha_points: grid.alpha_points.len(),
        grid_beta_points: grid.beta_points.len(),
    }
}

fn finish(
    command: &str,
    mode: Option<&str>,
    problem: &Problem,
    eff: &Effective,
    started: Instant,
    body: Body,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let report = Report {
        tool: "majorize".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        mode: mode.map(String::from),
        config: effective_config(problem, eff),
        wall_time_ms: started.elapsed().as_millis() as u64,
        body,
    };
    emit(&report, out.map(|p| p.as_path()))
        .map_err(|e| CliError::Io(format!("cannot write report: {e}")))
}

fn run_check(args: CheckArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let problem = load(&args.common.problem)?;
    let eff = merge(&args.common, &problem, args.exact, None, None, None);

    let body = match args.mode {
        Mode::Oneshot => {
            let result = if problem.d == 1 {
                if eff.exact {
                    majorize::exact::exact_bistochastic_majorizes(
                        &problem.p_exact[0],
                        &problem.q_exact[0],
                    )?
                } else {
                    bistochastic_majorizes(problem.p.column(0), problem.q.column(0))?
                }
            } else if eff.exact {
                majorize::exact::exact_feasibility_result(&problem.p_exact, &problem.q_exact)?
            } else {
                matrix_majorizes(&problem.p, &problem.q)?
            };
            feasibility_body(&result)
        }
        Mode::AubrunNechita => {
            let (p, q) = vector_pair(&problem)?;
            let grid = grid_for(1, &eff)?;
            criterion_body(&check_aubrun_nechita(&p, &q, &grid, &eff.cfg), &grid)
        }
        Mode::Klimesh => {
            let (p, q) = vector_pair(&problem)?;
            let grid = grid_for(1, &eff)?;
            criterion_body(&check_klimesh(&p, &q, &grid, &eff.cfg)?, &grid)
        }
        Mode::Jensen => {
            let (p, q) = vector_pair(&problem)?;
            let grid = grid_for(1, &eff)?;
            criterion_body(&check_jensen(&p, &q, &grid, &eff.cfg), &grid)
        }
        Mode::MatrixSufficient | Mode::MatrixNecessary => {
            if problem.d < 2 {
                return Err(CliError::Validation("matrix modes need d >= 2".into()));
            }
            let grid = grid_for(problem.d, &eff)?;
            let report = match args.mode {
                Mode::MatrixSufficient => {
                    check_matrix_sufficient(&problem.p, &problem.q, &grid, &eff.cfg)?
                }
                _ => check_matrix_necessary(&problem.p, &problem.q, &grid, &eff.cfg)?,
            };
            criterion_body(&report, &grid)
        }
        Mode::Relative => {
            if problem.d != 2 {
                return Err(CliError::Validation("relative majorization needs d = 2".into()));
            }
            let lift = |col: &majorize::vector::NonNegVector, name: &str| {
                ProbVector::new(col.clone())
                    .map_err(|e| CliError::Validation(format!("{name}: {e}")))
            };
            let p1 = lift(problem.p.column(0), "p column 0")?;
            let p2 = lift(problem.p.column(1), "p column 1")?;
            let q1 = lift(problem.q.column(0), "q column 0")?;
            let q2 = lift(problem.q.column(1), "q column 1")?;
            let grid = grid_for(2, &eff)?;
            criterion_body(&check_relative(&p1, &p2, &q1, &q2, &grid, &eff.cfg)?, &grid)
        }
    };
    finish(
        "check",
        Some(args.mode.name()),
        &problem,
        &eff,
        started,
        body,
        args.common.out.as_ref(),
    )
}

fn run_witness(args: WitnessArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let problem = load(&args.common.problem)?;
    let eff = merge(
        &args.common,
        &problem,
        false,
        args.n_max,
        args.epsilon,
        args.fixed_column,
    );

    let body = if problem.d == 1 {
        let (p, q) = vector_pair(&problem)?;
        match find_asymptotic_n_vector(&p, &q, eff.n_max)? {
            None => Body::Witness {
                outcome: WitnessOutcome::NotFoundBelowCap,
                order: None,
                transition: None,
                transition_residual: None,
                catalyst_columns: None,
                catalyst_verified: None,
                mixed_target_columns: None,
                mixing_drift: None,
                refusal_margin: None,
            },
            Some(n) => {
                let pn = ProbVector::new(tensor_power(&p, n)?)?;
                let qn = ProbVector::new(tensor_power(&q, n)?)?;
                let t = bistochastic_witness(&pn, &qn)?;
                let len = pn.len().max(qn.len());
                let residual = t
                    .apply(pn.padded(len).entries())?
                    .iter()
                    .zip(qn.padded(len).entries())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                let r = build_catalyst_vector(&p, &q, n)?;
                let pr = ProbVector::new(majorize::vector::kron(&p, r.as_nonneg()))?;
                let qr = ProbVector::new(majorize::vector::kron(&q, r.as_nonneg()))?;
                let verified = majorize::majorization::hlp_majorizes(&pr, &qr);
                Body::Witness {
                    outcome: WitnessOutcome::Found,
                    order: Some(n),
                    transition: Some(Matrix::from(&t)),
                    transition_residual: Some(residual),
                    catalyst_columns: Some(vec![r.entries().to_vec()]),
                    catalyst_verified: Some(verified),
                    mixed_target_columns: None,
                    mixing_drift: None,
                    refusal_margin: None,
                }
            }
        }
    } else if let Some(epsilon) = eff.epsilon {
        let grid = grid_for(problem.d, &eff)?;
        match approx_catalytic_search(
            &problem.p,
            &problem.q,
            epsilon,
            eff.n_max,
            eff.fixed_column,
            &grid,
            &eff.cfg,
        )? {
            CatalyticOutcome::NecessaryViolated(report) => Body::Witness {
                outcome: WitnessOutcome::NecessaryViolated,
                order: None,
                transition: None,
                transition_residual: None,
                catalyst_columns: None,
                catalyst_verified: None,
                mixed_target_columns: None,
                mixing_drift: None,
                refusal_margin: Some(report.margin),
            },
            CatalyticOutcome::NotFoundBelowCap { .. } => Body::Witness {
                outcome: WitnessOutcome::NotFoundBelowCap,
                order: None,
                transition: None,
                transition_residual: None,
                catalyst_columns: None,
                catalyst_verified: None,
                mixed_target_columns: None,
                mixing_drift: None,
                refusal_margin: None,
            },
            CatalyticOutcome::Found(w) => {
                let drift = (0..problem.q.d())
                    .map(|k| {
                        (0..problem.q.rows())
                            .map(|i| (w.q_eps.entry(i, k) - problem.q.entry(i, k)).abs())
                            .sum::<f64>()
                    })
                    .fold(0.0f64, f64::max);
                Body::Witness {
                    outcome: WitnessOutcome::Found,
                    order: Some(w.order),
                    transition: Some(Matrix::from(&w.transition)),
                    transition_residual: Some(w.residual),
                    catalyst_columns: Some(
                        w.catalyst.columns.iter().map(|c| c.entries().to_vec()).collect(),
                    ),
                    catalyst_verified: Some(w.residual <= tol::LP),
                    mixed_target_columns: Some(
                        w.q_eps.columns().iter().map(|c| c.entries().to_vec()).collect(),
                    ),
                    mixing_drift: Some(drift),
                    refusal_margin: None,
                }
            }
        }
    } else {
        match find_asymptotic_n(&problem.p, &problem.q, eff.n_max)? {
            None => Body::Witness {
                outcome: WitnessOutcome::NotFoundBelowCap,
                order: None,
                transition: None,
                transition_residual: None,
                catalyst_columns: None,
                catalyst_verified: None,
                mixed_target_columns: None,
                mixing_drift: None,
                refusal_margin: None,
            },
            Some(w) => {
                let catalyst = build_catalyst_tuple(&problem.p, &problem.q, w.order)?;
                let r = catalyst.as_tuple()?;
                let pr = tuple_boxtimes(&problem.p, &r)?;
                let qr = tuple_boxtimes(&problem.q, &r)?;
                let verified = matrix_majorizes(&pr, &qr)?.feasible;
                Body::Witness {
                    outcome: WitnessOutcome::Found,
                    order: Some(w.order),
                    transition: Some(Matrix::from(&w.transition)),
                    transition_residual: Some(w.residual),
                    catalyst_columns: Some(
                        catalyst.columns.iter().map(|c| c.entries().to_vec()).collect(),
                    ),
                    catalyst_verified: Some(verified),
                    mixed_target_columns: None,
                    mixing_drift: None,
                    refusal_margin: None,
                }
            }
        }
    };
    finish("witness", None, &problem, &eff, started, body, args.common.out.as_ref())
}

fn run_scan(args: ScanArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let problem = load(&args.common.problem)?;
    let eff = merge(&args.common, &problem, false, None, None, None);
    if problem.d < 2 {
        return Err(CliError::Validation("spectrum scans need d >= 2".into()));
    }
    let grid = grid_for(problem.d, &eff)?;
    let rows = tabulate_spectrum(&problem.p, &problem.q, &grid)?;
    let body = Body::Scan {
        grid_alpha_points: grid.alpha_points.len(),
        grid_beta_points: grid.beta_points.len(),
        grid_kl_pairs: grid.kl_pairs.len(),
        rows,
    };
    finish("scan", None, &problem, &eff, started, body, args.common.out.as_ref())
}
