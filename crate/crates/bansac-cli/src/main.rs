//! Command-line front end: benchmark sweeps, dataset generation, and
//! single-run estimation.
//!
//! Exit codes: 0 on success, 1 for configuration or input-format errors,
//! 2 for runtime failures (I/O, engine faults). A single `run` that finds
//! no model is still exit 0 — the outcome is reported in the JSON summary.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use bansac::synth::{generate, load_dataset_csv, write_dataset_csv, SyntheticConfig};
use bansac::{
    final_refit, run_estimation, DatasetError, EngineError, GammaKind, ProblemKind, RhoKind,
    SamplerKind, StoppingSet, TransitionModel,
};
use bansac_cli::{
    rmse_on_inliers, run_matrix, strip_timing_columns, write_report_csv, write_report_json,
    write_trials_csv, EngineSettings, MatrixError, TrialMatrix,
};

#[derive(Parser)]
#[command(
    name = "bansac",
    version,
    about = "Robust estimation with belief-filtered adaptive sampling",
    long_about = "Robust estimation with belief-filtered adaptive sampling.\n\n\
        Without a subcommand, runs the default curve benchmark sweep \
        (uniform vs. belief-guided sampling over eight inlier rates)."
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep samplers over seeded synthetic scenes and report statistics
    Bench(BenchArgs),
    /// Generate one synthetic dataset as CSV
    Generate(GenerateArgs),
    /// Estimate a model on a dataset CSV and print a JSON summary
    Run(RunArgs),
}

/// Engine knobs shared by `bench` and `run`; unset flags keep the
/// per-problem protocol defaults.
#[derive(clap::Args, Default)]
struct EngineFlags {
    /// Iteration cap K
    #[arg(long)]
    max_iters: Option<u64>,
    /// Inlier residual threshold
    #[arg(long)]
    threshold: Option<f64>,
    /// Confidence of the standard stopping bound
    #[arg(long)]
    confidence: Option<f64>,
    /// Belief stopping threshold
    #[arg(long)]
    tau: Option<f64>,
    /// Markov order of the belief filter (1-3)
    #[arg(long)]
    markov_order: Option<usize>,
    /// Evidence-reliability curve: gamma1, gamma2, or gamma3
    #[arg(long)]
    gamma: Option<String>,
    /// Belief-to-weight activation: rho1, rho2, rho3, or rho4
    #[arg(long)]
    rho: Option<String>,
    /// Spatial sampling radius (data units)
    #[arg(long)]
    napsac_radius: Option<f64>,
    /// Total-draw budget of the score-pool growth schedule
    #[arg(long)]
    prosac_t_n: Option<f64>,
}

impl EngineFlags {
    /// Overlay the set flags onto a per-problem template.
    fn apply(&self, settings: &mut EngineSettings) -> Result<(), AppError> {
        if let Some(k) = self.max_iters {
            settings.max_iterations = k;
        }
        if let Some(t) = self.threshold {
            settings.inlier_threshold = t;
        }
        if let Some(c) = self.confidence {
            settings.confidence = c;
        }
        if self.tau.is_some() {
            settings.tau = self.tau;
        }
        if let Some(w) = self.markov_order {
            settings.markov_order = w;
        }
        if let Some(g) = &self.gamma {
            settings.gamma_kind = parse_gamma(g)?;
        }
        if let Some(r) = &self.rho {
            settings.rho_kind = parse_rho(r)?;
        }
        if self.napsac_radius.is_some() {
            settings.napsac_radius = self.napsac_radius;
        }
        if let Some(t) = self.prosac_t_n {
            settings.prosac_t_n = t;
        }
        Ok(())
    }
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Problem family: curve, circle, or homography
    #[arg(long, default_value = "curve")]
    problem: String,
    /// Comma-separated samplers: uniform, napsac, prosac, baysac, bansac,
    /// p_bansac
    #[arg(long, default_value = "uniform,bansac")]
    samplers: String,
    /// Comma-separated inlier rates in (0, 1]; default is the protocol
    /// sweep 0.15..0.50 (or 0.6 for homography)
    #[arg(long)]
    rates: Option<String>,
    /// Trials per (sampler, rate) cell
    #[arg(long)]
    trials: Option<usize>,
    /// Points (or correspondences) per scene
    #[arg(long)]
    n_points: Option<usize>,
    /// Inlier noise standard deviation
    #[arg(long)]
    noise_std: Option<f64>,
    /// Stopping criteria, e.g. "standard+bansac"; default pairs each
    /// sampler with its natural set
    #[arg(long)]
    stopping: Option<String>,
    #[command(flatten)]
    engine: EngineFlags,
    /// Root seed; every scene and engine seed derives from it
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Skip the final least-squares refit before computing metrics
    #[arg(long)]
    no_refit: bool,
    /// Also emit per-trial records (CSV: a sibling .trials.csv file;
    /// JSON: inline)
    #[arg(long)]
    dump_trials: bool,
    /// Drop the wall-time columns from CSV output (for byte-stable reports)
    #[arg(long)]
    no_timing: bool,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

impl BenchArgs {
    /// The sweep run when no subcommand is given: protocol defaults.
    fn protocol_default() -> Self {
        BenchArgs {
            problem: "curve".to_string(),
            samplers: "uniform,bansac".to_string(),
            rates: None,
            trials: None,
            n_points: None,
            noise_std: None,
            stopping: None,
            engine: EngineFlags::default(),
            seed: 42,
            no_refit: false,
            dump_trials: false,
            no_timing: false,
            out: None,
            format: "csv".to_string(),
        }
    }
}

#[derive(clap::Args)]
struct GenerateArgs {
    /// Problem family: curve, circle, or homography
    #[arg(long)]
    problem: String,
    /// Inlier rate in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    rate: f64,
    /// Points (or correspondences)
    #[arg(long)]
    n_points: Option<usize>,
    /// Inlier noise standard deviation
    #[arg(long)]
    noise_std: Option<f64>,
    /// Half-width of the outlier box (curve/circle)
    #[arg(long)]
    outlier_bound: Option<f64>,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Dataset CSV (as written by `generate`)
    #[arg(long)]
    input: PathBuf,
    /// Sampler: uniform, napsac, prosac, baysac, bansac, or p_bansac
    #[arg(long, default_value = "bansac")]
    sampler: String,
    /// Stopping criteria, e.g. "standard+bansac"; default is the sampler's
    /// natural set
    #[arg(long)]
    stopping: Option<String>,
    #[command(flatten)]
    engine: EngineFlags,
    /// Transition-table override file (conditional-probability text format)
    #[arg(long)]
    cpt: Option<PathBuf>,
    /// Engine seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the final least-squares refit
    #[arg(long)]
    no_refit: bool,
    /// Record and include the per-iteration trace in the summary
    #[arg(long)]
    trace: bool,
}

// --- error plumbing -----------------------------------------------------------

enum AppError {
    /// Bad flags or malformed input: exit 1.
    Usage(String),
    /// I/O or engine fault: exit 2.
    Runtime(String),
}

impl From<MatrixError> for AppError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::Engine(msg) => AppError::Runtime(msg),
            other => AppError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for AppError {
    fn from(e: io::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version print to stdout and succeed; real parse
            // errors go to stderr and fail as usage errors.
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        None => cmd_bench(BenchArgs::protocol_default()),
        Some(Command::Bench(args)) => cmd_bench(args),
        Some(Command::Generate(args)) => cmd_generate(args),
        Some(Command::Run(args)) => cmd_run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// --- flag parsing ----------------------------------------------------------

fn parse_problem(s: &str) -> Result<ProblemKind, AppError> {
    ProblemKind::parse(s).ok_or_else(|| {
        AppError::Usage(format!(
            "unknown problem '{s}' (expected curve, circle, or homography)"
        ))
    })
}

fn parse_samplers(s: &str) -> Result<Vec<SamplerKind>, AppError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            SamplerKind::parse(t).ok_or_else(|| AppError::Usage(format!("unknown sampler '{t}'")))
        })
        .collect()
}

fn parse_rates(s: &str) -> Result<Vec<f64>, AppError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| AppError::Usage(format!("rate '{t}' is not a number")))
        })
        .collect()
}

fn parse_stopping(s: &str) -> Result<StoppingSet, AppError> {
    StoppingSet::parse(s).ok_or_else(|| {
        AppError::Usage(format!(
            "unknown stopping set '{s}' (combine standard, prosac, bansac with '+')"
        ))
    })
}

fn parse_gamma(s: &str) -> Result<GammaKind, AppError> {
    GammaKind::parse(s).ok_or_else(|| AppError::Usage(format!("unknown gamma curve '{s}'")))
}

fn parse_rho(s: &str) -> Result<RhoKind, AppError> {
    RhoKind::parse(s).ok_or_else(|| AppError::Usage(format!("unknown rho activation '{s}'")))
}

fn write_output(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), AppError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

// --- subcommands ------------------------------------------------------------

fn cmd_bench(args: BenchArgs) -> Result<(), AppError> {
    let problem = parse_problem(&args.problem)?;
    let mut matrix = TrialMatrix::new(problem);
    matrix.samplers = parse_samplers(&args.samplers)?;
    match &args.rates {
        Some(list) => matrix.rates = parse_rates(list)?,
        None if problem == ProblemKind::Homography => matrix.rates = vec![0.6],
        None => {}
    }
    if let Some(set) = &args.stopping {
        matrix.stopping = Some(parse_stopping(set)?);
    }
    if let Some(t) = args.trials {
        matrix.trials = t;
    }
    if let Some(n) = args.n_points {
        matrix.n_points = n;
    }
    if let Some(s) = args.noise_std {
        matrix.noise_std = s;
    }
    matrix.seed = args.seed;
    matrix.refit = !args.no_refit;
    args.engine.apply(&mut matrix.engine)?;

    eprintln!(
        "running {} sampler(s) x {} rate(s) x {} trial(s) on seeded {} scenes ...",
        matrix.samplers.len(),
        matrix.rates.len(),
        matrix.trials,
        matrix.problem,
    );
    let report = run_matrix(&matrix)?;

    match args.format.as_str() {
        "csv" => {
            let mut buf = Vec::new();
            write_report_csv(&report, &mut buf)?;
            let mut text = String::from_utf8(buf).expect("reports are UTF-8");
            if args.no_timing {
                text = strip_timing_columns(&text);
            }
            write_output(args.out.as_ref(), text.as_bytes())?;
            if args.dump_trials {
                let mut buf = Vec::new();
                write_trials_csv(&report, &mut buf)?;
                match &args.out {
                    Some(path) => fs::write(path.with_extension("trials.csv"), &buf)?,
                    None => {
                        let mut stdout = io::stdout().lock();
                        stdout.write_all(b"\n")?;
                        stdout.write_all(&buf)?;
                    }
                }
            }
        }
        "json" => {
            let mut buf = Vec::new();
            write_report_json(&report, args.dump_trials, &mut buf)?;
            write_output(args.out.as_ref(), &buf)?;
        }
        other => {
            return Err(AppError::Usage(format!(
                "unknown format '{other}' (expected csv or json)"
            )))
        }
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), AppError> {
    let problem = parse_problem(&args.problem)?;
    let mut scene = SyntheticConfig::new(problem, args.rate, args.seed);
    if let Some(n) = args.n_points {
        scene.n_points = n;
    }
    if let Some(s) = args.noise_std {
        scene.noise_std = s;
    }
    if let Some(b) = args.outlier_bound {
        scene.outlier_bound = b;
    }
    let dataset = generate(&scene).map_err(|e| AppError::Usage(e.to_string()))?;
    let mut buf = Vec::new();
    write_dataset_csv(&dataset, &mut buf)?;
    write_output(args.out.as_ref(), &buf)
}

fn cmd_run(args: RunArgs) -> Result<(), AppError> {
    let dataset = load_dataset_csv(&args.input).map_err(|e| match e {
        DatasetError::Io(io_err) => {
            AppError::Runtime(format!("{}: {io_err}", args.input.display()))
        }
        other => AppError::Usage(format!("{}: {other}", args.input.display())),
    })?;
    let instance = dataset.to_problem();
    let problem = instance.as_problem();
    let sampler = SamplerKind::parse(&args.sampler)
        .ok_or_else(|| AppError::Usage(format!("unknown sampler '{}'", args.sampler)))?;
    let stopping = args.stopping.as_deref().map(parse_stopping).transpose()?;

    let mut settings = EngineSettings::for_problem(dataset.kind);
    args.engine.apply(&mut settings)?;
    let mut config = settings.to_config(sampler, stopping.as_ref(), args.seed);
    config.record_trace = args.trace;
    if let Some(path) = &args.cpt {
        let text = fs::read_to_string(path)
            .map_err(|e| AppError::Runtime(format!("{}: {e}", path.display())))?;
        let table = TransitionModel::from_cpt_text(&text)
            .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
        config.transition = Some(table);
    }

    let summary = match run_estimation(problem, &config, None) {
        Ok(report) => {
            let report = if args.no_refit {
                report
            } else {
                final_refit(problem, report, config.inlier_threshold)
            };
            let gt_inliers = dataset.gt_inlier_indices();
            let rmse = if gt_inliers.is_empty() {
                None
            } else {
                Some(rmse_on_inliers(problem, &report.best_model, &gt_inliers))
            };
            let mut doc = json!({
                "problem": dataset.kind.to_string(),
                "points": dataset.len(),
                "sampler": sampler.to_string(),
                "success": true,
                "iterations": report.iterations_used,
                "stop_reason": report.stop_reason.to_string(),
                "inlier_count": report.best_inlier_count,
                "refit": report.refit_status.to_string(),
                "model": report.best_model,
                "wall_ms": report.elapsed.as_secs_f64() * 1e3,
            });
            if let Some(value) = rmse {
                doc["rmse_gt_inliers"] = json!(value);
            }
            if let Some(trace) = &report.trace {
                doc["trace"] = serde_json::to_value(trace).expect("trace rows serialize");
            }
            doc
        }
        Err(EngineError::NoValidHypothesis { iterations }) => json!({
            "problem": dataset.kind.to_string(),
            "points": dataset.len(),
            "sampler": sampler.to_string(),
            "success": false,
            "iterations": iterations,
        }),
        Err(e @ (EngineError::Config(_) | EngineError::InsufficientData { .. })) => {
            return Err(AppError::Usage(e.to_string()))
        }
        Err(e) => return Err(AppError::Runtime(e.to_string())),
    };
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, &summary)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    writeln!(stdout)?;
    Ok(())
}
