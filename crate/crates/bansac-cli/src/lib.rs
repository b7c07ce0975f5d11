//! Benchmark harness for the estimation toolkit.
//!
//! A [`TrialMatrix`] names a problem, a list of samplers, a list of inlier
//! rates, and a trial count; [`run_matrix`] executes every (sampler, rate,
//! trial) combination over seeded synthetic scenes and aggregates one
//! [`CellSummary`] per (sampler, rate) cell. Scene and engine seeds derive
//! from the matrix seed by (rate, trial) only — **not** by sampler — so all
//! samplers face identical datasets and identical engine randomness, making
//! per-cell comparisons paired rather than merely distributional.
//!
//! Trials are embarrassingly parallel; records are keyed by their
//! (sampler, rate, trial) position before aggregation, so the statistics
//! (and the serialized reports, timing columns aside) are byte-deterministic
//! regardless of scheduling.
//!
//! Metrics:
//!
//! - **RMSE** — root mean squared geometric distance of the estimated
//!   model's consensus points to the ground-truth model: low when the
//!   consensus contains only true structure, inflated by every outlier the
//!   estimate absorbed.
//! - **mean error** — mean geometric residual of the estimated model over
//!   the ground-truth inliers (the homography accuracy statistic).
//! - **mAA(T)** — mean over trials of the normalized area under the
//!   per-trial accuracy-vs-threshold step function: a trial with error `e`
//!   contributes `max(0, (T − e)/T)`; failed trials contribute 0.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use bansac::sampler::PROSAC_DEFAULT_T_N;
use bansac::synth::{generate, SyntheticConfig};
use bansac::{
    final_refit, run_estimation, ConfigError, EngineError, GammaKind, Problem, ProblemKind,
    RefitStatus, RhoKind, RunConfig, RunReport, SamplerKind, StopReason, StoppingSet,
};

// --- errors -----------------------------------------------------------------

/// Rejected matrix configurations and propagated engine failures.
#[derive(Debug, thiserror::Error)]
pub enum MatrixError {
    /// The sampler list is empty.
    #[error("sampler list is empty")]
    NoSamplers,
    /// The rate list is empty.
    #[error("rate list is empty")]
    NoRates,
    /// Fewer than one trial per cell.
    #[error("trials must be >= 1")]
    NoTrials,
    /// A rate escaped (0, 1].
    #[error("rate {0} outside the half-open interval (0, 1]")]
    RateRange(f64),
    /// Scene or engine configuration rejected.
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// The engine failed for a reason other than "no model found" (which is
    /// recorded as a per-trial failure, not an error).
    #[error("engine: {0}")]
    Engine(String),
}

// --- seeding -----------------------------------------------------------------

/// SplitMix64 finalizer: a cheap, well-mixed 64-bit hash step.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Dataset seed for one (rate, trial) slot. Sampler identity is deliberately
/// absent so every sampler sees the same scene.
pub fn trial_seed(matrix_seed: u64, rate_index: usize, trial: usize) -> u64 {
    mix64(matrix_seed ^ mix64(((rate_index as u64) << 32) | trial as u64))
}

/// Salt separating the engine's RNG stream from the scene generator's.
const ENGINE_SEED_SALT: u64 = 0xE59E_ED0F_37B1_C24D;

// --- engine template ----------------------------------------------------------

/// Engine parameters shared by every cell of a matrix. `tau: None` keeps
/// each sampler's natural belief threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineSettings {
    /// Iteration cap K.
    pub max_iterations: u64,
    /// Residual threshold for inlier classification.
    pub inlier_threshold: f64,
    /// Confidence of the standard stopping bound.
    pub confidence: f64,
    /// Belief stopping threshold; `None` uses the sampler's default.
    pub tau: Option<f64>,
    /// Markov order of the belief filter.
    pub markov_order: usize,
    /// Evidence-reliability curve.
    pub gamma_kind: GammaKind,
    /// Belief-to-weight activation.
    pub rho_kind: RhoKind,
    /// Spatial sampling radius override.
    pub napsac_radius: Option<f64>,
    /// Progressive-growth draw budget.
    pub prosac_t_n: f64,
}

impl EngineSettings {
    /// Protocol defaults: curve/circle use threshold 0.02, 3000 iterations,
    /// confidence 0.99; homography uses 1 px, 1000 iterations, 0.999.
    pub fn for_problem(problem: ProblemKind) -> Self {
        let (threshold, iterations, confidence) = match problem {
            ProblemKind::Curve | ProblemKind::Circle => (0.02, 3000, 0.99),
            ProblemKind::Homography => (1.0, 1000, 0.999),
        };
        EngineSettings {
            max_iterations: iterations,
            inlier_threshold: threshold,
            confidence,
            tau: None,
            markov_order: 1,
            gamma_kind: GammaKind::default(),
            rho_kind: RhoKind::default(),
            napsac_radius: None,
            prosac_t_n: PROSAC_DEFAULT_T_N,
        }
    }

    /// Concrete engine config for one cell.
    pub fn to_config(
        &self,
        sampler: SamplerKind,
        stopping: Option<&StoppingSet>,
        rng_seed: u64,
    ) -> RunConfig {
        let mut config = RunConfig::for_sampler(sampler);
        config.max_iterations = self.max_iterations;
        config.inlier_threshold = self.inlier_threshold;
        config.confidence = self.confidence;
        if let Some(tau) = self.tau {
            config.tau = tau;
        }
        config.markov_order = self.markov_order;
        config.gamma_kind = self.gamma_kind;
        config.rho_kind = self.rho_kind;
        config.napsac_radius = self.napsac_radius;
        config.prosac_t_n = self.prosac_t_n;
        config.rng_seed = rng_seed;
        if let Some(set) = stopping {
            config.stopping_set = *set;
        }
        config
    }
}

// --- matrix -------------------------------------------------------------------

/// One benchmark sweep: samplers × inlier rates × seeded trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialMatrix {
    /// Problem family of every scene.
    pub problem: ProblemKind,
    /// Samplers under comparison.
    pub samplers: Vec<SamplerKind>,
    /// Stopping criteria; `None` gives each sampler its natural set.
    pub stopping: Option<StoppingSet>,
    /// Inlier rates, one column of cells per rate.
    pub rates: Vec<f64>,
    /// Trials per (sampler, rate) cell.
    pub trials: usize,
    /// Points (or correspondences) per scene.
    pub n_points: usize,
    /// Inlier noise standard deviation handed to the generator.
    pub noise_std: f64,
    /// Engine parameter template.
    pub engine: EngineSettings,
    /// Root seed; all per-trial seeds derive from it.
    pub seed: u64,
    /// Refine each best model by a least-squares refit before metrics.
    pub refit: bool,
}

impl TrialMatrix {
    /// Protocol defaults for `problem`: curve/circle run 1000 trials of 300
    /// points with σ = 0.005 (well inside the 0.02 classification
    /// threshold, so ground-truth inliers actually classify as inliers —
    /// see the benchmark notes in the README); homography runs 100 scenes
    /// of 500 correspondences with 0.5 px noise.
    pub fn new(problem: ProblemKind) -> Self {
        let (trials, n_points, noise_std) = match problem {
            ProblemKind::Curve | ProblemKind::Circle => (1000, 300, 0.005),
            ProblemKind::Homography => (100, 500, 0.5),
        };
        TrialMatrix {
            problem,
            samplers: vec![SamplerKind::Uniform, SamplerKind::Bansac],
            stopping: None,
            rates: vec![0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50],
            trials,
            n_points,
            noise_std,
            engine: EngineSettings::for_problem(problem),
            seed: 42,
            refit: true,
        }
    }

    /// Check list and range invariants.
    pub fn validate(&self) -> Result<(), MatrixError> {
        if self.samplers.is_empty() {
            return Err(MatrixError::NoSamplers);
        }
        if self.rates.is_empty() {
            return Err(MatrixError::NoRates);
        }
        if self.trials == 0 {
            return Err(MatrixError::NoTrials);
        }
        for &rate in &self.rates {
            if !(rate > 0.0 && rate <= 1.0) {
                return Err(MatrixError::RateRange(rate));
            }
        }
        Ok(())
    }

    /// Scene recipe for one (rate, dataset-seed) slot; exposed so reports
    /// can be re-derived and cross-checked from recorded seeds.
    pub fn scene_for(&self, rate: f64, dataset_seed: u64) -> SyntheticConfig {
        let mut scene = SyntheticConfig::new(self.problem, rate, dataset_seed);
        scene.n_points = self.n_points;
        scene.noise_std = self.noise_std;
        scene
    }
}

// --- results ---------------------------------------------------------------

/// Outcome of a single estimation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    /// Sampler that produced this record.
    pub sampler: SamplerKind,
    /// Scene inlier rate.
    pub rate: f64,
    /// Trial index within the cell.
    pub trial: usize,
    /// Seed of the scene generator (engine seed derives from it).
    pub dataset_seed: u64,
    /// False when no valid hypothesis was ever found.
    pub success: bool,
    /// Iterations consumed.
    pub iterations: u64,
    /// Why the loop exited.
    pub stop_reason: StopReason,
    /// Consensus size of the reported model.
    pub inlier_count: usize,
    /// RMS geometric distance of the reported model's consensus points to
    /// the ground-truth model (NaN on failure or without ground truth).
    pub rmse: f64,
    /// Mean geometric residual over ground-truth inliers (+∞ on failure,
    /// so the trial scores 0 in mAA).
    pub mean_error: f64,
    /// For belief-criterion exits: whether the below-τ count really reached
    /// the best model's outlier count at exit. `None` for other exits.
    pub belief_stop_consistent: Option<bool>,
    /// What the final refit did.
    pub refit_status: RefitStatus,
    /// Reported model parameters (empty on failure).
    pub model_params: Vec<f64>,
    /// Wall-clock time of the estimation loop, milliseconds.
    pub wall_ms: f64,
}

/// Aggregate statistics of one (sampler, rate) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    /// Sampler of this cell.
    pub sampler: SamplerKind,
    /// Inlier rate of this cell.
    pub rate: f64,
    /// Trials aggregated (always the matrix trial count).
    pub trials: usize,
    /// Trials that produced no model.
    pub failures: usize,
    /// Mean iterations over all trials.
    pub mean_iterations: f64,
    /// Median iterations over all trials.
    pub median_iterations: f64,
    /// Mean RMSE over successful trials with finite RMSE (NaN if none).
    pub mean_rmse: f64,
    /// mAA at 5 px over all trials (homography only).
    pub maa5: Option<f64>,
    /// mAA at 10 px over all trials (homography only).
    pub maa10: Option<f64>,
    /// Mean wall time per trial, milliseconds.
    pub mean_wall_ms: f64,
    /// Median wall time per trial, milliseconds.
    pub median_wall_ms: f64,
}

/// Everything [`run_matrix`] produces.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixReport {
    /// The matrix that was run.
    pub matrix: TrialMatrix,
    /// One summary per (sampler, rate), samplers outermost, in matrix order.
    pub cells: Vec<CellSummary>,
    /// Every per-trial record, in (sampler, rate, trial) order.
    pub trials: Vec<TrialRecord>,
}

// --- execution ----------------------------------------------------------------

/// Run every cell of the matrix in parallel and aggregate.
pub fn run_matrix(matrix: &TrialMatrix) -> Result<MatrixReport, MatrixError> {
    matrix.validate()?;
    let mut jobs = Vec::with_capacity(matrix.samplers.len() * matrix.rates.len() * matrix.trials);
    for si in 0..matrix.samplers.len() {
        for ri in 0..matrix.rates.len() {
            for trial in 0..matrix.trials {
                jobs.push((si, ri, trial));
            }
        }
    }
    let records: Vec<TrialRecord> = jobs
        .into_par_iter()
        .map(|(si, ri, trial)| run_trial(matrix, si, ri, trial))
        .collect::<Result<_, _>>()?;

    let mut cells = Vec::with_capacity(matrix.samplers.len() * matrix.rates.len());
    for si in 0..matrix.samplers.len() {
        for ri in 0..matrix.rates.len() {
            let start = (si * matrix.rates.len() + ri) * matrix.trials;
            let slice = &records[start..start + matrix.trials];
            cells.push(summarize(matrix, slice));
        }
    }
    Ok(MatrixReport {
        matrix: matrix.clone(),
        cells,
        trials: records,
    })
}

fn run_trial(
    matrix: &TrialMatrix,
    sampler_index: usize,
    rate_index: usize,
    trial: usize,
) -> Result<TrialRecord, MatrixError> {
    let sampler = matrix.samplers[sampler_index];
    let rate = matrix.rates[rate_index];
    let dataset_seed = trial_seed(matrix.seed, rate_index, trial);
    let scene = matrix.scene_for(rate, dataset_seed);
    let data = generate(&scene)?;
    let instance = data.to_problem();
    let problem = instance.as_problem();
    let config = matrix.engine.to_config(
        sampler,
        matrix.stopping.as_ref(),
        mix64(dataset_seed ^ ENGINE_SEED_SALT),
    );

    let gt_inliers = data.gt_inlier_indices();
    match run_estimation(problem, &config, None) {
        Ok(report) => {
            let consistent = belief_stop_consistency(&report, config.tau, problem.len());
            let report = if matrix.refit {
                final_refit(problem, report, config.inlier_threshold)
            } else {
                report
            };
            let rmse = consensus_rmse_to_gt(problem, &data.model_params, &report.best_mask);
            let mean_error = mean_error_on_inliers(problem, &report.best_model, &gt_inliers);
            Ok(TrialRecord {
                sampler,
                rate,
                trial,
                dataset_seed,
                success: true,
                iterations: report.iterations_used,
                stop_reason: report.stop_reason,
                inlier_count: report.best_inlier_count,
                rmse,
                mean_error,
                belief_stop_consistent: consistent,
                refit_status: report.refit_status,
                model_params: report.best_model,
                wall_ms: report.elapsed.as_secs_f64() * 1e3,
            })
        }
        Err(EngineError::NoValidHypothesis { iterations }) => Ok(TrialRecord {
            sampler,
            rate,
            trial,
            dataset_seed,
            success: false,
            iterations: iterations as u64,
            stop_reason: StopReason::MaxIterations,
            inlier_count: 0,
            rmse: f64::NAN,
            mean_error: f64::INFINITY,
            belief_stop_consistent: None,
            refit_status: RefitStatus::NotAttempted,
            model_params: Vec::new(),
            wall_ms: 0.0,
        }),
        Err(e) => Err(MatrixError::Engine(e.to_string())),
    }
}

/// For a belief-criterion exit, re-derive Õ ≥ O* from the reported
/// posteriors: the count of beliefs strictly below τ must reach the best
/// model's outlier count. Must run on the pre-refit report, whose mask is
/// the loop's exit-time mask.
fn belief_stop_consistency(report: &RunReport, tau: f64, n_points: usize) -> Option<bool> {
    if report.stop_reason != StopReason::Bansac {
        return None;
    }
    let beliefs = report.final_beliefs.as_ref()?;
    let below = beliefs.iter().filter(|&&b| b < tau).count();
    Some(below >= n_points - report.best_inlier_count)
}

// --- metrics ------------------------------------------------------------------

/// Root mean squared geometric residual of `params` over the given points.
pub fn rmse_on_inliers(problem: &dyn Problem, params: &[f64], indices: &[usize]) -> f64 {
    if indices.is_empty() || params.is_empty() {
        return f64::NAN;
    }
    let sum: f64 = indices
        .iter()
        .map(|&i| {
            let r = problem.residual(params, i);
            r * r
        })
        .sum();
    (sum / indices.len() as f64).sqrt()
}

/// RMS geometric distance of an estimate's consensus points to the
/// ground-truth model: a pure consensus-quality score. NaN when either the
/// ground truth or the consensus is missing.
pub fn consensus_rmse_to_gt(problem: &dyn Problem, gt_params: &[f64], mask: &[bool]) -> f64 {
    if gt_params.is_empty() {
        return f64::NAN;
    }
    let consensus: Vec<usize> = mask
        .iter()
        .enumerate()
        .filter_map(|(i, &keep)| keep.then_some(i))
        .collect();
    rmse_on_inliers(problem, gt_params, &consensus)
}

/// Mean geometric residual of `params` over the given points.
pub fn mean_error_on_inliers(problem: &dyn Problem, params: &[f64], indices: &[usize]) -> f64 {
    if indices.is_empty() || params.is_empty() {
        return f64::INFINITY;
    }
    indices
        .iter()
        .map(|&i| problem.residual(params, i))
        .sum::<f64>()
        / indices.len() as f64
}

/// Mean Average Accuracy at `threshold`: each error contributes the
/// normalized area of its accuracy step function, `max(0, (T − e)/T)`;
/// non-finite errors (failures) contribute 0.
///
/// # Examples
///
/// ```
/// use bansac_cli::compute_maa;
///
/// assert_eq!(compute_maa(&[0.0, 0.0], 10.0), 1.0);
/// assert_eq!(compute_maa(&[11.0, f64::INFINITY], 10.0), 0.0);
/// let uniform: Vec<f64> = (0..1000).map(|i| 0.01 * i as f64 + 0.005).collect();
/// assert!((compute_maa(&uniform, 10.0) - 0.5).abs() < 1e-3);
/// ```
pub fn compute_maa(errors: &[f64], threshold: f64) -> f64 {
    if errors.is_empty() {
        return 0.0;
    }
    errors
        .iter()
        .map(|&e| {
            if e.is_finite() && e <= threshold {
                (threshold - e) / threshold
            } else {
                0.0
            }
        })
        .sum::<f64>()
        / errors.len() as f64
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite statistics"));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

fn summarize(matrix: &TrialMatrix, records: &[TrialRecord]) -> CellSummary {
    let failures = records.iter().filter(|r| !r.success).count();
    let mut iterations: Vec<f64> = records.iter().map(|r| r.iterations as f64).collect();
    let rmse_values: Vec<f64> = records
        .iter()
        .filter(|r| r.success && r.rmse.is_finite())
        .map(|r| r.rmse)
        .collect();
    let mut wall: Vec<f64> = records.iter().map(|r| r.wall_ms).collect();
    let (maa5, maa10) = if matrix.problem == ProblemKind::Homography {
        let errors: Vec<f64> = records.iter().map(|r| r.mean_error).collect();
        (
            Some(compute_maa(&errors, 5.0)),
            Some(compute_maa(&errors, 10.0)),
        )
    } else {
        (None, None)
    };
    CellSummary {
        sampler: records[0].sampler,
        rate: records[0].rate,
        trials: records.len(),
        failures,
        mean_iterations: mean(&iterations),
        median_iterations: median(&mut iterations),
        mean_rmse: mean(&rmse_values),
        maa5,
        maa10,
        mean_wall_ms: mean(&wall),
        median_wall_ms: median(&mut wall),
    }
}

// --- report serialization -------------------------------------------------------

/// Number of trailing timing columns in the CSV tables (mean and median
/// wall time). [`strip_timing_columns`] removes exactly these.
pub const TIMING_COLUMNS: usize = 2;

/// Render a float so that reports stay identical across runs: full shortest
/// round-trip form, with NaN (no statistic) as an empty cell.
fn cell(value: f64) -> String {
    if value.is_nan() {
        String::new()
    } else {
        value.to_string()
    }
}

fn opt_cell(value: Option<f64>) -> String {
    value.map(cell).unwrap_or_default()
}

/// Write the per-cell summary table as CSV. Header comments echo the full
/// configuration (so reports are self-describing); timing columns are last,
/// letting consumers compare reports modulo timing.
pub fn write_report_csv<W: Write>(report: &MatrixReport, out: &mut W) -> io::Result<()> {
    let m = &report.matrix;
    writeln!(out, "# benchmark report")?;
    writeln!(
        out,
        "# problem={} n_points={} noise_std={} trials={} seed={} refit={}",
        m.problem, m.n_points, m.noise_std, m.trials, m.seed, m.refit
    )?;
    let stopping = match &m.stopping {
        Some(set) => set
            .kinds()
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join("+"),
        None => "natural".to_string(),
    };
    writeln!(
        out,
        "# engine: samplers={} stopping={} max_iterations={} inlier_threshold={} confidence={} \
         tau={} markov_order={} gamma={} rho={} prosac_t_n={}",
        m.samplers
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("+"),
        stopping,
        m.engine.max_iterations,
        m.engine.inlier_threshold,
        m.engine.confidence,
        m.engine
            .tau
            .map(|t| t.to_string())
            .unwrap_or_else(|| "natural".to_string()),
        m.engine.markov_order,
        m.engine.gamma_kind,
        m.engine.rho_kind,
        m.engine.prosac_t_n,
    )?;
    writeln!(
        out,
        "# maa: mean over trials of max(0, (T - e)/T), e = mean residual on ground-truth \
         inliers; failures score 0"
    )?;
    writeln!(
        out,
        "# rmse: RMS geometric distance of the estimated consensus points to the ground-truth \
         model, averaged over successful trials"
    )?;
    writeln!(
        out,
        "sampler,rate,trials,failures,mean_iterations,median_iterations,mean_rmse,maa5,maa10,\
         mean_wall_ms,median_wall_ms"
    )?;
    for c in &report.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.sampler,
            c.rate,
            c.trials,
            c.failures,
            cell(c.mean_iterations),
            cell(c.median_iterations),
            cell(c.mean_rmse),
            opt_cell(c.maa5),
            opt_cell(c.maa10),
            cell(c.mean_wall_ms),
            cell(c.median_wall_ms),
        )?;
    }
    Ok(())
}

/// Write every per-trial record as CSV (one row per run; model parameters
/// are `;`-joined inside one column; timing last).
pub fn write_trials_csv<W: Write>(report: &MatrixReport, out: &mut W) -> io::Result<()> {
    writeln!(
        out,
        "sampler,rate,trial,dataset_seed,success,iterations,stop_reason,inlier_count,rmse,\
         mean_error,belief_stop_consistent,refit_status,model,wall_ms"
    )?;
    for t in &report.trials {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t.sampler,
            t.rate,
            t.trial,
            t.dataset_seed,
            t.success,
            t.iterations,
            t.stop_reason,
            t.inlier_count,
            cell(t.rmse),
            cell(t.mean_error),
            t.belief_stop_consistent
                .map(|b| b.to_string())
                .unwrap_or_default(),
            t.refit_status,
            t.model_params
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            cell(t.wall_ms),
        )?;
    }
    Ok(())
}

/// Serializable JSON view of a report; per-trial records included on
/// request.
#[derive(Serialize)]
struct JsonReport<'a> {
    matrix: &'a TrialMatrix,
    maa_definition: &'a str,
    cells: &'a [CellSummary],
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<&'a [TrialRecord]>,
}

/// Write the report as pretty JSON; `include_trials` adds the per-trial
/// records.
pub fn write_report_json<W: Write>(
    report: &MatrixReport,
    include_trials: bool,
    out: &mut W,
) -> io::Result<()> {
    let view = JsonReport {
        matrix: &report.matrix,
        maa_definition: "mean over trials of max(0, (T - e)/T); failures score 0",
        cells: &report.cells,
        trials: include_trials.then_some(report.trials.as_slice()),
    };
    serde_json::to_writer_pretty(&mut *out, &view)?;
    writeln!(out)
}

/// Drop the trailing timing columns from every non-comment CSV row, for
/// timing-insensitive byte comparison of reports.
pub fn strip_timing_columns(csv: &str) -> String {
    let mut result = String::with_capacity(csv.len());
    for line in csv.lines() {
        if line.starts_with('#') {
            result.push_str(line);
        } else {
            let columns: Vec<&str> = line.split(',').collect();
            if columns.len() > TIMING_COLUMNS {
                result.push_str(&columns[..columns.len() - TIMING_COLUMNS].join(","));
            } else {
                result.push_str(line);
            }
        }
        result.push('\n');
    }
    result
}
