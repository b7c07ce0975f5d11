//! The sample-consensus loop: sample → hypothesize → score → update best →
//! update beliefs → check stopping.
//!
//! One iteration draws a minimal sample with the configured strategy, fits a
//! model, classifies every point by strict residual-below-threshold, keeps
//! the hypothesis with the strictly largest consensus, feeds the current
//! classification to the belief filter (when one is active), and evaluates
//! the enabled stopping criteria. Degenerate minimal fits consume an
//! iteration but skip evaluation and the belief update.
//!
//! Runs are deterministic given the seed: identical configuration, priors,
//! and data produce identical reports (excluding wall-clock timing).

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::belief::{BeliefState, GammaKind, PriorVector, TransitionModel};
use crate::error::{ConfigError, EngineError};
use crate::problem::{bbox_diagonal, Problem};
use crate::sampler::{
    baysac_penalize, RhoKind, SamplerKind, SamplerState, PROSAC_DEFAULT_T_N,
};
use crate::stopping::{PoolSnapshot, StopReason, StoppingKind, StoppingSet, StoppingState};

/// Default fraction of the bounding-box diagonal used as the spatial
/// sampling radius when none is configured.
const NAPSAC_RADIUS_FRACTION: f64 = 0.1;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Full configuration of one estimation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Iteration budget K, at least 1.
    pub max_iterations: u64,
    /// Residual threshold; points with residual strictly below it are
    /// inliers. Non-negative, in the problem's residual units.
    pub inlier_threshold: f64,
    /// Confidence of the standard stopping bound, strictly inside (0, 1).
    pub confidence: f64,
    /// Minimal-sample selection strategy.
    pub sampler_kind: SamplerKind,
    /// Enabled stopping criteria (non-empty by construction).
    pub stopping_set: StoppingSet,
    /// Belief stopping threshold τ, strictly inside (0, 1).
    pub tau: f64,
    /// Markov order of the belief filter, in {1, 2, 3}. Ignored when
    /// `transition` is set.
    pub markov_order: usize,
    /// Seed of the per-run deterministic generator.
    pub rng_seed: u64,
    /// Evidence-weighting function γ(ε).
    pub gamma_kind: GammaKind,
    /// Belief-to-weight activation ρ(ψ).
    pub rho_kind: RhoKind,
    /// Spatial sampling radius in data units; `None` selects 10% of the
    /// bounding-box diagonal.
    pub napsac_radius: Option<f64>,
    /// Total-draw budget of the score-pool growth schedule.
    pub prosac_t_n: f64,
    /// Record a per-iteration trace in the report (diagnostics; off by
    /// default).
    #[serde(default)]
    pub record_trace: bool,
    /// Transition-table override for ablations; replaces the compiled-in
    /// tables and takes precedence over `markov_order`.
    #[serde(skip)]
    pub transition: Option<TransitionModel>,
}

impl RunConfig {
    /// A ready-to-run configuration for `sampler` with the conventional
    /// stopping pairing and default knobs (K = 3000, threshold 0.02,
    /// confidence 0.99, order 1, τ = 0.01, or 0.1 for the score-seeded
    /// belief sampler).
    pub fn for_sampler(sampler: SamplerKind) -> Self {
        Self {
            max_iterations: 3000,
            inlier_threshold: 0.02,
            confidence: 0.99,
            sampler_kind: sampler,
            stopping_set: StoppingSet::natural_for(sampler),
            tau: if sampler == SamplerKind::PBansac { 0.1 } else { 0.01 },
            markov_order: 1,
            rng_seed: 0,
            gamma_kind: GammaKind::default(),
            rho_kind: RhoKind::default(),
            napsac_radius: None,
            prosac_t_n: PROSAC_DEFAULT_T_N,
            record_trace: false,
            transition: None,
        }
    }

    /// Check every range invariant.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_iterations == 0 {
            return Err(ConfigError::ZeroIterations);
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(ConfigError::ConfidenceRange(self.confidence));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(ConfigError::TauRange(self.tau));
        }
        if !(self.inlier_threshold >= 0.0 && self.inlier_threshold.is_finite()) {
            return Err(ConfigError::ThresholdRange(self.inlier_threshold));
        }
        if !(1..=3).contains(&self.markov_order) {
            return Err(ConfigError::MarkovOrder(self.markov_order));
        }
        if let Some(r) = self.napsac_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(ConfigError::NapsacRadius(r));
            }
        }
        if !(self.prosac_t_n >= 1.0 && self.prosac_t_n.is_finite()) {
            return Err(ConfigError::ProsacBudget(self.prosac_t_n));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Hypotheses and reports
// ---------------------------------------------------------------------------

/// One scored model hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    /// Flat model parameters (layout is problem-specific).
    pub model_params: Vec<f64>,
    /// Iteration that produced the hypothesis (1-based).
    pub iteration_index: u64,
    /// Strict residual-below-threshold classification per point.
    pub inlier_mask: Vec<bool>,
    /// Number of `true` entries in the mask.
    pub inlier_count: usize,
    /// `inlier_count / N`.
    pub inlier_ratio: f64,
}

impl Hypothesis {
    /// O* of this hypothesis: points classified as outliers.
    pub fn outlier_count(&self) -> usize {
        self.inlier_mask.len() - self.inlier_count
    }
}

/// What happened to the optional non-minimal refit of the best model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefitStatus {
    /// No refit was requested.
    NotAttempted,
    /// The best model was replaced by the least-squares refit.
    Refitted,
    /// Fewer consensus inliers than a minimal sample; original model kept.
    TooFewInliers,
    /// The least-squares system was rank-deficient; original model kept.
    RankDeficient,
}

impl std::fmt::Display for RefitStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::NotAttempted => "not_attempted",
            Self::Refitted => "refitted",
            Self::TooFewInliers => "too_few_inliers",
            Self::RankDeficient => "rank_deficient",
        })
    }
}

/// Per-iteration diagnostic record (only with [`RunConfig::record_trace`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    /// Iteration index (1-based).
    pub k: u64,
    /// Best consensus size so far (0 before the first valid hypothesis).
    pub best_inlier_count: usize,
    /// Beliefs strictly below τ, when a filter is active.
    pub below_tau: Option<usize>,
    /// Score-pool size, when the pool criterion is enabled.
    pub pool: Option<usize>,
    /// True when the minimal fit was degenerate this iteration.
    pub degenerate: bool,
}

/// Outcome of one estimation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Best model parameters θ*.
    pub best_model: Vec<f64>,
    /// Best consensus classification 𝒞*.
    pub best_mask: Vec<bool>,
    /// Number of `true` entries in `best_mask`.
    pub best_inlier_count: usize,
    /// Iterations actually executed (≤ K).
    pub iterations_used: u64,
    /// Which criterion ended the run.
    pub stop_reason: StopReason,
    /// Wall-clock duration of the loop (excluded from determinism claims).
    pub elapsed: Duration,
    /// Inlier posteriors 𝒫ᵏ at exit when beliefs were maintained: the
    /// filter's posteriors for belief-driven configurations, or the
    /// penalty-updated vector for the top-belief baseline.
    pub final_beliefs: Option<Vec<f64>>,
    /// Iterations consumed by degenerate minimal fits.
    pub degenerate_iterations: usize,
    /// Draws that fell back to uniform sampling (all-zero weights, missing
    /// spatial neighborhood).
    pub uniform_fallbacks: usize,
    /// Outcome of [`final_refit`].
    pub refit_status: RefitStatus,
    /// Per-iteration diagnostics, when recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRow>>,
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Classify every point against a model by strict `residual < threshold`.
pub fn evaluate_model<P: Problem + ?Sized>(
    problem: &P,
    model_params: Vec<f64>,
    inlier_threshold: f64,
    iteration_index: u64,
) -> Hypothesis {
    let n = problem.len();
    let mut inlier_mask = vec![false; n];
    let mut inlier_count = 0;
    for (i, flag) in inlier_mask.iter_mut().enumerate() {
        if problem.residual(&model_params, i) < inlier_threshold {
            *flag = true;
            inlier_count += 1;
        }
    }
    Hypothesis {
        model_params,
        iteration_index,
        inlier_mask,
        inlier_count,
        inlier_ratio: inlier_count as f64 / n as f64,
    }
}

/// Keep the strictly better hypothesis; ties keep the incumbent.
pub fn update_best(current_best: Option<Hypothesis>, candidate: Hypothesis) -> Hypothesis {
    match current_best {
        Some(best) if candidate.inlier_count <= best.inlier_count => best,
        _ => candidate,
    }
}

/// Execute the estimation loop.
///
/// `priors` seeds the initial per-point beliefs when given; otherwise the
/// score-seeded sampler uses the problem's prior scores and every other
/// configuration starts uniform at 0.5.
pub fn run_estimation<P: Problem + ?Sized>(
    problem: &P,
    config: &RunConfig,
    priors: Option<&[f64]>,
) -> Result<RunReport, EngineError> {
    config.validate().map_err(EngineError::Config)?;
    let n = problem.len();
    let m = problem.minimal_sample_size();
    if n < m {
        return Err(EngineError::InsufficientData { got: n, needed: m });
    }
    if let Some(p) = priors {
        if p.len() != n {
            return Err(ConfigError::PriorLength { got: p.len(), expected: n }.into());
        }
    }

    let kind = config.sampler_kind;
    // The DBN filter runs when sampling from posteriors or when the belief
    // stopping criterion needs them.
    let filter_active = matches!(kind, SamplerKind::Bansac | SamplerKind::PBansac)
        || config.stopping_set.contains(StoppingKind::Bansac);
    let track_pool = config.stopping_set.contains(StoppingKind::Prosac);

    // Initial beliefs: explicit priors win; the score-seeded sampler falls
    // back to the problem's scores; everything else starts uniform.
    let prior_vec = match priors {
        Some(p) => PriorVector::from_scores(p).map_err(EngineError::Config)?,
        None => match (kind, problem.scores()) {
            (SamplerKind::PBansac, Some(scores)) => {
                PriorVector::from_scores(scores).map_err(EngineError::Config)?
            }
            _ => PriorVector::uniform(n),
        },
    };

    let transition = match &config.transition {
        Some(t) => t.clone(),
        None => TransitionModel::with_order(config.markov_order)
            .map_err(EngineError::Config)?
            .with_gamma(config.gamma_kind),
    };
    let mut filter = filter_active
        .then(|| BeliefState::new(&prior_vec, transition.order()))
        .transpose()
        .map_err(EngineError::Config)?;
    // The top-belief baseline keeps a plain vector updated only by penalties.
    let mut baysac_beliefs =
        (kind == SamplerKind::Baysac).then(|| prior_vec.as_slice().to_vec());

    let napsac_radius = config
        .napsac_radius
        .unwrap_or_else(|| NAPSAC_RADIUS_FRACTION * bbox_diagonal(problem));
    let score_order_source = problem.scores().or(priors);
    let mut sampler = SamplerState::new(
        kind,
        n,
        m,
        config.rng_seed,
        score_order_source,
        napsac_radius,
        config.prosac_t_n,
    );
    let spatial: Vec<[f64; 2]> = if kind == SamplerKind::Napsac {
        (0..n).map(|i| problem.spatial(i)).collect()
    } else {
        Vec::new()
    };

    let mut stopping =
        StoppingState::new(config.stopping_set, config.confidence, m, config.tau);
    let mut best: Option<Hypothesis> = None;
    let mut trace = config.record_trace.then(Vec::new);
    let mut degenerate_iterations = 0usize;
    let mut stop_reason = StopReason::MaxIterations;
    let mut iterations_used = config.max_iterations;

    let started = Instant::now();
    for k in 1..=config.max_iterations {
        let sample = match kind {
            SamplerKind::Uniform => sampler.sample_uniform(m),
            SamplerKind::Napsac => sampler.sample_napsac(m, &spatial),
            SamplerKind::Prosac => sampler.sample_prosac(m, k),
            SamplerKind::Baysac => {
                sampler.sample_baysac(baysac_beliefs.as_ref().expect("baysac beliefs"), m)
            }
            SamplerKind::Bansac | SamplerKind::PBansac => {
                let beliefs = filter.as_ref().expect("filter active").posteriors();
                sampler.sample_weighted(beliefs, m, config.rho_kind)
            }
        };

        let degenerate = match problem.fit_minimal(&sample) {
            Err(_) => {
                // Degenerate fit: the iteration counts, beliefs stay as they
                // are, and no hypothesis competes.
                degenerate_iterations += 1;
                true
            }
            Ok(params) => {
                let hypothesis = evaluate_model(problem, params, config.inlier_threshold, k);
                if let Some(filter) = filter.as_mut() {
                    filter
                        .update(&hypothesis.inlier_mask, hypothesis.inlier_ratio, &transition)
                        .map_err(EngineError::Belief)?;
                }
                let improved =
                    best.as_ref().map_or(true, |b| hypothesis.inlier_count > b.inlier_count);
                if !improved {
                    if let Some(beliefs) = baysac_beliefs.as_mut() {
                        baysac_penalize(beliefs, &sample);
                    }
                }
                best = Some(update_best(best.take(), hypothesis));
                false
            }
        };

        let best_count = best.as_ref().map(|b| b.inlier_count);
        let below_tau = filter.as_ref().map(|f| f.count_below(config.tau));
        let pool = track_pool.then(|| {
            let size = sampler.pool_at(k);
            let inliers = match &best {
                Some(b) => {
                    sampler.score_order()[..size].iter().filter(|&&i| b.inlier_mask[i]).count()
                }
                None => 0,
            };
            PoolSnapshot { size, inliers }
        });
        if let Some(rows) = trace.as_mut() {
            rows.push(TraceRow {
                k,
                best_inlier_count: best_count.unwrap_or(0),
                below_tau,
                pool: pool.map(|p| p.size),
                degenerate,
            });
        }
        if let Some(reason) = stopping.evaluate(k, n, best_count, pool, below_tau) {
            stop_reason = reason;
            iterations_used = k;
            break;
        }
    }
    let elapsed = started.elapsed();

    let Some(best) = best else {
        return Err(EngineError::NoValidHypothesis {
            iterations: config.max_iterations as usize,
        });
    };
    let final_beliefs = match (&filter, baysac_beliefs) {
        (Some(f), _) => Some(f.posteriors().to_vec()),
        (None, Some(b)) => Some(b),
        (None, None) => None,
    };
    Ok(RunReport {
        best_model: best.model_params,
        best_mask: best.inlier_mask,
        best_inlier_count: best.inlier_count,
        iterations_used,
        stop_reason,
        elapsed,
        final_beliefs,
        degenerate_iterations,
        uniform_fallbacks: sampler.uniform_fallbacks(),
        refit_status: RefitStatus::NotAttempted,
        trace,
    })
}

/// Replace the best model with its non-minimal least-squares refit over the
/// best consensus set, then re-classify every point once against the refit
/// model. On failure the original model and mask are kept and the status
/// flags what happened.
pub fn final_refit<P: Problem + ?Sized>(
    problem: &P,
    mut report: RunReport,
    inlier_threshold: f64,
) -> RunReport {
    let m = problem.minimal_sample_size();
    if report.best_inlier_count < m {
        report.refit_status = RefitStatus::TooFewInliers;
        return report;
    }
    let inliers: Vec<usize> =
        (0..report.best_mask.len()).filter(|&i| report.best_mask[i]).collect();
    match problem.refit(&inliers) {
        Ok(params) => {
            let hypothesis =
                evaluate_model(problem, params, inlier_threshold, report.iterations_used);
            report.best_model = hypothesis.model_params;
            report.best_mask = hypothesis.inlier_mask;
            report.best_inlier_count = hypothesis.inlier_count;
            report.refit_status = RefitStatus::Refitted;
            report
        }
        Err(_) => {
            report.refit_status = RefitStatus::RankDeficient;
            report
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CircleProblem, CurveProblem};
    use approx::assert_relative_eq;

    /// 24 exact points on the unit circle plus 8 scattered outliers.
    fn mixed_circle() -> CircleProblem {
        let mut pts: Vec<[f64; 2]> = (0..24)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 24.0;
                [a.cos(), a.sin()]
            })
            .collect();
        pts.extend([
            [0.1, 0.3],
            [-0.4, 0.2],
            [0.5, -0.5],
            [-0.2, -0.6],
            [0.7, 0.1],
            [-0.6, -0.1],
            [0.3, 0.6],
            [-0.1, 0.5],
        ]);
        CircleProblem::new(pts)
    }

    fn circle_config(sampler: SamplerKind) -> RunConfig {
        let mut config = RunConfig::for_sampler(sampler);
        config.inlier_threshold = 0.05;
        config.max_iterations = 500;
        config.rng_seed = 7;
        config
    }

    // -- validation ----------------------------------------------------------

    #[test]
    fn config_range_violations_are_rejected() {
        let base = RunConfig::for_sampler(SamplerKind::Uniform);
        assert!(base.validate().is_ok());
        let cases: Vec<(RunConfig, ConfigError)> = vec![
            (
                RunConfig { max_iterations: 0, ..base.clone() },
                ConfigError::ZeroIterations,
            ),
            (
                RunConfig { confidence: 1.0, ..base.clone() },
                ConfigError::ConfidenceRange(1.0),
            ),
            (RunConfig { tau: 0.0, ..base.clone() }, ConfigError::TauRange(0.0)),
            (
                RunConfig { inlier_threshold: -0.1, ..base.clone() },
                ConfigError::ThresholdRange(-0.1),
            ),
            (
                RunConfig { markov_order: 4, ..base.clone() },
                ConfigError::MarkovOrder(4),
            ),
            (
                RunConfig { napsac_radius: Some(0.0), ..base.clone() },
                ConfigError::NapsacRadius(0.0),
            ),
            (
                RunConfig { prosac_t_n: 0.5, ..base.clone() },
                ConfigError::ProsacBudget(0.5),
            ),
        ];
        for (config, expected) in cases {
            assert_eq!(config.validate().unwrap_err(), expected);
        }
    }

    // -- evaluate / update_best ------------------------------------------------

    #[test]
    fn evaluate_model_classifies_strictly_below_threshold() {
        let p = CircleProblem::new(vec![[1.0, 0.0], [0.0, 2.0]]);
        let hyp = evaluate_model(&p, vec![0.0, 0.0, 1.0], 0.02, 3);
        assert_eq!(hyp.inlier_mask, vec![true, false]);
        assert_eq!(hyp.inlier_count, 1);
        assert_eq!(hyp.inlier_ratio, 0.5);
        assert_eq!(hyp.iteration_index, 3);
        assert_eq!(hyp.outlier_count(), 1);
        // Threshold 0 with strict `<` admits nothing, even exact incidence.
        let hyp = evaluate_model(&p, vec![0.0, 0.0, 1.0], 0.0, 1);
        assert_eq!(hyp.inlier_count, 0);
    }

    #[test]
    fn update_best_requires_strict_improvement() {
        let hyp = |count: usize, k: u64| Hypothesis {
            model_params: vec![k as f64],
            iteration_index: k,
            inlier_mask: (0..4).map(|i| i < count).collect(),
            inlier_count: count,
            inlier_ratio: count as f64 / 4.0,
        };
        // First hypothesis always wins.
        assert_eq!(update_best(None, hyp(1, 1)).iteration_index, 1);
        // Ties keep the earlier model.
        assert_eq!(update_best(Some(hyp(2, 1)), hyp(2, 2)).iteration_index, 1);
        // Strict improvement replaces it.
        assert_eq!(update_best(Some(hyp(2, 1)), hyp(3, 2)).iteration_index, 2);
    }

    // -- run_estimation ------------------------------------------------------------

    #[test]
    fn insufficient_data_is_rejected() {
        let p = CircleProblem::new(vec![[0.0, 0.0], [1.0, 0.0]]);
        let config = RunConfig::for_sampler(SamplerKind::Uniform);
        assert_eq!(
            run_estimation(&p, &config, None),
            Err(EngineError::InsufficientData { got: 2, needed: 3 })
        );
    }

    #[test]
    fn mismatched_priors_are_rejected() {
        let p = mixed_circle();
        let config = circle_config(SamplerKind::Bansac);
        let err = run_estimation(&p, &config, Some(&[0.5; 3])).unwrap_err();
        assert_eq!(
            err,
            EngineError::Config(ConfigError::PriorLength { got: 3, expected: 32 })
        );
    }

    #[test]
    fn all_inlier_data_stops_at_the_first_iteration() {
        // Noiseless cubic samples: the first valid minimal fit reaches
        // ratio 1.0 and the standard bound collapses to one iteration.
        let pts: Vec<[f64; 2]> = (0..8)
            .map(|i| {
                let x = -0.9 + i as f64 * 0.25;
                [x, x * x * x]
            })
            .collect();
        let p = CurveProblem::new(pts, 3).unwrap();
        let config = RunConfig::for_sampler(SamplerKind::Uniform);
        let report = run_estimation(&p, &config, None).unwrap();
        assert_eq!(report.iterations_used, 1);
        assert_eq!(report.stop_reason, StopReason::Standard);
        assert_eq!(report.best_inlier_count, 8);
        assert!(report.final_beliefs.is_none());
    }

    #[test]
    fn no_valid_hypothesis_when_every_fit_is_degenerate() {
        // All points share one abscissa: every Vandermonde system is singular.
        let pts: Vec<[f64; 2]> = (0..6).map(|i| [0.5, i as f64]).collect();
        let p = CurveProblem::new(pts, 3).unwrap();
        let mut config = RunConfig::for_sampler(SamplerKind::Uniform);
        config.max_iterations = 10;
        assert_eq!(
            run_estimation(&p, &config, None),
            Err(EngineError::NoValidHypothesis { iterations: 10 })
        );
    }

    #[test]
    fn belief_sampler_finds_the_circle_and_reports_beliefs() {
        let p = mixed_circle();
        let mut config = circle_config(SamplerKind::Bansac);
        config.record_trace = true;
        let report = run_estimation(&p, &config, None).unwrap();
        assert_eq!(report.best_inlier_count, 24);
        assert!(report.iterations_used < config.max_iterations);
        assert_relative_eq!(report.best_model[2], 1.0, epsilon = 1e-9);
        // The filter ran, so posteriors are reported for every point.
        let beliefs = report.final_beliefs.as_ref().unwrap();
        assert_eq!(beliefs.len(), 32);
        assert!(beliefs.iter().all(|b| (0.0..=1.0).contains(b)));
        // Consistency of the belief stop: Õ ≥ O* whenever it fired.
        if report.stop_reason == StopReason::Bansac {
            let below = beliefs.iter().filter(|&&b| b < config.tau).count();
            assert!(below >= 32 - report.best_inlier_count);
        }
        // Best consensus never shrinks across the recorded trace.
        let trace = report.trace.as_ref().unwrap();
        assert_eq!(trace.len(), report.iterations_used as usize);
        for w in trace.windows(2) {
            assert!(w[1].best_inlier_count >= w[0].best_inlier_count);
        }
    }

    #[test]
    fn runs_are_deterministic_given_the_seed() {
        let p = mixed_circle();
        let config = circle_config(SamplerKind::Bansac);
        let mut a = run_estimation(&p, &config, None).unwrap();
        let mut b = run_estimation(&p, &config, None).unwrap();
        a.elapsed = Duration::ZERO;
        b.elapsed = Duration::ZERO;
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_sampler_with_belief_stopping_maintains_the_filter() {
        let p = mixed_circle();
        let mut config = circle_config(SamplerKind::Uniform);
        config.stopping_set =
            StoppingSet::new(&[StoppingKind::Standard, StoppingKind::Bansac]).unwrap();
        let report = run_estimation(&p, &config, None).unwrap();
        assert!(report.final_beliefs.is_some());
    }

    #[test]
    fn all_zero_priors_fall_back_to_uniform_then_lock_on() {
        // Zero belief is absorbing: a point classified outlier while believed
        // outlier can never regain mass, so only members of some sampled
        // hypothesis's consensus ever leave zero. The first draw (all weights
        // zero) must fall back to uniform; afterwards the sampler follows
        // whatever support that consensus created. Standard stopping only —
        // with zero priors the belief criterion would fire trivially at k=1.
        let p = mixed_circle();
        let mut config = circle_config(SamplerKind::Bansac);
        config.stopping_set = StoppingSet::standard_only();
        config.max_iterations = 50;
        let report = run_estimation(&p, &config, Some(&[0.0; 32])).unwrap();
        assert!(report.uniform_fallbacks >= 1);
        assert!(report.best_inlier_count >= 3);
        let beliefs = report.final_beliefs.unwrap();
        let positive = beliefs.iter().filter(|&&b| b > 0.0).count();
        assert!(positive >= 3, "some consensus must have gained weight");
        assert!(positive < 32, "absorbed points can never rejoin");
    }

    #[test]
    fn baysac_reports_its_penalty_vector() {
        let p = mixed_circle();
        let mut config = circle_config(SamplerKind::Baysac);
        // Equal priors: the deterministic top-3 set repeats and gets
        // penalized whenever it fails to beat the incumbent.
        config.max_iterations = 50;
        let report = run_estimation(&p, &config, None).unwrap();
        let beliefs = report.final_beliefs.as_ref().unwrap();
        assert!(beliefs.iter().any(|&b| b < 0.5), "penalties must show up");
        assert!(beliefs.contains(&0.5), "non-sampled beliefs stay put");
    }

    #[test]
    fn score_seeded_run_uses_scores_as_priors() {
        let p = mixed_circle();
        let scores: Vec<f64> = (0..32).map(|i| if i < 24 { 0.9 } else { 0.1 }).collect();
        let p = p.with_scores(scores);
        let mut config = circle_config(SamplerKind::PBansac);
        config.tau = 0.1;
        let report = run_estimation(&p, &config, None).unwrap();
        assert_eq!(report.best_inlier_count, 24);
        assert!(report.iterations_used < config.max_iterations);
    }

    #[test]
    fn progressive_sampler_stops_via_its_pool_criterion() {
        let p = mixed_circle();
        let scores: Vec<f64> = (0..32).map(|i| if i < 24 { 0.9 } else { 0.1 }).collect();
        let p = p.with_scores(scores);
        let mut config = circle_config(SamplerKind::Prosac);
        // A small draw budget makes the pool grow quickly enough for the
        // pool criterion to arm (pool ≥ 2m) before the standard bound fires.
        config.prosac_t_n = 50.0;
        let report = run_estimation(&p, &config, None).unwrap();
        assert_eq!(report.best_inlier_count, 24);
        // With perfectly ordered scores the armed pool is pure, so the pool
        // criterion beats the standard bound for this contamination level.
        assert_eq!(report.stop_reason, StopReason::Prosac);
    }

    // -- final_refit ---------------------------------------------------------------

    #[test]
    fn refit_improves_nothing_on_noiseless_consensus() {
        let p = mixed_circle();
        let config = circle_config(SamplerKind::Uniform);
        let report = run_estimation(&p, &config, None).unwrap();
        let before = report.best_model.clone();
        let after = final_refit(&p, report, config.inlier_threshold);
        assert_eq!(after.refit_status, RefitStatus::Refitted);
        assert_eq!(after.best_inlier_count, 24);
        for (a, b) in before.iter().zip(&after.best_model) {
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn refit_skips_when_consensus_is_below_minimal_size() {
        let p = CurveProblem::new(
            vec![[0.0, 0.0], [0.3, 1.0], [0.6, 2.0], [0.9, 3.0], [1.2, 4.0]],
            3,
        )
        .unwrap();
        let report = RunReport {
            best_model: vec![0.0, 0.0, 0.0, 0.0],
            best_mask: vec![true, true, true, false, false],
            best_inlier_count: 3,
            iterations_used: 1,
            stop_reason: StopReason::MaxIterations,
            elapsed: Duration::ZERO,
            final_beliefs: None,
            degenerate_iterations: 0,
            uniform_fallbacks: 0,
            refit_status: RefitStatus::NotAttempted,
            trace: None,
        };
        let after = final_refit(&p, report.clone(), 0.02);
        assert_eq!(after.refit_status, RefitStatus::TooFewInliers);
        assert_eq!(after.best_model, report.best_model);
    }

    #[test]
    fn refit_flags_rank_deficient_systems_and_keeps_the_model() {
        // Four consensus points on only two abscissae cannot refit a cubic.
        let p = CurveProblem::new(
            vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]],
            3,
        )
        .unwrap();
        let report = RunReport {
            best_model: vec![0.1, 0.2, 0.3, 0.4],
            best_mask: vec![true; 4],
            best_inlier_count: 4,
            iterations_used: 2,
            stop_reason: StopReason::Standard,
            elapsed: Duration::ZERO,
            final_beliefs: None,
            degenerate_iterations: 0,
            uniform_fallbacks: 0,
            refit_status: RefitStatus::NotAttempted,
            trace: None,
        };
        let after = final_refit(&p, report.clone(), 0.02);
        assert_eq!(after.refit_status, RefitStatus::RankDeficient);
        assert_eq!(after.best_model, report.best_model);
        assert_eq!(after.best_mask, report.best_mask);
    }
}
