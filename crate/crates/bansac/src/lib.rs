//! Robust model estimation with belief-guided adaptive sampling.
//!
//! The core loop is classic sample consensus: draw a minimal sample, fit a
//! hypothesis, count inliers, keep the best model. What this crate adds is a
//! per-point *belief filter*: each data point carries a two-state (inlier /
//! outlier) probabilistic chain, and every iteration's inlier/outlier
//! classification is folded into an exact filtering recursion over that
//! chain. The updated posteriors drive two things:
//!
//! - **sampling** — minimal samples are drawn with probability proportional
//!   to an activation of each point's current belief, so sampling
//!   concentrates on probable inliers as evidence accumulates; and
//! - **stopping** — the loop exits once the number of points believed to be
//!   outliers (posterior below a threshold τ) reaches the best model's
//!   outlier count, i.e. once the filter agrees nothing better is left.
//!
//! Classical baselines — uniform sampling, spatially local sampling,
//! score-ordered progressive sampling, a sampled-set penalty scheme, and the
//! standard confidence-based iteration bound — share the same engine, so
//! strategies differ only in how they sample and when they stop.
//!
//! # Modules
//!
//! - [`engine`] — the estimation loop, its configuration, and reports.
//! - [`belief`] — transition tables, evidence weights, and the filtering
//!   recursion (with a brute-force enumeration oracle for tests).
//! - [`sampler`] — minimal-sample selection strategies.
//! - [`stopping`] — stopping criteria and their bookkeeping.
//! - [`problem`] — the data/model abstraction the engine runs over.
//! - [`geometry`] — curve, circle, and homography problem adapters.
//! - [`synth`] — seeded synthetic scenes and dataset files for benchmarks.
//! - [`error`] — error types for every layer.
//!
//! # Example
//!
//! ```
//! use bansac::synth::{generate, SyntheticConfig};
//! use bansac::{run_estimation, ProblemKind, RunConfig, SamplerKind};
//!
//! // A noisy circle with 40% inliers, and a belief-driven run over it.
//! let mut scene = SyntheticConfig::new(ProblemKind::Circle, 0.4, 7);
//! scene.noise_std = 0.005;
//! let data = generate(&scene).unwrap();
//! let problem = data.to_problem();
//!
//! let config = RunConfig::for_sampler(SamplerKind::Bansac);
//! let report = run_estimation(problem.as_problem(), &config, None).unwrap();
//!
//! assert!(report.best_inlier_count >= 100); // 120 points lie on the circle
//! assert!(report.iterations_used <= config.max_iterations);
//! ```

pub mod belief;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod problem;
pub mod sampler;
pub mod stopping;
pub mod synth;

pub use belief::{
    brute_force_posterior, gamma_eval, BeliefState, GammaKind, PriorVector, TransitionModel,
};
pub use engine::{
    evaluate_model, final_refit, run_estimation, update_best, Hypothesis, RefitStatus, RunConfig,
    RunReport, TraceRow,
};
pub use error::{
    BeliefError, ConfigError, CptParseError, DatasetError, EngineError, FitError,
};
pub use geometry::{
    CircleModel, CircleProblem, Correspondence, CurveModel, CurveProblem, HomographyModel,
    HomographyProblem,
};
pub use problem::{bbox_diagonal, Problem, ProblemKind};
pub use sampler::{rho_eval, ProsacSchedule, RhoKind, SamplerKind, SamplerState};
pub use stopping::{
    bansac_should_stop, standard_iteration_bound, PoolSnapshot, StopReason, StoppingKind,
    StoppingSet, StoppingState,
};
pub use synth::{generate, ProblemInstance, SyntheticConfig, SyntheticDataset};
