//! Error types shared across the estimation pipeline.

use thiserror::Error;

/// Configuration rejected before a run starts.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    /// `max_iterations` must be at least 1.
    #[error("max_iterations must be >= 1")]
    ZeroIterations,
    /// Confidence must lie strictly inside (0, 1).
    #[error("confidence {0} outside the open interval (0, 1)")]
    ConfidenceRange(f64),
    /// Belief stopping threshold must lie strictly inside (0, 1).
    #[error("tau {0} outside the open interval (0, 1)")]
    TauRange(f64),
    /// The inlier threshold may not be negative or NaN.
    #[error("inlier_threshold {0} is not a non-negative real")]
    ThresholdRange(f64),
    /// At least one stopping criterion must be enabled.
    #[error("stopping_set is empty")]
    EmptyStoppingSet,
    /// Markov order restricted to the orders with compiled-in tables.
    #[error("markov_order {0} outside {{1, 2, 3}}")]
    MarkovOrder(usize),
    /// A prior/score entry escaped [0, 1].
    #[error("prior entry {value} at index {index} outside [0, 1]")]
    PriorRange { index: usize, value: f64 },
    /// Prior vector length does not match the data.
    #[error("prior vector length {got}, expected {expected}")]
    PriorLength { got: usize, expected: usize },
    /// Polynomial degree outside the supported range.
    #[error("curve degree {0} outside the supported range 1..=5")]
    CurveDegree(usize),
    /// Spatial sampling radius must be a positive real.
    #[error("napsac_radius {0} is not a positive real")]
    NapsacRadius(f64),
    /// Growth-schedule draw budget must be a real of at least 1.
    #[error("prosac_t_n {0} is not a real >= 1")]
    ProsacBudget(f64),
    /// Inlier rate must lie in (0, 1].
    #[error("inlier_rate {0} outside the half-open interval (0, 1]")]
    InlierRate(f64),
    /// Noise scale may not be negative or NaN.
    #[error("noise_std {0} is not a non-negative real")]
    NoiseStd(f64),
    /// Outlier bound must be a positive real.
    #[error("outlier_bound {0} is not a positive real")]
    OutlierBound(f64),
    /// Requested point budget cannot hold a minimal sample.
    #[error("n_points {got} below the minimal sample size {needed}")]
    PointBudget { got: usize, needed: usize },
}

/// Failures of minimal or non-minimal model fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FitError {
    /// The minimal sample does not determine a model (repeated abscissae,
    /// collinear points, rank-deficient linear system, ...).
    #[error("degenerate minimal sample")]
    Degenerate,
    /// The non-minimal least-squares system is rank-deficient.
    #[error("rank-deficient least-squares system")]
    RankDeficient,
}

/// Failures inside the belief filter.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum BeliefError {
    /// Both belief components underflowed to exactly zero, so the posterior
    /// is undefined. Reachable only from boundary priors (0 or 1) combined
    /// with boundary evidence weights.
    #[error("belief mass for point {point} collapsed to zero")]
    DegenerateBelief { point: usize },
    /// The brute-force oracle enumerates 2^(k+1) assignments and is capped.
    #[error("evidence chain of length {len} exceeds the brute-force cap {cap}")]
    ChainTooLong { len: usize, cap: usize },
}

/// Errors surfaced by [`run_estimation`](crate::engine::run_estimation).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    /// Fewer data points than the minimal sample size.
    #[error("{got} data points, but the minimal sample needs {needed}")]
    InsufficientData { got: usize, needed: usize },
    /// Every iteration produced a degenerate minimal fit.
    #[error("no valid hypothesis found in {iterations} iterations")]
    NoValidHypothesis { iterations: usize },
    /// Invalid run configuration.
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// The belief filter collapsed (see [`BeliefError`]).
    #[error(transparent)]
    Belief(#[from] BeliefError),
}

/// Errors from parsing a plain-text transition-table override.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CptParseError {
    /// A line could not be tokenized as `state history... evidence = p`.
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    /// A row label appeared twice.
    #[error("line {line}: duplicate row label")]
    DuplicateRow { line: usize },
    /// Rows of inconsistent arity (mixed Markov orders) in one file.
    #[error("line {line}: row arity implies order {got}, file started with order {expected}")]
    MixedOrder { line: usize, got: usize, expected: usize },
    /// A probability outside [0, 1].
    #[error("line {line}: probability {value} outside [0, 1]")]
    ProbabilityRange { line: usize, value: f64 },
    /// Not all 2^(order+1) rows were supplied.
    #[error("table incomplete: {got} of {expected} rows present")]
    Incomplete { got: usize, expected: usize },
    /// The file contained no rows at all.
    #[error("no table rows found")]
    Empty,
}

/// Errors from reading a dataset file.
#[derive(Debug, Error)]
pub enum DatasetError {
    /// Underlying I/O failure.
    #[error("dataset I/O: {0}")]
    Io(#[from] std::io::Error),
    /// A header or data line could not be parsed.
    #[error("dataset line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    /// The file declared no problem kind.
    #[error("dataset header is missing the problem kind")]
    MissingKind,
    /// The file contained no data rows.
    #[error("dataset holds no data rows")]
    Empty,
}
