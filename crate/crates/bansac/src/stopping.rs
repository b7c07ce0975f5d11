//! Stopping criteria for the estimation loop.
//!
//! Three criteria can be enabled together (logical OR):
//!
//! - **standard** confidence bound: stop at iteration k once
//!   k ≥ ⌈ln(1 − confidence) / ln(1 − ε̂ᵐ)⌉ for the best inlier ratio ε̂,
//! - **prosac**: the same bound computed over the current top-scored pool
//!   instead of the full point set,
//! - **bansac** belief criterion: stop once the number of points whose
//!   posterior fell below τ (Õᵏ) reaches the best hypothesis' outlier count
//!   (O* = N − best inliers).
//!
//! Every criterion stays inactive until a first valid hypothesis exists, so a
//! run can never exit without a model. When several criteria fire in the same
//! iteration the recorded reason follows the fixed order standard, prosac,
//! bansac.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::sampler::SamplerKind;

// ---------------------------------------------------------------------------
// Kinds and sets
// ---------------------------------------------------------------------------

/// One stopping criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingKind {
    /// Confidence bound on the full point set.
    Standard,
    /// Confidence bound restricted to the score-ordered pool.
    Prosac,
    /// Belief-threshold criterion Õᵏ ≥ O*.
    Bansac,
}

impl StoppingKind {
    /// Parse a criterion name.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "standard" => Some(Self::Standard),
            "prosac" => Some(Self::Prosac),
            "bansac" => Some(Self::Bansac),
            _ => None,
        }
    }
}

impl std::fmt::Display for StoppingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Standard => "standard",
            Self::Prosac => "prosac",
            Self::Bansac => "bansac",
        })
    }
}

/// Why a run exited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The iteration budget ran out before any criterion fired.
    MaxIterations,
    /// The standard confidence bound fired.
    Standard,
    /// The pool-restricted confidence bound fired.
    Prosac,
    /// The belief criterion fired.
    Bansac,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::MaxIterations => "max_iterations",
            Self::Standard => "standard",
            Self::Prosac => "prosac",
            Self::Bansac => "bansac",
        })
    }
}

/// Non-empty set of enabled criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<StoppingKind>", into = "Vec<StoppingKind>")]
pub struct StoppingSet {
    standard: bool,
    prosac: bool,
    bansac: bool,
}

impl StoppingSet {
    /// Build from a list of kinds; duplicates are harmless.
    pub fn new(kinds: &[StoppingKind]) -> Result<Self, ConfigError> {
        if kinds.is_empty() {
            return Err(ConfigError::EmptyStoppingSet);
        }
        let mut set = Self { standard: false, prosac: false, bansac: false };
        for &k in kinds {
            match k {
                StoppingKind::Standard => set.standard = true,
                StoppingKind::Prosac => set.prosac = true,
                StoppingKind::Bansac => set.bansac = true,
            }
        }
        Ok(set)
    }

    /// The classical configuration: standard bound only.
    pub fn standard_only() -> Self {
        Self { standard: true, prosac: false, bansac: false }
    }

    /// The criteria conventionally paired with each sampler: the belief
    /// sampler adds its belief criterion to the standard fallback, the
    /// score-seeded variant combines the belief and pool criteria, and the
    /// progressive sampler adds its pool criterion.
    pub fn natural_for(sampler: SamplerKind) -> Self {
        match sampler {
            SamplerKind::Uniform | SamplerKind::Napsac | SamplerKind::Baysac => {
                Self::standard_only()
            }
            SamplerKind::Prosac => Self { standard: true, prosac: true, bansac: false },
            SamplerKind::Bansac => Self { standard: true, prosac: false, bansac: true },
            SamplerKind::PBansac => Self { standard: false, prosac: true, bansac: true },
        }
    }

    /// Membership test.
    pub fn contains(&self, kind: StoppingKind) -> bool {
        match kind {
            StoppingKind::Standard => self.standard,
            StoppingKind::Prosac => self.prosac,
            StoppingKind::Bansac => self.bansac,
        }
    }

    /// Enabled kinds in precedence order.
    pub fn kinds(&self) -> Vec<StoppingKind> {
        let mut v = Vec::new();
        if self.standard {
            v.push(StoppingKind::Standard);
        }
        if self.prosac {
            v.push(StoppingKind::Prosac);
        }
        if self.bansac {
            v.push(StoppingKind::Bansac);
        }
        v
    }

    /// Parse a `+`- or `,`-separated list, e.g. `standard+bansac`.
    pub fn parse(s: &str) -> Option<Self> {
        let kinds: Option<Vec<StoppingKind>> =
            s.split(['+', ',']).map(|t| StoppingKind::parse(t.trim())).collect();
        Self::new(&kinds?).ok()
    }
}

impl TryFrom<Vec<StoppingKind>> for StoppingSet {
    type Error = ConfigError;
    fn try_from(kinds: Vec<StoppingKind>) -> Result<Self, Self::Error> {
        Self::new(&kinds)
    }
}

impl From<StoppingSet> for Vec<StoppingKind> {
    fn from(set: StoppingSet) -> Self {
        set.kinds()
    }
}

impl std::fmt::Display for StoppingSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = self.kinds().iter().map(|k| k.to_string()).collect();
        f.write_str(&names.join("+"))
    }
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// Iteration bound of the standard criterion: the smallest k such that the
/// probability of never having drawn an all-inlier minimal sample drops
/// below 1 − confidence, ⌈ln(1 − confidence) / ln(1 − ε̂ᵐ)⌉.
///
/// Returns at least 1.0 (an all-inlier ratio collapses the bound to a single
/// iteration) and +∞ when the ratio is 0 (the criterion can never fire).
///
/// ```
/// use bansac::stopping::standard_iteration_bound;
/// assert_eq!(standard_iteration_bound(0.5, 4, 0.99), 72.0);
/// assert_eq!(standard_iteration_bound(1.0, 4, 0.99), 1.0);
/// assert_eq!(standard_iteration_bound(0.0, 4, 0.99), f64::INFINITY);
/// ```
pub fn standard_iteration_bound(inlier_ratio: f64, sample_size: usize, confidence: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&inlier_ratio));
    debug_assert!(confidence > 0.0 && confidence < 1.0);
    let success = inlier_ratio.powi(sample_size as i32);
    if success <= 0.0 {
        return f64::INFINITY;
    }
    if success >= 1.0 {
        return 1.0;
    }
    let bound = ((1.0 - confidence).ln() / (1.0 - success).ln()).ceil();
    bound.max(1.0)
}

/// The belief criterion: stop once at least O* posteriors sit below τ.
pub fn bansac_should_stop(below_tau_count: usize, best_outliers: usize) -> bool {
    below_tau_count >= best_outliers
}

/// Pool snapshot feeding the pool-restricted bound: the current top-scored
/// pool size and how many of the best hypothesis' inliers it contains.
#[derive(Debug, Clone, Copy)]
pub struct PoolSnapshot {
    /// Current pool size of the growth schedule, in [m, N].
    pub size: usize,
    /// Best-mask inliers among the top-`size` scored points.
    pub inliers: usize,
}

/// Live criterion state: which criteria are enabled plus the values computed
/// on the most recent check, kept for reports and assertions.
#[derive(Debug, Clone)]
pub struct StoppingState {
    set: StoppingSet,
    confidence: f64,
    sample_size: usize,
    tau: f64,
    best_outliers: usize,
    below_tau_count: usize,
    standard_bound: f64,
    prosac_bound: f64,
}

impl StoppingState {
    /// Build the state for a run.
    pub fn new(set: StoppingSet, confidence: f64, sample_size: usize, tau: f64) -> Self {
        Self {
            set,
            confidence,
            sample_size,
            tau,
            best_outliers: usize::MAX,
            below_tau_count: 0,
            standard_bound: f64::INFINITY,
            prosac_bound: f64::INFINITY,
        }
    }

    /// Enabled criteria.
    pub fn set(&self) -> StoppingSet {
        self.set
    }

    /// Belief threshold used by the belief criterion.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// O* from the latest check (`usize::MAX` before a valid hypothesis).
    pub fn best_outliers(&self) -> usize {
        self.best_outliers
    }

    /// Õᵏ from the latest check.
    pub fn below_tau_count(&self) -> usize {
        self.below_tau_count
    }

    /// Standard iteration bound from the latest check.
    pub fn standard_bound(&self) -> f64 {
        self.standard_bound
    }

    /// Check all enabled criteria at iteration `k` (1-based).
    ///
    /// `best_inlier_count` is `None` until a valid hypothesis exists, which
    /// keeps every criterion inactive. `pool` feeds the pool-restricted bound
    /// and `below_tau` the belief criterion; each is only consulted when its
    /// criterion is enabled. Returns the first criterion that fired, in the
    /// order standard, prosac, bansac.
    pub fn evaluate(
        &mut self,
        k: u64,
        n_points: usize,
        best_inlier_count: Option<usize>,
        pool: Option<PoolSnapshot>,
        below_tau: Option<usize>,
    ) -> Option<StopReason> {
        let best = best_inlier_count?;
        debug_assert!(best <= n_points);
        self.best_outliers = n_points - best;

        let mut fired = None;
        if self.set.standard {
            let ratio = best as f64 / n_points as f64;
            self.standard_bound =
                standard_iteration_bound(ratio, self.sample_size, self.confidence);
            if k as f64 >= self.standard_bound {
                fired = fired.or(Some(StopReason::Standard));
            }
        }
        if self.set.prosac {
            if let Some(pool) = pool {
                debug_assert!(pool.inliers <= pool.size && pool.size <= n_points);
                // A pool barely larger than the minimal sample is always
                // "supported" by the sample that was drawn from it, so the
                // criterion only arms once the pool carries real evidence —
                // a cheap stand-in for PROSAC's non-randomness constraint.
                if pool.size >= 2 * self.sample_size {
                    let ratio = pool.inliers as f64 / pool.size as f64;
                    self.prosac_bound =
                        standard_iteration_bound(ratio, self.sample_size, self.confidence);
                    if k as f64 >= self.prosac_bound {
                        fired = fired.or(Some(StopReason::Prosac));
                    }
                }
            }
        }
        if self.set.bansac {
            if let Some(below) = below_tau {
                self.below_tau_count = below;
                if bansac_should_stop(below, self.best_outliers) {
                    fired = fired.or(Some(StopReason::Bansac));
                }
            }
        }
        fired
    }
}
