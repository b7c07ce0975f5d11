//! Minimal-set selection strategies.
//!
//! The estimation loop draws one minimal sample per iteration. Besides plain
//! uniform sampling this module provides:
//!
//! - **belief-weighted** draws (the adaptive sampler): weights are the current
//!   inlier posteriors passed through a ρ activation,
//! - **score-ordered** draws from a progressively growing pool of top-scored
//!   points (PROSAC-style growth function),
//! - **spatially local** draws around a random seed point (NAPSAC-style),
//! - a deterministic **top-belief** baseline (BaySAC-style) whose beliefs are
//!   penalized only on the sampled points.
//!
//! All draws are without replacement — duplicated points always yield
//! degenerate minimal fits — and deterministic given the generator state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Multiplicative penalty applied by the top-belief baseline to the sampled
/// points when their hypothesis fails to beat the incumbent: p' = p·(1 − β).
pub const BAYSAC_PENALTY_BETA: f64 = 0.1;

/// Retry budget for finding a seed point with enough spatial neighbors
/// before the local sampler falls back to a uniform draw.
const NAPSAC_RETRY_CAP: usize = 100;

/// Default total-draw budget parameterizing the score-pool growth schedule.
pub const PROSAC_DEFAULT_T_N: f64 = 200_000.0;

// ---------------------------------------------------------------------------
// Kinds
// ---------------------------------------------------------------------------

/// Sampling strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    /// Classical uniform sampling (plain RANSAC).
    Uniform,
    /// Spatially local sampling around a uniformly drawn seed point.
    Napsac,
    /// Progressive sampling from the top of a score ordering.
    Prosac,
    /// Deterministic top-belief sets with sampled-points-only penalties.
    Baysac,
    /// Belief-weighted sampling from the filtered posteriors, uniform priors.
    Bansac,
    /// Belief-weighted sampling seeded with pre-computed scores as priors.
    PBansac,
}

impl SamplerKind {
    /// All kinds, in the order used by reports.
    pub const ALL: [SamplerKind; 6] = [
        SamplerKind::Uniform,
        SamplerKind::Napsac,
        SamplerKind::Prosac,
        SamplerKind::Baysac,
        SamplerKind::Bansac,
        SamplerKind::PBansac,
    ];

    /// True for samplers driven by the filtered per-point posteriors.
    pub fn is_belief_driven(self) -> bool {
        matches!(self, SamplerKind::Baysac | SamplerKind::Bansac | SamplerKind::PBansac)
    }

    /// Parse a sampler name; `ransac` is accepted as an alias for `uniform`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "uniform" | "ransac" => Some(Self::Uniform),
            "napsac" => Some(Self::Napsac),
            "prosac" => Some(Self::Prosac),
            "baysac" => Some(Self::Baysac),
            "bansac" => Some(Self::Bansac),
            "p_bansac" | "p-bansac" => Some(Self::PBansac),
            _ => None,
        }
    }
}

impl std::fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Napsac => "napsac",
            Self::Prosac => "prosac",
            Self::Baysac => "baysac",
            Self::Bansac => "bansac",
            Self::PBansac => "p_bansac",
        })
    }
}

/// Activation mapping a belief ψ ∈ [0, 1] to a sampling weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoKind {
    /// Linear 100ψ (the default).
    #[default]
    Rho1,
    /// Piecewise linear: 100ψ above ψ = 0.3, 10ψ at or below it.
    Rho2,
    /// Logistic 100 / (1 + e^(−10(ψ − 0.5))).
    Rho3,
    /// Saturating 130·tanh(ψ).
    Rho4,
}

impl RhoKind {
    /// Parse from the lowercase names used in configs: `rho1`…`rho4`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rho1" => Some(Self::Rho1),
            "rho2" => Some(Self::Rho2),
            "rho3" => Some(Self::Rho3),
            "rho4" => Some(Self::Rho4),
            _ => None,
        }
    }
}

impl std::fmt::Display for RhoKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Rho1 => "rho1",
            Self::Rho2 => "rho2",
            Self::Rho3 => "rho3",
            Self::Rho4 => "rho4",
        })
    }
}

/// Evaluate the weight activation ρ(ψ).
///
/// ```
/// use bansac::sampler::{rho_eval, RhoKind};
/// assert_eq!(rho_eval(RhoKind::Rho1, 0.5), 50.0);
/// assert_eq!(rho_eval(RhoKind::Rho2, 0.3), 3.0); // strict branch boundary
/// ```
pub fn rho_eval(kind: RhoKind, psi: f64) -> f64 {
    match kind {
        RhoKind::Rho1 => 100.0 * psi,
        RhoKind::Rho2 => {
            if psi > 0.3 {
                100.0 * psi
            } else {
                10.0 * psi
            }
        }
        RhoKind::Rho3 => 100.0 / (1.0 + (-10.0 * (psi - 0.5)).exp()),
        RhoKind::Rho4 => 130.0 * psi.tanh(),
    }
}

// ---------------------------------------------------------------------------
// Score-pool growth schedule
// ---------------------------------------------------------------------------

/// Progressive pool growth: hypothesis t draws from the top-n(t) prefix of
/// the score ordering, where n(t) is the smallest pool size whose cumulative
/// draw budget T'ₙ reaches t. Budgets follow the standard growth function
/// T(n) = T_N·C(n, m)/C(N, m), accumulated in integer steps
/// T'ₘ = 1, T'ₙ₊₁ = T'ₙ + ⌈T(n+1) − T(n)⌉.
#[derive(Debug, Clone)]
pub struct ProsacSchedule {
    m: usize,
    n: usize,
    /// `thresholds[i]` = T' for pool size m + i.
    thresholds: Vec<u64>,
}

impl ProsacSchedule {
    /// Build the schedule for `n` points, minimal sample size `m`, and total
    /// draw budget `t_n` (see [`PROSAC_DEFAULT_T_N`]).
    pub fn new(n: usize, m: usize, t_n: f64) -> Self {
        assert!(m >= 1 && n >= m, "need n >= m >= 1");
        // T(m) = T_N · ∏_{i=0..m-1} (m − i)/(N − i)
        let mut t = t_n;
        for i in 0..m {
            t *= (m - i) as f64 / (n - i) as f64;
        }
        let mut thresholds = Vec::with_capacity(n - m + 1);
        let mut acc: u64 = 1;
        thresholds.push(acc);
        for size in m..n {
            let t_next = t * (size + 1) as f64 / (size + 1 - m) as f64;
            acc = acc.saturating_add((t_next - t).ceil().max(1.0) as u64);
            thresholds.push(acc);
            t = t_next;
        }
        Self { m, n, thresholds }
    }

    /// Pool size serving hypothesis `k` (1-based), clamped to [m, n].
    pub fn pool_at(&self, k: u64) -> usize {
        match self.thresholds.binary_search(&k.max(1)) {
            Ok(i) => self.m + i,
            Err(i) if i < self.thresholds.len() => self.m + i,
            Err(_) => self.n,
        }
    }
}

// ---------------------------------------------------------------------------
// Sampler state
// ---------------------------------------------------------------------------

/// Per-run sampling machinery: the RNG stream, the score ordering and its
/// growth schedule, the spatial radius, and the uniform-fallback counter
/// surfaced in run reports.
#[derive(Debug, Clone)]
pub struct SamplerState {
    kind: SamplerKind,
    n: usize,
    rng: ChaCha8Rng,
    napsac_radius: f64,
    score_order: Vec<usize>,
    schedule: ProsacSchedule,
    uniform_fallbacks: usize,
    scratch: Vec<f64>,
}

impl SamplerState {
    /// Build the state for `n` points.
    ///
    /// `scores` orders the progressive pool (descending, ties by index);
    /// without scores the natural point order is used. `napsac_radius` is in
    /// data units (the engine defaults it to 10% of the bounding-box
    /// diagonal). `t_n` parameterizes the growth schedule.
    pub fn new(
        kind: SamplerKind,
        n: usize,
        m: usize,
        seed: u64,
        scores: Option<&[f64]>,
        napsac_radius: f64,
        t_n: f64,
    ) -> Self {
        let mut score_order: Vec<usize> = (0..n).collect();
        if let Some(scores) = scores {
            assert_eq!(scores.len(), n, "score vector length must match the data");
            score_order.sort_unstable_by(|&a, &b| {
                scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b))
            });
        }
        Self {
            kind,
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
            napsac_radius,
            score_order,
            schedule: ProsacSchedule::new(n, m, t_n),
            uniform_fallbacks: 0,
            scratch: vec![0.0; n],
        }
    }

    /// The configured strategy.
    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    /// Spatial neighborhood radius used by the local sampler.
    pub fn napsac_radius(&self) -> f64 {
        self.napsac_radius
    }

    /// Points ordered by descending prior score (ties by index).
    pub fn score_order(&self) -> &[usize] {
        &self.score_order
    }

    /// Pool size of the progressive schedule at hypothesis `k` (1-based).
    pub fn pool_at(&self, k: u64) -> usize {
        self.schedule.pool_at(k)
    }

    /// How often a draw fell back to uniform because its preconditions
    /// failed (all-zero weights, no spatial neighborhood).
    pub fn uniform_fallbacks(&self) -> usize {
        self.uniform_fallbacks
    }

    /// `m` distinct indices, uniform over all points.
    pub fn sample_uniform(&mut self, m: usize) -> Vec<usize> {
        rand::seq::index::sample(&mut self.rng, self.n, m).into_vec()
    }

    /// `m` distinct indices from the discrete distribution with weights
    /// ρ(beliefₙ), drawn by sequential cumulative-weight inversion with
    /// removal. Falls back to a uniform draw (counted) when fewer than `m`
    /// weights are positive.
    pub fn sample_weighted(&mut self, beliefs: &[f64], m: usize, rho: RhoKind) -> Vec<usize> {
        assert_eq!(beliefs.len(), self.n);
        let mut total = 0.0;
        let mut positive = 0usize;
        for (w, &b) in self.scratch.iter_mut().zip(beliefs) {
            *w = rho_eval(rho, b);
            debug_assert!(w.is_finite() && *w >= 0.0, "activations must be non-negative");
            if *w > 0.0 {
                positive += 1;
            }
            total += *w;
        }
        if positive < m {
            self.uniform_fallbacks += 1;
            return self.sample_uniform(m);
        }
        let mut picked = Vec::with_capacity(m);
        for _ in 0..m {
            let u = self.rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = usize::MAX;
            for (i, &w) in self.scratch.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                acc += w;
                chosen = i;
                if acc > u {
                    break;
                }
            }
            // `chosen` is the last positive-weight index when u lands on the
            // accumulated total (float round-off); positives >= m guarantees
            // one exists.
            picked.push(chosen);
            total -= self.scratch[chosen];
            self.scratch[chosen] = 0.0;
        }
        picked
    }

    /// `m` distinct indices drawn locally: a uniform seed point plus `m − 1`
    /// uniform picks among the points within [`napsac_radius`] of it. Seeds
    /// with too few neighbors are redrawn up to a retry cap, then the draw
    /// falls back to uniform (counted).
    ///
    /// [`napsac_radius`]: Self::napsac_radius
    pub fn sample_napsac(&mut self, m: usize, spatial: &[[f64; 2]]) -> Vec<usize> {
        assert_eq!(spatial.len(), self.n);
        let r2 = self.napsac_radius * self.napsac_radius;
        for _ in 0..NAPSAC_RETRY_CAP {
            let seed = self.rng.gen_range(0..self.n);
            let [sx, sy] = spatial[seed];
            let neighbors: Vec<usize> = (0..self.n)
                .filter(|&j| {
                    if j == seed {
                        return false;
                    }
                    let dx = spatial[j][0] - sx;
                    let dy = spatial[j][1] - sy;
                    dx * dx + dy * dy <= r2
                })
                .collect();
            if neighbors.len() >= m - 1 {
                let mut picked = vec![seed];
                for i in rand::seq::index::sample(&mut self.rng, neighbors.len(), m - 1) {
                    picked.push(neighbors[i]);
                }
                return picked;
            }
        }
        self.uniform_fallbacks += 1;
        self.sample_uniform(m)
    }

    /// `m` distinct indices, uniform within the current top-scored pool of
    /// the growth schedule at hypothesis `k` (1-based).
    pub fn sample_prosac(&mut self, m: usize, k: u64) -> Vec<usize> {
        let pool = self.schedule.pool_at(k);
        rand::seq::index::sample(&mut self.rng, pool, m)
            .iter()
            .map(|i| self.score_order[i])
            .collect()
    }

    /// The `m` highest-belief points, deterministic, ties broken toward the
    /// lowest index. A single O(N·m) selection pass — no full sort.
    pub fn sample_baysac(&self, beliefs: &[f64], m: usize) -> Vec<usize> {
        assert_eq!(beliefs.len(), self.n);
        let mut picked: Vec<usize> = Vec::with_capacity(m);
        for _ in 0..m {
            let mut best = usize::MAX;
            let mut best_v = f64::NEG_INFINITY;
            for (i, &v) in beliefs.iter().enumerate() {
                // Strict `>` keeps the first (lowest-index) maximum.
                if v > best_v && !picked.contains(&i) {
                    best = i;
                    best_v = v;
                }
            }
            picked.push(best);
        }
        picked
    }
}

/// Penalty hook of the top-belief baseline: after a hypothesis fails to beat
/// the incumbent, only the sampled points are demoted, p' = p·(1 − β).
pub fn baysac_penalize(beliefs: &mut [f64], sampled: &[usize]) {
    for &i in sampled {
        beliefs[i] *= 1.0 - BAYSAC_PENALTY_BETA;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(kind: SamplerKind, n: usize, m: usize, seed: u64) -> SamplerState {
        SamplerState::new(kind, n, m, seed, None, f64::INFINITY, PROSAC_DEFAULT_T_N)
    }

    // -- ρ -------------------------------------------------------------------

    #[test]
    fn rho_published_values() {
        assert_eq!(rho_eval(RhoKind::Rho1, 0.5), 50.0);
        assert_eq!(rho_eval(RhoKind::Rho2, 0.3), 3.0); // ψ = 0.3 takes the ×10 branch
        assert_eq!(rho_eval(RhoKind::Rho2, 0.4), 40.0);
        assert_eq!(rho_eval(RhoKind::Rho3, 0.5), 50.0);
        assert_eq!(rho_eval(RhoKind::Rho4, 0.0), 0.0);
    }

    #[test]
    fn rho_non_negative_on_unit_interval() {
        for kind in [RhoKind::Rho1, RhoKind::Rho2, RhoKind::Rho3, RhoKind::Rho4] {
            for i in 0..=100 {
                assert!(rho_eval(kind, i as f64 / 100.0) >= 0.0);
            }
        }
    }

    // -- uniform ---------------------------------------------------------------

    #[test]
    fn uniform_full_set_when_n_equals_m() {
        let mut s = state(SamplerKind::Uniform, 4, 4, 1);
        let mut picked = s.sample_uniform(4);
        picked.sort_unstable();
        assert_eq!(picked, vec![0, 1, 2, 3]);
    }

    #[test]
    fn uniform_marginal_inclusion_matches_m_over_n() {
        let mut s = state(SamplerKind::Uniform, 10, 3, 42);
        let mut counts = [0usize; 10];
        let draws = 100_000;
        for _ in 0..draws {
            for i in s.sample_uniform(3) {
                counts[i] += 1;
            }
        }
        let expected = draws as f64 * 3.0 / 10.0;
        for (i, &c) in counts.iter().enumerate() {
            let rel = (c as f64 - expected).abs() / expected;
            assert!(rel < 0.05, "index {i}: inclusion {c} vs expected {expected}");
        }
    }

    // -- weighted ---------------------------------------------------------------

    #[test]
    fn weighted_single_positive_weight_is_deterministic() {
        let mut s = state(SamplerKind::Bansac, 3, 1, 7);
        for _ in 0..100 {
            assert_eq!(s.sample_weighted(&[1.0, 0.0, 0.0], 1, RhoKind::Rho1), vec![0]);
        }
    }

    #[test]
    fn weighted_uniform_beliefs_draw_uniform_pairs() {
        // All beliefs 0.5 → all weights equal → pair distribution uniform
        // over C(5,2) = 10 pairs. Chi-square over 1e5 seeded draws must not
        // reject at α = 0.01 (critical value 21.67 at 9 degrees of freedom).
        let mut s = state(SamplerKind::Bansac, 5, 2, 1234);
        let beliefs = [0.5; 5];
        let mut counts = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let mut p = s.sample_weighted(&beliefs, 2, RhoKind::Rho1);
            p.sort_unstable();
            *counts.entry((p[0], p[1])).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 10);
        let expected = draws as f64 / 10.0;
        let chi2: f64 =
            counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 21.666, "chi-square {chi2} rejects uniformity");
    }

    #[test]
    fn weighted_inclusion_monotone_in_weight() {
        let mut s = state(SamplerKind::Bansac, 5, 2, 99);
        let beliefs = [0.1, 0.2, 0.3, 0.4, 0.5];
        let mut counts = [0usize; 5];
        for _ in 0..100_000 {
            for i in s.sample_weighted(&beliefs, 2, RhoKind::Rho1) {
                counts[i] += 1;
            }
        }
        for w in counts.windows(2) {
            assert!(w[0] < w[1], "inclusion counts {counts:?} not monotone");
        }
    }

    #[test]
    fn weighted_all_zero_falls_back_to_uniform() {
        let mut s = state(SamplerKind::Bansac, 6, 2, 5);
        let picked = s.sample_weighted(&[0.0; 6], 2, RhoKind::Rho1);
        assert_eq!(picked.len(), 2);
        assert_ne!(picked[0], picked[1]);
        assert_eq!(s.uniform_fallbacks(), 1);
        // Fewer positive weights than m counts as well.
        let picked = s.sample_weighted(&[0.9, 0.0, 0.0, 0.0, 0.0, 0.0], 2, RhoKind::Rho1);
        assert_eq!(picked.len(), 2);
        assert_eq!(s.uniform_fallbacks(), 2);
    }

    // -- progressive pool ----------------------------------------------------------

    #[test]
    fn prosac_pool_starts_at_m_and_reaches_n() {
        let sched = ProsacSchedule::new(300, 4, PROSAC_DEFAULT_T_N);
        assert_eq!(sched.pool_at(1), 4);
        assert_eq!(sched.pool_at(u64::MAX), 300);
        let mut last = 0;
        for k in 1..=3000u64 {
            let pool = sched.pool_at(k);
            assert!(pool >= last, "pool must grow monotonically");
            assert!((4..=300).contains(&pool));
            last = pool;
        }
    }

    #[test]
    fn prosac_first_draw_is_the_top_m_set() {
        let scores = [0.1, 0.9, 0.3, 0.8, 0.2, 0.7];
        let mut s = SamplerState::new(
            SamplerKind::Prosac,
            6,
            3,
            11,
            Some(&scores),
            f64::INFINITY,
            PROSAC_DEFAULT_T_N,
        );
        assert_eq!(s.score_order()[..3], [1, 3, 5]);
        let mut picked = s.sample_prosac(3, 1);
        picked.sort_unstable();
        assert_eq!(picked, vec![1, 3, 5]);
    }

    #[test]
    fn prosac_samples_stay_inside_the_pool() {
        let n = 50;
        let scores: Vec<f64> = (0..n).map(|i| 1.0 - i as f64 / n as f64).collect();
        let mut s = SamplerState::new(
            SamplerKind::Prosac,
            n,
            4,
            3,
            Some(&scores),
            f64::INFINITY,
            1000.0,
        );
        for k in 1..=500u64 {
            let pool = s.pool_at(k);
            for i in s.sample_prosac(4, k) {
                // score_order is identity here (descending scores by index).
                assert!(i < pool, "index {i} outside pool {pool} at k = {k}");
            }
        }
    }

    #[test]
    fn prosac_degenerate_schedule_end_is_uniform_range() {
        let sched = ProsacSchedule::new(8, 8, PROSAC_DEFAULT_T_N);
        assert_eq!(sched.pool_at(1), 8);
        assert_eq!(sched.pool_at(1_000_000), 8);
    }

    // -- top-belief baseline ----------------------------------------------------

    #[test]
    fn baysac_picks_top_m_by_value() {
        let s = state(SamplerKind::Baysac, 5, 3, 0);
        let picked = s.sample_baysac(&[0.1, 0.9, 0.3, 0.8, 0.2], 3);
        assert_eq!(picked, vec![1, 3, 2]);
    }

    #[test]
    fn baysac_breaks_ties_toward_low_indices() {
        let s = state(SamplerKind::Baysac, 5, 3, 0);
        assert_eq!(s.sample_baysac(&[0.5; 5], 3), vec![0, 1, 2]);
    }

    #[test]
    fn baysac_penalty_touches_only_sampled_points() {
        let mut beliefs = vec![0.5; 5];
        baysac_penalize(&mut beliefs, &[1, 3]);
        assert_eq!(beliefs, vec![0.5, 0.45, 0.5, 0.45, 0.5]);
    }

    // -- spatial ---------------------------------------------------------------------

    #[test]
    fn napsac_infinite_radius_behaves_like_uniform() {
        let spatial: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 0.0]).collect();
        let mut s = state(SamplerKind::Napsac, 10, 3, 21);
        let picked = s.sample_napsac(3, &spatial);
        assert_eq!(picked.len(), 3);
        assert!(picked.iter().all(|&i| i < 10));
        assert_eq!(s.uniform_fallbacks(), 0);
    }

    #[test]
    fn napsac_clustered_draw_stays_within_radius() {
        // Two tight clusters far apart: every minimal set must be single-cluster.
        let mut spatial = Vec::new();
        for i in 0..5 {
            spatial.push([i as f64 * 0.01, 0.0]);
        }
        for i in 0..5 {
            spatial.push([100.0 + i as f64 * 0.01, 0.0]);
        }
        let mut s = SamplerState::new(SamplerKind::Napsac, 10, 3, 17, None, 1.0, PROSAC_DEFAULT_T_N);
        for _ in 0..50 {
            let picked = s.sample_napsac(3, &spatial);
            let cluster = picked[0] < 5;
            assert!(picked.iter().all(|&i| (i < 5) == cluster), "mixed clusters: {picked:?}");
        }
        assert_eq!(s.uniform_fallbacks(), 0);
    }

    #[test]
    fn napsac_isolated_points_fall_back_to_uniform() {
        let spatial: Vec<[f64; 2]> = (0..6).map(|i| [i as f64 * 100.0, 0.0]).collect();
        let mut s = SamplerState::new(SamplerKind::Napsac, 6, 2, 13, None, 1.0, PROSAC_DEFAULT_T_N);
        let picked = s.sample_napsac(2, &spatial);
        assert_eq!(picked.len(), 2);
        assert_ne!(picked[0], picked[1]);
        assert_eq!(s.uniform_fallbacks(), 1);
    }

    // -- properties -----------------------------------------------------------------

    proptest! {
        /// Every sampler returns m distinct in-range indices.
        #[test]
        fn prop_samples_distinct_and_in_range(
            seed in any::<u64>(),
            n in 4usize..40,
            m in 1usize..=4,
            weights in proptest::collection::vec(0.0f64..=1.0, 40),
        ) {
            let beliefs = &weights[..n];
            let spatial: Vec<[f64; 2]> = (0..n).map(|i| [i as f64, (i * i) as f64 * 0.1]).collect();
            let mut s = SamplerState::new(
                SamplerKind::Bansac, n, m, seed, Some(beliefs), 5.0, PROSAC_DEFAULT_T_N,
            );
            for picked in [
                s.sample_uniform(m),
                s.sample_weighted(beliefs, m, RhoKind::Rho2),
                s.sample_napsac(m, &spatial),
                s.sample_prosac(m, 17),
                s.sample_baysac(beliefs, m),
            ] {
                prop_assert_eq!(picked.len(), m);
                let mut sorted = picked.clone();
                sorted.sort_unstable();
                sorted.dedup();
                prop_assert_eq!(sorted.len(), m, "duplicates in {:?}", picked);
                prop_assert!(picked.iter().all(|&i| i < n));
            }
        }

        /// The growth schedule is monotone and clamped for any shape.
        #[test]
        fn prop_schedule_monotone(n in 4usize..100, m in 1usize..=4, k in 1u64..10_000) {
            let sched = ProsacSchedule::new(n, m, PROSAC_DEFAULT_T_N);
            let a = sched.pool_at(k);
            let b = sched.pool_at(k + 1);
            prop_assert!(a <= b);
            prop_assert!((m..=n).contains(&a));
        }
    }
}
