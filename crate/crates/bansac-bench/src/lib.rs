//! Shared fixtures for the criterion benchmarks: pre-warmed belief states,
//! deterministic evidence masks, and a reference synthetic scene. Keeping
//! them here (rather than inline in the bench files) lets the unit tests
//! below pin the fixtures' shapes so a refactor cannot silently turn a
//! benchmark into a no-op.

use bansac::{
    generate, BeliefState, PriorVector, ProblemKind, SyntheticConfig, SyntheticDataset,
    TransitionModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A belief state advanced past its width-growth phase, ready for
/// steady-state update timing, plus the matching transition model.
pub fn steady_state(order: usize, n: usize) -> (BeliefState, TransitionModel) {
    let model = TransitionModel::with_order(order).expect("orders 1-3 are valid");
    let priors = PriorVector::uniform(n);
    let mut state = BeliefState::new(&priors, order).expect("uniform priors are valid");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // Orders 2 and 3 widen their component blocks over the first steps;
    // a handful of warmup updates reaches the fixed-width regime.
    for _ in 0..8 {
        let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        state.update(&mask, 0.35, &model).expect("warmup update");
    }
    (state, model)
}

/// Deterministic pseudo-random evidence mask with roughly 40% agreement.
pub fn evidence_mask(n: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_bool(0.4)).collect()
}

/// Belief vector spread over (0, 1), for weighted-draw timing.
pub fn spread_beliefs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0.01..0.99)).collect()
}

/// The reference end-to-end scene: a 300-point curve at 30% inliers with
/// noise well inside the 0.02 classification threshold.
pub fn curve_scene() -> SyntheticDataset {
    let mut scene = SyntheticConfig::new(ProblemKind::Curve, 0.3, 99);
    scene.n_points = 300;
    scene.noise_std = 0.005;
    generate(&scene).expect("reference scene generates")
}
