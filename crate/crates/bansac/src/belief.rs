//! Per-point dynamic Bayesian network filtering of inlier beliefs.
//!
//! Every data point carries a two-state chain x⁰, x¹, …, xᵏ (inlier/outlier).
//! Each estimation iteration k emits one evidence bit cᵏ per point — whether
//! the point agreed with that iteration's hypothesis — whose reliability is a
//! function γ(εᵏ) of the hypothesis inlier ratio. The filter maintains the
//! exact posterior P(xᵏ = inlier | c¹…cᵏ) for every point by the classical
//! forward recursion over unnormalized components
//!
//! ```text
//! Φ(xᵏ, …) = Σ_{oldest var} P(cᵏ | xᵏ⁻¹) · P(xᵏ | cᵏ, history) · Φ(xᵏ⁻¹, …)
//! ```
//!
//! so the per-iteration cost is a fixed handful of multiply-adds per point,
//! independent of k. Transition tables for Markov orders 1–3 are compiled in
//! (overridable from a plain-text file, see [`TransitionModel::from_cpt_text`]);
//! the first `order − 1` steps of a higher-order chain fall back to the
//! lower-order tables because no longer history exists yet.
//!
//! [`brute_force_posterior`] re-derives the same posterior by enumerating all
//! 2^(k+1) assignments of the chain and serves as the oracle the recursive
//! implementation is tested against.

use serde::{Deserialize, Serialize};

use crate::error::{BeliefError, ConfigError, CptParseError};

/// Rescale guard: when the total unnormalized mass of a point drops below
/// this, both components are divided by their sum. The posterior is a ratio,
/// so the scaling is unobservable; without it, thousands of multiplicative
/// updates denormalize.
const RESCALE_FLOOR: f64 = 1e-300;

/// Hard cap on the brute-force oracle chain length (cost 2^(k+1)).
pub const MAX_ORACLE_CHAIN: usize = 20;

// ---------------------------------------------------------------------------
// Evidence weighting γ
// ---------------------------------------------------------------------------

/// Choice of the evidence-weighting function γ(ε) mapping a hypothesis inlier
/// ratio to the reliability of the inlier/outlier evidence it generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaKind {
    /// Piecewise-linear: `0.62ε + 0.5` below the breakpoint ε = 0.7143,
    /// `0.2ε + 0.8` above (both branches ≈ 0.94287 at the breakpoint).
    /// The default: hypotheses are mildly trusted even at low ε.
    #[default]
    Gamma1,
    /// Logistic `0.5 / (0.5 + e^(−10(ε − 0.3)))`; distrusts (γ < 0.5) any
    /// hypothesis with ε below 0.3.
    Gamma2,
    /// Saturating `tanh(3ε)`; uninformative at ε = 0, near-certain above ~0.8.
    Gamma3,
}

impl GammaKind {
    /// Parse from the lowercase names used in configs: `gamma1`/`gamma2`/`gamma3`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gamma1" => Some(Self::Gamma1),
            "gamma2" => Some(Self::Gamma2),
            "gamma3" => Some(Self::Gamma3),
            _ => None,
        }
    }
}

impl std::fmt::Display for GammaKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Gamma1 => "gamma1",
            Self::Gamma2 => "gamma2",
            Self::Gamma3 => "gamma3",
        })
    }
}

/// Gamma-1 breakpoint between the two linear branches.
const GAMMA1_BREAK: f64 = 0.7143;

/// Evaluate γ(ε), clamped to [0, 1].
///
/// ```
/// use bansac::belief::{gamma_eval, GammaKind};
/// assert_eq!(gamma_eval(GammaKind::Gamma1, 0.5), 0.81);
/// assert_eq!(gamma_eval(GammaKind::Gamma3, 0.0), 0.0);
/// ```
pub fn gamma_eval(kind: GammaKind, inlier_ratio: f64) -> f64 {
    let e = inlier_ratio;
    let g = match kind {
        GammaKind::Gamma1 => {
            if e < GAMMA1_BREAK {
                0.62 * e + 0.5
            } else {
                0.2 * e + 0.8
            }
        }
        GammaKind::Gamma2 => 0.5 / (0.5 + (-10.0 * (e - 0.3)).exp()),
        GammaKind::Gamma3 => (3.0 * e).tanh(),
    };
    g.clamp(0.0, 1.0)
}

// ---------------------------------------------------------------------------
// Transition tables
// ---------------------------------------------------------------------------

// Flat table layout: entry index packs the row label as
//   bit 0            — evidence c        (1 = inlier)
//   bit i, i = 1..L  — history x^{k-i}   (1 = inlier)
// and the stored value is P(xᵏ = inlier | c, history). The outlier row is the
// complement and is never stored.

/// Order-1 inlier-transition rows P(xᵏ = I | c, xᵏ⁻¹).
///
/// Index bits (c, x') → value: (O,O) 0.0, (I,O) 0.2, (O,I) 1.0, (I,I) 1.0.
/// An inlier never leaks out of the inlier state within one component; an
/// outlier is re-admitted at 0.2 only on inlier evidence.
const T1_DEFAULT: [f64; 4] = [0.0, 0.2, 1.0, 1.0];

/// Order-2 rows P(xᵏ = I | c, xᵏ⁻¹, xᵏ⁻²), index bits (c, x', x'').
const T2_DEFAULT: [f64; 8] = [0.0, 0.1, 0.7, 0.9, 0.1, 0.2, 0.8, 1.0];

/// Order-3 rows P(xᵏ = I | c, xᵏ⁻¹, xᵏ⁻², xᵏ⁻³), index bits (c, x', x'', x''').
const T3_DEFAULT: [f64; 16] = [
    0.0, 0.05, 0.2, 0.4, 0.3, 0.1, 0.7, 0.9, 0.1, 0.2, 0.5, 0.6, 0.2, 0.3, 0.8, 1.0,
];

/// Conditional-probability parameters of the per-point chain: the Markov
/// order, the inlier-transition table for that order (plus the lower-order
/// tables used while the chain is shorter than the order), and the γ kind.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionModel {
    order: usize,
    /// `tables[l - 1]` is the flat table used when `l` history variables are
    /// available; length 2^(l+1). Only the first `order` entries are used.
    tables: [Vec<f64>; 3],
    gamma_kind: GammaKind,
}

impl Default for TransitionModel {
    fn default() -> Self {
        Self::with_order(1).expect("order 1 is valid")
    }
}

impl TransitionModel {
    /// Compiled-in tables for the given Markov order with the default γ₁.
    pub fn with_order(order: usize) -> Result<Self, ConfigError> {
        if !(1..=3).contains(&order) {
            return Err(ConfigError::MarkovOrder(order));
        }
        Ok(Self {
            order,
            tables: [T1_DEFAULT.to_vec(), T2_DEFAULT.to_vec(), T3_DEFAULT.to_vec()],
            gamma_kind: GammaKind::default(),
        })
    }

    /// Replace the γ kind (builder style).
    pub fn with_gamma(mut self, kind: GammaKind) -> Self {
        self.gamma_kind = kind;
        self
    }

    /// Build a model from explicit rows `(history, c, p)` where `history[i]`
    /// is the assignment of xᵏ⁻¹⁻ⁱ and `p = P(xᵏ = inlier | c, history)`.
    /// All 2^(order+1) rows must be supplied. Lower-order tables (used during
    /// chain warmup) keep their compiled-in defaults.
    pub fn from_rows(order: usize, rows: &[(&[bool], bool, f64)]) -> Result<Self, ConfigError> {
        let mut model = Self::with_order(order)?;
        let len = 2usize << order;
        let mut table = vec![f64::NAN; len];
        for (history, c, p) in rows {
            assert_eq!(history.len(), order, "row history length must equal order");
            let mut idx = usize::from(*c);
            for (i, h) in history.iter().enumerate() {
                idx |= usize::from(*h) << (i + 1);
            }
            table[idx] = *p;
        }
        assert!(table.iter().all(|v| v.is_finite()), "all rows must be supplied");
        model.tables[order - 1] = table;
        Ok(model)
    }

    /// Markov order of the full-history factor.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The configured evidence-weighting function.
    pub fn gamma_kind(&self) -> GammaKind {
        self.gamma_kind
    }

    /// Flat table used when `hist_len` history variables are available
    /// (`hist_len < order` only during chain warmup).
    pub fn table_for(&self, hist_len: usize) -> &[f64] {
        &self.tables[hist_len - 1]
    }

    /// Row lookup P(xᵏ = inlier | c, history); `history[i]` is xᵏ⁻¹⁻ⁱ.
    pub fn prob_inlier(&self, history: &[bool], c: bool) -> f64 {
        let mut idx = usize::from(c);
        for (i, h) in history.iter().enumerate() {
            idx |= usize::from(*h) << (i + 1);
        }
        self.table_for(history.len())[idx]
    }

    /// Parse a plain-text transition-table override.
    ///
    /// One row per line: `inlier <history...> <evidence> = <p>` where every
    /// token is `inlier` or `outlier`, the first token names the state whose
    /// probability is given (always `inlier`; outlier rows are complements),
    /// the middle tokens are the history xᵏ⁻¹[, xᵏ⁻²[, xᵏ⁻³]], and the last
    /// token is the evidence c. The number of history tokens fixes the Markov
    /// order; all 2^(order+1) rows must be present. `#` starts a comment.
    ///
    /// ```
    /// use bansac::belief::TransitionModel;
    /// let text = "\
    /// inlier inlier inlier = 1.0
    /// inlier inlier outlier = 1.0
    /// inlier outlier inlier = 0.2
    /// inlier outlier outlier = 0.0";
    /// let model = TransitionModel::from_cpt_text(text).unwrap();
    /// assert_eq!(model.order(), 1);
    /// assert_eq!(model.prob_inlier(&[false], true), 0.2);
    /// ```
    pub fn from_cpt_text(text: &str) -> Result<Self, CptParseError> {
        fn parse_state(tok: &str, line: usize) -> Result<bool, CptParseError> {
            match tok {
                "inlier" => Ok(true),
                "outlier" => Ok(false),
                other => Err(CptParseError::Malformed {
                    line,
                    msg: format!("expected `inlier` or `outlier`, found `{other}`"),
                }),
            }
        }

        let mut order: Option<usize> = None;
        let mut table: Vec<f64> = Vec::new();
        let mut seen: Vec<bool> = Vec::new();
        let mut rows = 0usize;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (label, value) = content.split_once('=').ok_or_else(|| CptParseError::Malformed {
                line,
                msg: "missing `=`".into(),
            })?;
            let tokens: Vec<&str> = label.split_whitespace().collect();
            if tokens.len() < 3 || tokens.len() > 5 {
                return Err(CptParseError::Malformed {
                    line,
                    msg: format!("expected 3–5 state tokens, found {}", tokens.len()),
                });
            }
            if tokens[0] != "inlier" {
                return Err(CptParseError::Malformed {
                    line,
                    msg: "rows give P(x = inlier | ...); the first token must be `inlier`".into(),
                });
            }
            let row_order = tokens.len() - 2;
            match order {
                None => {
                    order = Some(row_order);
                    table = vec![f64::NAN; 2 << row_order];
                    seen = vec![false; 2 << row_order];
                }
                Some(expected) if expected != row_order => {
                    return Err(CptParseError::MixedOrder { line, got: row_order, expected });
                }
                Some(_) => {}
            }
            let c = parse_state(tokens[tokens.len() - 1], line)?;
            let mut idx = usize::from(c);
            for (h, tok) in tokens[1..tokens.len() - 1].iter().enumerate() {
                idx |= usize::from(parse_state(tok, line)?) << (h + 1);
            }
            let p: f64 = value.trim().parse().map_err(|_| CptParseError::Malformed {
                line,
                msg: format!("cannot parse probability `{}`", value.trim()),
            })?;
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(CptParseError::ProbabilityRange { line, value: p });
            }
            if seen[idx] {
                return Err(CptParseError::DuplicateRow { line });
            }
            seen[idx] = true;
            table[idx] = p;
            rows += 1;
        }

        let order = order.ok_or(CptParseError::Empty)?;
        let expected = 2 << order;
        if rows != expected {
            return Err(CptParseError::Incomplete { got: rows, expected });
        }
        let mut model = Self::with_order(order).expect("arity 1–3 enforced above");
        model.tables[order - 1] = table;
        Ok(model)
    }

    /// Render the active full-order table in the [`from_cpt_text`] format
    /// (used to echo overrides into report headers).
    ///
    /// [`from_cpt_text`]: Self::from_cpt_text
    pub fn to_cpt_text(&self) -> String {
        let name = |b: bool| if b { "inlier" } else { "outlier" };
        let table = self.table_for(self.order);
        let mut out = String::new();
        for (idx, &value) in table.iter().enumerate() {
            let mut label = vec!["inlier".to_string()];
            for i in 0..self.order {
                label.push(name(idx >> (i + 1) & 1 == 1).to_string());
            }
            label.push(name(idx & 1 == 1).to_string());
            out.push_str(&format!("{} = {}\n", label.join(" "), value));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Priors
// ---------------------------------------------------------------------------

/// Initial per-point inlier probabilities P(xₙ⁰).
#[derive(Debug, Clone, PartialEq)]
pub struct PriorVector(Vec<f64>);

impl PriorVector {
    /// The uninformative default: 0.5 everywhere.
    pub fn uniform(n: usize) -> Self {
        Self(vec![0.5; n])
    }

    /// Build from pre-computed scores, validating the [0, 1] range.
    pub fn from_scores(scores: &[f64]) -> Result<Self, ConfigError> {
        for (index, &value) in scores.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(ConfigError::PriorRange { index, value });
            }
        }
        Ok(Self(scores.to_vec()))
    }

    /// The prior entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True when empty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Belief state and the forward recursion
// ---------------------------------------------------------------------------

/// Stride of the per-point component block (max width, order 3).
const STRIDE: usize = 8;

/// Unnormalized belief components for every point plus cached posteriors.
///
/// A point's components are indexed by the joint assignment of the retained
/// chain variables: bit 0 is the current xᵏ, bit 1 is xᵏ⁻¹, bit 2 is xᵏ⁻²
/// (1 = inlier). Order 1 retains one variable (width 2); orders 2 and 3 grow
/// through warmup widths 2 → 4 (→ 8) over the first iterations and stay
/// constant afterwards, which is what makes the per-iteration cost flat in k.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefState {
    n: usize,
    order: usize,
    /// Evidence slices absorbed so far (k).
    steps: usize,
    /// Current number of live components per point.
    width: usize,
    /// `n × STRIDE` component block.
    comps: Vec<f64>,
    /// Cached P(xᵏ = inlier | c¹…cᵏ) per point.
    posteriors: Vec<f64>,
}

impl BeliefState {
    /// Fresh state at k = 0 with the given priors.
    pub fn new(priors: &PriorVector, order: usize) -> Result<Self, ConfigError> {
        if !(1..=3).contains(&order) {
            return Err(ConfigError::MarkovOrder(order));
        }
        let n = priors.len();
        let mut comps = vec![0.0; n * STRIDE];
        for (i, &p) in priors.as_slice().iter().enumerate() {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(ConfigError::PriorRange { index: i, value: p });
            }
            comps[i * STRIDE] = 1.0 - p;
            comps[i * STRIDE + 1] = p;
        }
        Ok(Self { n, order, steps: 0, width: 2, comps, posteriors: priors.as_slice().to_vec() })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    /// True when tracking no points.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Evidence slices absorbed so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Current components of one point (length 2, 4, or 8).
    pub fn components(&self, point: usize) -> &[f64] {
        &self.comps[point * STRIDE..point * STRIDE + self.width]
    }

    /// Cached posterior P(xᵏ = inlier | c¹…cᵏ) of one point.
    pub fn posterior(&self, point: usize) -> f64 {
        self.posteriors[point]
    }

    /// All cached posteriors.
    pub fn posteriors(&self) -> &[f64] {
        &self.posteriors
    }

    /// Count of posteriors strictly below `tau` (the Õᵏ of the belief
    /// stopping criterion).
    pub fn count_below(&self, tau: f64) -> usize {
        self.posteriors.iter().filter(|&&p| p < tau).count()
    }

    /// Absorb one evidence slice: `mask[n]` is cₙᵏ (whether point n agreed
    /// with this iteration's hypothesis) and `inlier_ratio` is the
    /// hypothesis's εᵏ, evaluated once through γ and shared by all points.
    ///
    /// Orders 2 and 3 route their first step(s) through the lower-order
    /// tables (no longer history exists yet) while already retaining the
    /// extra variables the full-order factor will need.
    pub fn update(
        &mut self,
        mask: &[bool],
        inlier_ratio: f64,
        model: &TransitionModel,
    ) -> Result<(), BeliefError> {
        assert_eq!(mask.len(), self.n, "evidence mask length must match the state");
        debug_assert_eq!(model.order(), self.order, "model order must match the state");
        let step = self.steps + 1;
        let hist_len = step.min(self.order);
        let table = model.table_for(hist_len);
        let gamma = gamma_eval(model.gamma_kind(), inlier_ratio);
        let old_w = self.width;
        debug_assert_eq!(old_w, 1 << hist_len, "state width must match the factor arity");
        let grow = old_w < (1 << self.order);
        let new_w = if grow { old_w * 2 } else { old_w };
        // Warmup retains every old variable; steady state drops the oldest
        // (the top bit), which is exactly the variable summed out.
        let keep_mask = if grow { old_w - 1 } else { old_w / 2 - 1 };

        for (point, &c) in mask.iter().enumerate() {
            let c_bit = usize::from(c);
            let block = &mut self.comps[point * STRIDE..(point + 1) * STRIDE];
            let mut next = [0.0f64; STRIDE];
            for (old_idx, &phi) in block[..old_w].iter().enumerate() {
                if phi == 0.0 {
                    continue;
                }
                // Evidence reliability P(cᵏ | xᵏ⁻¹): γ when the evidence
                // matches the previous state, 1 − γ otherwise. Bit 0 of the
                // old component index is xᵏ⁻¹.
                let prev_inlier = old_idx & 1 == 1;
                let ev = if c == prev_inlier { gamma } else { 1.0 - gamma };
                // The old index bits are precisely the factor's history label.
                let p_in = table[(old_idx << 1) | c_bit];
                let w = ev * phi;
                let base = (old_idx & keep_mask) << 1;
                next[base | 1] += w * p_in;
                next[base] += w * (1.0 - p_in);
            }
            let total: f64 = next[..new_w].iter().sum();
            if total <= 0.0 {
                return Err(BeliefError::DegenerateBelief { point });
            }
            let inlier_mass: f64 = next[1..new_w].iter().step_by(2).sum();
            self.posteriors[point] = inlier_mass / total;
            if total < RESCALE_FLOOR {
                for v in next[..new_w].iter_mut() {
                    *v /= total;
                }
            }
            block[..new_w].copy_from_slice(&next[..new_w]);
            block[new_w..].fill(0.0);
        }
        self.width = new_w;
        self.steps = step;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Exact filtered posterior of a single point by full enumeration: all
/// 2^(k+1) assignments of x⁰…xᵏ are weighted by the prior, the evidence
/// factors P(cʲ | xʲ⁻¹), and the transition rows (with the same lower-order
/// warmup as the recursion), then summed and normalized. Reference
/// implementation for [`BeliefState::update`] at every order; capped at
/// chain length [`MAX_ORACLE_CHAIN`].
///
/// `evidence` holds one `(c, ε)` pair per iteration.
pub fn brute_force_posterior(
    prior: f64,
    evidence: &[(bool, f64)],
    model: &TransitionModel,
) -> Result<f64, BeliefError> {
    let k = evidence.len();
    if k > MAX_ORACLE_CHAIN {
        return Err(BeliefError::ChainTooLong { len: k, cap: MAX_ORACLE_CHAIN });
    }
    let mut inlier_mass = 0.0;
    let mut total = 0.0;
    for assign in 0u64..(1u64 << (k + 1)) {
        let x = |j: usize| assign >> j & 1 == 1;
        let mut w = if x(0) { prior } else { 1.0 - prior };
        for (j, &(c, eps)) in evidence.iter().enumerate() {
            let j = j + 1; // evidence slice index, 1-based
            let gamma = gamma_eval(model.gamma_kind(), eps);
            let ev = if c == x(j - 1) { gamma } else { 1.0 - gamma };
            let hist_len = j.min(model.order());
            let mut idx = usize::from(c);
            for h in 0..hist_len {
                idx |= usize::from(x(j - 1 - h)) << (h + 1);
            }
            let p_in = model.table_for(hist_len)[idx];
            w *= ev * if x(j) { p_in } else { 1.0 - p_in };
        }
        if x(k) {
            inlier_mass += w;
        }
        total += w;
    }
    if total <= 0.0 {
        return Err(BeliefError::DegenerateBelief { point: 0 });
    }
    Ok(inlier_mass / total)
}
