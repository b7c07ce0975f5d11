//! Synthetic dataset generation for the benchmark protocols.
//!
//! Curve and circle scenes follow one recipe: ⌊rate·n⌋ inliers are placed on
//! a randomly drawn ground-truth model and perturbed by zero-mean Gaussian
//! noise with variance 0.02 (σ = √0.02 ≈ 0.1414) on the dependent
//! coordinate, while the remaining points are uniform in the square
//! [−bound, bound]². Homography scenes map uniform source pixels through a
//! random rotation + scale + translation + mild-projective ground truth and
//! add 0.5 px Gaussian noise to inlier targets; outlier targets are uniform
//! in the image rectangle.
//!
//! Every dataset also carries per-point quality scores (higher for likely
//! inliers, with deliberate overlap between the two populations) so that
//! score-ordered and score-seeded samplers have something to consume, plus
//! the ground-truth model and inlier mask for metric computation. The mask
//! is never visible to the estimator.
//!
//! Generation is a pure function of the configuration: one seeded RNG drives
//! every draw in a fixed order, so equal configs yield equal datasets.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{ConfigError, DatasetError};
use crate::geometry::{
    CircleProblem, Correspondence, CurveProblem, HomographyProblem, DEFAULT_CURVE_DEGREE,
};
use crate::problem::{Problem, ProblemKind};

// --- defaults and scene constants -----------------------------------------

/// Default number of generated points per dataset.
pub const DEFAULT_POINT_COUNT: usize = 300;

/// Default noise *variance* for curve/circle inliers; the generator draws
/// with σ = √0.02. Exposed so callers choosing the alternative
/// "0.02 is a standard deviation" reading can set `noise_std = 0.02`
/// directly.
pub const DEFAULT_NOISE_VARIANCE: f64 = 0.02;

/// Default half-width of the square that bounds curve/circle outliers.
pub const DEFAULT_OUTLIER_BOUND: f64 = 1.0;

/// Default pixel noise added to homography inlier targets.
pub const HOMOGRAPHY_NOISE_STD_PX: f64 = 0.5;

/// Synthetic image width in pixels.
pub const IMAGE_WIDTH_PX: f64 = 640.0;

/// Synthetic image height in pixels.
pub const IMAGE_HEIGHT_PX: f64 = 480.0;

/// Largest in-plane rotation of the ground-truth homography, radians (±15°).
const HOMOGRAPHY_MAX_ROTATION: f64 = 15.0 * std::f64::consts::PI / 180.0;

/// Scale range of the ground-truth homography.
const HOMOGRAPHY_SCALE_RANGE: (f64, f64) = (0.9, 1.1);

/// Largest translation of the ground-truth homography, pixels.
const HOMOGRAPHY_MAX_TRANSLATION_PX: f64 = 40.0;

/// Largest magnitude of the ground-truth projective terms h₃₁, h₃₂.
const HOMOGRAPHY_MAX_PROJECTIVE: f64 = 1e-4;

/// Score range handed to true inliers (uniform within).
const INLIER_SCORE_RANGE: (f64, f64) = (0.5, 1.0);

/// Score range handed to outliers (uniform within; overlaps the inlier
/// range so scores are informative but not a perfect oracle).
const OUTLIER_SCORE_RANGE: (f64, f64) = (0.0, 0.7);

/// Peak amplitude the random ground-truth cubic is rescaled to, keeping
/// noisy inliers well inside the outlier square.
const CURVE_PEAK_AMPLITUDE: f64 = 0.8;

// --- configuration ---------------------------------------------------------

/// Recipe for one synthetic dataset.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SyntheticConfig {
    /// Which estimation problem to generate data for.
    pub problem: ProblemKind,
    /// Total number of points (inliers + outliers).
    pub n_points: usize,
    /// Fraction of points placed on the ground-truth model, in (0, 1].
    /// Exactly ⌊rate·n⌋ points become inliers.
    pub inlier_rate: f64,
    /// Standard deviation of the inlier noise: dependent-coordinate noise
    /// for curve/circle (default √0.02), per-coordinate pixel noise on the
    /// target point for homography (default 0.5).
    pub noise_std: f64,
    /// Half-width of the square containing curve/circle outliers. Unused by
    /// the homography generator, whose outliers live in the image rectangle.
    pub outlier_bound: f64,
    /// Seed for the generator's RNG; equal seeds give equal datasets.
    pub rng_seed: u64,
}

impl SyntheticConfig {
    /// Config with the protocol defaults for `problem`: 300 points,
    /// σ = √0.02 and outlier bound 1.0 for curve/circle, 0.5 px target
    /// noise for homography.
    pub fn new(problem: ProblemKind, inlier_rate: f64, rng_seed: u64) -> Self {
        let noise_std = match problem {
            ProblemKind::Curve | ProblemKind::Circle => DEFAULT_NOISE_VARIANCE.sqrt(),
            ProblemKind::Homography => HOMOGRAPHY_NOISE_STD_PX,
        };
        SyntheticConfig {
            problem,
            n_points: DEFAULT_POINT_COUNT,
            inlier_rate,
            noise_std,
            outlier_bound: DEFAULT_OUTLIER_BOUND,
            rng_seed,
        }
    }

    /// Validate ranges; [`generate`] cannot fail once this passes.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.inlier_rate > 0.0 && self.inlier_rate <= 1.0) {
            return Err(ConfigError::InlierRate(self.inlier_rate));
        }
        if self.noise_std < 0.0 || !self.noise_std.is_finite() {
            return Err(ConfigError::NoiseStd(self.noise_std));
        }
        if self.outlier_bound <= 0.0 || !self.outlier_bound.is_finite() {
            return Err(ConfigError::OutlierBound(self.outlier_bound));
        }
        let needed = self.problem.minimal_sample_size();
        if self.n_points < needed {
            return Err(ConfigError::PointBudget {
                got: self.n_points,
                needed,
            });
        }
        Ok(())
    }

    /// Number of inliers the generator will place: ⌊rate·n⌋, snapping to the
    /// nearest integer first so decimal rates like 0.15 are not betrayed by
    /// binary rounding (0.15 · 300 must give 45, not 44).
    pub fn inlier_count(&self) -> usize {
        let raw = self.inlier_rate * self.n_points as f64;
        let nearest = raw.round();
        let count = if (raw - nearest).abs() < 1e-9 {
            nearest
        } else {
            raw.floor()
        };
        (count as usize).min(self.n_points)
    }
}

// --- dataset ---------------------------------------------------------------

/// A generated dataset: the observations an estimator sees, the quality
/// scores a score-driven sampler may use, and the ground truth reserved for
/// metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    /// Which estimation problem the observations belong to.
    pub kind: ProblemKind,
    /// Planar observations (curve and circle; empty for homography).
    pub points: Vec<[f64; 2]>,
    /// Point correspondences (homography; empty otherwise).
    pub correspondences: Vec<Correspondence>,
    /// Per-point quality scores in [0, 1], parallel to the observations.
    /// Empty when the source (e.g. a score-less file) provided none.
    pub scores: Vec<f64>,
    /// Ground-truth model parameters in the matching model layout. Empty
    /// when unknown.
    pub model_params: Vec<f64>,
    /// Ground-truth inlier mask, parallel to the observations. Empty when
    /// unknown. For metric computation only — never fed to the estimator.
    pub inlier_mask: Vec<bool>,
}

impl SyntheticDataset {
    /// Number of observations.
    pub fn len(&self) -> usize {
        match self.kind {
            ProblemKind::Curve | ProblemKind::Circle => self.points.len(),
            ProblemKind::Homography => self.correspondences.len(),
        }
    }

    /// True when the dataset holds no observations.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of ground-truth inliers (0 when the mask is unknown).
    pub fn gt_inlier_count(&self) -> usize {
        self.inlier_mask.iter().filter(|&&m| m).count()
    }

    /// Indices of the ground-truth inliers.
    pub fn gt_inlier_indices(&self) -> Vec<usize> {
        self.inlier_mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect()
    }

    /// Build a runnable problem instance over this data, attaching the
    /// scores when present. The curve degree is taken from the ground-truth
    /// parameter count when available and valid, else the default cubic.
    pub fn to_problem(&self) -> ProblemInstance {
        match self.kind {
            ProblemKind::Curve => {
                let degree = match self.model_params.len() {
                    len @ 2..=6 => len - 1,
                    _ => DEFAULT_CURVE_DEGREE,
                };
                let problem = CurveProblem::new(self.points.clone(), degree)
                    .expect("degree above is always within the supported range");
                ProblemInstance::Curve(if self.scores.is_empty() {
                    problem
                } else {
                    problem.with_scores(self.scores.clone())
                })
            }
            ProblemKind::Circle => {
                let problem = CircleProblem::new(self.points.clone());
                ProblemInstance::Circle(if self.scores.is_empty() {
                    problem
                } else {
                    problem.with_scores(self.scores.clone())
                })
            }
            ProblemKind::Homography => {
                ProblemInstance::Homography(HomographyProblem::new(self.correspondences.clone()))
            }
        }
    }
}

/// A concrete problem built from a dataset, usable wherever
/// `&dyn Problem` is accepted.
#[derive(Debug, Clone)]
pub enum ProblemInstance {
    /// Polynomial curve fitting.
    Curve(CurveProblem),
    /// Circle fitting.
    Circle(CircleProblem),
    /// Homography estimation.
    Homography(HomographyProblem),
}

impl ProblemInstance {
    /// View as the trait object the engine consumes.
    pub fn as_problem(&self) -> &dyn Problem {
        match self {
            ProblemInstance::Curve(p) => p,
            ProblemInstance::Circle(p) => p,
            ProblemInstance::Homography(p) => p,
        }
    }
}

// --- generation ------------------------------------------------------------

/// Generate one dataset from `config`.
///
/// Exactly [`SyntheticConfig::inlier_count`] points lie on a freshly drawn
/// ground-truth model (noise-perturbed); the rest are uniform outliers. The
/// returned observations are shuffled so inliers and outliers interleave,
/// with scores and mask kept parallel. Deterministic per seed.
///
/// # Examples
///
/// ```
/// use bansac::synth::{generate, SyntheticConfig};
/// use bansac::ProblemKind;
///
/// let config = SyntheticConfig::new(ProblemKind::Circle, 0.4, 7);
/// let data = generate(&config).unwrap();
/// assert_eq!(data.len(), 300);
/// assert_eq!(data.gt_inlier_count(), 120);
/// ```
pub fn generate(config: &SyntheticConfig) -> Result<SyntheticDataset, ConfigError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let n = config.n_points;
    let n_inliers = config.inlier_count();

    let mut dataset = match config.problem {
        ProblemKind::Curve => generate_curve(config, n_inliers, &mut rng),
        ProblemKind::Circle => generate_circle(config, n_inliers, &mut rng),
        ProblemKind::Homography => generate_homography(config, n_inliers, &mut rng),
    };

    // Scores: informative but overlapping, drawn after the geometry so the
    // point layout is independent of whether a consumer reads them.
    let mut scores = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = if i < n_inliers {
            INLIER_SCORE_RANGE
        } else {
            OUTLIER_SCORE_RANGE
        };
        scores.push(rng.gen_range(lo..hi));
    }
    dataset.scores = scores;

    // Shuffle all parallel arrays through one permutation so the estimator
    // cannot learn anything from point order.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    dataset.points = permute(&dataset.points, &order);
    dataset.correspondences = permute(&dataset.correspondences, &order);
    dataset.scores = permute(&dataset.scores, &order);
    dataset.inlier_mask = permute(&dataset.inlier_mask, &order);
    if dataset.kind == ProblemKind::Homography {
        for (corr, &score) in dataset.correspondences.iter_mut().zip(&dataset.scores) {
            corr.score = Some(score);
        }
    }
    Ok(dataset)
}

/// Reorder `values` (empty slices stay empty) by the given permutation.
fn permute<T: Clone>(values: &[T], order: &[usize]) -> Vec<T> {
    if values.is_empty() {
        return Vec::new();
    }
    order.iter().map(|&i| values[i].clone()).collect()
}

/// Gaussian sampler for σ ≥ 0 (σ = 0 degenerates to the mean, which is what
/// a noiseless config should do).
fn noise(std: f64) -> Normal<f64> {
    Normal::new(0.0, std).expect("validated non-negative finite std")
}

fn generate_curve(
    config: &SyntheticConfig,
    n_inliers: usize,
    rng: &mut ChaCha8Rng,
) -> SyntheticDataset {
    // Random cubic, rescaled so its peak on [−1, 1] sits at a fixed
    // amplitude: noisy inliers then stay well inside the outlier square.
    let coeffs = loop {
        let raw: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let peak = (0..=200)
            .map(|i| -1.0 + i as f64 / 100.0)
            .map(|x| horner(&raw, x).abs())
            .fold(0.0, f64::max);
        if peak > 1e-6 {
            break raw
                .iter()
                .map(|c| c * CURVE_PEAK_AMPLITUDE / peak)
                .collect::<Vec<f64>>();
        }
    };

    let gauss = noise(config.noise_std);
    let bound = config.outlier_bound;
    let mut points = Vec::with_capacity(config.n_points);
    for i in 0..config.n_points {
        if i < n_inliers {
            let x = rng.gen_range(-1.0..1.0);
            let y = horner(&coeffs, x) + gauss.sample(rng);
            points.push([x, y]);
        } else {
            points.push([rng.gen_range(-bound..bound), rng.gen_range(-bound..bound)]);
        }
    }

    let mut mask = vec![true; n_inliers];
    mask.resize(config.n_points, false);
    SyntheticDataset {
        kind: ProblemKind::Curve,
        points,
        correspondences: Vec::new(),
        scores: Vec::new(),
        model_params: coeffs,
        inlier_mask: mask,
    }
}

/// Evaluate a polynomial in descending-power coefficients at `x`.
fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn generate_circle(
    config: &SyntheticConfig,
    n_inliers: usize,
    rng: &mut ChaCha8Rng,
) -> SyntheticDataset {
    // Center near the origin and radius well below 1 keep the noisy ring
    // inside the outlier square.
    let center = [rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25)];
    let radius = rng.gen_range(0.4..0.7);

    let gauss = noise(config.noise_std);
    let bound = config.outlier_bound;
    let mut points = Vec::with_capacity(config.n_points);
    for i in 0..config.n_points {
        if i < n_inliers {
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let rho = radius + gauss.sample(rng);
            points.push([
                center[0] + rho * angle.cos(),
                center[1] + rho * angle.sin(),
            ]);
        } else {
            points.push([rng.gen_range(-bound..bound), rng.gen_range(-bound..bound)]);
        }
    }

    let mut mask = vec![true; n_inliers];
    mask.resize(config.n_points, false);
    SyntheticDataset {
        kind: ProblemKind::Circle,
        points,
        correspondences: Vec::new(),
        scores: Vec::new(),
        model_params: vec![center[0], center[1], radius],
        inlier_mask: mask,
    }
}

fn generate_homography(
    config: &SyntheticConfig,
    n_inliers: usize,
    rng: &mut ChaCha8Rng,
) -> SyntheticDataset {
    // Rotation + scale about the image center, then translation, then mild
    // projective terms: targets of in-frame sources stay near the frame.
    let theta = rng.gen_range(-HOMOGRAPHY_MAX_ROTATION..HOMOGRAPHY_MAX_ROTATION);
    let scale = rng.gen_range(HOMOGRAPHY_SCALE_RANGE.0..HOMOGRAPHY_SCALE_RANGE.1);
    let t = [
        rng.gen_range(-HOMOGRAPHY_MAX_TRANSLATION_PX..HOMOGRAPHY_MAX_TRANSLATION_PX),
        rng.gen_range(-HOMOGRAPHY_MAX_TRANSLATION_PX..HOMOGRAPHY_MAX_TRANSLATION_PX),
    ];
    let p = [
        rng.gen_range(-HOMOGRAPHY_MAX_PROJECTIVE..HOMOGRAPHY_MAX_PROJECTIVE),
        rng.gen_range(-HOMOGRAPHY_MAX_PROJECTIVE..HOMOGRAPHY_MAX_PROJECTIVE),
    ];
    let (sin, cos) = theta.sin_cos();
    let a = [[scale * cos, -scale * sin], [scale * sin, scale * cos]];
    let center = [IMAGE_WIDTH_PX / 2.0, IMAGE_HEIGHT_PX / 2.0];
    let b = [
        center[0] - a[0][0] * center[0] - a[0][1] * center[1] + t[0],
        center[1] - a[1][0] * center[0] - a[1][1] * center[1] + t[1],
    ];
    let h = [
        a[0][0], a[0][1], b[0], //
        a[1][0], a[1][1], b[1], //
        p[0], p[1], 1.0,
    ];

    let gauss = noise(config.noise_std);
    let mut corrs = Vec::with_capacity(config.n_points);
    for i in 0..config.n_points {
        let source = [
            rng.gen_range(0.0..IMAGE_WIDTH_PX),
            rng.gen_range(0.0..IMAGE_HEIGHT_PX),
        ];
        let target = if i < n_inliers {
            let exact = apply_homography(&h, source);
            [exact[0] + gauss.sample(rng), exact[1] + gauss.sample(rng)]
        } else {
            [
                rng.gen_range(0.0..IMAGE_WIDTH_PX),
                rng.gen_range(0.0..IMAGE_HEIGHT_PX),
            ]
        };
        corrs.push(Correspondence::new(source, target));
    }

    let mut mask = vec![true; n_inliers];
    mask.resize(config.n_points, false);
    SyntheticDataset {
        kind: ProblemKind::Homography,
        points: Vec::new(),
        correspondences: corrs,
        scores: Vec::new(),
        model_params: canonical_params(h),
        inlier_mask: mask,
    }
}

/// Apply a row-major 3×3 homography to a point. The generator's ground
/// truths keep |w| near 1 for in-frame points, so no singularity guard is
/// needed here.
fn apply_homography(h: &[f64; 9], point: [f64; 2]) -> [f64; 2] {
    let [x, y] = point;
    let w = h[6] * x + h[7] * y + h[8];
    debug_assert!(w.abs() > 0.5, "generator homography left the mild regime");
    [
        (h[0] * x + h[1] * y + h[2]) / w,
        (h[3] * x + h[4] * y + h[5]) / w,
    ]
}

/// Scale a homography parameter vector to the unit-norm, sign-anchored form
/// the estimators report, so ground truth and estimates compare directly.
fn canonical_params(h: [f64; 9]) -> Vec<f64> {
    crate::geometry::HomographyModel::from_params(&h).to_params()
}

// --- dataset files ----------------------------------------------------------

/// Write a dataset as CSV: `#`-prefixed header lines carrying the problem
/// kind, ground-truth model, and inlier mask, then one row per observation
/// (`x,y,score` or `x1,y1,x2,y2,score`; the score column is omitted when the
/// dataset has no scores). Floats print in shortest round-trip form, so a
/// read-back is bit-exact.
pub fn write_dataset_csv<W: Write>(dataset: &SyntheticDataset, out: &mut W) -> io::Result<()> {
    writeln!(out, "# problem={}", dataset.kind)?;
    if !dataset.model_params.is_empty() {
        writeln!(out, "# model={}", join_floats(&dataset.model_params))?;
    }
    if !dataset.inlier_mask.is_empty() {
        let bits: String = dataset
            .inlier_mask
            .iter()
            .map(|&m| if m { '1' } else { '0' })
            .collect();
        writeln!(out, "# inliers={bits}")?;
    }
    let scored = !dataset.scores.is_empty();
    for i in 0..dataset.len() {
        let mut fields: Vec<f64> = match dataset.kind {
            ProblemKind::Curve | ProblemKind::Circle => dataset.points[i].to_vec(),
            ProblemKind::Homography => {
                let c = &dataset.correspondences[i];
                vec![c.source[0], c.source[1], c.target[0], c.target[1]]
            }
        };
        if scored {
            fields.push(dataset.scores[i]);
        }
        writeln!(out, "{}", join_floats(&fields))?;
    }
    Ok(())
}

/// Write a dataset to a file via [`write_dataset_csv`].
pub fn save_dataset_csv<P: AsRef<Path>>(dataset: &SyntheticDataset, path: P) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    write_dataset_csv(dataset, &mut file)
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Read a dataset written by [`write_dataset_csv`] (or assembled by hand in
/// the same format). The `problem` header is mandatory — row shape alone
/// cannot distinguish a curve from a circle; `model` and `inliers` headers
/// are optional, and the score column may be absent, but all rows must agree
/// on their column count.
pub fn read_dataset_csv<R: BufRead>(input: R) -> Result<SyntheticDataset, DatasetError> {
    let mut headers: HashMap<String, String> = HashMap::new();
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();

    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let number = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once('=') {
                headers.insert(key.trim().to_string(), value.trim().to_string());
            }
            continue;
        }
        let fields: Vec<f64> = trimmed
            .split(',')
            .map(|tok| tok.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| DatasetError::Malformed {
                line: number,
                msg: format!("unparsable number: {e}"),
            })?;
        rows.push((number, fields));
    }

    let kind = headers
        .get("problem")
        .and_then(|name| ProblemKind::parse(name))
        .ok_or(DatasetError::MissingKind)?;
    if rows.is_empty() {
        return Err(DatasetError::Empty);
    }

    let base = match kind {
        ProblemKind::Curve | ProblemKind::Circle => 2,
        ProblemKind::Homography => 4,
    };
    let scored = rows[0].1.len() == base + 1;
    let expected = base + usize::from(scored);

    let mut points = Vec::new();
    let mut corrs = Vec::new();
    let mut scores = Vec::new();
    for (number, fields) in &rows {
        if fields.len() != expected {
            return Err(DatasetError::Malformed {
                line: *number,
                msg: format!("expected {expected} columns, found {}", fields.len()),
            });
        }
        match kind {
            ProblemKind::Curve | ProblemKind::Circle => points.push([fields[0], fields[1]]),
            ProblemKind::Homography => {
                let mut corr =
                    Correspondence::new([fields[0], fields[1]], [fields[2], fields[3]]);
                if scored {
                    corr.score = Some(fields[base]);
                }
                corrs.push(corr);
            }
        }
        if scored {
            scores.push(fields[base]);
        }
    }

    let model_params = match headers.get("model") {
        Some(text) => {
            let params: Vec<f64> = text
                .split(',')
                .map(|tok| tok.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| DatasetError::Malformed {
                    line: 0,
                    msg: format!("model header: {e}"),
                })?;
            let valid = match kind {
                ProblemKind::Curve => (2..=6).contains(&params.len()),
                ProblemKind::Circle => params.len() == 3,
                ProblemKind::Homography => params.len() == 9,
            };
            if !valid {
                return Err(DatasetError::Malformed {
                    line: 0,
                    msg: format!("model header holds {} parameters", params.len()),
                });
            }
            params
        }
        None => Vec::new(),
    };

    let inlier_mask = match headers.get("inliers") {
        Some(bits) => {
            if bits.len() != rows.len() || bits.chars().any(|c| c != '0' && c != '1') {
                return Err(DatasetError::Malformed {
                    line: 0,
                    msg: "inliers header must be one 0/1 digit per row".to_string(),
                });
            }
            bits.chars().map(|c| c == '1').collect()
        }
        None => Vec::new(),
    };

    Ok(SyntheticDataset {
        kind,
        points,
        correspondences: corrs,
        scores,
        model_params,
        inlier_mask,
    })
}

/// Read a dataset from a file via [`read_dataset_csv`].
pub fn load_dataset_csv<P: AsRef<Path>>(path: P) -> Result<SyntheticDataset, DatasetError> {
    read_dataset_csv(io::BufReader::new(std::fs::File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CircleModel, CurveModel, HomographyModel};

    fn curve_config(rate: f64, seed: u64) -> SyntheticConfig {
        SyntheticConfig::new(ProblemKind::Curve, rate, seed)
    }

    // --- counting and determinism ------------------------------------------

    #[test]
    fn inlier_count_snaps_decimal_rates() {
        assert_eq!(curve_config(0.15, 0).inlier_count(), 45);
        assert_eq!(curve_config(1.0, 0).inlier_count(), 300);
        assert_eq!(curve_config(0.333, 0).inlier_count(), 99); // 99.9 floors
        let tiny = SyntheticConfig {
            n_points: 10,
            ..curve_config(0.05, 0)
        };
        assert_eq!(tiny.inlier_count(), 0); // 0.5 floors; generation still valid
    }

    #[test]
    fn exact_mask_count_at_the_protocol_rate() {
        let data = generate(&curve_config(0.15, 3)).unwrap();
        assert_eq!(data.len(), 300);
        assert_eq!(data.gt_inlier_count(), 45);
        assert_eq!(data.inlier_mask.len(), 300);
        assert_eq!(data.scores.len(), 300);
    }

    #[test]
    fn same_seed_same_dataset() {
        let config = curve_config(0.4, 99);
        assert_eq!(generate(&config).unwrap(), generate(&config).unwrap());
        let other = generate(&SyntheticConfig { rng_seed: 100, ..config }).unwrap();
        assert_ne!(generate(&config).unwrap(), other);
    }

    // --- geometric structure ------------------------------------------------

    #[test]
    fn all_inlier_curve_hugs_its_ground_truth() {
        let config = curve_config(1.0, 11);
        let data = generate(&config).unwrap();
        assert!(data.inlier_mask.iter().all(|&m| m));
        let model = CurveModel::from_params(&data.model_params);
        for p in &data.points {
            assert!((p[1] - model.eval(p[0])).abs() < 5.0 * config.noise_std);
        }
    }

    #[test]
    fn curve_outliers_respect_the_bound() {
        let data = generate(&curve_config(0.3, 5)).unwrap();
        for (i, p) in data.points.iter().enumerate() {
            if !data.inlier_mask[i] {
                assert!(p[0].abs() <= 1.0 && p[1].abs() <= 1.0);
            }
        }
    }

    #[test]
    fn circle_ground_truth_stays_in_range() {
        let config = SyntheticConfig::new(ProblemKind::Circle, 0.5, 21);
        let data = generate(&config).unwrap();
        let model = CircleModel::from_params(&data.model_params);
        assert!(model.center[0].abs() < 0.25 && model.center[1].abs() < 0.25);
        assert!((0.4..0.7).contains(&model.radius));
        for (i, p) in data.points.iter().enumerate() {
            let r = ((p[0] - model.center[0]).powi(2) + (p[1] - model.center[1]).powi(2)).sqrt();
            if data.inlier_mask[i] {
                assert!((r - model.radius).abs() < 5.0 * config.noise_std);
            } else {
                assert!(p[0].abs() <= 1.0 && p[1].abs() <= 1.0);
            }
        }
    }

    #[test]
    fn inlier_noise_variance_matches_the_recipe() {
        // Signed vertical deviation of 10^5 inliers: variance within 5% of
        // the 0.02 recipe, mean near zero.
        let config = SyntheticConfig {
            n_points: 100_000,
            ..curve_config(1.0, 13)
        };
        let data = generate(&config).unwrap();
        let model = CurveModel::from_params(&data.model_params);
        let deviations: Vec<f64> = data
            .points
            .iter()
            .map(|p| p[1] - model.eval(p[0]))
            .collect();
        let n = deviations.len() as f64;
        let mean = deviations.iter().sum::<f64>() / n;
        let var = deviations.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 2e-3, "mean {mean}");
        assert!((var - 0.02).abs() < 0.05 * 0.02, "variance {var}");
    }

    #[test]
    fn homography_scene_is_mild_and_scored() {
        let config = SyntheticConfig::new(ProblemKind::Homography, 0.6, 17);
        assert_eq!(config.noise_std, HOMOGRAPHY_NOISE_STD_PX);
        let data = generate(&config).unwrap();
        assert_eq!(data.model_params.len(), 9);
        let model = HomographyModel::from_params(&data.model_params);
        let problem = match data.to_problem() {
            ProblemInstance::Homography(p) => p,
            _ => unreachable!(),
        };
        assert!(problem.scores().is_some());
        let params = model.to_params();
        for (i, corr) in data.correspondences.iter().enumerate() {
            assert!(corr.score.is_some());
            let residual = problem.residual(&params, i);
            if data.inlier_mask[i] {
                // Symmetric transfer of a 0.5 px-per-axis perturbed target:
                // 3 px is a generous ceiling (≈ 4σ on the 2-D offset).
                assert!(residual < 3.0, "inlier residual {residual}");
            } else {
                assert!(corr.target[0] >= 0.0 && corr.target[0] <= IMAGE_WIDTH_PX);
                assert!(corr.target[1] >= 0.0 && corr.target[1] <= IMAGE_HEIGHT_PX);
            }
        }
    }

    #[test]
    fn scores_separate_the_populations_on_average() {
        let data = generate(&curve_config(0.5, 29)).unwrap();
        let (mut inlier_sum, mut outlier_sum) = (0.0, 0.0);
        for (i, &s) in data.scores.iter().enumerate() {
            assert!((0.0..=1.0).contains(&s));
            if data.inlier_mask[i] {
                inlier_sum += s;
            } else {
                outlier_sum += s;
            }
        }
        let inliers = data.gt_inlier_count() as f64;
        let outliers = (data.len() - data.gt_inlier_count()) as f64;
        assert!(inlier_sum / inliers > outlier_sum / outliers + 0.2);
    }

    #[test]
    fn shuffling_interleaves_the_populations() {
        // With 150 of 300 inliers, all-inliers-first would be astronomically
        // unlikely after a shuffle: check some outlier appears in the first
        // half and some inlier in the second.
        let data = generate(&curve_config(0.5, 31)).unwrap();
        assert!(data.inlier_mask[..150].iter().any(|&m| !m));
        assert!(data.inlier_mask[150..].iter().any(|&m| m));
    }

    // --- configuration validation -------------------------------------------

    #[test]
    fn config_range_violations_are_rejected() {
        let base = curve_config(0.5, 0);
        for (config, expected) in [
            (
                SyntheticConfig { inlier_rate: 0.0, ..base.clone() },
                ConfigError::InlierRate(0.0),
            ),
            (
                SyntheticConfig { inlier_rate: 1.5, ..base.clone() },
                ConfigError::InlierRate(1.5),
            ),
            (
                SyntheticConfig { noise_std: -0.1, ..base.clone() },
                ConfigError::NoiseStd(-0.1),
            ),
            (
                SyntheticConfig { outlier_bound: 0.0, ..base.clone() },
                ConfigError::OutlierBound(0.0),
            ),
            (
                SyntheticConfig { n_points: 3, ..base.clone() },
                ConfigError::PointBudget { got: 3, needed: 4 },
            ),
        ] {
            assert_eq!(generate(&config).unwrap_err(), expected);
        }
    }

    #[test]
    fn noiseless_config_is_allowed() {
        let config = SyntheticConfig { noise_std: 0.0, ..curve_config(1.0, 1) };
        let data = generate(&config).unwrap();
        let model = CurveModel::from_params(&data.model_params);
        for p in &data.points {
            assert!((p[1] - model.eval(p[0])).abs() < 1e-12);
        }
    }

    // --- file round-trips ----------------------------------------------------

    #[test]
    fn curve_csv_round_trips_exactly() {
        let data = generate(&curve_config(0.35, 41)).unwrap();
        let mut buffer = Vec::new();
        write_dataset_csv(&data, &mut buffer).unwrap();
        let back = read_dataset_csv(buffer.as_slice()).unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn homography_csv_round_trips_exactly() {
        let data = generate(&SyntheticConfig::new(ProblemKind::Homography, 0.6, 43)).unwrap();
        let mut buffer = Vec::new();
        write_dataset_csv(&data, &mut buffer).unwrap();
        let back = read_dataset_csv(buffer.as_slice()).unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn score_less_rows_are_accepted() {
        let text = "# problem=circle\n0,1\n1,0\n-1,0\n";
        let data = read_dataset_csv(text.as_bytes()).unwrap();
        assert_eq!(data.kind, ProblemKind::Circle);
        assert_eq!(data.points.len(), 3);
        assert!(data.scores.is_empty());
        assert!(data.model_params.is_empty());
        assert!(data.inlier_mask.is_empty());
    }

    #[test]
    fn malformed_files_are_rejected() {
        // No problem header.
        assert!(matches!(
            read_dataset_csv("0,1\n".as_bytes()),
            Err(DatasetError::MissingKind)
        ));
        // No rows.
        assert!(matches!(
            read_dataset_csv("# problem=curve\n".as_bytes()),
            Err(DatasetError::Empty)
        ));
        // Ragged columns.
        assert!(matches!(
            read_dataset_csv("# problem=curve\n0,1,0.5\n0,1\n".as_bytes()),
            Err(DatasetError::Malformed { line: 3, .. })
        ));
        // Non-numeric field.
        assert!(matches!(
            read_dataset_csv("# problem=curve\n0,abc\n".as_bytes()),
            Err(DatasetError::Malformed { line: 2, .. })
        ));
        // Mask length mismatch.
        assert!(matches!(
            read_dataset_csv("# problem=curve\n# inliers=101\n0,1\n1,2\n".as_bytes()),
            Err(DatasetError::Malformed { .. })
        ));
        // Wrong model arity for the declared problem.
        assert!(matches!(
            read_dataset_csv("# problem=circle\n# model=1,2\n0,1\n".as_bytes()),
            Err(DatasetError::Malformed { .. })
        ));
    }

    #[test]
    fn file_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scene.csv");
        let data = generate(&SyntheticConfig::new(ProblemKind::Circle, 0.4, 47)).unwrap();
        save_dataset_csv(&data, &path).unwrap();
        assert_eq!(load_dataset_csv(&path).unwrap(), data);
    }

    // --- problem construction -------------------------------------------------

    #[test]
    fn to_problem_matches_the_dataset_shape() {
        let curve = generate(&curve_config(0.5, 51)).unwrap();
        let instance = curve.to_problem();
        assert_eq!(instance.as_problem().len(), 300);
        assert_eq!(instance.as_problem().minimal_sample_size(), 4);
        assert!(instance.as_problem().scores().is_some());

        let circle = generate(&SyntheticConfig::new(ProblemKind::Circle, 0.5, 51)).unwrap();
        assert_eq!(circle.to_problem().as_problem().minimal_sample_size(), 3);

        let homog = generate(&SyntheticConfig::new(ProblemKind::Homography, 0.5, 51)).unwrap();
        assert_eq!(homog.to_problem().as_problem().minimal_sample_size(), 4);
    }

    #[test]
    fn ground_truth_scores_well_under_its_own_residual() {
        // The GT model must classify (almost) all its inliers as inliers at
        // the protocol threshold — sanity for benchmark metrics.
        let config = SyntheticConfig {
            noise_std: 0.005,
            ..curve_config(0.5, 53)
        };
        let data = generate(&config).unwrap();
        let instance = data.to_problem();
        let problem = instance.as_problem();
        for i in data.gt_inlier_indices() {
            assert!(problem.residual(&data.model_params, i) < 0.03); // 6σ
        }
    }

    // --- properties -------------------------------------------------------------

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn prop_generated_shape_is_consistent(
            rate in 0.01f64..=1.0,
            n in 4usize..200,
            seed in 0u64..1000,
            kind_pick in 0usize..3,
        ) {
            let kind = [ProblemKind::Curve, ProblemKind::Circle, ProblemKind::Homography][kind_pick];
            let config = SyntheticConfig {
                n_points: n,
                ..SyntheticConfig::new(kind, rate, seed)
            };
            let data = generate(&config).unwrap();
            prop_assert_eq!(data.len(), n);
            prop_assert_eq!(data.inlier_mask.len(), n);
            prop_assert_eq!(data.scores.len(), n);
            prop_assert_eq!(data.gt_inlier_count(), config.inlier_count());
            let expected = rate * n as f64;
            prop_assert!((data.gt_inlier_count() as f64 - expected).abs() < 1.0 + 1e-9);
            match kind {
                ProblemKind::Homography => prop_assert!(data.points.is_empty()),
                _ => prop_assert!(data.correspondences.is_empty()),
            }
            for i in 0..n {
                let [x, y] = match kind {
                    ProblemKind::Homography => data.correspondences[i].target,
                    _ => data.points[i],
                };
                prop_assert!(x.is_finite() && y.is_finite());
            }
        }

        #[test]
        fn prop_csv_round_trip(seed in 0u64..200, kind_pick in 0usize..3) {
            let kind = [ProblemKind::Curve, ProblemKind::Circle, ProblemKind::Homography][kind_pick];
            let config = SyntheticConfig {
                n_points: 40,
                ..SyntheticConfig::new(kind, 0.5, seed)
            };
            let data = generate(&config).unwrap();
            let mut buffer = Vec::new();
            write_dataset_csv(&data, &mut buffer).unwrap();
            prop_assert_eq!(read_dataset_csv(buffer.as_slice()).unwrap(), data);
        }
    }
}
