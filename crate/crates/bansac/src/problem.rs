//! Problem abstraction consumed by the estimation engine.
//!
//! A [`Problem`] owns the data points and knows how to fit a model to a
//! minimal sample, measure a per-point residual, and refit on a larger
//! consensus set. Models cross the trait boundary as flat parameter vectors
//! so the engine, reports, and serialization stay problem-agnostic; each
//! adapter documents its own layout and offers typed conversions.

use serde::{Deserialize, Serialize};

use crate::error::FitError;

/// The estimation problems shipped with this crate.
///
/// Used wherever a problem has to be named without holding data: synthetic
/// generation, dataset files, and the benchmark harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// Polynomial curve in the plane (cubic by default).
    Curve,
    /// Circle in the plane.
    Circle,
    /// Planar homography between two images.
    Homography,
}

impl ProblemKind {
    /// Minimal sample size of the default configuration: 4 points for the
    /// cubic curve, 3 for the circle, 4 correspondences for the homography.
    pub const fn minimal_sample_size(self) -> usize {
        match self {
            ProblemKind::Curve => 4,
            ProblemKind::Circle => 3,
            ProblemKind::Homography => 4,
        }
    }

    /// Parse a kind name as it appears on the command line and in dataset
    /// headers.
    pub fn parse(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "curve" => Some(ProblemKind::Curve),
            "circle" => Some(ProblemKind::Circle),
            "homography" => Some(ProblemKind::Homography),
            _ => None,
        }
    }
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ProblemKind::Curve => "curve",
            ProblemKind::Circle => "circle",
            ProblemKind::Homography => "homography",
        };
        f.write_str(name)
    }
}

/// A robust-estimation problem instance.
pub trait Problem {
    /// Number of data points.
    fn len(&self) -> usize;

    /// True when the instance holds no points.
    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of points in a minimal sample (4 for a cubic, 3 for a circle,
    /// 4 for a homography).
    fn minimal_sample_size(&self) -> usize;

    /// Fit a model exactly through a minimal sample.
    ///
    /// `sample` holds `minimal_sample_size` distinct indices. Fails with
    /// [`FitError::Degenerate`] when the sample admits no unique model
    /// (repeated abscissae, collinear points, …).
    fn fit_minimal(&self, sample: &[usize]) -> Result<Vec<f64>, FitError>;

    /// Non-negative residual of one point against a model, in the problem's
    /// native units. May be `+∞` for models that cannot evaluate the point
    /// (e.g. a non-invertible mapping); infinite residuals simply classify
    /// the point as an outlier.
    fn residual(&self, params: &[f64], index: usize) -> f64;

    /// Least-squares refit over a consensus set of at least
    /// `minimal_sample_size` points.
    fn refit(&self, inliers: &[usize]) -> Result<Vec<f64>, FitError>;

    /// 2-D location of a point for spatially local sampling. Point problems
    /// return the point itself; correspondence problems return the source
    /// image location.
    fn spatial(&self, index: usize) -> [f64; 2];

    /// Optional per-point prior scores in [0, 1] (better first), consumed by
    /// score-ordered sampling and score-seeded priors.
    fn scores(&self) -> Option<&[f64]> {
        None
    }
}

/// Diagonal length of the axis-aligned bounding box of the spatial
/// coordinates; zero for empty or single-point data. The engine derives the
/// default spatial-sampling radius from it.
pub fn bbox_diagonal<P: Problem + ?Sized>(problem: &P) -> f64 {
    if problem.is_empty() {
        return 0.0;
    }
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for i in 0..problem.len() {
        let [x, y] = problem.spatial(i);
        min[0] = min[0].min(x);
        min[1] = min[1].min(y);
        max[0] = max[0].max(x);
        max[1] = max[1].max(y);
    }
    let dx = max[0] - min[0];
    let dy = max[1] - min[1];
    (dx * dx + dy * dy).sqrt()
}
