//! Polynomial curve fitting: y = f(x) with f of configurable degree.
//!
//! The minimal solver interpolates degree + 1 points exactly through a
//! Vandermonde system; the refit solves the least-squares normal equations
//! over a consensus set. Residuals are vertical distances |y − f(x)| — the
//! standard surrogate for geometric point-to-curve distance, monotone in it
//! for shallow slopes.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, FitError};
use crate::problem::Problem;

/// Default polynomial degree (cubic), giving a minimal sample of 4 points.
pub const DEFAULT_CURVE_DEGREE: usize = 3;

/// Supported degrees.
pub const CURVE_DEGREE_RANGE: std::ops::RangeInclusive<usize> = 1..=5;

/// Minimum spacing between sample abscissae before the Vandermonde system
/// counts as singular.
const DISTINCT_X_TOL: f64 = 1e-12;

/// Smallest acceptable ratio between the extreme Cholesky pivots of the
/// normal equations; below it the least-squares system counts as
/// rank-deficient.
const RANK_PIVOT_TOL: f64 = 1e-6;

/// A polynomial y = f(x) stored as coefficients in descending powers, so a
/// cubic is `[a, b, c, d]` with y = ax³ + bx² + cx + d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveModel {
    /// Descending-power coefficients; length = degree + 1.
    pub coefficients: Vec<f64>,
}

impl CurveModel {
    /// Polynomial degree.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Evaluate f(x) by Horner's rule.
    ///
    /// ```
    /// use bansac::geometry::CurveModel;
    /// let cubic = CurveModel { coefficients: vec![1.0, 0.0, 0.0, 0.0] };
    /// assert_eq!(cubic.eval(2.0), 8.0);
    /// ```
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Flat parameter vector (the coefficient slice itself).
    pub fn to_params(&self) -> Vec<f64> {
        self.coefficients.clone()
    }

    /// Rebuild from a flat parameter vector.
    pub fn from_params(params: &[f64]) -> Self {
        Self { coefficients: params.to_vec() }
    }
}

/// Point-cloud instance of the curve-fitting problem.
#[derive(Debug, Clone)]
pub struct CurveProblem {
    points: Vec<[f64; 2]>,
    degree: usize,
    scores: Option<Vec<f64>>,
}

impl CurveProblem {
    /// Wrap a point set; `degree` must lie in [`CURVE_DEGREE_RANGE`].
    pub fn new(points: Vec<[f64; 2]>, degree: usize) -> Result<Self, ConfigError> {
        if !CURVE_DEGREE_RANGE.contains(&degree) {
            return Err(ConfigError::CurveDegree(degree));
        }
        Ok(Self { points, degree, scores: None })
    }

    /// Attach per-point prior scores (same order as the points).
    pub fn with_scores(mut self, scores: Vec<f64>) -> Self {
        assert_eq!(scores.len(), self.points.len(), "one score per point");
        self.scores = Some(scores);
        self
    }

    /// The underlying points.
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Configured polynomial degree.
    pub fn degree(&self) -> usize {
        self.degree
    }
}

impl Problem for CurveProblem {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn minimal_sample_size(&self) -> usize {
        self.degree + 1
    }

    fn fit_minimal(&self, sample: &[usize]) -> Result<Vec<f64>, FitError> {
        let m = self.minimal_sample_size();
        assert_eq!(sample.len(), m, "minimal sample size mismatch");
        // Repeated abscissae make the Vandermonde matrix singular.
        for (i, &a) in sample.iter().enumerate() {
            for &b in &sample[i + 1..] {
                if (self.points[a][0] - self.points[b][0]).abs() < DISTINCT_X_TOL {
                    return Err(FitError::Degenerate);
                }
            }
        }
        let v = DMatrix::from_fn(m, m, |r, c| self.points[sample[r]][0].powi((m - 1 - c) as i32));
        let y = DVector::from_fn(m, |r, _| self.points[sample[r]][1]);
        let coeffs = v.lu().solve(&y).ok_or(FitError::Degenerate)?;
        Ok(coeffs.iter().copied().collect())
    }

    fn residual(&self, params: &[f64], index: usize) -> f64 {
        let [x, y] = self.points[index];
        let f = params.iter().fold(0.0, |acc, &c| acc * x + c);
        (y - f).abs()
    }

    fn refit(&self, inliers: &[usize]) -> Result<Vec<f64>, FitError> {
        let m = self.minimal_sample_size();
        assert!(inliers.len() >= m, "refit needs at least a minimal sample");
        let a = DMatrix::from_fn(inliers.len(), m, |r, c| {
            self.points[inliers[r]][0].powi((m - 1 - c) as i32)
        });
        let y = DVector::from_fn(inliers.len(), |r, _| self.points[inliers[r]][1]);
        let ata = a.transpose() * &a;
        let aty = a.transpose() * y;
        let chol = Cholesky::new(ata).ok_or(FitError::RankDeficient)?;
        // Rounding can push an exactly singular normal matrix through the
        // factorization with near-zero pivots; reject by pivot ratio.
        let diag = chol.l_dirty();
        let (mut min_d, mut max_d) = (f64::INFINITY, 0.0f64);
        for i in 0..m {
            min_d = min_d.min(diag[(i, i)]);
            max_d = max_d.max(diag[(i, i)]);
        }
        let well_conditioned = min_d > RANK_PIVOT_TOL * max_d;
        if !well_conditioned {
            return Err(FitError::RankDeficient);
        }
        Ok(chol.solve(&aty).iter().copied().collect())
    }

    fn spatial(&self, index: usize) -> [f64; 2] {
        self.points[index]
    }

    fn scores(&self) -> Option<&[f64]> {
        self.scores.as_deref()
    }
}
