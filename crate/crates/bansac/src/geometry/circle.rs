//! Circle fitting: circumcircle minimal solver and algebraic least-squares
//! refit.
//!
//! The minimal solver returns the exact circumcircle of three non-collinear
//! points. The refit minimizes the algebraic cost Σ(‖p − c‖² − r²)² (Kåsa
//! fit), which is a closed-form linear system — adequate at the noise levels
//! this toolkit targets, though not identical to geometric least squares.
//! Residuals are radial distances |‖p − c‖ − r|.

use nalgebra::{Cholesky, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::FitError;
use crate::problem::Problem;

/// Collinearity tolerance on the orientation determinant
/// |det [[x₂−x₁, y₂−y₁], [x₃−x₁, y₃−y₁]]| (twice the triangle area).
const COLLINEAR_TOL: f64 = 1e-12;

/// Smallest acceptable ratio between the extreme Cholesky pivots of the
/// Kåsa normal equations; below it the fit counts as rank-deficient.
const RANK_PIVOT_TOL: f64 = 1e-6;

/// A circle with center and positive radius. Flat parameter layout:
/// `[center_x, center_y, radius]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleModel {
    /// Center coordinates.
    pub center: [f64; 2],
    /// Radius, strictly positive.
    pub radius: f64,
}

impl CircleModel {
    /// Flat parameter vector `[cx, cy, r]`.
    pub fn to_params(&self) -> Vec<f64> {
        vec![self.center[0], self.center[1], self.radius]
    }

    /// Rebuild from a flat parameter vector.
    pub fn from_params(params: &[f64]) -> Self {
        Self { center: [params[0], params[1]], radius: params[2] }
    }
}

/// Point-cloud instance of the circle-fitting problem.
#[derive(Debug, Clone)]
pub struct CircleProblem {
    points: Vec<[f64; 2]>,
    scores: Option<Vec<f64>>,
}

impl CircleProblem {
    /// Wrap a point set.
    pub fn new(points: Vec<[f64; 2]>) -> Self {
        Self { points, scores: None }
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
}

impl Problem for CircleProblem {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn minimal_sample_size(&self) -> usize {
        3
    }

    fn fit_minimal(&self, sample: &[usize]) -> Result<Vec<f64>, FitError> {
        assert_eq!(sample.len(), 3, "minimal sample size mismatch");
        let [x1, y1] = self.points[sample[0]];
        let [x2, y2] = self.points[sample[1]];
        let [x3, y3] = self.points[sample[2]];
        // Twice the signed triangle area; collinear samples have no circumcircle.
        let det = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1);
        if det.abs() < COLLINEAR_TOL {
            return Err(FitError::Degenerate);
        }
        let s1 = x1 * x1 + y1 * y1;
        let s2 = x2 * x2 + y2 * y2;
        let s3 = x3 * x3 + y3 * y3;
        let d = 2.0 * det;
        let cx = (s1 * (y2 - y3) + s2 * (y3 - y1) + s3 * (y1 - y2)) / d;
        let cy = (s1 * (x3 - x2) + s2 * (x1 - x3) + s3 * (x2 - x1)) / d;
        let r = ((x1 - cx) * (x1 - cx) + (y1 - cy) * (y1 - cy)).sqrt();
        Ok(vec![cx, cy, r])
    }

    fn residual(&self, params: &[f64], index: usize) -> f64 {
        let [x, y] = self.points[index];
        let dx = x - params[0];
        let dy = y - params[1];
        ((dx * dx + dy * dy).sqrt() - params[2]).abs()
    }

    fn refit(&self, inliers: &[usize]) -> Result<Vec<f64>, FitError> {
        assert!(inliers.len() >= 3, "refit needs at least a minimal sample");
        // Kåsa fit: x² + y² + Dx + Ey + F = 0 in least squares, solved via
        // the 3×3 normal equations.
        let mut ata = Matrix3::zeros();
        let mut atb = Vector3::zeros();
        for &i in inliers {
            let [x, y] = self.points[i];
            let row = Vector3::new(x, y, 1.0);
            let b = -(x * x + y * y);
            ata += row * row.transpose();
            atb += row * b;
        }
        let chol = Cholesky::new(ata).ok_or(FitError::RankDeficient)?;
        // Rounding can push an exactly singular normal matrix through the
        // factorization with near-zero pivots; reject by pivot ratio.
        let diag = chol.l_dirty();
        let (mut min_d, mut max_d) = (f64::INFINITY, 0.0f64);
        for i in 0..3 {
            min_d = min_d.min(diag[(i, i)]);
            max_d = max_d.max(diag[(i, i)]);
        }
        let well_conditioned = min_d > RANK_PIVOT_TOL * max_d;
        if !well_conditioned {
            return Err(FitError::RankDeficient);
        }
        let def = chol.solve(&atb);
        let cx = -def[0] / 2.0;
        let cy = -def[1] / 2.0;
        let r2 = cx * cx + cy * cy - def[2];
        if r2 <= 0.0 {
            return Err(FitError::RankDeficient);
        }
        Ok(vec![cx, cy, r2.sqrt()])
    }

    fn spatial(&self, index: usize) -> [f64; 2] {
        self.points[index]
    }

    fn scores(&self) -> Option<&[f64]> {
        self.scores.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// The refit's own objective: algebraic cost Σ(‖p − c‖² − r²)².
    fn algebraic_cost(p: &CircleProblem, params: &[f64], idx: &[usize]) -> f64 {
        idx.iter()
            .map(|&i| {
                let [x, y] = p.points()[i];
                let d2 = (x - params[0]).powi(2) + (y - params[1]).powi(2);
                (d2 - params[2] * params[2]).powi(2)
            })
            .sum()
    }

    #[test]
    fn circumcircle_of_symmetric_triple_is_unit_circle() {
        let p = CircleProblem::new(vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]);
        let params = p.fit_minimal(&[0, 1, 2]).unwrap();
        assert_relative_eq!(params[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(params[1], 0.0, epsilon = 1e-12);
        assert_relative_eq!(params[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn collinear_triple_is_degenerate() {
        let p = CircleProblem::new(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]);
        assert_eq!(p.fit_minimal(&[0, 1, 2]), Err(FitError::Degenerate));
    }

    #[test]
    fn minimal_fit_interpolates_its_sample() {
        let p = CircleProblem::new(vec![[0.3, -0.8], [-0.5, 0.1], [0.9, 0.4]]);
        let params = p.fit_minimal(&[0, 1, 2]).unwrap();
        for i in 0..3 {
            assert!(p.residual(&params, i) < 1e-9);
        }
    }

    #[test]
    fn residual_is_radial_distance() {
        let p = CircleProblem::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        let unit = [0.0, 0.0, 1.0];
        assert_eq!(p.residual(&unit, 0), 1.0); // center point → radius
        assert_eq!(p.residual(&unit, 1), 0.0); // on the circle
        assert_eq!(p.residual(&unit, 2), 1.0); // (2,0) vs unit circle
    }

    #[test]
    fn refit_recovers_exact_circle_points() {
        let truth = CircleModel { center: [0.2, -0.3], radius: 0.75 };
        let pts: Vec<[f64; 2]> = (0..12)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 12.0;
                [truth.center[0] + truth.radius * a.cos(), truth.center[1] + truth.radius * a.sin()]
            })
            .collect();
        let p = CircleProblem::new(pts);
        let refit = p.refit(&(0..12).collect::<Vec<_>>()).unwrap();
        assert_relative_eq!(refit[0], truth.center[0], epsilon = 1e-9);
        assert_relative_eq!(refit[1], truth.center[1], epsilon = 1e-9);
        assert_relative_eq!(refit[2], truth.radius, epsilon = 1e-9);
    }

    #[test]
    fn refit_on_minimal_noiseless_sample_matches_minimal_fit() {
        let p = CircleProblem::new(vec![[0.3, -0.8], [-0.5, 0.1], [0.9, 0.4]]);
        let minimal = p.fit_minimal(&[0, 1, 2]).unwrap();
        let refit = p.refit(&[0, 1, 2]).unwrap();
        for (a, b) in minimal.iter().zip(&refit) {
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn refit_beats_minimal_fit_in_its_own_objective() {
        // Noisy ring samples: the algebraic fit cannot lose to the
        // circumcircle of a minimal triple on algebraic cost.
        let noise = [0.02, -0.03, 0.01, 0.04, -0.02, 0.03, -0.01, -0.04];
        let pts: Vec<[f64; 2]> = (0..8)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 8.0;
                let r = 1.0 + noise[i];
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        let p = CircleProblem::new(pts);
        let all: Vec<usize> = (0..8).collect();
        let minimal = p.fit_minimal(&[0, 3, 6]).unwrap();
        let refit = p.refit(&all).unwrap();
        assert!(algebraic_cost(&p, &refit, &all) <= algebraic_cost(&p, &minimal, &all) + 1e-12);
    }

    #[test]
    fn refit_of_collinear_points_is_rank_deficient() {
        let pts: Vec<[f64; 2]> = (0..6).map(|i| [i as f64, 2.0 * i as f64 + 1.0]).collect();
        let p = CircleProblem::new(pts);
        assert_eq!(p.refit(&(0..6).collect::<Vec<_>>()), Err(FitError::RankDeficient));
    }

    #[test]
    fn model_round_trips_through_params() {
        let m = CircleModel { center: [1.5, -2.5], radius: 3.0 };
        assert_eq!(CircleModel::from_params(&m.to_params()), m);
    }

    proptest! {
        /// Any non-collinear triple yields an interpolating circumcircle.
        #[test]
        fn prop_circumcircle_interpolates(
            coords in proptest::collection::vec(-1.0f64..=1.0, 6),
        ) {
            let pts = vec![
                [coords[0], coords[1]],
                [coords[2], coords[3]],
                [coords[4], coords[5]],
            ];
            let det = (pts[1][0] - pts[0][0]) * (pts[2][1] - pts[0][1])
                - (pts[1][1] - pts[0][1]) * (pts[2][0] - pts[0][0]);
            // Skinny triangles are valid but ill-conditioned; keep the
            // property numerically meaningful.
            prop_assume!(det.abs() > 1e-3);
            let p = CircleProblem::new(pts);
            let params = p.fit_minimal(&[0, 1, 2]).unwrap();
            prop_assert!(params[2] > 0.0);
            for i in 0..3 {
                prop_assert!(p.residual(&params, i) < 1e-6);
            }
        }
    }
}
