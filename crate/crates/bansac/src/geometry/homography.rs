//! Planar homography estimation from point correspondences.
//!
//! The minimal solver is the normalized 4-point direct linear transform:
//! both point sets are Hartley-normalized (centroid at the origin, mean
//! distance √2), the 2n×9 DLT system is solved by taking the eigenvector of
//! the smallest eigenvalue of AᵀA, and the result is denormalized. The same
//! pipeline serves as the non-minimal refit. Residuals are symmetric
//! transfer errors, (‖x′ − π(Hx)‖ + ‖x − π(H⁻¹x′)‖) / 2, in pixels.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::FitError;
use crate::problem::Problem;

/// Collinearity tolerance for minimal samples, applied to the parallelogram
/// determinant of point triples after normalization.
const COLLINEAR_TOL: f64 = 1e-9;

/// Rank tolerance: a fitted homography whose unit-norm determinant falls
/// below this is treated as rank-deficient.
const RANK_TOL: f64 = 1e-12;

/// Homogeneous-division guard: projections with |w| below this are treated
/// as points at infinity (infinite residual).
const W_TOL: f64 = 1e-12;

/// One source ↔ target point pair, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    /// Location in the source image.
    pub source: [f64; 2],
    /// Location in the target image.
    pub target: [f64; 2],
    /// Optional prior score in [0, 1], better first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
}

impl Correspondence {
    /// Pair two points without a score.
    pub fn new(source: [f64; 2], target: [f64; 2]) -> Self {
        Self { source, target, score: None }
    }
}

/// A 3×3 homography stored row-major, canonicalized to ‖h‖ = 1 with
/// h[8] ≥ 0 (or the first nonzero entry positive when h[8] = 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomographyModel {
    /// Row-major matrix entries.
    pub h: [f64; 9],
}

impl HomographyModel {
    /// Canonicalize an arbitrary nonzero 3×3 matrix.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        let mut h = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                h[r * 3 + c] = m[(r, c)];
            }
        }
        let norm = h.iter().map(|v| v * v).sum::<f64>().sqrt();
        debug_assert!(norm > 0.0, "homography matrix must be nonzero");
        let anchor = if h[8] != 0.0 { h[8] } else { *h.iter().find(|v| **v != 0.0).unwrap() };
        let sign = if anchor < 0.0 { -1.0 } else { 1.0 };
        for v in &mut h {
            *v *= sign / norm;
        }
        Self { h }
    }

    /// The matrix form.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_row_slice(&self.h)
    }

    /// Flat parameter vector (the 9 row-major entries).
    pub fn to_params(&self) -> Vec<f64> {
        self.h.to_vec()
    }

    /// Rebuild from a flat parameter vector (entries taken verbatim).
    pub fn from_params(params: &[f64]) -> Self {
        let mut h = [0.0; 9];
        h.copy_from_slice(&params[..9]);
        Self { h }
    }
}

// ---------------------------------------------------------------------------
// Normalized DLT
// ---------------------------------------------------------------------------

/// Hartley normalization: returns T such that T·p has centroid 0 and mean
/// distance √2, plus the transformed points. `None` when all points
/// coincide (zero spread).
fn normalize_points(pts: &[[f64; 2]]) -> Option<(Matrix3<f64>, Vec<[f64; 2]>)> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    let mean_dist =
        pts.iter().map(|p| ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt()).sum::<f64>() / n;
    if mean_dist <= 0.0 {
        return None;
    }
    let s = std::f64::consts::SQRT_2 / mean_dist;
    let t = Matrix3::new(s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0);
    let mapped = pts.iter().map(|p| [s * (p[0] - cx), s * (p[1] - cy)]).collect();
    Some((t, mapped))
}

/// True if any three of the points are collinear within [`COLLINEAR_TOL`].
fn any_triple_collinear(pts: &[[f64; 2]]) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let det = (pts[j][0] - pts[i][0]) * (pts[k][1] - pts[i][1])
                    - (pts[j][1] - pts[i][1]) * (pts[k][0] - pts[i][0]);
                if det.abs() < COLLINEAR_TOL {
                    return true;
                }
            }
        }
    }
    false
}

/// Solve the DLT system for normalized correspondences: the unit eigenvector
/// of AᵀA with the smallest eigenvalue, reshaped row-major.
fn dlt_solve(sources: &[[f64; 2]], targets: &[[f64; 2]]) -> Matrix3<f64> {
    let n = sources.len();
    let mut a = DMatrix::zeros(2 * n, 9);
    for (i, (s, t)) in sources.iter().zip(targets).enumerate() {
        let [x, y] = *s;
        let [u, v] = *t;
        let r = 2 * i;
        // x′ × Hx = 0, two independent rows per correspondence.
        a[(r, 3)] = -x;
        a[(r, 4)] = -y;
        a[(r, 5)] = -1.0;
        a[(r, 6)] = v * x;
        a[(r, 7)] = v * y;
        a[(r, 8)] = v;
        a[(r + 1, 0)] = x;
        a[(r + 1, 1)] = y;
        a[(r + 1, 2)] = 1.0;
        a[(r + 1, 6)] = -u * x;
        a[(r + 1, 7)] = -u * y;
        a[(r + 1, 8)] = -u;
    }
    // The thin SVD of a 2n×9 system with 2n < 9 does not expose the null
    // space, so take the spectral route through the 9×9 normal matrix.
    let ata = a.transpose() * &a;
    let eigen = SymmetricEigen::new(ata);
    let mut smallest = 0;
    for i in 1..9 {
        if eigen.eigenvalues[i] < eigen.eigenvalues[smallest] {
            smallest = i;
        }
    }
    let h = eigen.eigenvectors.column(smallest);
    Matrix3::from_row_slice(h.as_slice())
}

/// Full fit pipeline: normalize, solve, denormalize, canonicalize.
/// `fail` is the error reported on every failure path so the minimal solver
/// maps to `Degenerate` and the refit to `RankDeficient`.
fn fit_homography(
    sources: &[[f64; 2]],
    targets: &[[f64; 2]],
    check_collinear: bool,
    fail: FitError,
) -> Result<HomographyModel, FitError> {
    let (t_src, norm_src) = normalize_points(sources).ok_or(fail)?;
    let (t_tgt, norm_tgt) = normalize_points(targets).ok_or(fail)?;
    if check_collinear && (any_triple_collinear(&norm_src) || any_triple_collinear(&norm_tgt)) {
        return Err(fail);
    }
    let h_norm = dlt_solve(&norm_src, &norm_tgt);
    let t_tgt_inv = t_tgt.try_inverse().expect("normalization transforms are invertible");
    let model = HomographyModel::from_matrix(&(t_tgt_inv * h_norm * t_src));
    if model.matrix().determinant().abs() < RANK_TOL {
        return Err(fail);
    }
    Ok(model)
}

/// Project a point through H; `None` for points mapped to infinity.
fn project(h: &Matrix3<f64>, p: [f64; 2]) -> Option<[f64; 2]> {
    let q = h * Vector3::new(p[0], p[1], 1.0);
    if q[2].abs() < W_TOL {
        return None;
    }
    Some([q[0] / q[2], q[1] / q[2]])
}

/// Symmetric transfer error in pixels; `+∞` when H is not invertible or a
/// projection lands at infinity.
fn symmetric_transfer(h: &Matrix3<f64>, c: &Correspondence) -> f64 {
    let Some(h_inv) = h.try_inverse() else {
        return f64::INFINITY;
    };
    let (Some(fwd), Some(bwd)) = (project(h, c.source), project(&h_inv, c.target)) else {
        return f64::INFINITY;
    };
    let d_fwd = ((fwd[0] - c.target[0]).powi(2) + (fwd[1] - c.target[1]).powi(2)).sqrt();
    let d_bwd = ((bwd[0] - c.source[0]).powi(2) + (bwd[1] - c.source[1]).powi(2)).sqrt();
    (d_fwd + d_bwd) / 2.0
}

// ---------------------------------------------------------------------------
// Problem adapter
// ---------------------------------------------------------------------------

/// Correspondence-set instance of the homography problem.
#[derive(Debug, Clone)]
pub struct HomographyProblem {
    corrs: Vec<Correspondence>,
    /// Present only when every correspondence carries a score.
    scores: Option<Vec<f64>>,
}

impl HomographyProblem {
    /// Wrap a correspondence set. Prior scores are exposed only when every
    /// correspondence carries one.
    pub fn new(corrs: Vec<Correspondence>) -> Self {
        let scores: Option<Vec<f64>> = corrs.iter().map(|c| c.score).collect();
        Self { corrs, scores }
    }

    /// The underlying correspondences.
    pub fn correspondences(&self) -> &[Correspondence] {
        &self.corrs
    }

    fn gather(&self, idx: &[usize]) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
        let sources = idx.iter().map(|&i| self.corrs[i].source).collect();
        let targets = idx.iter().map(|&i| self.corrs[i].target).collect();
        (sources, targets)
    }
}

impl Problem for HomographyProblem {
    fn len(&self) -> usize {
        self.corrs.len()
    }

    fn minimal_sample_size(&self) -> usize {
        4
    }

    fn fit_minimal(&self, sample: &[usize]) -> Result<Vec<f64>, FitError> {
        assert_eq!(sample.len(), 4, "minimal sample size mismatch");
        let (sources, targets) = self.gather(sample);
        fit_homography(&sources, &targets, true, FitError::Degenerate).map(|m| m.to_params())
    }

    fn residual(&self, params: &[f64], index: usize) -> f64 {
        let h = Matrix3::from_row_slice(&params[..9]);
        symmetric_transfer(&h, &self.corrs[index])
    }

    fn refit(&self, inliers: &[usize]) -> Result<Vec<f64>, FitError> {
        assert!(inliers.len() >= 4, "refit needs at least a minimal sample");
        let (sources, targets) = self.gather(inliers);
        fit_homography(&sources, &targets, false, FitError::RankDeficient).map(|m| m.to_params())
    }

    fn spatial(&self, index: usize) -> [f64; 2] {
        self.corrs[index].source
    }

    fn scores(&self) -> Option<&[f64]> {
        self.scores.as_deref()
    }
}
