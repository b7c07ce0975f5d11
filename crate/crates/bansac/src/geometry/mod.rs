//! Problem adapters: polynomial curve, circle, and planar homography.
//!
//! Each submodule pairs a typed model (exact parameter layout, invariants,
//! conversions to/from the engine's flat parameter vectors) with a
//! [`Problem`](crate::problem::Problem) implementation providing the minimal
//! solver, the per-point residual, and a non-minimal least-squares refit.

pub mod circle;
pub mod curve;
pub mod homography;

pub use circle::{CircleModel, CircleProblem};
pub use curve::{CurveModel, CurveProblem, CURVE_DEGREE_RANGE, DEFAULT_CURVE_DEGREE};
pub use homography::{Correspondence, HomographyModel, HomographyProblem};
