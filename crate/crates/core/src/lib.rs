//! Magnitude of finite metric spaces and of compact subsets of the real line.
//!
//! * [`matrix`]: Cholesky-based weightings and matrix magnitude, with a
//!   cofactor-expansion oracle.
//! * [`metric`]: finite metric spaces, ℓ_p point clouds, similarity matrices,
//!   scaling and Hausdorff distance.
//! * [`real_line`]: closed forms for finite unions of closed intervals.
//! * [`approx`]: nested-net approximation of compact magnitude and the
//!   counterexample generators.
//! * [`io`]: text formats for point clouds, distance matrices and interval
//!   unions.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod io;
pub mod matrix;
pub mod metric;
pub mod real_line;

pub use approx::{ApproxError, ConvergenceReport, CounterexampleReport};
pub use matrix::{MatrixError, PdCertificate, SquareMatrix, Weighting};
pub use metric::{FiniteMetricSpace, MagnitudeFunctionSample, MetricError, PointCloud};
pub use real_line::{IntervalUnion, RealFiniteSet, RealLineError};
