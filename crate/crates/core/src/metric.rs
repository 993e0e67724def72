//! Finite metric spaces: validation, ℓ_p point clouds, similarity matrices,
//! scaling, subspaces, magnitude and Hausdorff distance between point sets.

use std::fmt;

use thiserror::Error;

use crate::matrix::{self, MatrixError, SquareMatrix};

/// Relative slack for the symmetry axiom.
pub const SYMMETRY_SLACK: f64 = 1e-12;
/// Relative slack for the triangle inequality.
pub const TRIANGLE_SLACK: f64 = 1e-9;
/// Beyond this distance `e^{-d}` underflows and the similarity entry is 0.
pub const SIMILARITY_CUTOFF: f64 = 745.0;

/// The metric axiom a distance matrix failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Shape,
    Finite,
    ZeroDiagonal,
    Symmetry,
    Positivity,
    Triangle,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Shape => "square shape",
            Axiom::Finite => "finiteness",
            Axiom::ZeroDiagonal => "zero diagonal",
            Axiom::Symmetry => "symmetry",
            Axiom::Positivity => "positivity",
            Axiom::Triangle => "triangle inequality",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("not a metric: {axiom} violated at {indices:?}")]
    NotAMetric { axiom: Axiom, indices: Vec<usize> },
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("invalid point cloud: {0}")]
    InvalidCloud(String),
    #[error("label count {labels} does not match point count {points}")]
    LabelMismatch { labels: usize, points: usize },
    #[error("scale factor {0} is negative")]
    NegativeScale(f64),
    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index {0} selected twice")]
    DuplicateIndex(usize),
    #[error("point set is empty")]
    EmptySet,
    #[error("point clouds differ in dimension or norm ({0})")]
    DimensionMismatch(String),
    #[error("magnitude is only supported for p in [1, 2], got p = {0}")]
    UnsupportedNorm(f64),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Distance induced by the p-norm; `p = ∞` gives the max norm.
pub fn lp_distance(x: &[f64], y: &[f64], p: f64) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let diffs = x.iter().zip(y).map(|(a, b)| (a - b).abs());
    if p.is_infinite() {
        diffs.fold(0.0, f64::max)
    } else if p == 1.0 {
        diffs.sum()
    } else if p == 2.0 {
        diffs.map(|d| d * d).sum::<f64>().sqrt()
    } else {
        diffs.map(|d| d.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Points in ℝ^N with the p-norm metric.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    p: f64,
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(dim: usize, p: f64, points: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        if !(p >= 1.0) {
            return Err(MetricError::InvalidCloud(format!(
                "norm exponent must be at least 1, got {p}"
            )));
        }
        for (i, x) in points.iter().enumerate() {
            if x.len() != dim {
                return Err(MetricError::InvalidCloud(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    x.len()
                )));
            }
            if x.iter().any(|c| !c.is_finite()) {
                return Err(MetricError::InvalidCloud(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        Ok(PointCloud { dim, p, points })
    }

    /// Points on the real line (dimension 1, p = 1).
    pub fn on_line(xs: &[f64]) -> Result<Self, MetricError> {
        Self::new(1, 1.0, xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        lp_distance(&self.points[i], &self.points[j], self.p)
    }

    /// Whether magnitude is guaranteed to exist for every finite subset.
    pub fn supports_magnitude(&self) -> bool {
        (1.0..=2.0).contains(&self.p)
    }
}

/// A finite metric space given by its distance matrix.
///
/// A space produced by scaling with `t = 0` is a pseudometric (all
/// distances zero); it can only be fed to [`magnitude`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    distances: Vec<f64>,
    pseudometric: bool,
    norm_exponent: Option<f64>,
}

impl FiniteMetricSpace {
    pub fn empty() -> Self {
        FiniteMetricSpace {
            labels: Vec::new(),
            distances: Vec::new(),
            pseudometric: false,
            norm_exponent: None,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distances[i * self.len() + j]
    }

    pub fn is_pseudometric(&self) -> bool {
        self.pseudometric
    }

    /// The p of the point cloud this space came from, if any.
    pub fn norm_exponent(&self) -> Option<f64> {
        self.norm_exponent
    }

    pub fn max_distance(&self) -> f64 {
        self.distances.iter().fold(0.0, |m, &d| m.max(d))
    }

    /// Distance matrix as rows.
    pub fn distance_rows(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n)
            .map(|i| self.distances[i * n..(i + 1) * n].to_vec())
            .collect()
    }

    /// Re-checks every metric axiom. Pseudometric spaces fail positivity.
    pub fn validate(&self) -> Result<(), MetricError> {
        validate_distances(self.len(), &self.distances)
    }
}

fn not_a_metric(axiom: Axiom, indices: Vec<usize>) -> MetricError {
    MetricError::NotAMetric { axiom, indices }
}

fn validate_distances(n: usize, d: &[f64]) -> Result<(), MetricError> {
    if let Some(k) = d.iter().position(|x| !x.is_finite()) {
        return Err(not_a_metric(Axiom::Finite, vec![k / n, k % n]));
    }
    let max = d.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    let at = |i: usize, j: usize| d[i * n + j];
    for i in 0..n {
        if at(i, i) != 0.0 {
            return Err(not_a_metric(Axiom::ZeroDiagonal, vec![i]));
        }
    }
    let sym_tol = SYMMETRY_SLACK * max;
    for i in 0..n {
        for j in (i + 1)..n {
            if (at(i, j) - at(j, i)).abs() > sym_tol {
                return Err(not_a_metric(Axiom::Symmetry, vec![i, j]));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !(at(i, j) > 0.0) {
                return Err(not_a_metric(Axiom::Positivity, vec![i, j]));
            }
        }
    }
    let tri_tol = TRIANGLE_SLACK * max;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if at(i, k) > at(i, j) + at(j, k) + tri_tol {
                    return Err(not_a_metric(Axiom::Triangle, vec![i, j, k]));
                }
            }
        }
    }
    Ok(())
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Validates a distance matrix and wraps it as a metric space.
///
/// Labels default to `"0"`, `"1"`, … when `labels` is `None`.
pub fn from_distance_matrix(
    rows: &[Vec<f64>],
    labels: Option<Vec<String>>,
) -> Result<FiniteMetricSpace, MetricError> {
    let n = rows.len();
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(not_a_metric(Axiom::Shape, vec![i]));
    }
    let labels = match labels {
        Some(l) if l.len() != n => {
            return Err(MetricError::LabelMismatch {
                labels: l.len(),
                points: n,
            })
        }
        Some(l) => l,
        None => default_labels(n),
    };
    let distances: Vec<f64> = rows.iter().flatten().copied().collect();
    validate_distances(n, &distances)?;
    Ok(FiniteMetricSpace {
        labels,
        distances,
        pseudometric: false,
        norm_exponent: None,
    })
}

/// The metric space induced on a point cloud by its p-norm. Coincident
/// points are rejected.
pub fn from_points(cloud: &PointCloud) -> Result<FiniteMetricSpace, MetricError> {
    let n = cloud.len();
    let mut distances = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = cloud.distance(i, j);
            if d == 0.0 {
                return Err(MetricError::DuplicatePoints(i, j));
            }
            distances[i * n + j] = d;
            distances[j * n + i] = d;
        }
    }
    Ok(FiniteMetricSpace {
        labels: default_labels(n),
        distances,
        pseudometric: false,
        norm_exponent: Some(cloud.p()),
    })
}

/// `Z_ij = e^{-d(i, j)}`, with entries beyond [`SIMILARITY_CUTOFF`] set to 0.
pub fn similarity_matrix(space: &FiniteMetricSpace) -> SquareMatrix {
    let n = space.len();
    let entries = space
        .distances
        .iter()
        .map(|&d| if d > SIMILARITY_CUTOFF { 0.0 } else { (-d).exp() })
        .collect();
    SquareMatrix::new(n, entries).expect("validated distances give a finite square matrix")
}

/// Multiplies every distance by `t`. `t = 0` yields a pseudometric.
pub fn scale(space: &FiniteMetricSpace, t: f64) -> Result<FiniteMetricSpace, MetricError> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(MetricError::NegativeScale(t));
    }
    Ok(FiniteMetricSpace {
        labels: space.labels.clone(),
        distances: space.distances.iter().map(|d| d * t).collect(),
        pseudometric: space.pseudometric || t == 0.0,
        norm_exponent: space.norm_exponent,
    })
}

/// Magnitude of the similarity matrix. The empty space has magnitude 0 and a
/// nonempty zero-scaled space has magnitude 1.
pub fn magnitude(space: &FiniteMetricSpace) -> Result<f64, MetricError> {
    if let Some(p) = space.norm_exponent {
        if !(1.0..=2.0).contains(&p) {
            return Err(MetricError::UnsupportedNorm(p));
        }
    }
    if space.is_empty() {
        return Ok(0.0);
    }
    if space.pseudometric && space.distances.iter().all(|&d| d == 0.0) {
        return Ok(1.0);
    }
    Ok(matrix::matrix_magnitude(&similarity_matrix(space))?)
}

/// Restriction of the metric to the points at `indices`, in the given order.
pub fn subspace(space: &FiniteMetricSpace, indices: &[usize]) -> Result<FiniteMetricSpace, MetricError> {
    let n = space.len();
    let mut seen = vec![false; n];
    for &i in indices {
        if i >= n {
            return Err(MetricError::IndexOutOfRange { index: i, len: n });
        }
        if seen[i] {
            return Err(MetricError::DuplicateIndex(i));
        }
        seen[i] = true;
    }
    let m = indices.len();
    let mut distances = Vec::with_capacity(m * m);
    for &i in indices {
        for &j in indices {
            distances.push(space.distance(i, j));
        }
    }
    Ok(FiniteMetricSpace {
        labels: indices.iter().map(|&i| space.labels[i].clone()).collect(),
        distances,
        pseudometric: space.pseudometric,
        norm_exponent: space.norm_exponent,
    })
}

/// One evaluation of `t ↦ mg(tM)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeFunctionSample {
    pub t: f64,
    pub value: Result<f64, MetricError>,
}

/// Evaluates the magnitude function at each `t`. A failure at one `t` is
/// recorded in that sample and does not stop the sweep.
pub fn magnitude_function_samples(space: &FiniteMetricSpace, ts: &[f64]) -> Vec<MagnitudeFunctionSample> {
    ts.iter()
        .map(|&t| MagnitudeFunctionSample {
            t,
            value: scale(space, t).and_then(|s| magnitude(&s)),
        })
        .collect()
}

fn directed_hausdorff(from: &PointCloud, to: &PointCloud) -> f64 {
    let p = from.p();
    from.points()
        .iter()
        .map(|a| {
            to.points()
                .iter()
                .map(|b| lp_distance(a, b, p))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two finite point sets, by brute force.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptySet);
    }
    if a.dim() != b.dim() || a.p() != b.p() {
        return Err(MetricError::DimensionMismatch(format!(
            "dim {} p {} vs dim {} p {}",
            a.dim(),
            a.p(),
            b.dim(),
            b.p()
        )));
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> FiniteMetricSpace {
        from_points(&PointCloud::on_line(xs).unwrap()).unwrap()
    }

    #[test]
    fn distance_matrix_validation() {
        assert_eq!(
            from_distance_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]], None)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            from_distance_matrix(&[vec![0.0, 1.0], vec![2.0, 0.0]], None),
            Err(MetricError::NotAMetric {
                axiom: Axiom::Symmetry,
                indices: vec![0, 1]
            })
        );
        let tri = from_distance_matrix(
            &[
                vec![0.0, 1.0, 3.0],
                vec![1.0, 0.0, 1.0],
                vec![3.0, 1.0, 0.0],
            ],
            None,
        );
        assert_eq!(
            tri,
            Err(MetricError::NotAMetric {
                axiom: Axiom::Triangle,
                indices: vec![0, 1, 2]
            })
        );
    }

    #[test]
    fn other_axioms() {
        let diag = from_distance_matrix(&[vec![0.5]], None);
        assert!(matches!(diag, Err(MetricError::NotAMetric { axiom: Axiom::ZeroDiagonal, .. })));
        let zero = from_distance_matrix(&[vec![0.0, 0.0], vec![0.0, 0.0]], None);
        assert!(matches!(zero, Err(MetricError::NotAMetric { axiom: Axiom::Positivity, .. })));
        let ragged = from_distance_matrix(&[vec![0.0, 1.0], vec![1.0]], None);
        assert!(matches!(ragged, Err(MetricError::NotAMetric { axiom: Axiom::Shape, .. })));
        let labels = from_distance_matrix(&[vec![0.0]], Some(vec![]));
        assert!(matches!(labels, Err(MetricError::LabelMismatch { .. })));
    }

    #[test]
    fn points_in_the_plane() {
        let corners = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let l1 = from_points(&PointCloud::new(2, 1.0, corners.clone()).unwrap()).unwrap();
        assert_eq!(l1.distance(0, 1), 1.0);
        assert_eq!(l1.distance(0, 3), 2.0);
        let l2 = from_points(&PointCloud::new(2, 2.0, corners.clone()).unwrap()).unwrap();
        assert!((l2.distance(0, 3) - 2f64.sqrt()).abs() < 1e-15);
        let linf = from_points(&PointCloud::new(2, f64::INFINITY, corners).unwrap()).unwrap();
        assert_eq!(linf.distance(0, 3), 1.0);
        assert!(l1.validate().is_ok());
        assert_eq!(line(&[0.0, 1.0]).distance_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn duplicates_rejected() {
        let cloud = PointCloud::on_line(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(from_points(&cloud), Err(MetricError::DuplicatePoints(0, 2)));
    }

    #[test]
    fn similarity_entries() {
        let z = similarity_matrix(&line(&[0.0, 1.0]));
        assert_eq!(z.get(0, 1), (-1.0f64).exp());
        assert_eq!(z.get(1, 1), 1.0);
        assert_eq!(similarity_matrix(&line(&[4.0])).entries(), &[1.0]);
        let z3 = similarity_matrix(&line(&[0.0, 1.0, 2.0]));
        assert_eq!(z3.get(0, 2), (-2.0f64).exp());
        assert_eq!(z3.get(2, 1), (-1.0f64).exp());
        let far = similarity_matrix(&line(&[0.0, 800.0]));
        assert_eq!(far.get(0, 1), 0.0);
    }

    #[test]
    fn magnitude_small_spaces() {
        assert_eq!(magnitude(&FiniteMetricSpace::empty()).unwrap(), 0.0);
        assert_eq!(magnitude(&line(&[3.0])).unwrap(), 1.0);
        let two = magnitude(&line(&[0.0, 1.0])).unwrap();
        assert!((two - (1.0 + 0.5f64.tanh())).abs() < 1e-14);
        let three = magnitude(&line(&[0.0, 1.0, 2.0])).unwrap();
        assert!((three - 1.9242343145200195).abs() < 1e-12);
        let far = magnitude(&line(&[0.0, 1000.0])).unwrap();
        assert_eq!(far, 2.0);
    }

    #[test]
    fn scaling() {
        let m = line(&[0.0, 1.0]);
        assert_eq!(scale(&m, 1.0).unwrap(), m);
        assert_eq!(scale(&m, 2.0).unwrap().distance(0, 1), 2.0);
        let zero = scale(&m, 0.0).unwrap();
        assert!(zero.is_pseudometric());
        assert!(zero.validate().is_err());
        assert_eq!(magnitude(&zero).unwrap(), 1.0);
        assert_eq!(scale(&m, -1.0), Err(MetricError::NegativeScale(-1.0)));
    }

    #[test]
    fn subspaces() {
        let m = line(&[0.0, 1.0, 2.0]);
        assert_eq!(subspace(&m, &[0, 1, 2]).unwrap(), m);
        let e = subspace(&m, &[]).unwrap();
        assert!(e.is_empty());
        assert_eq!(magnitude(&e).unwrap(), 0.0);
        let ends = subspace(&m, &[0, 2]).unwrap();
        assert_eq!(ends.len(), 2);
        assert_eq!(ends.distance(0, 1), 2.0);
        assert_eq!(ends.labels(), &["0".to_string(), "2".to_string()]);
        assert_eq!(
            subspace(&m, &[3]),
            Err(MetricError::IndexOutOfRange { index: 3, len: 3 })
        );
        assert_eq!(subspace(&m, &[1, 1]), Err(MetricError::DuplicateIndex(1)));
    }

    #[test]
    fn magnitude_function() {
        let single = line(&[0.0]);
        for s in magnitude_function_samples(&single, &[0.0, 0.5, 3.0]) {
            assert_eq!(s.value.unwrap(), 1.0);
        }
        let two = line(&[0.0, 1.0]);
        let samples = magnitude_function_samples(&two, &[0.0, 2.0]);
        assert_eq!(samples[0].value, Ok(1.0));
        assert!((samples[1].value.clone().unwrap() - (1.0 + 1f64.tanh())).abs() < 1e-14);
        let bad = magnitude_function_samples(&two, &[-1.0, 1.0]);
        assert!(bad[0].value.is_err());
        assert!(bad[1].value.is_ok());
    }

    #[test]
    fn unsupported_norm_refused() {
        let cloud = PointCloud::new(2, 3.0, vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!(!cloud.supports_magnitude());
        let space = from_points(&cloud).unwrap();
        assert_eq!(magnitude(&space), Err(MetricError::UnsupportedNorm(3.0)));
    }

    #[test]
    fn point_hausdorff() {
        let a = PointCloud::on_line(&[0.0]).unwrap();
        let b = PointCloud::on_line(&[0.0, 3.0]).unwrap();
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 3.0);
        let odd = PointCloud::on_line(&[1.0, 3.0, 5.0, 7.0, 9.0]).unwrap();
        let grid: Vec<f64> = (0..=10).map(f64::from).collect();
        let grid = PointCloud::on_line(&grid).unwrap();
        assert_eq!(hausdorff_distance(&odd, &grid).unwrap(), 1.0);
        let empty = PointCloud::on_line(&[]).unwrap();
        assert_eq!(hausdorff_distance(&a, &empty), Err(MetricError::EmptySet));
        let plane = PointCloud::new(2, 1.0, vec![vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            hausdorff_distance(&a, &plane),
            Err(MetricError::DimensionMismatch(_))
        ));
    }
}
