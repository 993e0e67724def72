//! Closed-form magnitude for compact subsets of ℝ that are finite unions of
//! closed intervals, plus thickenings and Hausdorff distance between them.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealLineError {
    #[error("set is empty")]
    EmptySet,
    #[error("interval ({0}, {1}) has its endpoints reversed")]
    InvertedInterval(f64, f64),
    #[error("non-finite coordinate {0}")]
    NonFinite(f64),
    #[error("points are not strictly increasing at index {0}")]
    NotStrictlyIncreasing(usize),
    #[error("thickening radius {0} is negative")]
    NegativeRadius(f64),
    #[error("interval [{0}, {1}] is degenerate")]
    DegenerateInterval(f64, f64),
    #[error("input {0} must be positive")]
    NonpositiveInput(f64),
}

/// Strictly increasing finite subset of ℝ.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFiniteSet {
    points: Vec<f64>,
}

impl RealFiniteSet {
    pub fn new(points: Vec<f64>) -> Result<Self, RealLineError> {
        if let Some(&x) = points.iter().find(|x| !x.is_finite()) {
            return Err(RealLineError::NonFinite(x));
        }
        if let Some(i) = points.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(RealLineError::NotStrictlyIncreasing(i + 1));
        }
        Ok(RealFiniteSet { points })
    }

    /// Sorts and drops exact duplicates.
    pub fn from_unsorted(mut points: Vec<f64>) -> Result<Self, RealLineError> {
        if let Some(&x) = points.iter().find(|x| !x.is_finite()) {
            return Err(RealLineError::NonFinite(x));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(RealFiniteSet { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.points.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.points.last().copied()
    }

    pub fn diameter(&self) -> f64 {
        match (self.min(), self.max()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// Each point as a degenerate interval.
    pub fn to_union(&self) -> IntervalUnion {
        IntervalUnion {
            intervals: self.points.iter().map(|&x| (x, x)).collect(),
        }
    }
}

/// Finite union of closed intervals in canonical form: sorted, with
/// `b_i < a_{i+1}` between consecutive intervals. Degenerate intervals
/// `(a, a)` stand for single points.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion {
            intervals: Vec::new(),
        }
    }

    pub fn interval(a: f64, b: f64) -> Result<Self, RealLineError> {
        normalize_intervals(&[(a, b)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.intervals.first().map(|iv| iv.0)
    }

    pub fn max(&self) -> Option<f64> {
        self.intervals.last().map(|iv| iv.1)
    }

    pub fn contains(&self, x: f64) -> bool {
        let k = self.intervals.partition_point(|&(_, b)| b < x);
        self.intervals.get(k).is_some_and(|&(a, _)| a <= x)
    }

    /// Distance from `x` to the nearest point of the union.
    pub fn distance_to(&self, x: f64) -> f64 {
        // first interval whose right end is >= x
        let k = self.intervals.partition_point(|&(_, b)| b < x);
        let right = self.intervals.get(k).map(|&(a, _)| (a - x).max(0.0));
        let left = k.checked_sub(1).map(|i| x - self.intervals[i].1);
        match (left, right) {
            (Some(l), Some(r)) => l.min(r),
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => f64::INFINITY,
        }
    }
}

/// Sorts by left endpoint and merges overlapping or touching intervals.
pub fn normalize_intervals(raw: &[(f64, f64)]) -> Result<IntervalUnion, RealLineError> {
    for &(a, b) in raw {
        if !a.is_finite() {
            return Err(RealLineError::NonFinite(a));
        }
        if !b.is_finite() {
            return Err(RealLineError::NonFinite(b));
        }
        if a > b {
            return Err(RealLineError::InvertedInterval(a, b));
        }
    }
    let mut sorted = raw.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for (a, b) in sorted {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    Ok(IntervalUnion { intervals: merged })
}

/// `1 + Σ tanh((a_{i+1} − a_i)/2)`, summed left to right.
pub fn real_finite_magnitude(set: &RealFiniteSet) -> Result<f64, RealLineError> {
    if set.is_empty() {
        return Err(RealLineError::EmptySet);
    }
    Ok(set
        .points
        .windows(2)
        .fold(1.0, |acc, w| acc + ((w[1] - w[0]) / 2.0).tanh()))
}

/// `1 + Σ (b_i − a_i)/2 + Σ tanh((a_{i+1} − b_i)/2)`.
pub fn interval_union_magnitude(union: &IntervalUnion) -> Result<f64, RealLineError> {
    if union.is_empty() {
        return Err(RealLineError::EmptySet);
    }
    let lengths: f64 = union.intervals.iter().map(|&(a, b)| (b - a) / 2.0).sum();
    let gaps: f64 = union
        .intervals
        .windows(2)
        .map(|w| ((w[1].0 - w[0].1) / 2.0).tanh())
        .sum();
    Ok(1.0 + lengths + gaps)
}

/// `{x : d(x, U) ≤ r}`
pub fn thicken(union: &IntervalUnion, r: f64) -> Result<IntervalUnion, RealLineError> {
    if !(r >= 0.0) {
        return Err(RealLineError::NegativeRadius(r));
    }
    if union.is_empty() {
        return Err(RealLineError::EmptySet);
    }
    let grown: Vec<(f64, f64)> = union.intervals.iter().map(|&(a, b)| (a - r, b + r)).collect();
    normalize_intervals(&grown)
}

/// `sup_{x ∈ from} d(x, to)`, evaluated on the finite set of points where
/// the piecewise-linear function `d(·, to)` can peak inside `from`.
fn directed_hausdorff(from: &IntervalUnion, to: &IntervalUnion) -> f64 {
    let mut best = 0.0_f64;
    let mut consider = |x: f64| best = best.max(to.distance_to(x));
    for &(a, b) in &from.intervals {
        consider(a);
        consider(b);
    }
    for w in to.intervals.windows(2) {
        let mid = w[0].1 + (w[1].0 - w[0].1) / 2.0;
        if from.contains(mid) {
            consider(mid);
        }
    }
    for &(a, b) in &to.intervals {
        for x in [a, b] {
            if from.contains(x) {
                consider(x);
            }
        }
    }
    best
}

/// Hausdorff distance between two nonempty interval unions, computed exactly.
pub fn hausdorff_real(u: &IntervalUnion, v: &IntervalUnion) -> Result<f64, RealLineError> {
    if u.is_empty() || v.is_empty() {
        return Err(RealLineError::EmptySet);
    }
    Ok(directed_hausdorff(u, v).max(directed_hausdorff(v, u)))
}

/// Lipschitz constant `1 + (b − a)/2` of magnitude on nonempty compact
/// subsets of `[a, b]`.
pub fn lipschitz_coefficient(a: f64, b: f64) -> Result<f64, RealLineError> {
    if !(a < b) {
        return Err(RealLineError::DegenerateInterval(a, b));
    }
    Ok(1.0 + (b - a) / 2.0)
}

/// Magnitude gained by thickening a finite set, and the linear bound on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthCheck {
    pub actual: f64,
    pub bound: f64,
}

impl GrowthCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.actual <= self.bound + slack
    }
}

/// `mg(cth(A, r)) − mg(A)` against `r · (1 + (max A − min A)/2)`.
pub fn thickening_growth_bound(set: &RealFiniteSet, r: f64) -> Result<GrowthCheck, RealLineError> {
    let base = real_finite_magnitude(set)?;
    let thick = interval_union_magnitude(&thicken(&set.to_union(), r)?)?;
    Ok(GrowthCheck {
        actual: thick - base,
        bound: r * (1.0 + set.diameter() / 2.0),
    })
}

/// Both sides of `tanh(x)/x ≥ 1 − tanh²(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanhGap {
    pub lhs: f64,
    pub rhs: f64,
}

impl TanhGap {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs >= self.rhs - slack
    }
}

pub fn tanh_gap_check(x: f64) -> Result<TanhGap, RealLineError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(RealLineError::NonpositiveInput(x));
    }
    let t = x.tanh();
    Ok(TanhGap {
        lhs: t / x,
        rhs: 1.0 - t * t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[f64]) -> RealFiniteSet {
        RealFiniteSet::new(xs.to_vec()).unwrap()
    }

    fn union(raw: &[(f64, f64)]) -> IntervalUnion {
        normalize_intervals(raw).unwrap()
    }

    #[test]
    fn finite_set_magnitude() {
        assert_eq!(real_finite_magnitude(&set(&[4.2])).unwrap(), 1.0);
        assert!((real_finite_magnitude(&set(&[0.0, 1.0])).unwrap() - 1.4621171572600098).abs() < 1e-15);
        assert!((real_finite_magnitude(&set(&[0.0, 1.0, 2.0])).unwrap() - 1.9242343145200195).abs() < 1e-15);
        assert_eq!(
            real_finite_magnitude(&set(&[])),
            Err(RealLineError::EmptySet)
        );
    }

    #[test]
    fn set_construction() {
        assert_eq!(
            RealFiniteSet::new(vec![0.0, 0.0]),
            Err(RealLineError::NotStrictlyIncreasing(1))
        );
        assert!(RealFiniteSet::new(vec![f64::NAN]).is_err());
        let s = RealFiniteSet::from_unsorted(vec![3.0, 1.0, 3.0]).unwrap();
        assert_eq!(s.points(), &[1.0, 3.0]);
        assert_eq!(s.diameter(), 2.0);
    }

    #[test]
    fn union_magnitude() {
        assert_eq!(interval_union_magnitude(&union(&[(0.0, 1.0)])).unwrap(), 1.5);
        let two = interval_union_magnitude(&union(&[(0.0, 1.0), (2.0, 3.0)])).unwrap();
        assert!((two - 2.462_117_157_260_01).abs() < 1e-15);
        let pts = set(&[0.0, 1.0, 2.0]);
        assert_eq!(
            interval_union_magnitude(&pts.to_union()).unwrap(),
            real_finite_magnitude(&pts).unwrap()
        );
        assert_eq!(
            interval_union_magnitude(&IntervalUnion::empty()),
            Err(RealLineError::EmptySet)
        );
    }

    #[test]
    fn normalization() {
        assert_eq!(union(&[(0.0, 1.0), (0.5, 2.0)]).intervals(), &[(0.0, 2.0)]);
        assert_eq!(union(&[(0.0, 1.0), (1.0, 2.0)]).intervals(), &[(0.0, 2.0)]);
        assert_eq!(
            union(&[(2.0, 3.0), (0.0, 1.0)]).intervals(),
            &[(0.0, 1.0), (2.0, 3.0)]
        );
        assert_eq!(union(&[(0.0, 5.0), (1.0, 2.0)]).intervals(), &[(0.0, 5.0)]);
        assert_eq!(union(&[(1.0, 1.0), (1.0, 1.0)]).intervals(), &[(1.0, 1.0)]);
        assert_eq!(
            normalize_intervals(&[(1.0, 0.0)]),
            Err(RealLineError::InvertedInterval(1.0, 0.0))
        );
        assert!(union(&[]).is_empty());
    }

    #[test]
    fn thickening() {
        let t = |xs: &[f64], r| thicken(&set(xs).to_union(), r).unwrap();
        assert_eq!(t(&[0.0], 1.0).intervals(), &[(-1.0, 1.0)]);
        assert_eq!(t(&[0.0, 3.0], 1.0).intervals(), &[(-1.0, 1.0), (2.0, 4.0)]);
        assert_eq!(t(&[0.0, 1.0], 1.0).intervals(), &[(-1.0, 2.0)]);
        assert_eq!(t(&[0.0, 2.0], 1.0).intervals(), &[(-1.0, 3.0)]);
        assert_eq!(
            thicken(&set(&[0.0]).to_union(), -0.5),
            Err(RealLineError::NegativeRadius(-0.5))
        );
        assert_eq!(
            thicken(&IntervalUnion::empty(), 1.0),
            Err(RealLineError::EmptySet)
        );
    }

    #[test]
    fn distance_and_containment() {
        let u = union(&[(0.0, 1.0), (3.0, 4.0)]);
        assert!(u.contains(0.0) && u.contains(1.0) && u.contains(3.5));
        assert!(!u.contains(2.0) && !u.contains(-0.1) && !u.contains(4.1));
        assert_eq!(u.distance_to(2.0), 1.0);
        assert_eq!(u.distance_to(2.5), 0.5);
        assert_eq!(u.distance_to(-2.0), 2.0);
        assert_eq!(u.distance_to(6.0), 2.0);
        assert_eq!(u.distance_to(0.5), 0.0);
    }

    #[test]
    fn interval_hausdorff() {
        let a = union(&[(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(hausdorff_real(&a, &a).unwrap(), 0.0);
        let odd = set(&[1.0, 3.0, 5.0, 7.0, 9.0]).to_union();
        let full = union(&[(0.0, 10.0)]);
        assert_eq!(hausdorff_real(&odd, &full).unwrap(), 1.0);
        assert_eq!(hausdorff_real(&union(&[(0.0, 1.0)]), &a).unwrap(), 2.0);
        // peak of d(·, V) sits at a gap midpoint inside U
        let gappy = union(&[(0.0, 1.0), (5.0, 6.0)]);
        assert_eq!(hausdorff_real(&union(&[(0.0, 6.0)]), &gappy).unwrap(), 2.0);
        assert_eq!(
            hausdorff_real(&a, &IntervalUnion::empty()),
            Err(RealLineError::EmptySet)
        );
    }

    #[test]
    fn lipschitz_constant() {
        assert_eq!(lipschitz_coefficient(0.0, 1.0).unwrap(), 1.5);
        assert_eq!(lipschitz_coefficient(0.0, 2.0).unwrap(), 2.0);
        assert_eq!(lipschitz_coefficient(-1.0, 1.0).unwrap(), 2.0);
        assert_eq!(
            lipschitz_coefficient(1.0, 1.0),
            Err(RealLineError::DegenerateInterval(1.0, 1.0))
        );
    }

    #[test]
    fn growth_bound_examples() {
        let zero = thickening_growth_bound(&set(&[0.0, 2.0, 7.0]), 0.0).unwrap();
        assert_eq!((zero.actual, zero.bound), (0.0, 0.0));
        let single = thickening_growth_bound(&set(&[0.0]), 1.0).unwrap();
        assert_eq!((single.actual, single.bound), (1.0, 1.0));
        let pair = thickening_growth_bound(&set(&[0.0, 10.0]), 1.0).unwrap();
        assert!((pair.actual - (2.0 + 4f64.tanh() - 5f64.tanh())).abs() < 1e-14);
        assert_eq!(pair.bound, 6.0);
        assert!(pair.holds(1e-10));
    }

    #[test]
    fn tanh_gap() {
        let tiny = tanh_gap_check(1e-6).unwrap();
        assert!((tiny.lhs - tiny.rhs).abs() <= 1e-11);
        let one = tanh_gap_check(1.0).unwrap();
        assert!((one.lhs - 0.7615941559557649).abs() < 1e-10);
        assert!((one.rhs - 0.41997434161402614).abs() < 1e-10);
        let ten = tanh_gap_check(10.0).unwrap();
        assert!((ten.lhs - 0.1).abs() < 1e-8);
        assert!((ten.rhs - 8.2e-9).abs() < 1e-10);
        assert!(one.holds(0.0) && ten.holds(0.0));
        assert_eq!(tanh_gap_check(0.0), Err(RealLineError::NonpositiveInput(0.0)));
    }
}
