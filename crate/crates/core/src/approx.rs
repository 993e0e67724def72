//! Estimating the magnitude of compact sets from nested finite nets, plus
//! the one-point curves, ℓ₁ truncation experiment, and the counterexample
//! families for uniform continuity and Lipschitz continuity on ℝ.

use thiserror::Error;

use crate::metric::{self, FiniteMetricSpace, MetricError, PointCloud};
use crate::real_line::{
    self, hausdorff_real, interval_union_magnitude, real_finite_magnitude, IntervalUnion, RealFiniteSet,
    RealLineError,
};

/// Default stopping tolerance on successive net magnitudes.
pub const DEFAULT_STOP_TOL: f64 = 1e-6;
/// Default cap on the number of points in a single net.
pub const DEFAULT_POINT_CAP: usize = 4096;
/// Slack allowed for a decrease between nested nets before it counts as a
/// monotonicity violation.
pub const MONOTONE_SLACK: f64 = 1e-10;
/// Largest truncation dimension for the ℓ₁ experiment.
pub const KT_MAX_TERMS: usize = 64;
/// Largest set size the counterexample generators will build.
pub const COUNTEREXAMPLE_MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("mesh {0} must be positive")]
    NonpositiveMesh(f64),
    #[error("net would have {points} points, above the cap of {cap}")]
    NetTooLarge { points: usize, cap: usize },
    #[error("box is degenerate or malformed: {0}")]
    InvalidBox(String),
    #[error("norm exponent {0} is outside [1, 2]")]
    UnsupportedNorm(f64),
    #[error("schedule must be strictly decreasing with at least two positive entries")]
    InvalidSchedule,
    #[error("magnitude fell from {previous} to {current} at mesh {mesh}")]
    MonotonicityViolation { mesh: f64, previous: f64, current: f64 },
    #[error("solver failed at parameter {at}: {source}")]
    SolverFailure {
        at: f64,
        #[source]
        source: MetricError,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    RealLine(#[from] RealLineError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Evenly spaced points on each interval with spacing at most `mesh`,
/// endpoints included.
pub fn uniform_net(union: &IntervalUnion, mesh: f64) -> Result<RealFiniteSet, ApproxError> {
    if !(mesh > 0.0) || !mesh.is_finite() {
        return Err(ApproxError::NonpositiveMesh(mesh));
    }
    if union.is_empty() {
        return Err(RealLineError::EmptySet.into());
    }
    let mut points = Vec::new();
    for &(a, b) in union.intervals() {
        let len = b - a;
        if len == 0.0 {
            points.push(a);
            continue;
        }
        let m = (len / mesh).ceil().max(1.0) as usize;
        let h = len / m as f64;
        points.extend((0..m).map(|k| a + k as f64 * h));
        points.push(b);
    }
    points.dedup();
    Ok(RealFiniteSet::new(points)?)
}

/// Axis-aligned box `[lower_k, upper_k]` in ℝ^N.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl AxisBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, ApproxError> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(ApproxError::InvalidBox(format!(
                "corner dimensions {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (k, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(ApproxError::InvalidBox(format!("axis {k}: [{lo}, {hi}]")));
            }
        }
        Ok(AxisBox { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// Product grid over a box, corners included, with per-axis spacing at most
/// `mesh`.
pub fn grid_net_lp(bx: &AxisBox, mesh: f64, p: f64, cap: usize) -> Result<PointCloud, ApproxError> {
    if !(mesh > 0.0) || !mesh.is_finite() {
        return Err(ApproxError::NonpositiveMesh(mesh));
    }
    if !(1.0..=2.0).contains(&p) {
        return Err(ApproxError::UnsupportedNorm(p));
    }
    let axes: Vec<Vec<f64>> = bx
        .lower
        .iter()
        .zip(&bx.upper)
        .map(|(&lo, &hi)| {
            let m = ((hi - lo) / mesh).ceil().max(1.0) as usize;
            let h = (hi - lo) / m as f64;
            let mut ticks: Vec<f64> = (0..m).map(|k| lo + k as f64 * h).collect();
            ticks.push(hi);
            ticks
        })
        .collect();
    let count = axes
        .iter()
        .try_fold(1usize, |acc, t| acc.checked_mul(t.len()))
        .unwrap_or(usize::MAX);
    if count > cap {
        return Err(ApproxError::NetTooLarge { points: count, cap });
    }

    let mut points = Vec::with_capacity(count);
    let mut idx = vec![0usize; axes.len()];
    loop {
        points.push(idx.iter().zip(&axes).map(|(&i, t)| t[i]).collect());
        // odometer increment, last axis fastest
        let mut k = axes.len();
        loop {
            if k == 0 {
                return Ok(PointCloud::new(bx.dim(), p, points)?);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Powers-of-two mesh schedule `start, start/2, …` down to and including the
/// first value `≤ finest`.
pub fn halving_schedule(start: f64, finest: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut h = start;
    if !(start > 0.0) || !(finest > 0.0) {
        return out;
    }
    loop {
        out.push(h);
        if h <= finest {
            return out;
        }
        h /= 2.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub stop_tol: f64,
    pub point_cap: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            stop_tol: DEFAULT_STOP_TOL,
            point_cap: DEFAULT_POINT_CAP,
        }
    }
}

/// Magnitudes along a mesh refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub mesh_sequence: Vec<f64>,
    pub point_counts: Vec<usize>,
    pub magnitudes: Vec<f64>,
    pub estimate: f64,
    pub last_increment: f64,
    pub converged: bool,
}

/// Evaluates net magnitudes along `schedule` until two successive values
/// differ by at most `config.stop_tol`.
///
/// `net_at(mesh)` must return nested nets along the schedule. A decrease of
/// more than [`MONOTONE_SLACK`] (relative) is reported as
/// [`ApproxError::MonotonicityViolation`]. A net over the point cap, either
/// returned or signalled by `NetTooLarge`, ends the run with
/// `converged = false`.
pub fn estimate_compact_magnitude<F>(
    mut net_at: F,
    schedule: &[f64],
    config: EstimatorConfig,
) -> Result<ConvergenceReport, ApproxError>
where
    F: FnMut(f64) -> Result<FiniteMetricSpace, ApproxError>,
{
    if schedule.len() < 2
        || schedule.iter().any(|h| !(*h > 0.0))
        || schedule.windows(2).any(|w| !(w[1] < w[0]))
    {
        return Err(ApproxError::InvalidSchedule);
    }
    let mut report = ConvergenceReport {
        mesh_sequence: Vec::new(),
        point_counts: Vec::new(),
        magnitudes: Vec::new(),
        estimate: f64::NAN,
        last_increment: f64::INFINITY,
        converged: false,
    };
    for &mesh in schedule {
        let net = match net_at(mesh) {
            Ok(net) if net.len() > config.point_cap => break,
            Ok(net) => net,
            Err(ApproxError::NetTooLarge { .. }) => break,
            Err(e) => return Err(e),
        };
        let value = metric::magnitude(&net).map_err(|source| ApproxError::SolverFailure { at: mesh, source })?;
        if let Some(&previous) = report.magnitudes.last() {
            if value < previous - MONOTONE_SLACK * previous.abs().max(1.0) {
                return Err(ApproxError::MonotonicityViolation {
                    mesh,
                    previous,
                    current: value,
                });
            }
            report.last_increment = value - previous;
        }
        report.mesh_sequence.push(mesh);
        report.point_counts.push(net.len());
        report.magnitudes.push(value);
        report.estimate = value;
        if report.magnitudes.len() >= 2 && report.last_increment <= config.stop_tol {
            report.converged = true;
            break;
        }
    }
    if report.magnitudes.is_empty() {
        return Err(ApproxError::NetTooLarge {
            points: usize::MAX,
            cap: config.point_cap,
        });
    }
    Ok(report)
}

/// Convenience wrapper: [`estimate_compact_magnitude`] over uniform nets of
/// an interval union.
pub fn estimate_interval_union(
    union: &IntervalUnion,
    schedule: &[f64],
    config: EstimatorConfig,
) -> Result<ConvergenceReport, ApproxError> {
    estimate_compact_magnitude(
        |mesh| {
            let net = uniform_net(union, mesh)?;
            if net.len() > config.point_cap {
                return Err(ApproxError::NetTooLarge {
                    points: net.len(),
                    cap: config.point_cap,
                });
            }
            Ok(metric::from_points(&PointCloud::on_line(net.points())?)?)
        },
        schedule,
        config,
    )
}

/// Convenience wrapper: [`estimate_compact_magnitude`] over grid nets of a box.
pub fn estimate_box(bx: &AxisBox, p: f64, schedule: &[f64], config: EstimatorConfig) -> Result<ConvergenceReport, ApproxError> {
    estimate_compact_magnitude(
        |mesh| Ok(metric::from_points(&grid_net_lp(bx, mesh, p, config.point_cap)?)?),
        schedule,
        config,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnePointCurve {
    pub samples: Vec<(f64, f64)>,
    /// `|mg(t_last M) − 1|`
    pub final_deviation: f64,
}

/// `mg(tM)` along a schedule of scales decreasing toward 0.
pub fn one_point_curve(space: &FiniteMetricSpace, ts: &[f64]) -> Result<OnePointCurve, ApproxError> {
    if space.is_empty() {
        return Err(MetricError::EmptySet.into());
    }
    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0)) || ts.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(ApproxError::InvalidSchedule);
    }
    let mut samples = Vec::with_capacity(ts.len());
    for &t in ts {
        let value = metric::scale(space, t)
            .and_then(|s| metric::magnitude(&s))
            .map_err(|source| ApproxError::SolverFailure { at: t, source })?;
        samples.push((t, value));
    }
    let final_deviation = (samples.last().map(|s| s.1).unwrap_or(1.0) - 1.0).abs();
    Ok(OnePointCurve {
        samples,
        final_deviation,
    })
}

/// `{0} ∪ {(t/2ⁿ) eₙ : 1 ≤ n ≤ terms}` in ℓ₁^terms, a finite subset of the
/// closed convex hull whose magnitude is at most `e^{t/2}`.
pub fn kt_truncation(t: f64, terms: usize) -> Result<FiniteMetricSpace, ApproxError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(ApproxError::InvalidParameter(format!("t = {t} must be positive")));
    }
    if terms == 0 || terms > KT_MAX_TERMS {
        return Err(ApproxError::InvalidParameter(format!(
            "term count {terms} must be in 1..={KT_MAX_TERMS}"
        )));
    }
    let mut points = vec![vec![0.0; terms]];
    for n in 1..=terms {
        let mut x = vec![0.0; terms];
        x[n - 1] = t / 2f64.powi(n as i32);
        points.push(x);
    }
    Ok(metric::from_points(&PointCloud::new(terms, 1.0, points)?)?)
}

/// Which counterexample family a report belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CounterexampleParams {
    /// Odd multiples of δ against `[0, 2nδ]`: magnitude is not uniformly
    /// continuous on compact subsets of the half-line.
    HalfLine { epsilon: f64, delta: f64, n: usize },
    /// Even numbers against all numbers up to `2N`: magnitude is not
    /// Lipschitz on finite subsets of ℕ.
    Naturals { c: f64, n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub params: CounterexampleParams,
    pub set_a: String,
    pub set_b: String,
    pub hausdorff: f64,
    /// `mg(B) − mg(A)` from the closed forms.
    pub magnitude_gap: f64,
    /// The gap predicted by the explicit algebraic expression.
    pub predicted_gap: f64,
    pub violates: bool,
}

/// Builds `A = {(2k+1)δ : k < n}` and `B = [0, 2nδ]` with
/// `n = max(2, ⌈ε / (δ − tanh δ)⌉)`, so that `d_H(A, B) = δ` while
/// `mg(B) − mg(A) > ε`.
pub fn prop41_counterexample(epsilon: f64, delta: f64) -> Result<CounterexampleReport, ApproxError> {
    if !(epsilon > 0.0) || !(delta > 0.0) || !epsilon.is_finite() || !delta.is_finite() {
        return Err(ApproxError::InvalidParameter(format!(
            "epsilon = {epsilon} and delta = {delta} must be positive"
        )));
    }
    let slack = delta - delta.tanh();
    let needed = (epsilon / slack).ceil();
    if !(needed <= COUNTEREXAMPLE_MAX_POINTS as f64) {
        return Err(ApproxError::InvalidParameter(format!(
            "delta = {delta} needs more than {COUNTEREXAMPLE_MAX_POINTS} points"
        )));
    }
    let n = (needed as usize).max(2);
    let a = RealFiniteSet::new((0..n).map(|k| (2 * k + 1) as f64 * delta).collect())?;
    let b = IntervalUnion::interval(0.0, 2.0 * n as f64 * delta)?;
    let hausdorff = hausdorff_real(&a.to_union(), &b)?;
    let magnitude_gap = interval_union_magnitude(&b)? - real_finite_magnitude(&a)?;
    Ok(CounterexampleReport {
        params: CounterexampleParams::HalfLine { epsilon, delta, n },
        set_a: format!("{{(2k+1)*{delta} : 0 <= k < {n}}}"),
        set_b: format!("[0, {}]", 2.0 * n as f64 * delta),
        hausdorff,
        magnitude_gap,
        predicted_gap: n as f64 * slack + delta.tanh(),
        violates: magnitude_gap > epsilon,
    })
}

/// `2 tanh(1/2) − tanh(1)`, the per-step magnitude gain of filling in odd
/// numbers between consecutive even ones.
pub fn naturals_gap_rate() -> f64 {
    2.0 * 0.5f64.tanh() - 1f64.tanh()
}

/// Builds `A = {2k : k ≤ N}` and `B = {0, …, 2N}` with
/// `N = 1 + ⌊C / (2 tanh(1/2) − tanh 1)⌋`, so that `d_H(A, B) = 1` while
/// `mg(B) − mg(A) > C`.
pub fn remark42_counterexample(c: f64) -> Result<CounterexampleReport, ApproxError> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(ApproxError::InvalidParameter(format!("C = {c} must be positive")));
    }
    let rate = naturals_gap_rate();
    let steps = (c / rate).floor() + 1.0;
    if !(2.0 * steps < COUNTEREXAMPLE_MAX_POINTS as f64) {
        return Err(ApproxError::InvalidParameter(format!(
            "C = {c} needs more than {COUNTEREXAMPLE_MAX_POINTS} points"
        )));
    }
    let n = steps as usize;
    let a = RealFiniteSet::new((0..=n).map(|k| (2 * k) as f64).collect())?;
    let b = RealFiniteSet::new((0..=2 * n).map(|k| k as f64).collect())?;
    let hausdorff = hausdorff_real(&a.to_union(), &b.to_union())?;
    let magnitude_gap = real_finite_magnitude(&b)? - real_finite_magnitude(&a)?;
    Ok(CounterexampleReport {
        params: CounterexampleParams::Naturals { c, n },
        set_a: format!("{{2k : 0 <= k <= {n}}}"),
        set_b: format!("{{0, 1, ..., {}}}", 2 * n),
        hausdorff,
        magnitude_gap,
        predicted_gap: n as f64 * rate,
        violates: magnitude_gap > c * hausdorff,
    })
}

/// `Σ tanh(t·gap/2)` and its bound `(t/2)(max − min)` for a finite subset of
/// ℝ scaled by `t`.
pub fn real_one_point_excess(set: &RealFiniteSet, t: f64) -> Result<(f64, f64), ApproxError> {
    if !(t >= 0.0) {
        return Err(MetricError::NegativeScale(t).into());
    }
    let scaled = RealFiniteSet::new(set.points().iter().map(|x| x * t).collect());
    let excess = match scaled {
        Ok(s) => real_line::real_finite_magnitude(&s)? - 1.0,
        // t = 0 collapses every point
        Err(RealLineError::NotStrictlyIncreasing(_)) if t == 0.0 && !set.is_empty() => 0.0,
        Err(e) => return Err(e.into()),
    };
    Ok((excess, t / 2.0 * set.diameter()))
}
