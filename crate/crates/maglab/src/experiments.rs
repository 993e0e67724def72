//! The experiment runners behind each [`Kind`].

use std::fs;
use std::path::Path;
use std::time::Instant;

use maglab_core::approx::{self, AxisBox, CounterexampleParams, CounterexampleReport, EstimatorConfig};
use maglab_core::metric::{self, FiniteMetricSpace, PointCloud};
use maglab_core::real_line::{self, IntervalUnion, RealFiniteSet};
use maglab_core::{io, ConvergenceReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, Kind};
use crate::record::{fmt_num, Row, RunRecord, Verdict};
use crate::svg::LineChart;
use crate::HarnessError;

/// Slack on the Lipschitz ratio in scans.
pub const LIPSCHITZ_SLACK: f64 = 1e-9;
/// Tolerance on counterexample gaps against their algebraic expressions.
pub const GAP_TOLERANCE: f64 = 1e-10;
/// Slack on the ℓ₁ truncation bound.
pub const KT_SLACK: f64 = 1e-8;
/// Slack for monotonicity and one-sided bound checks.
pub const MONOTONE_SLACK: f64 = 1e-10;
/// Random subsets keep points at least this far apart.
pub const DEDUP_SPACING: f64 = 1e-9;
/// Random subsets have between 1 and this many points.
pub const MAX_RANDOM_SET_SIZE: usize = 20;

/// Runs the experiment described by `config`.
pub fn run(config: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let start = Instant::now();
    let mut record = match config.kind {
        Kind::Mag => run_mag(config)?,
        Kind::Magfun => run_magfun(config)?,
        Kind::Approx => run_approx(config)?,
        Kind::LipschitzScan => {
            let a = config.require("a")?;
            let b = config.require("b")?;
            let trials = config.get_or("trials", 1000usize)?;
            let seed = config.get_or("seed", 0u64)?;
            let mut rec = lipschitz_scan(a, b, trials, seed)?;
            rec.config = config.echo();
            rec
        }
        Kind::CounterexampleHalfline => run_halfline(config)?,
        Kind::CounterexampleNaturals => run_naturals(config)?,
        Kind::Onepoint => run_onepoint(config)?,
        Kind::KtBound => run_kt_bound(config)?,
    };
    record.duration = start.elapsed();
    Ok(record)
}

/// Writes `results.csv`, `plot.svg` (when the run has a plot) and `run.log`
/// into `dir`.
pub fn write_outputs(record: &RunRecord, dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    record.write_csv(fs::File::create(dir.join("results.csv"))?)?;
    if let Some(plot) = &record.plot {
        fs::write(dir.join("plot.svg"), plot.render())?;
    }
    let mut log = String::new();
    for (k, v) in &record.config {
        log.push_str(&format!("{k} = {v}\n"));
    }
    log.push_str(&format!(
        "# rows = {}\n# failures = {}\n# duration_seconds = {:.6}\n",
        record.rows.len(),
        record.rows.iter().filter(|r| r.verdict == Verdict::Fail).count(),
        record.duration.as_secs_f64()
    ));
    fs::write(dir.join("run.log"), log)?;
    Ok(())
}

fn input_error(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Input(e.to_string())
}

fn config_error(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(e.to_string())
}

/// A finite space loaded from `points`, `distances` or an inline `set`.
struct LoadedSpace {
    space: FiniteMetricSpace,
    /// Present when the space is a subset of the real line.
    line: Option<RealFiniteSet>,
    source: String,
}

fn load_space(config: &ExperimentConfig) -> Result<LoadedSpace, HarnessError> {
    let given: Vec<&str> = ["points", "distances", "set"]
        .into_iter()
        .filter(|k| config.has(k))
        .collect();
    if given.len() != 1 {
        return Err(HarnessError::Config(
            "exactly one of `points`, `distances` or `set` is required".into(),
        ));
    }
    let read = |key: &str| -> Result<String, HarnessError> {
        let path = config.path(key).expect("key present");
        fs::read_to_string(&path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
    };
    match given[0] {
        "points" => {
            let cloud = io::parse_point_cloud(&read("points")?).map_err(input_error)?;
            let space = metric::from_points(&cloud).map_err(input_error)?;
            let line = if cloud.dim() == 1 {
                let xs = cloud.points().iter().map(|x| x[0]).collect();
                Some(RealFiniteSet::from_unsorted(xs).map_err(input_error)?)
            } else {
                None
            };
            Ok(LoadedSpace {
                space,
                line,
                source: format!("points:{}", config.raw("points").unwrap_or_default()),
            })
        }
        "distances" => {
            let space = io::parse_distance_matrix(&read("distances")?).map_err(input_error)?;
            Ok(LoadedSpace {
                space,
                line: None,
                source: format!("distances:{}", config.raw("distances").unwrap_or_default()),
            })
        }
        _ => {
            let xs = config.list("set")?.unwrap_or_default();
            let set = RealFiniteSet::from_unsorted(xs).map_err(config_error)?;
            let space =
                metric::from_points(&PointCloud::on_line(set.points()).map_err(config_error)?).map_err(config_error)?;
            Ok(LoadedSpace {
                space,
                line: Some(set),
                source: "set".into(),
            })
        }
    }
}

/// `count` points from `lo` to `hi`, evenly spaced in log scale.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == count - 1 {
                hi
            } else {
                (l0 + (l1 - l0) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Scales from the `ts` list, or a log grid between `t_min` and `t_max`.
fn scale_schedule(config: &ExperimentConfig, lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, HarnessError> {
    if let Some(ts) = config.list("ts")? {
        if ts.is_empty() {
            return Err(config_error("`ts` is empty"));
        }
        return Ok(ts);
    }
    let lo = config.get_or("t_min", lo)?;
    let hi = config.get_or("t_max", hi)?;
    let count = config.get_or("t_count", count)?;
    if !(lo > 0.0 && lo <= hi) || count == 0 {
        return Err(config_error("need 0 < t_min <= t_max and t_count >= 1"));
    }
    Ok(log_grid(lo, hi, count))
}

fn supports_lower_bound(loaded: &LoadedSpace) -> bool {
    loaded.line.is_some() || loaded.space.norm_exponent().is_some_and(|p| (1.0..=2.0).contains(&p))
}

fn run_mag(config: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let loaded = load_space(config)?;
    let t = config.get_or("scale", 1.0)?;
    let expected: Option<f64> = config.get("expected")?;
    let tolerance = config.get_or("tolerance", 1e-10)?;
    let mut record = RunRecord::new(config.echo());
    let row = Row::new(0, "magnitude")
        .input("source", &loaded.source)
        .input("n", loaded.space.len())
        .input_num("t", t);
    let value = metric::scale(&loaded.space, t).and_then(|s| metric::magnitude(&s));
    record.push(match (value, expected) {
        (Ok(v), Some(e)) => row
            .value(v)
            .reference(e)
            .tolerance(tolerance)
            .verdict(Verdict::from_check((v - e).abs() <= tolerance)),
        (Ok(v), None) => row.value(v).verdict(Verdict::Pass),
        (Err(e), _) => row.verdict(Verdict::Fail).note(e.to_string()),
    });
    Ok(record)
}

fn run_magfun(config: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let loaded = load_space(config)?;
    let ts = scale_schedule(config, 1e-2, 1e2, 41)?;
    if ts.iter().any(|t| !(*t >= 0.0)) || ts.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(config_error("magnitude function scales must be nonnegative and ascending"));
    }
    let lower_bound = supports_lower_bound(&loaded);
    let mut record = RunRecord::new(config.echo());
    let mut curve = Vec::new();
    for (i, sample) in metric::magnitude_function_samples(&loaded.space, &ts).into_iter().enumerate() {
        let row = Row::new(i, "sample").input_num("t", sample.t).input("n", loaded.space.len());
        let row = match sample.value {
            Ok(v) => {
                curve.push((sample.t, v));
                if sample.t == 0.0 && !loaded.space.is_empty() {
                    row.value(v).reference(1.0).tolerance(0.0).verdict(Verdict::from_check(v == 1.0))
                } else if lower_bound && !loaded.space.is_empty() {
                    row.value(v)
                        .reference(1.0)
                        .tolerance(MONOTONE_SLACK)
                        .verdict(Verdict::from_check(v >= 1.0 - MONOTONE_SLACK))
                        .note("lower bound")
                } else {
                    row.value(v).verdict(Verdict::Pass)
                }
            }
            Err(e) => row.verdict(Verdict::Skip).note(format!("error: {e}")),
        };
        record.push(row);
    }
    let log_x = ts.iter().all(|&t| t > 0.0);
    record.plot = Some(
        LineChart::new(&format!("magnitude function ({})", loaded.source), "t", "mg(tM)", log_x)
            .with_series("mg(tM)", curve),
    );
    Ok(record)
}

enum ApproxTarget {
    Union(IntervalUnion),
    Box(AxisBox, f64),
}

fn approx_target(config: &ExperimentConfig) -> Result<ApproxTarget, HarnessError> {
    let sources = ["intervals", "intervals_file", "box_lower"]
        .into_iter()
        .filter(|k| config.has(k))
        .count();
    if sources != 1 {
        return Err(config_error(
            "exactly one of `intervals`, `intervals_file` or `box_lower`/`box_upper` is required",
        ));
    }
    if let Some(groups) = config.groups("intervals")? {
        let raw = groups
            .iter()
            .map(|g| match g[..] {
                [a, b] => Ok((a, b)),
                [a] => Ok((a, a)),
                _ => Err(config_error("each interval needs one or two numbers")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(ApproxTarget::Union(
            real_line::normalize_intervals(&raw).map_err(config_error)?,
        ));
    }
    if let Some(path) = config.path("intervals_file") {
        let text =
            fs::read_to_string(&path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
        return Ok(ApproxTarget::Union(io::parse_interval_union(&text).map_err(input_error)?));
    }
    let lower = config.list("box_lower")?.unwrap_or_default();
    let upper = config
        .list("box_upper")?
        .ok_or_else(|| config_error("`box_upper` is required with `box_lower`"))?;
    let p = config.get_or("p", 1.0)?;
    if !(1.0..=2.0).contains(&p) {
        return Err(config_error(format!("p = {p} is outside [1, 2]")));
    }
    Ok(ApproxTarget::Box(AxisBox::new(lower, upper).map_err(config_error)?, p))
}

fn run_approx(config: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let target = approx_target(config)?;
    let mesh_start = config.get_or("mesh_start", 1.0)?;
    let mesh_min = config.get_or("mesh_min", 2f64.powi(-10))?;
    if !(mesh_start > 0.0 && mesh_min > 0.0 && mesh_min < mesh_start) {
        return Err(config_error("need 0 < mesh_min < mesh_start"));
    }
    let est = EstimatorConfig {
        stop_tol: config.get_or("stop_tol", approx::DEFAULT_STOP_TOL)?,
        point_cap: config.get_or("point_cap", approx::DEFAULT_POINT_CAP)?,
    };
    let tolerance = config.get_or("tolerance", 1e-5)?;
    let schedule = approx::halving_schedule(mesh_start, mesh_min);

    let (result, exact, label) = match &target {
        ApproxTarget::Union(u) => (
            approx::estimate_interval_union(u, &schedule, est),
            Some(real_line::interval_union_magnitude(u).map_err(config_error)?),
            format!("{:?}", u.intervals()),
        ),
        ApproxTarget::Box(bx, p) => (
            approx::estimate_box(bx, *p, &schedule, est),
            None,
            format!("box {:?}..{:?} p={p}", bx.lower, bx.upper),
        ),
    };
    let mut record = RunRecord::new(config.echo());
    let report: ConvergenceReport = match result {
        Ok(r) => r,
        Err(e) => {
            record.push(Row::new(0, "estimate").input("target", &label).verdict(Verdict::Fail).note(e.to_string()));
            return Ok(record);
        }
    };
    for (i, ((&mesh, &count), &value)) in report
        .mesh_sequence
        .iter()
        .zip(&report.point_counts)
        .zip(&report.magnitudes)
        .enumerate()
    {
        let row = Row::new(i, "net").input_num("mesh", mesh).input("points", count).value(value);
        record.push(match exact {
            Some(x) => row
                .reference(x)
                .tolerance(MONOTONE_SLACK)
                .verdict(Verdict::from_check(value <= x + MONOTONE_SLACK))
                .note("net magnitude below compact magnitude"),
            None => row.verdict(Verdict::Pass).note("nondecreasing along refinement"),
        });
    }
    let summary = Row::new(report.magnitudes.len(), "estimate")
        .input("target", &label)
        .input("converged", report.converged)
        .input_num("last_increment", report.last_increment)
        .input_num("stop_tol", est.stop_tol)
        .value(report.estimate);
    record.push(match exact {
        Some(x) => summary
            .reference(x)
            .tolerance(tolerance)
            .verdict(Verdict::from_check((report.estimate - x).abs() <= tolerance)),
        None => summary.verdict(Verdict::Skip).note("no closed form"),
    });

    let curve: Vec<(f64, f64)> = report.mesh_sequence.iter().copied().zip(report.magnitudes.iter().copied()).collect();
    let mut chart = LineChart::new(&format!("net magnitudes for {label}"), "mesh", "magnitude", true)
        .with_series("net magnitude", curve);
    if let Some(x) = exact {
        let flat = report.mesh_sequence.iter().map(|&m| (m, x)).collect();
        chart = chart.with_series("closed form", flat);
    }
    record.plot = Some(chart);
    Ok(record)
}

/// Random finite subset of `[a, b]`: size uniform in `1..=20`, points
/// uniform, sorted, and thinned so neighbours are at least `1e-9` apart.
pub fn random_subset<R: Rng>(rng: &mut R, a: f64, b: f64) -> RealFiniteSet {
    let size = rng.random_range(1..=MAX_RANDOM_SET_SIZE);
    let mut xs: Vec<f64> = (0..size).map(|_| rng.random_range(a..=b)).collect();
    xs.sort_by(f64::total_cmp);
    let mut kept: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        if kept.last().is_none_or(|&last| x - last >= DEDUP_SPACING) {
            kept.push(x);
        }
    }
    RealFiniteSet::new(kept).expect("sorted and thinned")
}

fn set_string(set: &RealFiniteSet) -> String {
    let parts: Vec<String> = set.points().iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(" "))
}

/// Draws `trials` random pairs of finite subsets of `[a, b]` and checks
/// `|mg(A) − mg(B)| ≤ (1 + (b − a)/2) · d_H(A, B)` on each.
pub fn lipschitz_scan(a: f64, b: f64, trials: usize, seed: u64) -> Result<RunRecord, HarnessError> {
    let coefficient = real_line::lipschitz_coefficient(a, b).map_err(config_error)?;
    if trials == 0 {
        return Err(config_error("trials must be at least 1"));
    }
    let mut record = RunRecord::new(vec![
        ("kind".into(), Kind::LipschitzScan.to_string()),
        ("a".into(), a.to_string()),
        ("b".into(), b.to_string()),
        ("trials".into(), trials.to_string()),
        ("seed".into(), seed.to_string()),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, RealFiniteSet, RealFiniteSet, f64)> = None;
    let mut skipped = 0usize;

    for trial in 0..trials {
        let sa = random_subset(&mut rng, a, b);
        let sb = random_subset(&mut rng, a, b);
        let d = real_line::hausdorff_real(&sa.to_union(), &sb.to_union()).map_err(config_error)?;
        let gap = (real_line::real_finite_magnitude(&sa).map_err(config_error)?
            - real_line::real_finite_magnitude(&sb).map_err(config_error)?)
        .abs();
        let row = Row::new(trial, "pair")
            .input("size_a", sa.len())
            .input("size_b", sb.len())
            .input_num("hausdorff", d)
            .input_num("gap", gap);
        if d == 0.0 {
            skipped += 1;
            record.push(row.verdict(Verdict::Skip).note("identical sets, d_H = 0"));
            continue;
        }
        let ratio = gap / d;
        record.push(
            row.value(ratio)
                .reference(coefficient)
                .tolerance(LIPSCHITZ_SLACK)
                .verdict(Verdict::from_check(ratio <= coefficient + LIPSCHITZ_SLACK)),
        );
        if best.as_ref().is_none_or(|b| ratio > b.0) {
            best = Some((ratio, sa, sb, d));
        }
    }

    let summary = Row::new(trials, "max-ratio").input("skipped", skipped);
    record.push(match best {
        Some((ratio, sa, sb, d)) => summary
            .input("a_set", set_string(&sa))
            .input("b_set", set_string(&sb))
            .input_num("hausdorff", d)
            .value(ratio)
            .reference(coefficient)
            .tolerance(LIPSCHITZ_SLACK)
            .verdict(Verdict::from_check(ratio <= coefficient + LIPSCHITZ_SLACK)),
        None => summary.verdict(Verdict::Skip).note("every pair was identical"),
    });
    Ok(record)
}

/// Maximum Lipschitz ratio observed in a scan, from its summary row.
pub fn max_ratio(record: &RunRecord) -> Option<f64> {
    record
        .rows
        .iter()
        .rev()
        .find(|r| r.label == "max-ratio")
        .and_then(|r| r.value)
}

fn counterexample_row(trial: usize, report: &CounterexampleReport) -> Row {
    let (row, threshold, hausdorff_ok) = match report.params {
        CounterexampleParams::HalfLine { epsilon, delta, n } => (
            Row::new(trial, "halfline")
                .input_num("epsilon", epsilon)
                .input_num("delta", delta)
                .input("n", n),
            epsilon,
            report.hausdorff == delta,
        ),
        CounterexampleParams::Naturals { c, n } => (
            Row::new(trial, "naturals").input_num("c", c).input("n", n),
            c * report.hausdorff,
            report.hausdorff == 1.0,
        ),
    };
    let exact = (report.magnitude_gap - report.predicted_gap).abs() <= GAP_TOLERANCE;
    row.value(report.magnitude_gap)
        .reference(report.predicted_gap)
        .tolerance(GAP_TOLERANCE)
        .verdict(Verdict::from_check(exact && report.violates && hausdorff_ok))
        .note(format!(
            "A={} B={} d_H={} threshold={} violates={}",
            report.set_a,
            report.set_b,
            fmt_num(report.hausdorff),
            fmt_num(threshold),
            report.violates
        ))
}

fn run_halfline(config: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let eps = config.list("epsilon")?.unwrap_or_else(|| vec![1.0]);
    let deltas = config.list("delta")?.unwrap_or_else(|| vec![1.0]);
    let pairs: Vec<(f64, f64)> = match (eps.len(), deltas.len()) {
        (n, m) if n == m => eps.into_iter().zip(deltas).collect(),
        (1, _) => deltas.iter().map(|&d| (eps[0], d)).collect(),
        (_, 1) => eps.iter().map(|&e| (e, deltas[0])).collect(),
        _ => return Err(config_error("`epsilon` and `delta` lists differ in length")),
    };
    let mut record = RunRecord::new(config.echo());
    for (i, (e, d)) in pairs.into_iter().enumerate() {
        let report = approx::prop41_counterexample(e, d).map_err(config_error)?;
        record.push(counterexample_row(i, &report));
    }
    Ok(record)
}

fn run_naturals(config: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let cs = config.list("c")?.unwrap_or_else(|| vec![1.0]);
    let mut record = RunRecord::new(config.echo());
    for (i, c) in cs.into_iter().enumerate() {
        let report = approx::remark42_counterexample(c).map_err(config_error)?;
        record.push(counterexample_row(i, &report));
    }
    Ok(record)
}

fn run_onepoint(config: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let loaded = load_space(config)?;
    let mut ts = scale_schedule(config, 1e-3, 1.0, 13)?;
    if !config.has("ts") {
        ts.reverse();
    }
    let mut record = RunRecord::new(config.echo());
    let curve = match approx::one_point_curve(&loaded.space, &ts) {
        Ok(c) => c,
        Err(e) => {
            record.push(Row::new(0, "curve").input("source", &loaded.source).verdict(Verdict::Fail).note(e.to_string()));
            return Ok(record);
        }
    };
    for (i, &(t, v)) in curve.samples.iter().enumerate() {
        let row = Row::new(i, "sample").input_num("t", t).value(v);
        record.push(match &loaded.line {
            Some(set) => {
                let limit = 1.0 + t / 2.0 * set.diameter();
                row.reference(limit)
                    .tolerance(MONOTONE_SLACK)
                    .verdict(Verdict::from_check(v <= limit + MONOTONE_SLACK))
                    .note("mg(tA) - 1 <= (t/2)(max - min)")
            }
            None => row.verdict(Verdict::Skip).note("no closed-form bound"),
        });
    }
    record.push(
        Row::new(curve.samples.len(), "final-deviation")
            .input_num("t", *ts.last().expect("nonempty schedule"))
            .value(curve.final_deviation)
            .verdict(Verdict::Skip),
    );
    record.plot = Some(
        LineChart::new(&format!("one-point curve ({})", loaded.source), "t", "mg(tM)", true)
            .with_series("mg(tM)", curve.samples.clone()),
    );
    Ok(record)
}

fn run_kt_bound(config: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let ts = config.list("t")?.unwrap_or_else(|| vec![0.25, 0.5, 1.0, 2.0]);
    let terms = config.list("terms")?.unwrap_or_else(|| vec![1.0, 5.0, 10.0, 20.0]);
    let terms: Vec<usize> = terms
        .into_iter()
        .map(|n| {
            if n >= 1.0 && n.fract() == 0.0 {
                Ok(n as usize)
            } else {
                Err(config_error(format!("term count {n} is not a positive integer")))
            }
        })
        .collect::<Result<_, _>>()?;
    if terms.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config_error("`terms` must be strictly increasing"));
    }
    let mut record = RunRecord::new(config.echo());
    let mut trial = 0;
    for &t in &ts {
        let bound = (t / 2.0).exp();
        let mut previous: Option<f64> = None;
        for &n in &terms {
            let row = Row::new(trial, "truncation").input_num("t", t).input("terms", n);
            trial += 1;
            let value = approx::kt_truncation(t, n)
                .map_err(config_error)
                .and_then(|s| metric::magnitude(&s).map_err(|e| HarnessError::Input(e.to_string())));
            let row = match value {
                Ok(v) => {
                    let rising = previous.is_none_or(|p| v >= p - MONOTONE_SLACK);
                    previous = Some(v);
                    row.value(v)
                        .reference(bound)
                        .tolerance(KT_SLACK)
                        .verdict(Verdict::from_check(v <= bound + KT_SLACK && rising))
                        .note(if rising { "" } else { "decreased in N" })
                }
                Err(e) => row.verdict(Verdict::Fail).note(e.to_string()),
            };
            record.push(row);
        }
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: Kind, text: &str) -> ExperimentConfig {
        ExperimentConfig::parse(kind, text, Path::new(".")).unwrap()
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1.0, 4);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[3], 1.0);
        assert!((g[1] - 1e-2).abs() < 1e-15);
        assert_eq!(log_grid(2.0, 5.0, 1), vec![2.0]);
    }

    #[test]
    fn random_subsets_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = random_subset(&mut rng, 0.0, 1.0);
            assert!((1..=MAX_RANDOM_SET_SIZE).contains(&s.len()));
            assert!(s.points().iter().all(|&x| (0.0..=1.0).contains(&x)));
            assert!(s.points().windows(2).all(|w| w[1] - w[0] >= DEDUP_SPACING));
        }
    }

    #[test]
    fn mag_on_inline_set() {
        let rec = run(&cfg(Kind::Mag, "set = 0 1\nexpected = 1.4621171572600098\n")).unwrap();
        assert!(rec.passed());
        assert_eq!(rec.rows.len(), 1);
        let rec = run(&cfg(Kind::Mag, "set = 0 1\nexpected = 1.5\n")).unwrap();
        assert!(!rec.passed());
        assert!(run(&cfg(Kind::Mag, "scale = 1\n")).is_err());
    }

    #[test]
    fn halfline_rows() {
        let rec = run(&cfg(Kind::CounterexampleHalfline, "epsilon = 1, 0.1, 2\ndelta = 1, 0.5, 0.25\n")).unwrap();
        assert!(rec.passed());
        assert_eq!(rec.rows.len(), 3);
        assert!(rec.rows[0].inputs.contains("n=5"));
        assert!((rec.rows[0].value.unwrap() - 1.9536).abs() < 1e-4);
        let bad = run(&cfg(Kind::CounterexampleHalfline, "epsilon = 1, 2\ndelta = 1, 2, 3\n"));
        assert!(matches!(bad, Err(HarnessError::Config(_))));
    }

    #[test]
    fn naturals_rows() {
        let rec = run(&cfg(Kind::CounterexampleNaturals, "c = 0.1, 1, 5\n")).unwrap();
        assert!(rec.passed());
        assert!(rec.rows[1].inputs.contains("n=7"));
    }

    #[test]
    fn approx_unit_interval_defaults() {
        let rec = run(&cfg(Kind::Approx, "intervals = 0 1\n")).unwrap();
        assert!(rec.passed());
        let last = rec.rows.last().unwrap();
        assert!((last.value.unwrap() - 1.5).abs() <= 5e-6);
        assert!(last.inputs.contains("converged=true"));
        assert!(rec.plot.is_some());
    }

    #[test]
    fn approx_box_reports_without_closed_form() {
        let rec = run(&cfg(
            Kind::Approx,
            "box_lower = 0 0\nbox_upper = 1 1\np = 2\nmesh_min = 0.125\n",
        ))
        .unwrap();
        assert!(rec.passed());
        assert_eq!(rec.rows.last().unwrap().verdict, Verdict::Skip);
        assert!(run(&cfg(Kind::Approx, "intervals = 0 1\nbox_lower = 0\nbox_upper = 1\n")).is_err());
    }

    #[test]
    fn onepoint_and_magfun() {
        let rec = run(&cfg(Kind::Onepoint, "set = 0 1\nts = 1, 0.1, 0.001\n")).unwrap();
        assert!(rec.passed());
        let last_sample = &rec.rows[2];
        assert!(last_sample.value.unwrap() - 1.0 <= 6e-4);
        let rec = run(&cfg(Kind::Magfun, "set = 0 1 2\nts = 0, 0.5, 1, 2\n")).unwrap();
        assert!(rec.passed());
        assert_eq!(rec.rows[0].value, Some(1.0));
        assert!(run(&cfg(Kind::Magfun, "set = 0 1\nts = 2, 1\n")).is_err());
    }

    #[test]
    fn kt_rows() {
        let rec = run(&cfg(Kind::KtBound, "")).unwrap();
        assert_eq!(rec.rows.len(), 16);
        assert!(rec.passed());
        assert!(run(&cfg(Kind::KtBound, "terms = 5, 1\n")).is_err());
    }

    #[test]
    fn small_scan() {
        let rec = lipschitz_scan(0.0, 1.0, 50, 1).unwrap();
        assert!(rec.passed());
        assert_eq!(rec.rows.len(), 51);
        assert!(max_ratio(&rec).unwrap() <= 1.5 + LIPSCHITZ_SLACK);
        assert!(lipschitz_scan(1.0, 1.0, 5, 0).is_err());
    }
}
