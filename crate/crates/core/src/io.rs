//! Plain-text input formats.
//!
//! * Point cloud: header `dim=<N> p=<p>` (`p=inf` allowed), then one point
//!   per line as whitespace-separated decimals.
//! * Distance matrix: header `n=<n>`, then `n` rows of `n` decimals.
//! * Interval union: one `a b` pair per line, in any order; overlaps are
//!   merged on load.
//!
//! Blank lines are ignored and `#` starts a comment anywhere on a line.

use thiserror::Error;

use crate::metric::{self, FiniteMetricSpace, MetricError, PointCloud};
use crate::real_line::{normalize_intervals, IntervalUnion, RealLineError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    RealLine(#[from] RealLineError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty content lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<f64>, ParseError> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| syntax(line, format!("invalid number `{tok}`")))
        })
        .collect()
}

/// Parses `key=value` tokens of a header line, requiring exactly `keys`.
fn parse_header<'a>(line: usize, body: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, ParseError> {
    let mut values = vec![None; keys.len()];
    for tok in body.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected key=value, got `{tok}`")))?;
        let slot = keys
            .iter()
            .position(|&key| key == k.trim())
            .ok_or_else(|| syntax(line, format!("unknown header key `{k}`")))?;
        if values[slot].replace(v.trim()).is_some() {
            return Err(syntax(line, format!("duplicate header key `{k}`")));
        }
    }
    values
        .into_iter()
        .zip(keys)
        .map(|(v, k)| v.ok_or_else(|| syntax(line, format!("header is missing `{k}`"))))
        .collect()
}

pub fn parse_point_cloud(text: &str) -> Result<PointCloud, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let fields = parse_header(hl, header, &["dim", "p"])?;
    let dim: usize = fields[0]
        .parse()
        .map_err(|_| syntax(hl, format!("invalid dim `{}`", fields[0])))?;
    let p: f64 = match fields[1] {
        "inf" | "infinity" => f64::INFINITY,
        s => s
            .parse()
            .ok()
            .filter(|p: &f64| p.is_finite())
            .ok_or_else(|| syntax(hl, format!("invalid p `{s}`")))?,
    };
    let mut points = Vec::new();
    for (ln, body) in lines {
        let x = parse_numbers(ln, body)?;
        if x.len() != dim {
            return Err(syntax(ln, format!("expected {dim} coordinates, got {}", x.len())));
        }
        points.push(x);
    }
    Ok(PointCloud::new(dim, p, points)?)
}

/// Parses the rows of a distance matrix without validating the metric axioms.
pub fn parse_distance_rows(text: &str) -> Result<Vec<Vec<f64>>, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let fields = parse_header(hl, header, &["n"])?;
    let n: usize = fields[0]
        .parse()
        .map_err(|_| syntax(hl, format!("invalid n `{}`", fields[0])))?;
    let mut rows = Vec::with_capacity(n);
    for (ln, body) in lines {
        let row = parse_numbers(ln, body)?;
        if row.len() != n {
            return Err(syntax(ln, format!("expected {n} entries, got {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(ParseError::RowCount {
            expected: n,
            found: rows.len(),
        });
    }
    Ok(rows)
}

pub fn parse_distance_matrix(text: &str) -> Result<FiniteMetricSpace, ParseError> {
    Ok(metric::from_distance_matrix(&parse_distance_rows(text)?, None)?)
}

pub fn parse_interval_union(text: &str) -> Result<IntervalUnion, ParseError> {
    let mut raw = Vec::new();
    for (ln, body) in content_lines(text) {
        match parse_numbers(ln, body)?[..] {
            [a, b] => raw.push((a, b)),
            _ => return Err(syntax(ln, "expected an `a b` pair")),
        }
    }
    Ok(normalize_intervals(&raw)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_cloud_file() {
        let text = "# unit square\ndim=2 p=1\n0 0\n1 0  # right\n\n0 1\n1 1\n";
        let cloud = parse_point_cloud(text).unwrap();
        assert_eq!(cloud.len(), 4);
        assert_eq!(cloud.p(), 1.0);
        assert_eq!(cloud.points()[1], vec![1.0, 0.0]);
        let inf = parse_point_cloud("p=inf dim=1\n3\n").unwrap();
        assert!(inf.p().is_infinite());
    }

    #[test]
    fn point_cloud_errors() {
        assert_eq!(parse_point_cloud("# nothing\n"), Err(ParseError::MissingHeader));
        assert!(matches!(
            parse_point_cloud("dim=2\n0 0\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_point_cloud("dim=2 p=2\n0 0\n1\n"),
            Err(ParseError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_point_cloud("dim=1 p=2\nabc\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_point_cloud("dim=1 p=0.5\n1\n"),
            Err(ParseError::Metric(MetricError::InvalidCloud(_)))
        ));
    }

    #[test]
    fn distance_file() {
        let space = parse_distance_matrix("n=2\n0 1\n1 0\n").unwrap();
        assert_eq!(space.distance(0, 1), 1.0);
        assert_eq!(
            parse_distance_matrix("n=2\n0 1\n"),
            Err(ParseError::RowCount { expected: 2, found: 1 })
        );
        assert!(matches!(
            parse_distance_matrix("n=2\n0 1\n2 0\n"),
            Err(ParseError::Metric(MetricError::NotAMetric { .. }))
        ));
        assert!(parse_distance_matrix("n=0\n").unwrap().is_empty());
    }

    #[test]
    fn interval_file() {
        let u = parse_interval_union("2 3\n0 1 # first\n0.5 1.5\n").unwrap();
        assert_eq!(u.intervals(), &[(0.0, 1.5), (2.0, 3.0)]);
        assert!(matches!(
            parse_interval_union("1 2 3\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_interval_union("3 1\n"),
            Err(ParseError::RealLine(RealLineError::InvertedInterval(..)))
        ));
    }
}
