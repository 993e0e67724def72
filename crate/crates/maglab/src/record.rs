//! Run records and their CSV form.

use std::io::Write;
use std::time::Duration;

use crate::svg::LineChart;
use crate::HarnessError;

pub const CSV_HEADER: [&str; 8] = [
    "trial",
    "label",
    "inputs",
    "value",
    "reference",
    "tolerance",
    "verdict",
    "note",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Row recorded for completeness but not asserted on.
    Skip,
}

impl Verdict {
    pub fn from_check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skip => "skip",
        }
    }
}

/// One self-describing result line.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub trial: usize,
    pub label: String,
    /// `key=value` pairs joined by `;`
    pub inputs: String,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    pub note: String,
}

impl Row {
    pub fn new(trial: usize, label: impl Into<String>) -> Self {
        Row {
            trial,
            label: label.into(),
            inputs: String::new(),
            value: None,
            reference: None,
            tolerance: None,
            verdict: Verdict::Skip,
            note: String::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        if !self.inputs.is_empty() {
            self.inputs.push(';');
        }
        self.inputs.push_str(&format!("{key}={value}"));
        self
    }

    pub fn input_num(self, key: &str, value: f64) -> Self {
        self.input(key, fmt_num(value))
    }

    pub fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn reference(mut self, v: f64) -> Self {
        self.reference = Some(v);
        self
    }

    pub fn tolerance(mut self, v: f64) -> Self {
        self.tolerance = Some(v);
        self
    }

    pub fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Everything one experiment run produced.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config: Vec<(String, String)>,
    pub rows: Vec<Row>,
    pub plot: Option<LineChart>,
    pub duration: Duration,
}

impl RunRecord {
    pub fn new(config: Vec<(String, String)>) -> Self {
        RunRecord {
            config,
            rows: Vec::new(),
            plot: None,
            duration: Duration::ZERO,
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn first_failure(&self) -> Option<&Row> {
        self.rows.iter().find(|r| r.verdict == Verdict::Fail)
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.trial.to_string(),
                r.label.clone(),
                r.inputs.clone(),
                fmt_opt(r.value),
                fmt_opt(r.reference),
                fmt_opt(r.tolerance),
                r.verdict.as_str().to_string(),
                r.note.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1.4621171572600098, -2.5e-300, 6.0] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let mut rec = RunRecord::new(vec![]);
        rec.push(
            Row::new(0, "mag")
                .input("n", 2)
                .input_num("t", 1.0)
                .value(1.5)
                .tolerance(1e-10)
                .verdict(Verdict::Pass)
                .note("a, b"),
        );
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "trial,label,inputs,value,reference,tolerance,verdict,note");
        assert_eq!(
            lines[1],
            "0,mag,n=2;t=1.0000000000000000e0,1.5000000000000000e0,,1.0000000000000000e-10,pass,\"a, b\""
        );
        assert!(rec.passed());
        rec.push(Row::new(1, "x").verdict(Verdict::Fail));
        assert_eq!(rec.first_failure().unwrap().trial, 1);
    }
}
