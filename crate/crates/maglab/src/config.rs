//! Flat `key = value` experiment configs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::HarnessError;

/// The experiments the harness knows how to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Kind {
    Mag,
    Magfun,
    Approx,
    LipschitzScan,
    CounterexampleHalfline,
    CounterexampleNaturals,
    Onepoint,
    KtBound,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Mag,
        Kind::Magfun,
        Kind::Approx,
        Kind::LipschitzScan,
        Kind::CounterexampleHalfline,
        Kind::CounterexampleNaturals,
        Kind::Onepoint,
        Kind::KtBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Mag => "mag",
            Kind::Magfun => "magfun",
            Kind::Approx => "approx",
            Kind::LipschitzScan => "lipschitz-scan",
            Kind::CounterexampleHalfline => "counterexample-halfline",
            Kind::CounterexampleNaturals => "counterexample-naturals",
            Kind::Onepoint => "onepoint",
            Kind::KtBound => "kt-bound",
        }
    }

    /// Keys accepted in a config of this kind, besides the common ones.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Kind::Mag => &["points", "distances", "set", "scale", "expected", "tolerance"],
            Kind::Magfun => &["points", "distances", "set", "ts", "t_min", "t_max", "t_count"],
            Kind::Approx => &[
                "intervals",
                "intervals_file",
                "box_lower",
                "box_upper",
                "p",
                "mesh_start",
                "mesh_min",
                "stop_tol",
                "point_cap",
                "tolerance",
            ],
            Kind::LipschitzScan => &["a", "b", "trials"],
            Kind::CounterexampleHalfline => &["epsilon", "delta"],
            Kind::CounterexampleNaturals => &["c"],
            Kind::Onepoint => &["points", "distances", "set", "ts", "t_min", "t_max", "t_count"],
            Kind::KtBound => &["t", "terms"],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment kind `{s}`")))
    }
}

const COMMON_KEYS: [&str; 3] = ["kind", "out", "seed"];

/// A parsed config: the experiment kind plus its raw parameters.
///
/// Values stay as strings until an experiment asks for them with a type;
/// relative paths resolve against `base_dir`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub params: BTreeMap<String, String>,
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(kind: Kind) -> Self {
        ExperimentConfig {
            kind,
            params: BTreeMap::new(),
            base_dir: PathBuf::from("."),
        }
    }

    /// Parses config text for `kind`. Unknown and repeated keys are errors,
    /// as is a `kind` line naming a different experiment.
    pub fn parse(kind: Kind, text: &str, base_dir: &Path) -> Result<Self, HarnessError> {
        let mut config = ExperimentConfig {
            kind,
            params: BTreeMap::new(),
            base_dir: base_dir.to_path_buf(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "kind" {
                let named: Kind = value.parse()?;
                if named != kind {
                    return Err(HarnessError::Config(format!(
                        "config is for `{named}` but `{kind}` was requested"
                    )));
                }
            }
            config.set(key, value).map_err(|e| match e {
                HarnessError::Config(m) => HarnessError::Config(format!("line {}: {m}", i + 1)),
                other => other,
            })?;
        }
        Ok(config)
    }

    pub fn load(kind: Kind, path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(kind, &text, base)
    }

    /// Sets one parameter, rejecting keys this kind does not use.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        if !COMMON_KEYS.contains(&key) && !self.kind.keys().contains(&key) {
            return Err(HarnessError::Config(format!(
                "unknown key `{key}` for experiment `{}`",
                self.kind
            )));
        }
        if self.params.insert(key.to_string(), value.to_string()).is_some() {
            return Err(HarnessError::Config(format!("key `{key}` given twice")));
        }
        Ok(())
    }

    /// Like [`set`](Self::set) but replaces an existing value.
    pub fn override_param(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        self.params.remove(key);
        self.set(key, value)
    }

    pub fn has(&self, key: &str) -> bool {
        self.params.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, HarnessError> {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| HarnessError::Config(format!("invalid value `{v}` for `{key}`")))
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, HarnessError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, HarnessError> {
        self.get(key)?
            .ok_or_else(|| HarnessError::Config(format!("missing required key `{key}`")))
    }

    /// Comma- or whitespace-separated list of numbers.
    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>, HarnessError> {
        self.raw(key).map(|v| parse_list(key, v)).transpose()
    }

    /// Comma-separated groups of whitespace-separated numbers, e.g.
    /// `0 1, 2 3`.
    pub fn groups(&self, key: &str) -> Result<Option<Vec<Vec<f64>>>, HarnessError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|g| {
                        g.split_whitespace()
                            .map(|tok| parse_number(key, tok))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(|v| self.base_dir.join(v))
    }

    /// Parameters as `key=value` lines, sorted by key.
    pub fn echo(&self) -> Vec<(String, String)> {
        std::iter::once(("kind".to_string(), self.kind.to_string()))
            .chain(
                self.params
                    .iter()
                    .filter(|(k, _)| k.as_str() != "kind")
                    .map(|(k, v)| (k.clone(), v.clone())),
            )
            .collect()
    }
}

fn parse_number(key: &str, tok: &str) -> Result<f64, HarnessError> {
    tok.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| HarnessError::Config(format!("invalid number `{tok}` in `{key}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, HarnessError> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|tok| parse_number(key, tok))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let text = "# scan\nkind = lipschitz-scan\na = 0\nb = 10 # upper\n\ntrials=50\nseed = 7\n";
        let cfg = ExperimentConfig::parse(Kind::LipschitzScan, text, Path::new("/tmp")).unwrap();
        assert_eq!(cfg.require::<f64>("b").unwrap(), 10.0);
        assert_eq!(cfg.get::<u64>("seed").unwrap(), Some(7));
        assert_eq!(cfg.get_or("trials", 1usize).unwrap(), 50);
        assert_eq!(cfg.echo()[0], ("kind".to_string(), "lipschitz-scan".to_string()));
    }

    #[test]
    fn rejects_bad_input() {
        let p = Path::new(".");
        assert!(ExperimentConfig::parse(Kind::Mag, "bogus = 1\n", p).is_err());
        assert!(ExperimentConfig::parse(Kind::Mag, "scale 1\n", p).is_err());
        assert!(ExperimentConfig::parse(Kind::Mag, "scale = 1\nscale = 2\n", p).is_err());
        assert!(ExperimentConfig::parse(Kind::Mag, "kind = approx\n", p).is_err());
        let cfg = ExperimentConfig::parse(Kind::Mag, "scale = x\n", p).unwrap();
        assert!(cfg.get::<f64>("scale").is_err());
        assert!(cfg.require::<f64>("expected").is_err());
    }

    #[test]
    fn lists_and_groups() {
        let cfg = ExperimentConfig::parse(
            Kind::Approx,
            "intervals = 0 1, 2 3\nmesh_start = 0.5\n",
            Path::new("."),
        )
        .unwrap();
        assert_eq!(
            cfg.groups("intervals").unwrap().unwrap(),
            vec![vec![0.0, 1.0], vec![2.0, 3.0]]
        );
        let cfg = ExperimentConfig::parse(Kind::KtBound, "t = 0.25, 0.5 1\n", Path::new(".")).unwrap();
        assert_eq!(cfg.list("t").unwrap().unwrap(), vec![0.25, 0.5, 1.0]);
        assert_eq!(cfg.list("terms").unwrap(), None);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
        }
    }
}
