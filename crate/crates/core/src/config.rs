//! Run configuration: a flat `key = value` file plus command-line overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::exact::{GaussianRational as Gq, ParamSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("key {key:?}: {reason}")]
    BadValue { key: String, reason: String },
    #[error("unknown suite {0:?} (expected exact, analytic, qkz, kz, trace or all)")]
    UnknownSuite(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("the parameters do not form a valid instance: {0}")]
    Instance(String),
}

/// The five check groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Exact,
    Analytic,
    Qkz,
    Kz,
    Trace,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Exact, Suite::Analytic, Suite::Qkz, Suite::Kz, Suite::Trace];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exact => "exact",
            Suite::Analytic => "analytic",
            Suite::Qkz => "qkz",
            Suite::Kz => "kz",
            Suite::Trace => "trace",
        }
    }
}

impl FromStr for Suite {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

/// Parse a comma-separated suite list; `all` selects every suite.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>, ConfigError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    if out.is_empty() {
        return Err(ConfigError::BadValue { key: "suite".into(), reason: "empty suite list".into() });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Everything a run needs. Rationals are written `a` or `a/b`.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub ell: usize,
    pub z: Vec<String>,
    pub hbar_re: String,
    pub hbar_im: String,
    pub suites: Vec<Suite>,
    /// Random probes for probabilistic exact zero tests.
    pub probes: usize,
    /// Tolerance of the configured-instance numeric checks.
    pub tol: f64,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 4,
            ell: 2,
            z: vec!["0".into(), "1".into(), "2".into(), "3".into()],
            hbar_re: "0".into(),
            hbar_im: "-1/2".into(),
            suites: Suite::ALL.to_vec(),
            probes: 20,
            tol: 1e-6,
            seed: 1,
            out: PathBuf::from("levelzero-report"),
            jobs: 1,
        }
    }
}

fn rational(key: &str, s: &str) -> Result<BigRational, ConfigError> {
    BigRational::from_str(s.trim())
        .map_err(|e| ConfigError::BadValue { key: key.into(), reason: format!("{s:?} is not a rational ({e})") })
}

fn number<T: FromStr>(key: &str, s: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e: T::Err| ConfigError::BadValue { key: key.into(), reason: e.to_string() })
}

impl RunConfig {
    /// Apply one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "n" => self.n = number(key, v)?,
            "ell" => self.ell = number(key, v)?,
            "z" => {
                let parts: Vec<String> = v.split(',').map(|s| s.trim().to_string()).collect();
                for p in &parts {
                    rational(key, p)?;
                }
                self.z = parts;
            }
            "hbar_re" => {
                rational(key, v)?;
                self.hbar_re = v.into();
            }
            "hbar_im" => {
                rational(key, v)?;
                self.hbar_im = v.into();
            }
            "suite" | "suites" => self.suites = parse_suites(v)?,
            "probes" => self.probes = number(key, v)?,
            "tol" => {
                let t: f64 = number(key, v)?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(ConfigError::BadValue { key: key.into(), reason: "must be positive".into() });
                }
                self.tol = t;
            }
            "seed" => self.seed = number(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "jobs" => {
                let j: usize = number(key, v)?;
                if j == 0 {
                    return Err(ConfigError::BadValue { key: key.into(), reason: "must be at least 1".into() });
                }
                self.jobs = j;
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Parse a config file body on top of the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: i + 1, text: raw.to_string() })?;
            cfg.set(k.trim(), v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text)
    }

    /// Check that the instance parameters form a usable parameter set.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.instance().map(|_| ())
    }

    /// The configured instance as an exact parameter set.
    pub fn instance(&self) -> Result<ParamSet, ConfigError> {
        if self.z.len() != self.n {
            return Err(ConfigError::BadValue {
                key: "z".into(),
                reason: format!("{} points given for n = {}", self.z.len(), self.n),
            });
        }
        let z = self
            .z
            .iter()
            .map(|s| Ok(Gq::new(rational("z", s)?, BigRational::from_integer(0.into()))))
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let hbar = Gq::new(rational("hbar_re", &self.hbar_re)?, rational("hbar_im", &self.hbar_im)?);
        let ps = ParamSet::new(self.n, self.ell, z, hbar).map_err(|e| ConfigError::Instance(e.to_string()))?;
        ps.check_resonance().map_err(|e| ConfigError::Instance(e.to_string()))?;
        if ps.p_c64().im >= 0.0 {
            return Err(ConfigError::Instance("hbar needs a negative imaginary part".into()));
        }
        Ok(ps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg.n, 4);
        assert_eq!(cfg.suites.len(), 5);
        let ps = cfg.instance().unwrap();
        assert_eq!(ps.hbar, Gq::complex_frac(0, 1, -1, 2));
    }

    #[test]
    fn keys_and_comments() {
        let cfg = RunConfig::parse("# instance\nn = 3\nell = 1\nz = 0, 1/2, 2\nsuite = qkz,exact\nseed=7 # trailing\n").unwrap();
        assert_eq!(cfg.n, 3);
        assert_eq!(cfg.suites, vec![Suite::Exact, Suite::Qkz]);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn bad_input_is_rejected() {
        assert!(matches!(RunConfig::parse("colour = red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(RunConfig::parse("z = 0, 1, x, 3"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(RunConfig::parse("z = 0, 1, 2"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(RunConfig::parse("just text"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(RunConfig::parse("suite = everything"), Err(ConfigError::UnknownSuite(_))));
        assert!(matches!(RunConfig::parse("hbar_im = 1/2"), Err(ConfigError::Instance(_))));
        assert!(matches!(RunConfig::parse("z = 0, 0, 2, 3"), Err(ConfigError::Instance(_))));
    }
}
