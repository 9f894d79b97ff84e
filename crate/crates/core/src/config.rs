//! Run configuration shared by the command-line tool and the examples.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kirillov::DEFAULT_RANK_TOL;
use crate::orbit::DEFAULT_MEMBER_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub member_tol: f64,
    pub tangency_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_tol: DEFAULT_RANK_TOL,
            member_tol: DEFAULT_MEMBER_TOL,
            tangency_tol: DEFAULT_MEMBER_TOL,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("member_tol", self.member_tol),
            ("tangency_tol", self.tangency_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Every key is optional; a config file and command-line flags are merged
/// with [`RunConfig::overlay`], flags last.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: Option<String>,
    pub params: Option<Vec<f64>>,
    #[serde(rename = "F")]
    pub covector: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub pairs: Option<usize>,
    pub radius: Option<f64>,
    pub case: Option<u8>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub rank_tol: Option<f64>,
    pub member_tol: Option<f64>,
    pub tangency_tol: Option<f64>,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        RunConfig {
            family: top.family.or(self.family),
            params: top.params.or(self.params),
            covector: top.covector.or(self.covector),
            seed: top.seed.or(self.seed),
            n: top.n.or(self.n),
            pairs: top.pairs.or(self.pairs),
            radius: top.radius.or(self.radius),
            case: top.case.or(self.case),
            format: top.format.or(self.format),
            out: top.out.or(self.out),
            out_dir: top.out_dir.or(self.out_dir),
            rank_tol: top.rank_tol.or(self.rank_tol),
            member_tol: top.member_tol.or(self.member_tol),
            tangency_tol: top.tangency_tol.or(self.tangency_tol),
        }
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        let d = Tolerances::default();
        let t = Tolerances {
            rank_tol: self.rank_tol.unwrap_or(d.rank_tol),
            member_tol: self.member_tol.unwrap_or(d.member_tol),
            tangency_tol: self.tangency_tol.unwrap_or(d.tangency_tol),
        };
        t.validate()?;
        Ok(t)
    }

    /// The seed, which every sampling command requires.
    pub fn require_seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("--seed is required for sampling commands".into()))
    }
}

/// Parses a real number, also accepting multiples and fractions of `pi`
/// such as `pi/3`, `2pi/3` or `5*pi/6`.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Config(format!("not a number: `{s}`"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let coef = match num.strip_suffix("pi") {
        Some(c) => {
            let c = c.trim().trim_end_matches('*').trim();
            match c {
                "" => 1.0,
                "-" => -1.0,
                _ => c.parse::<f64>().map_err(|_| bad())?,
            }
        }
        None => return Err(bad()),
    };
    Ok(coef * std::f64::consts::PI / den)
}

/// Comma-separated list of [`parse_real`] values; the empty string is the empty list.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_real).collect()
}
