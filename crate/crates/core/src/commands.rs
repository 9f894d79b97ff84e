//! The command-line subcommands as library functions. Each returns the
//! documents to write and whether the run passed.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::algebra::{build_algebra, catalog, default_params, lambda1_zero_warning, CoVector, FamilyId, FamilyParams};
use crate::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::exp_action::{sample_orbit, DEFAULT_RADIUS, DEFAULT_SAMPLES};
use crate::foliation::{partition_check_with, PartitionOptions};
use crate::kirillov::md_scan_with;
use crate::orbit::{canonical_variants, case_count, classify_for, verify_base, VerifyOptions};
use crate::report::to_json_string;

pub const DEFAULT_SCAN_N: usize = 10_000;
pub const DEFAULT_VERIFY_N: usize = 500;
pub const DEFAULT_PAIRS: usize = 100;

/// One output document; `path = None` means standard output.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub path: Option<PathBuf>,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub documents: Vec<Document>,
    pub passed: bool,
    /// Diagnostics for standard error.
    pub notes: Vec<String>,
}

impl CommandOutput {
    fn single(cfg: &RunConfig, contents: String, passed: bool) -> CommandOutput {
        CommandOutput {
            documents: vec![Document {
                path: cfg.out.clone(),
                contents,
            }],
            passed,
            notes: Vec::new(),
        }
    }
}

/// The families a command runs on: the named one, or all eight for `all`
/// or when no family is given and `default_all` is set.
fn selection(cfg: &RunConfig, default_all: bool) -> Result<Vec<(FamilyId, FamilyParams)>> {
    let all = match cfg.family.as_deref() {
        Some("all") => true,
        Some(_) => false,
        None if default_all => true,
        None => return Err(Error::Config("--family is required".into())),
    };
    if all {
        if cfg.params.is_some() {
            return Err(Error::Config("--params needs a single --family".into()));
        }
        return Ok(FamilyId::ALL.iter().map(|&f| (f, default_params(f))).collect());
    }
    let family: FamilyId = cfg.family.as_deref().unwrap_or_default().parse().map_err(Error::Config)?;
    let params = match &cfg.params {
        Some(v) => FamilyParams::from_slice(family, v)?,
        None => default_params(family),
    };
    build_algebra(family, params)?;
    Ok(vec![(family, params)])
}

fn covector(cfg: &RunConfig) -> Result<CoVector> {
    let v = cfg.covector.as_ref().ok_or_else(|| Error::Config("--F is required".into()))?;
    if v.len() != 5 || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config(format!("--F needs five finite coordinates, got {v:?}")));
    }
    Ok(CoVector([v[0], v[1], v[2], v[3], v[4]]))
}

fn warnings(sel: &[(FamilyId, FamilyParams)]) -> Vec<String> {
    sel.iter()
        .filter_map(|(f, p)| lambda1_zero_warning(*f, p).map(|w| format!("warning: {w}")))
        .collect()
}

fn json_only(cfg: &RunConfig, command: &str) -> Result<()> {
    if cfg.format == Some(OutputFormat::Csv) {
        return Err(Error::Config(format!("{command} has no CSV output")));
    }
    Ok(())
}

/// Reports for one family are written as an object, several as an array.
fn one_or_many<T: serde::Serialize>(items: &[T]) -> Result<String> {
    match items {
        [one] => to_json_string(one),
        many => to_json_string(&many),
    }
}

pub fn list_families(cfg: &RunConfig) -> Result<CommandOutput> {
    json_only(cfg, "list-families")?;
    Ok(CommandOutput::single(cfg, to_json_string(&catalog())?, true))
}

pub fn classify(cfg: &RunConfig) -> Result<CommandOutput> {
    let sel = selection(cfg, false)?;
    let (family, params) = sel[0];
    let alg = build_algebra(family, params)?;
    let desc = classify_for(&alg, &covector(cfg)?, 0.0);
    let contents = match cfg.format {
        Some(OutputFormat::Json) => to_json_string(&desc)?,
        Some(OutputFormat::Csv) => return Err(Error::Config("classify has no CSV output".into())),
        None => format!("{desc}\n"),
    };
    let mut out = CommandOutput::single(cfg, contents, true);
    out.notes = warnings(&sel);
    Ok(out)
}

pub fn scan_md(cfg: &RunConfig) -> Result<CommandOutput> {
    json_only(cfg, "scan-md")?;
    let seed = cfg.require_seed()?;
    let tol = cfg.tolerances()?;
    let n = cfg.n.unwrap_or(DEFAULT_SCAN_N);
    let sel = selection(cfg, true)?;
    let reports = sel
        .iter()
        .map(|&(f, p)| md_scan_with(f, p, n, seed, tol.rank_tol))
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed());
    let mut out = CommandOutput::single(cfg, one_or_many(&reports)?, passed);
    out.notes = warnings(&sel);
    Ok(out)
}

/// `sign_variants` also checks the `−1` (and family-8 branch) bases.
pub fn verify_props(cfg: &RunConfig, sign_variants: bool) -> Result<CommandOutput> {
    json_only(cfg, "verify-props")?;
    let seed = cfg.require_seed()?;
    let tol = cfg.tolerances()?;
    let sel = selection(cfg, true)?;
    let opts = VerifyOptions {
        n: cfg.n.unwrap_or(DEFAULT_VERIFY_N),
        seed,
        radius: cfg.radius.unwrap_or(DEFAULT_RADIUS),
        tol,
    };
    let mut jobs = Vec::new();
    for &(family, params) in &sel {
        let cases: Vec<u8> = match cfg.case {
            Some(c) if (1..=case_count(family)).contains(&c) => vec![c],
            Some(c) => {
                return Err(Error::Config(format!(
                    "family {family} has cases 1..={}, got {c}",
                    case_count(family)
                )))
            }
            None => (1..=case_count(family)).collect(),
        };
        for case in cases {
            let mut bases = canonical_variants(family, case);
            if !sign_variants {
                bases.truncate(1);
            }
            jobs.extend(bases.into_iter().map(|b| (family, params, b)));
        }
    }
    let reports = jobs
        .par_iter()
        .map(|&(family, params, base)| verify_base(&build_algebra(family, params)?, &base, &opts))
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let notes = reports
        .iter()
        .map(|r| {
            format!(
                "{} case {} base {}: {} (residual {:.1e}, tangency {:.1e}, {} adjudicated)",
                r.family,
                r.case,
                r.base,
                if r.passed { "pass" } else { "FAIL" },
                r.max_residual,
                r.tangency_max,
                r.provenance.len()
            )
        })
        .chain(warnings(&sel))
        .collect();
    let documents = match &cfg.out_dir {
        Some(dir) => reports
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let name = if sign_variants {
                    format!("verify-{}-case-{}-{i}.json", r.family, r.case)
                } else {
                    format!("verify-{}-case-{}.json", r.family, r.case)
                };
                Ok(Document {
                    path: Some(dir.join(name)),
                    contents: to_json_string(r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None => vec![Document {
            path: cfg.out.clone(),
            contents: to_json_string(&reports)?,
        }],
    };
    Ok(CommandOutput {
        documents,
        passed,
        notes,
    })
}

pub fn sample_orbit_cmd(cfg: &RunConfig) -> Result<CommandOutput> {
    let seed = cfg.require_seed()?;
    let sel = selection(cfg, false)?;
    let (family, params) = sel[0];
    let alg = build_algebra(family, params)?;
    let f = covector(cfg)?;
    let n = cfg.n.unwrap_or(DEFAULT_SAMPLES);
    let sample = sample_orbit(&alg, &f, n, cfg.radius.unwrap_or(DEFAULT_RADIUS), seed)?;
    let contents = match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => sample.to_csv(),
        OutputFormat::Json => to_json_string(&sample)?,
    };
    let mut out = CommandOutput::single(cfg, contents, true);
    out.notes = warnings(&sel);
    Ok(out)
}

pub fn check_foliation(cfg: &RunConfig) -> Result<CommandOutput> {
    json_only(cfg, "check-foliation")?;
    let seed = cfg.require_seed()?;
    let tol = cfg.tolerances()?;
    let sel = selection(cfg, true)?;
    let mut opts = PartitionOptions::new(cfg.pairs.unwrap_or(DEFAULT_PAIRS), seed);
    opts.tol = tol;
    if let Some(n) = cfg.n {
        opts.census = n;
    }
    let reports = sel
        .iter()
        .map(|&(f, p)| partition_check_with(f, p, &opts))
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let mut out = CommandOutput::single(cfg, one_or_many(&reports)?, passed);
    out.notes = warnings(&sel);
    Ok(out)
}
