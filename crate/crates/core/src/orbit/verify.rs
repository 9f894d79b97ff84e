//! End-to-end check of an orbit descriptor against sampled orbit points,
//! including adjudication of displayed equations that were replaced or flagged.

use rayon::prelude::*;
use serde::Serialize;

use super::descriptor::{
    case_count, classify_for, gradient_discrepancy, normalized_gradients, tangency_residual, Equation,
    OrbitDescriptor, Provenance, Shape, JACOBIAN_RANK_TOL,
};
use crate::algebra::{build_algebra, CoVector, FamilyId, FamilyParams, LieAlgebra};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exp_action::{sample_orbit, DEFAULT_RADIUS};
use crate::kirillov::orbit_dimension_with;
use crate::linalg::{rank_of_rows, vec_norm_inf, Vec5};

/// A displayed equation is abandoned only if it misses by more than this.
pub const LITERAL_REJECT_TOL: f64 = 1e-4;
/// Central-difference step for the gradient cross-check.
pub const FD_STEP: f64 = 1e-6;
/// Allowed relative gap between analytic and central-difference gradients.
pub const FD_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Adoption {
    Literal,
    Corrected,
}

/// Outcome of adjudicating one displayed equation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProvenanceNote {
    /// The equation as displayed.
    pub equation: String,
    /// The equation actually used.
    pub adopted_equation: String,
    /// Max normalized residual of the displayed form; `null` when it has no
    /// evaluable form or fails to evaluate at some sampled point.
    pub literal_residual: Option<f64>,
    /// Sampled points where the displayed form, substituted into the set,
    /// does not give a rank-3 Jacobian.
    pub literal_rank_failures: usize,
    pub corrected_residual: Option<f64>,
    pub adopted: Adoption,
    /// The protocol's verdict agrees with the adopted form.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub family: FamilyId,
    pub params: FamilyParams,
    pub case: u8,
    pub base: CoVector,
    pub n: usize,
    pub seed: u64,
    pub radius: f64,
    pub dim: usize,
    pub shape: Shape,
    pub stated_shape: Shape,
    pub descriptor_provenance: Provenance,
    pub equations: Vec<String>,
    pub signs: Vec<String>,
    pub max_residual: f64,
    pub tangency_max: f64,
    pub gradient_fd_max: f64,
    /// Sample indices outside the sign stratum or where a term could not be evaluated.
    pub sign_violations: Vec<usize>,
    /// Sample indices where the constraint Jacobian does not have rank 3.
    pub jacobian_failures: Vec<usize>,
    /// Descriptor dimension equals the Kirillov rank at the base.
    pub dimension_ok: bool,
    pub tolerances: Tolerances,
    pub provenance: Vec<ProvenanceNote>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub n: usize,
    pub seed: u64,
    pub radius: f64,
    pub tol: Tolerances,
}

impl VerifyOptions {
    pub fn new(n: usize, seed: u64) -> VerifyOptions {
        VerifyOptions {
            n,
            seed,
            radius: DEFAULT_RADIUS,
            tol: Tolerances::default(),
        }
    }
}

/// `max` that lets NaN through as `∞`.
fn worse(a: f64, b: f64) -> f64 {
    if b.is_nan() {
        f64::INFINITY
    } else {
        a.max(b)
    }
}

/// Base covector for case `case_index` with every nonzero stratum entry
/// equal to `sign`.
pub fn canonical_base(family: FamilyId, case_index: u8, sign: f64) -> Option<CoVector> {
    if !(1..=case_count(family)).contains(&case_index) {
        return None;
    }
    if family == FamilyId::F8 {
        let s = sign;
        return Some(match case_index {
            1 => CoVector::new(0.0, 0.0, 0.0, 0.0, 0.0),
            2 => CoVector::new(0.0, 0.0, 0.0, 0.0, s),
            _ => CoVector::new(0.0, 0.0, s, s, s),
        });
    }
    let bits = case_index - 1;
    let v = |b: u8| if bits & b != 0 { sign } else { 0.0 };
    Some(CoVector::new(0.0, 0.0, v(4), v(2), v(1)))
}

/// The bases a case is checked on: both sign components, and for the
/// family-8 rotating case also the `σ = 0` and `δ = 0` branches.
pub fn canonical_variants(family: FamilyId, case_index: u8) -> Vec<CoVector> {
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        if let Some(b) = canonical_base(family, case_index, sign) {
            out.push(b);
        }
        if family == FamilyId::F8 && case_index == 3 {
            out.push(CoVector::new(0.0, 0.0, sign, sign, 0.0));
            out.push(CoVector::new(0.0, 0.0, sign, 0.0, sign));
            out.push(CoVector::new(0.0, 0.0, 0.0, sign, 0.0));
        }
    }
    if case_index == 1 {
        out.truncate(1);
    }
    out
}

struct PointEval {
    residual: f64,
    sign_ok: bool,
    tangency: f64,
    rank_ok: bool,
    fd: f64,
    /// Per equation with a displayed alternative or flag: (residual, rank ok).
    literal: Vec<(f64, bool)>,
}

fn rank_with(desc: &OrbitDescriptor, p: &CoVector, swap: Option<(usize, &super::Constraint)>) -> bool {
    let rows = match swap {
        None => normalized_gradients(desc, p).ok(),
        Some((i, c)) => normalized_gradients(desc, p).ok().and_then(|mut rows| {
            let mut g = c.gradient(&p.0).ok()?;
            let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 0.0 {
                g.iter_mut().for_each(|v| *v /= n);
            }
            rows[i] = g;
            Some(rows)
        }),
    };
    rows.is_some_and(|r: Vec<Vec5>| rank_of_rows(&r, JACOBIAN_RANK_TOL) == 3)
}

fn adjudicated(desc: &OrbitDescriptor) -> Vec<(usize, &Equation)> {
    desc.equations
        .iter()
        .enumerate()
        .filter(|(_, e)| e.literal.is_some() || e.flagged)
        .collect()
}

fn evaluate_point(alg: &LieAlgebra, desc: &OrbitDescriptor, p: &CoVector) -> PointEval {
    let norm = 1.0 + vec_norm_inf(&p.0);
    let (residual, eval_ok) = match desc.residuals(p) {
        Ok(r) => (r.iter().fold(0.0, |m, v| worse(m, v.abs())), true),
        Err(_) => (0.0, false),
    };
    let sign_ok = eval_ok && desc.signs_hold(p);
    if desc.dim == 0 {
        return PointEval {
            residual,
            sign_ok,
            tangency: 0.0,
            rank_ok: true,
            fd: 0.0,
            literal: Vec::new(),
        };
    }
    let tangency = tangency_residual(alg, desc, p).unwrap_or(f64::INFINITY);
    let rank_ok = rank_with(desc, p, None);
    let fd = gradient_discrepancy(desc, p, FD_STEP).unwrap_or(f64::INFINITY);
    let literal = adjudicated(desc)
        .into_iter()
        .map(|(i, e)| match &e.literal {
            None => (residual_of(&e.constraint, p, norm), rank_ok),
            Some(l) => match &l.constraint {
                None => (f64::INFINITY, false),
                Some(c) => (residual_of(c, p, norm), rank_with(desc, p, Some((i, c)))),
            },
        })
        .collect();
    PointEval {
        residual,
        sign_ok,
        tangency,
        rank_ok,
        fd,
        literal,
    }
}

fn residual_of(c: &super::Constraint, p: &CoVector, norm: f64) -> f64 {
    c.eval(&p.0).map_or(f64::INFINITY, |v| worse(0.0, v.abs() / norm))
}

/// Samples the orbit through `base` and checks the descriptor on every point.
pub fn verify_base(alg: &LieAlgebra, base: &CoVector, opts: &VerifyOptions) -> Result<VerificationReport> {
    opts.tol.validate()?;
    let desc = classify_for(alg, base, 0.0);
    let sample = sample_orbit(alg, base, opts.n, opts.radius, opts.seed)?;
    let evals: Vec<PointEval> = sample.points.par_iter().map(|p| evaluate_point(alg, &desc, p)).collect();
    let tol = opts.tol;

    let mut max_residual = 0.0_f64;
    let mut tangency_max = 0.0_f64;
    let mut gradient_fd_max = 0.0_f64;
    let mut sign_violations = Vec::new();
    let mut jacobian_failures = Vec::new();
    for (i, e) in evals.iter().enumerate() {
        if e.sign_ok {
            max_residual = worse(max_residual, e.residual);
        } else {
            sign_violations.push(i);
        }
        tangency_max = worse(tangency_max, e.tangency);
        gradient_fd_max = worse(gradient_fd_max, e.fd);
        if !e.rank_ok {
            jacobian_failures.push(i);
        }
    }

    let provenance: Vec<ProvenanceNote> = adjudicated(&desc)
        .into_iter()
        .enumerate()
        .map(|(slot, (_, eq))| {
            let lit_max = evals.iter().fold(0.0, |m, e| worse(m, e.literal[slot].0));
            let literal_rank_failures = evals.iter().filter(|e| !e.literal[slot].1).count();
            let literal_residual = lit_max.is_finite().then_some(lit_max);
            let literal_ok = lit_max < tol.member_tol && literal_rank_failures == 0;
            match &eq.literal {
                None => ProvenanceNote {
                    equation: eq.text.clone(),
                    adopted_equation: eq.text.clone(),
                    literal_residual,
                    literal_rank_failures,
                    corrected_residual: None,
                    adopted: Adoption::Literal,
                    consistent: literal_ok,
                },
                Some(l) => {
                    let norm = |p: &CoVector| 1.0 + vec_norm_inf(&p.0);
                    let corrected = sample
                        .points
                        .iter()
                        .fold(0.0, |m, p| worse(m, residual_of(&eq.constraint, p, norm(p))));
                    // The displayed form is kept whenever it passes; a form
                    // that misses only slightly is not overridden either.
                    let literal_rejected = lit_max > LITERAL_REJECT_TOL || literal_rank_failures > 0;
                    ProvenanceNote {
                        equation: l.text.clone(),
                        adopted_equation: eq.text.clone(),
                        literal_residual,
                        literal_rank_failures,
                        corrected_residual: corrected.is_finite().then_some(corrected),
                        adopted: Adoption::Corrected,
                        consistent: literal_rejected && corrected < tol.member_tol,
                    }
                }
            }
        })
        .collect();

    let dimension_ok = desc.dim == orbit_dimension_with(alg, base, tol.rank_tol);
    let passed = max_residual < tol.member_tol
        && tangency_max < tol.tangency_tol
        && gradient_fd_max < FD_REL_TOL
        && sign_violations.is_empty()
        && jacobian_failures.is_empty()
        && dimension_ok
        && provenance.iter().all(|p| p.consistent);

    Ok(VerificationReport {
        family: alg.family(),
        params: *alg.params(),
        case: desc.case.case_index,
        base: desc.base,
        n: opts.n,
        seed: opts.seed,
        radius: opts.radius,
        dim: desc.dim,
        shape: desc.shape,
        stated_shape: desc.stated_shape,
        descriptor_provenance: desc.provenance,
        equations: desc.equations.iter().map(|e| e.text.clone()).collect(),
        signs: desc.signs.iter().map(|s| s.text()).collect(),
        max_residual,
        tangency_max,
        gradient_fd_max,
        sign_violations,
        jacobian_failures,
        dimension_ok,
        tolerances: tol,
        provenance,
        passed,
    })
}

/// Verifies case `case_index` of a family on its canonical `+1` base.
pub fn verify_proposition(
    family: FamilyId,
    params: FamilyParams,
    case_index: u8,
    n: usize,
    seed: u64,
) -> Result<VerificationReport> {
    verify_case(family, params, case_index, &VerifyOptions::new(n, seed))
}

pub fn verify_case(family: FamilyId, params: FamilyParams, case_index: u8, opts: &VerifyOptions) -> Result<VerificationReport> {
    let alg = build_algebra(family, params)?;
    let base = canonical_base(family, case_index, 1.0).ok_or_else(|| {
        Error::Precondition(format!(
            "family {family} has cases 1..={}, got {case_index}",
            case_count(family)
        ))
    })?;
    verify_base(&alg, &base, opts)
}
