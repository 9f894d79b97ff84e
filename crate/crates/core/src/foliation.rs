//! Geometric checks on the generic stratum: the rank census, the leaf
//! partition, and local plaque charts.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{build_algebra, AlgebraElement, CoVector, FamilyId, FamilyParams, LieAlgebra};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exp_action::{coadjoint_move, sample_orbit, DEFAULT_RADIUS};
use crate::kirillov::{orbit_dimension_with, scan_covector};
use crate::linalg::{det3, rank_of_rows};
use crate::orbit::{classify_for, normalized_gradients, orbits_equal, OrbitDescriptor, JACOBIAN_RANK_TOL};
use crate::sampling::{substream, uniform_cube};

pub const TRANSVERSE_NOTICE: &str = "transverse measures are out of scope: this report checks the generic \
     stratum, the leaf partition, constraint codimension and tangency only";

/// Complementary 3×3 blocks with smaller determinant do not count as charts.
pub const CHART_DET_TOL: f64 = 1e-8;

/// Orbit points sampled per disjoint pair when measuring separation.
pub const SEPARATION_SAMPLES: usize = 20;

/// Covectors in the rank census.
pub const DEFAULT_CENSUS: usize = 10_000;

/// Whether `f` lies on a maximal-dimensional orbit.
pub fn generic_stratum_contains(alg: &LieAlgebra, f: &CoVector) -> bool {
    generic_with(alg, f, Tolerances::default().rank_tol)
}

fn generic_with(alg: &LieAlgebra, f: &CoVector, rank_tol: f64) -> bool {
    orbit_dimension_with(alg, f, rank_tol) == 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    /// Two independent generic covectors.
    Random,
    /// `(F, F_U)`.
    SameLeaf,
    /// `γ = δ = 0` with `σ` of opposite signs.
    OppositeSigns,
    /// `(F, F_U, F_U')`, checked pairwise.
    Triple,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionFailure {
    pub pair: usize,
    pub kind: PairKind,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumReport {
    pub notice: &'static str,
    pub family: FamilyId,
    pub params: FamilyParams,
    pub seed: u64,
    pub n: usize,
    pub generic: usize,
    pub fixed_points: usize,
    /// Census covectors where the rank test and `(γ, δ, σ) ≠ 0` disagree.
    pub census_mismatches: Vec<usize>,
    pub pairs: usize,
    pub pairs_equal: usize,
    pub pairs_disjoint: usize,
    /// Smallest separation seen over disjoint pairs.
    pub min_separation: f64,
    pub failures: Vec<PartitionFailure>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionOptions {
    pub pairs: usize,
    pub seed: u64,
    pub census: usize,
    pub tol: Tolerances,
}

impl PartitionOptions {
    pub fn new(pairs: usize, seed: u64) -> PartitionOptions {
        PartitionOptions {
            pairs,
            seed,
            census: DEFAULT_CENSUS,
            tol: Tolerances::default(),
        }
    }
}

/// A covector with at least one of `γ, δ, σ` nonzero; which of them vanish is random.
fn generic_covector<R: Rng>(rng: &mut R) -> CoVector {
    let mut v = uniform_cube(rng, DEFAULT_RADIUS);
    let keep = rng.random_range(1..8u8);
    for bit in 0..3 {
        if keep & (1 << bit) == 0 {
            v[2 + bit] = 0.0;
        }
    }
    CoVector(v)
}

fn element<R: Rng>(rng: &mut R) -> AlgebraElement {
    AlgebraElement(uniform_cube(rng, DEFAULT_RADIUS))
}

struct PairOutcome {
    equal: bool,
    disjoint: bool,
    separation: f64,
    failure: Option<PartitionFailure>,
}

impl PairOutcome {
    fn fail(pair: usize, kind: PairKind, reason: String) -> PairOutcome {
        PairOutcome {
            equal: false,
            disjoint: false,
            separation: f64::INFINITY,
            failure: Some(PartitionFailure { pair, kind, reason }),
        }
    }
}

/// Smallest separation of `points` from the orbit `desc`.
fn separation(desc: &OrbitDescriptor, points: &[CoVector]) -> f64 {
    points.iter().map(|p| desc.separation(p)).fold(f64::INFINITY, f64::min)
}

fn check_disjoint(
    alg: &LieAlgebra,
    f1: &CoVector,
    f2: &CoVector,
    pair: usize,
    kind: PairKind,
    seed: u64,
    tol: &Tolerances,
) -> PairOutcome {
    match orbits_equal(alg, f1, f2, tol.member_tol) {
        Err(e) => PairOutcome::fail(pair, kind, e.to_string()),
        Ok(true) => {
            if kind == PairKind::OppositeSigns {
                PairOutcome::fail(pair, kind, "opposite sign strata reported equal".into())
            } else {
                PairOutcome {
                    equal: true,
                    disjoint: false,
                    separation: f64::INFINITY,
                    failure: None,
                }
            }
        }
        Ok(false) => {
            let mut sep = f64::INFINITY;
            for (a, b) in [(f1, f2), (f2, f1)] {
                let points = match sample_orbit(alg, a, SEPARATION_SAMPLES, DEFAULT_RADIUS, seed) {
                    Ok(s) => s.points,
                    Err(e) => return PairOutcome::fail(pair, kind, e.to_string()),
                };
                sep = sep.min(separation(&classify_for(alg, b, 0.0), &points));
            }
            if sep > 10.0 * tol.member_tol {
                PairOutcome {
                    equal: false,
                    disjoint: true,
                    separation: sep,
                    failure: None,
                }
            } else {
                PairOutcome::fail(pair, kind, format!("orbits differ but sampled points come within {sep:e}"))
            }
        }
    }
}

fn check_same_leaf(alg: &LieAlgebra, points: &[CoVector], pair: usize, kind: PairKind, tol: &Tolerances) -> PairOutcome {
    for (i, a) in points.iter().enumerate() {
        for b in &points[i..] {
            match orbits_equal(alg, a, b, tol.member_tol) {
                Ok(true) => {}
                Ok(false) => return PairOutcome::fail(pair, kind, format!("{a} and {b} lie on one leaf but were separated")),
                Err(e) => return PairOutcome::fail(pair, kind, e.to_string()),
            }
        }
    }
    PairOutcome {
        equal: true,
        disjoint: false,
        separation: f64::INFINITY,
        failure: None,
    }
}

fn run_pair(alg: &LieAlgebra, pair: usize, seed: u64, tol: &Tolerances) -> PairOutcome {
    let mut rng = substream(seed, pair as u64);
    let sample_seed = rng.random::<u64>();
    match pair % 4 {
        0 => {
            let f1 = generic_covector(&mut rng);
            let f2 = generic_covector(&mut rng);
            check_disjoint(alg, &f1, &f2, pair, PairKind::Random, sample_seed, tol)
        }
        1 => {
            let f = generic_covector(&mut rng);
            let moved = coadjoint_move(alg, &f, &element(&mut rng));
            check_same_leaf(alg, &[f, moved], pair, PairKind::SameLeaf, tol)
        }
        2 => {
            let mut f1 = CoVector(uniform_cube(&mut rng, DEFAULT_RADIUS));
            f1.0[2] = 0.0;
            f1.0[3] = 0.0;
            let sigma = rng.random_range(0.1..=DEFAULT_RADIUS);
            let mut f2 = f1;
            f1.0[4] = sigma;
            f2.0[4] = -sigma;
            check_disjoint(alg, &f1, &f2, pair, PairKind::OppositeSigns, sample_seed, tol)
        }
        _ => {
            let f = generic_covector(&mut rng);
            let a = coadjoint_move(alg, &f, &element(&mut rng));
            let b = coadjoint_move(alg, &f, &element(&mut rng));
            check_same_leaf(alg, &[f, a, b], pair, PairKind::Triple, tol)
        }
    }
}

pub fn partition_check(family: FamilyId, params: FamilyParams, pairs: usize, seed: u64) -> Result<StratumReport> {
    partition_check_with(family, params, &PartitionOptions::new(pairs, seed))
}

pub fn partition_check_with(family: FamilyId, params: FamilyParams, opts: &PartitionOptions) -> Result<StratumReport> {
    if opts.pairs == 0 {
        return Err(Error::Precondition("partition check needs at least one pair".into()));
    }
    opts.tol.validate()?;
    let alg = build_algebra(family, params)?;
    let tol = opts.tol;

    let census: Vec<(bool, bool)> = (0..opts.census)
        .into_par_iter()
        .map(|i| {
            let f = scan_covector(opts.seed, i);
            let generic = generic_with(&alg, &f, tol.rank_tol);
            let nonzero = f.ideal_part().iter().any(|&v| v != 0.0);
            (generic, generic == nonzero)
        })
        .collect();
    let generic = census.iter().filter(|c| c.0).count();
    let census_mismatches = census
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.1)
        .map(|(i, _)| i)
        .collect();

    let outcomes: Vec<PairOutcome> = (0..opts.pairs)
        .into_par_iter()
        .map(|k| run_pair(&alg, k, opts.seed, &tol))
        .collect();
    let pairs_equal = outcomes.iter().filter(|o| o.equal).count();
    let pairs_disjoint = outcomes.iter().filter(|o| o.disjoint).count();
    let min_separation = outcomes
        .iter()
        .filter(|o| o.disjoint)
        .map(|o| o.separation)
        .fold(f64::INFINITY, f64::min);
    let failures: Vec<PartitionFailure> = outcomes.into_iter().filter_map(|o| o.failure).collect();

    let mut report = StratumReport {
        notice: TRANSVERSE_NOTICE,
        family,
        params,
        seed: opts.seed,
        n: opts.census,
        generic,
        fixed_points: opts.census - generic,
        census_mismatches,
        pairs: opts.pairs,
        pairs_equal,
        pairs_disjoint,
        min_separation,
        failures,
        passed: false,
    };
    report.passed = report.failures.is_empty() && report.census_mismatches.is_empty();
    Ok(report)
}

/// Free coordinates `(i, j)` of a plaque chart at `p`: the remaining three
/// columns of the normalized constraint Jacobian form the best-conditioned
/// invertible block. `None` when no block clears [`CHART_DET_TOL`].
pub fn plaque_chart(desc: &OrbitDescriptor, p: &CoVector) -> Result<Option<[usize; 2]>> {
    if desc.dim != 2 {
        return Err(Error::Precondition("plaque charts need a 2-dimensional orbit".into()));
    }
    let rows = normalized_gradients(desc, p)?;
    if rows.len() != 3 || rank_of_rows(&rows, JACOBIAN_RANK_TOL) != 3 {
        return Ok(None);
    }
    let mut best: Option<([usize; 2], f64)> = None;
    for i in 0..5 {
        for j in i + 1..5 {
            let cols: Vec<usize> = (0..5).filter(|&k| k != i && k != j).collect();
            let mut block = [[0.0; 3]; 3];
            for (r, row) in rows.iter().enumerate() {
                for (c, &k) in cols.iter().enumerate() {
                    block[r][c] = row[k];
                }
            }
            let d = det3(&block).abs();
            if d > CHART_DET_TOL && best.is_none_or(|(_, b)| d > b) {
                best = Some(([i, j], d));
            }
        }
    }
    Ok(best.map(|(free, _)| free))
}

/// Whether the orbit is locally a graph over two coordinates at `p`.
pub fn local_triviality_probe(_alg: &LieAlgebra, desc: &OrbitDescriptor, p: &CoVector) -> Result<bool> {
    Ok(plaque_chart(desc, p)?.is_some())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrivialityReport {
    pub family: FamilyId,
    pub case: u8,
    pub base: CoVector,
    pub n: usize,
    pub seed: u64,
    /// Sample indices without a plaque chart.
    pub failures: Vec<usize>,
}

/// Runs [`local_triviality_probe`] at `n` sampled points of the orbit through `base`.
pub fn triviality_scan(alg: &LieAlgebra, base: &CoVector, n: usize, seed: u64) -> Result<TrivialityReport> {
    let desc = classify_for(alg, base, 0.0);
    if desc.dim != 2 {
        return Err(Error::Precondition("plaque charts need a 2-dimensional orbit".into()));
    }
    let sample = sample_orbit(alg, base, n, DEFAULT_RADIUS, seed)?;
    let ok: Vec<bool> = sample
        .points
        .par_iter()
        .map(|p| local_triviality_probe(alg, &desc, p).unwrap_or(false))
        .collect();
    Ok(TrivialityReport {
        family: alg.family(),
        case: desc.case.case_index,
        base: desc.base,
        n,
        seed,
        failures: ok.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| i).collect(),
    })
}
