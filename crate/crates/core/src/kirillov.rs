//! Kirillov form `B_F(X_i, X_j) = ⟨F, [X_i, X_j]⟩`, its rank (the orbit
//! dimension) and the MD-property scanner.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{build_algebra, AlgebraElement, CoVector, FamilyId, FamilyParams, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat5, ZERO};
use crate::sampling::{substream, uniform_cube};

/// Relative singular-value cutoff used for orbit dimensions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Cube radius for the MD scan's covector samples.
pub const SCAN_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct KirillovForm {
    pub b: Mat5,
    pub base: CoVector,
}

impl KirillovForm {
    /// Row `i` as a covector: the tangent direction `(ad X_i)ᵀ F` at the base.
    pub fn row(&self, i: usize) -> CoVector {
        CoVector(self.b[i])
    }
}

/// `b_ij = Σ_k c_ij^k F_k`. Only the upper triangle is contracted; the lower
/// one is its exact negative.
pub fn kirillov_form(alg: &LieAlgebra, f: &CoVector) -> KirillovForm {
    let c = alg.structure_constants();
    let mut b = ZERO;
    for i in 0..5 {
        for j in (i + 1)..5 {
            let v: f64 = (0..5).map(|k| c[i][j][k] * f.0[k]).sum();
            b[i][j] = v;
            b[j][i] = -v;
        }
    }
    KirillovForm { b, base: *f }
}

/// Rank with the diagnostics of the even-rank correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: usize,
    /// Count before forcing skew inputs to even rank.
    pub raw_rank: usize,
    pub skew: bool,
}

impl RankInfo {
    /// True when the even-rank correction changed the count.
    pub fn parity_adjusted(&self) -> bool {
        self.rank != self.raw_rank
    }
}

fn is_skew(m: &Mat5) -> bool {
    (0..5).all(|i| (0..5).all(|j| m[i][j] == -m[j][i]))
}

/// Singular values above `tol · max(1, σ_max)`; skew matrices are rounded down
/// to even rank.
pub fn rank_info(m: &Mat5, tol: f64) -> RankInfo {
    let raw_rank = linalg::rank_of_rows(m, tol);
    let skew = is_skew(m);
    let rank = if skew { raw_rank & !1 } else { raw_rank };
    RankInfo { rank, raw_rank, skew }
}

pub fn numeric_rank(m: &Mat5, tol: f64) -> usize {
    rank_info(m, tol).rank
}

/// Dimension of the coadjoint orbit through `f`.
pub fn orbit_dimension(alg: &LieAlgebra, f: &CoVector) -> usize {
    orbit_dimension_with(alg, f, DEFAULT_RANK_TOL)
}

pub fn orbit_dimension_with(alg: &LieAlgebra, f: &CoVector, tol: f64) -> usize {
    numeric_rank(&kirillov_form(alg, f).b, tol)
}

/// Tangent vector of `s ↦ F_{sU}` at `s = 0`, i.e. `(ad U)ᵀ F`.
pub fn coadjoint_tangent(alg: &LieAlgebra, f: &CoVector, u: &AlgebraElement) -> CoVector {
    CoVector(linalg::mat_t_vec(&alg.ad_matrix(u), &f.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankViolation {
    pub index: usize,
    pub covector: CoVector,
    pub rank: usize,
}

/// Outcome of an MD-property scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdReport {
    pub family: FamilyId,
    pub params: FamilyParams,
    pub n: usize,
    pub seed: u64,
    pub histogram: BTreeMap<usize, usize>,
    /// Samples whose rank is neither 0 nor 2.
    pub violations: Vec<RankViolation>,
    /// Samples where `rank = 0` and `γ = δ = σ = 0` disagree.
    pub zero_rank_failures: Vec<RankViolation>,
    /// Samples where the even-rank correction changed the raw count.
    pub parity_adjustments: usize,
}

impl MdReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.zero_rank_failures.is_empty()
    }
}

/// Covector `index` of an MD scan: uniform in the radius-10 cube, then the
/// subset of `(γ, δ, σ)` selected by `index mod 8` is zeroed so that every
/// stratum, including the fixed points, is hit.
pub fn scan_covector(seed: u64, index: usize) -> CoVector {
    let mut v = uniform_cube(&mut substream(seed, index as u64), SCAN_RADIUS);
    let mask = index % 8;
    for bit in 0..3 {
        if mask & (1 << bit) != 0 {
            v[2 + bit] = 0.0;
        }
    }
    CoVector(v)
}

pub fn md_scan(family: FamilyId, params: FamilyParams, n: usize, seed: u64) -> Result<MdReport> {
    md_scan_with(family, params, n, seed, DEFAULT_RANK_TOL)
}

pub fn md_scan_with(family: FamilyId, params: FamilyParams, n: usize, seed: u64, rank_tol: f64) -> Result<MdReport> {
    if n == 0 {
        return Err(Error::Precondition("md_scan needs at least one sample".into()));
    }
    let alg = build_algebra(family, params)?;
    let rows: Vec<(CoVector, RankInfo)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let f = scan_covector(seed, k);
            (f, rank_info(&kirillov_form(&alg, &f).b, rank_tol))
        })
        .collect();

    let mut histogram = BTreeMap::new();
    let mut violations = Vec::new();
    let mut zero_rank_failures = Vec::new();
    let mut parity_adjustments = 0;
    for (index, (f, info)) in rows.into_iter().enumerate() {
        *histogram.entry(info.rank).or_insert(0) += 1;
        if info.parity_adjusted() {
            parity_adjustments += 1;
        }
        let record = RankViolation {
            index,
            covector: f,
            rank: info.rank,
        };
        let fixed_point = f.ideal_part() == [0.0; 3];
        if (info.rank == 0) != fixed_point {
            zero_rank_failures.push(record.clone());
        }
        if info.rank != 0 && info.rank != 2 {
            violations.push(record);
        }
    }
    Ok(MdReport {
        family,
        params,
        n,
        seed,
        histogram,
        violations,
        zero_rank_failures,
        parity_adjustments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_params;

    fn f1() -> LieAlgebra {
        build_algebra(FamilyId::F1, FamilyParams::Pair { lambda1: 2.0, lambda2: 3.0 }).unwrap()
    }

    /// Rank by Gaussian elimination with partial pivoting, as an oracle.
    fn elimination_rank(m: &Mat5, tol: f64) -> usize {
        let mut a = *m;
        let mut rank = 0;
        for col in 0..5 {
            let pivot = (rank..5).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()));
            let Some(p) = pivot else { break };
            if a[p][col].abs() <= tol {
                continue;
            }
            a.swap(p, rank);
            for r in (rank + 1)..5 {
                let factor = a[r][col] / a[rank][col];
                for c in col..5 {
                    a[r][c] -= factor * a[rank][c];
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn zero_covector_gives_zero_form() {
        assert_eq!(kirillov_form(&f1(), &CoVector::default()).b, ZERO);
    }

    #[test]
    fn family1_form_entries() {
        let f = CoVector::new(0.7, -1.1, 1.3, 2.9, -0.4);
        let b = kirillov_form(&f1(), &f).b;
        let mut expected = ZERO;
        let upper = [(0, 1, 1.3), (1, 2, 2.0 * 1.3), (1, 3, 3.0 * 2.9), (1, 4, -0.4)];
        for (i, j, v) in upper {
            expected[i][j] = v;
            expected[j][i] = -v;
        }
        assert_eq!(b, expected);
    }

    #[test]
    fn family8_form_entries() {
        let g = build_algebra(FamilyId::F8, FamilyParams::Rotation { lambda: 2.0, phi: 0.9 }).unwrap();
        let b = kirillov_form(&g, &CoVector::new(0.0, 0.0, 0.0, 0.0, 1.0)).b;
        let mut expected = ZERO;
        expected[1][4] = 2.0;
        expected[4][1] = -2.0;
        assert_eq!(b, expected);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numeric_rank(&ZERO, DEFAULT_RANK_TOL), 0);
        let b = kirillov_form(&f1(), &CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0)).b;
        assert_eq!(elimination_rank(&b, 1e-12), 2);
        assert_eq!(numeric_rank(&b, DEFAULT_RANK_TOL), 2);
        let mut blocks = ZERO;
        blocks[0][1] = 1.0;
        blocks[1][0] = -1.0;
        blocks[2][3] = 2.5;
        blocks[3][2] = -2.5;
        assert_eq!(elimination_rank(&blocks, 1e-12), 4);
        assert_eq!(numeric_rank(&blocks, DEFAULT_RANK_TOL), 4);
    }

    #[test]
    fn only_skew_inputs_are_rounded_to_even_rank() {
        let mut odd = ZERO;
        odd[0][0] = 1.0;
        let info = rank_info(&odd, DEFAULT_RANK_TOL);
        assert!(!info.skew);
        assert_eq!(info.rank, 1);
        // Singular values of a skew form come in equal pairs, so a cutoff
        // between two blocks still leaves an even raw count.
        let mut m = ZERO;
        m[0][1] = 1.0;
        m[1][0] = -1.0;
        m[2][3] = 1e-3;
        m[3][2] = -1e-3;
        let info = rank_info(&m, 1e-2);
        assert!(info.skew);
        assert_eq!((info.raw_rank, info.rank), (2, 2));
        assert!(!info.parity_adjusted());
    }

    #[test]
    fn orbit_dimension_examples() {
        for f in FamilyId::ALL {
            let g = build_algebra(f, default_params(f)).unwrap();
            assert_eq!(orbit_dimension(&g, &CoVector::new(5.0, 7.0, 0.0, 0.0, 0.0)), 0);
        }
        assert_eq!(orbit_dimension(&f1(), &CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0)), 2);
    }

    #[test]
    fn form_rows_are_coadjoint_tangents() {
        let f = CoVector::new(0.3, -0.8, 1.7, -2.2, 0.9);
        for fam in FamilyId::ALL {
            let g = build_algebra(fam, default_params(fam)).unwrap();
            let form = kirillov_form(&g, &f);
            for i in 0..5 {
                assert_eq!(form.row(i), coadjoint_tangent(&g, &f, &AlgebraElement::basis(i)), "{fam} row {i}");
            }
        }
    }

    #[test]
    fn form_is_linear_in_the_covector() {
        let g = f1();
        let f = CoVector::new(0.5, 1.5, -2.0, 0.25, 3.0);
        let h = CoVector::new(-1.0, 0.5, 0.75, 1.25, -0.5);
        let sum = CoVector(std::array::from_fn(|k| f.0[k] + h.0[k]));
        let lhs = kirillov_form(&g, &sum).b;
        let rhs = linalg::add(&kirillov_form(&g, &f).b, &kirillov_form(&g, &h).b);
        assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn md_scan_small() {
        let report = md_scan(FamilyId::F4, FamilyParams::Unit, 2000, 3).unwrap();
        assert!(report.passed());
        assert_eq!(report.histogram.values().sum::<usize>(), 2000);
        assert!(report.histogram.keys().all(|&r| r == 0 || r == 2));
        assert_eq!(report.histogram[&0], 250);
        assert_eq!(report.parity_adjustments, 0);
        assert!(md_scan(FamilyId::F4, FamilyParams::Unit, 0, 3).is_err());
    }

    #[test]
    fn forced_fixed_point_stratum_is_rank_zero() {
        let g = f1();
        for k in (7..800).step_by(8) {
            let f = scan_covector(1, k);
            assert_eq!(f.ideal_part(), [0.0; 3]);
            assert_eq!(orbit_dimension(&g, &f), 0);
        }
    }
}
