//! `exp(ad U)` and the coadjoint motion `F ↦ F_U` with `⟨F_U, A⟩ = ⟨F, exp(ad U) A⟩`.
//!
//! Because rows `X₁`, `X₂` of `ad U` vanish and the derived ideal is abelian,
//! `ad U` has the block form
//!
//! ```text
//!         ⎡ 0   0  ⎤             ⎡ I       0     ⎤
//! ad U =  ⎣ C   bM ⎦ ,  exp(ad U) = ⎣ Φ(bM)C  e^{bM} ⎦
//! ```
//!
//! with `M = ad X₂|𝒢¹`, `C = [−b·e₁ | a·e₁ − M(c,d,f)ᵀ]` and
//! `Φ(Z) = Σₙ≥₁ Zⁿ⁻¹/n!`. The closed forms below evaluate `Φ(bM)` and `e^{bM}`
//! per family; [`exp_ad`] is the generic scaling-and-squaring path they are
//! checked against.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{build_algebra, AlgebraElement, CoVector, FamilyId, FamilyParams, LieAlgebra};
use crate::error::{DomainError, Error, Result};
use crate::kirillov::orbit_dimension;
use crate::linalg::{self, Mat5};
use crate::report::fmt_sig17;
use crate::sampling::{substream, uniform_cube};

/// Default cube radius for orbit sampling.
pub const DEFAULT_RADIUS: f64 = 2.0;
/// Default number of orbit samples.
pub const DEFAULT_SAMPLES: usize = 1000;

const TAYLOR_ORDER: u32 = 13;
const SCALED_NORM: f64 = 0.5;

/// `(e^{bλ} − 1)/λ`, with the limit `b` at `λ = 0`.
pub fn phi_series(lambda: f64, b: f64) -> f64 {
    let x = b * lambda;
    if lambda == 0.0 {
        b
    } else if x.abs() < 1e-4 {
        b * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0)
    } else {
        x.exp_m1() / lambda
    }
}

/// `φ_k(x) = Σₙ≥₀ xⁿ/(n+k)!` for `k ∈ {1, 2, 3}`.
pub fn phi_k(k: u32, x: f64) -> f64 {
    if x.abs() < 1.0 {
        let mut term = 1.0 / factorial(k);
        let mut sum = term;
        for n in 1..30 {
            term *= x / f64::from(n + k);
            sum += term;
        }
        return sum;
    }
    match k {
        1 => x.exp_m1() / x,
        2 => (x.exp_m1() - x) / (x * x),
        3 => (x.exp_m1() - x - x * x / 2.0) / (x * x * x),
        _ => panic!("phi_k is only defined here for k ≤ 3"),
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `φ₁(z) = (e^z − 1)/z` on complex arguments.
fn phi1_complex(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 2..25 {
            term = term * z / f64::from(n);
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Which computation produced an [`ExpAdMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpSource {
    Generic,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpAdMatrix {
    pub m: Mat5,
    pub source: ExpSource,
}

/// Matrix exponential of `ad U` by scaling and squaring around a degree-13
/// Taylor polynomial.
pub fn exp_ad(alg: &LieAlgebra, u: &AlgebraElement) -> ExpAdMatrix {
    ExpAdMatrix {
        m: expm(&alg.ad_matrix(u)),
        source: ExpSource::Generic,
    }
}

/// Scaling and squaring for a general 5×5 matrix.
pub fn expm(a: &Mat5) -> Mat5 {
    let norm = linalg::norm_inf(a);
    let mut squarings = 0;
    if norm > SCALED_NORM {
        squarings = (norm / SCALED_NORM).log2().ceil() as i32;
    }
    let scaled = linalg::scale(a, 0.5_f64.powi(squarings));
    let id = linalg::identity();
    let mut t = id;
    for n in (1..=TAYLOR_ORDER).rev() {
        t = linalg::add(&id, &linalg::scale(&linalg::matmul(&scaled, &t), 1.0 / f64::from(n)));
    }
    for _ in 0..squarings {
        t = linalg::matmul(&t, &t);
    }
    t
}

/// `(Φ(bM), e^{bM})` on the derived ideal, in closed form per family.
fn ideal_blocks(family: FamilyId, params: &FamilyParams, b: f64) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let mut phi = [[0.0; 3]; 3];
    let mut ex = [[0.0; 3]; 3];
    let diag = |phi: &mut [[f64; 3]; 3], ex: &mut [[f64; 3]; 3], i: usize, mu: f64| {
        phi[i][i] = phi_k(1, b * mu);
        ex[i][i] = (b * mu).exp();
    };
    // Unipotent-times-e^b block on indices (i, i+1) of a Jordan block with eigenvalue 1.
    let jordan2 = |phi: &mut [[f64; 3]; 3], ex: &mut [[f64; 3]; 3], i: usize| {
        let e = b.exp();
        let p1 = phi_k(1, b);
        let p2 = phi_k(2, b);
        phi[i][i] = p1;
        phi[i + 1][i + 1] = p1;
        phi[i][i + 1] = b * (p1 - p2);
        ex[i][i] = e;
        ex[i + 1][i + 1] = e;
        ex[i][i + 1] = b * e;
    };
    match (family, *params) {
        (FamilyId::F1, FamilyParams::Pair { lambda1, lambda2 }) => {
            diag(&mut phi, &mut ex, 0, lambda1);
            diag(&mut phi, &mut ex, 1, lambda2);
            diag(&mut phi, &mut ex, 2, 1.0);
        }
        (FamilyId::F2, FamilyParams::Single { lambda }) => {
            diag(&mut phi, &mut ex, 0, 1.0);
            diag(&mut phi, &mut ex, 1, 1.0);
            diag(&mut phi, &mut ex, 2, lambda);
        }
        (FamilyId::F3, FamilyParams::Single { lambda }) => {
            diag(&mut phi, &mut ex, 0, lambda);
            diag(&mut phi, &mut ex, 1, 1.0);
            diag(&mut phi, &mut ex, 2, 1.0);
        }
        (FamilyId::F4, _) => {
            for i in 0..3 {
                diag(&mut phi, &mut ex, i, 1.0);
            }
        }
        (FamilyId::F5, FamilyParams::Single { lambda }) => {
            diag(&mut phi, &mut ex, 0, lambda);
            jordan2(&mut phi, &mut ex, 1);
        }
        (FamilyId::F6, FamilyParams::Single { lambda }) => {
            jordan2(&mut phi, &mut ex, 0);
            diag(&mut phi, &mut ex, 2, lambda);
        }
        (FamilyId::F7, _) => {
            let e = b.exp();
            let p1 = phi_k(1, b);
            let p2 = phi_k(2, b);
            let p3 = phi_k(3, b);
            let first = b * (p1 - p2);
            let second = b * b / 2.0 * (p1 - 2.0 * p2 + 2.0 * p3);
            phi = [[p1, first, second], [0.0, p1, first], [0.0, 0.0, p1]];
            ex = [[e, b * e, b * b / 2.0 * e], [0.0, e, b * e], [0.0, 0.0, e]];
        }
        (FamilyId::F8, FamilyParams::Rotation { lambda, phi: angle }) => {
            let z = Complex64::from_polar(b, angle);
            let p = phi1_complex(z);
            let e = z.exp();
            phi[0] = [p.re, -p.im, 0.0];
            phi[1] = [p.im, p.re, 0.0];
            ex[0] = [e.re, -e.im, 0.0];
            ex[1] = [e.im, e.re, 0.0];
            diag(&mut phi, &mut ex, 2, lambda);
        }
        _ => unreachable!("parameters are validated against the family"),
    }
    (phi, ex)
}

/// `exp(ad U)` assembled from per-family closed forms.
pub fn exp_ad_closed(family: FamilyId, params: FamilyParams, u: &AlgebraElement) -> Result<ExpAdMatrix, DomainError> {
    let alg = build_algebra(family, params)?;
    Ok(exp_ad_closed_for(&alg, u))
}

/// [`exp_ad_closed`] for an already validated algebra.
pub fn exp_ad_closed_for(alg: &LieAlgebra, u: &AlgebraElement) -> ExpAdMatrix {
    let [a, b, c, d, f] = u.0;
    let m = alg.ad_x2();
    let (phi, ex) = ideal_blocks(alg.family(), alg.params(), b);
    // w = a·e₁ − M (c, d, f)ᵀ
    let mut w = [a, 0.0, 0.0];
    for (k, wk) in w.iter_mut().enumerate() {
        *wk -= m[k][0] * c + m[k][1] * d + m[k][2] * f;
    }
    let mut out = linalg::identity();
    for k in 0..3 {
        out[k + 2][0] = -b * phi[k][0];
        out[k + 2][1] = (0..3).map(|j| phi[k][j] * w[j]).sum();
        out[k + 2][2] = ex[k][0];
        out[k + 2][3] = ex[k][1];
        out[k + 2][4] = ex[k][2];
    }
    ExpAdMatrix {
        m: out,
        source: ExpSource::ClosedForm,
    }
}

/// `F_U = exp(ad U)ᵀ F`.
pub fn coadjoint_move(alg: &LieAlgebra, f: &CoVector, u: &AlgebraElement) -> CoVector {
    CoVector(linalg::mat_t_vec(&exp_ad(alg, u).m, &f.0))
}

/// Which `y` formula of the family-1 coadjoint motion to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SketchY {
    /// The δ-term written with `λ₁ⁿ`.
    Literal,
    /// The δ-term with `λ₂ⁿ`, matching `t = δ e^{bλ₂}`.
    Corrected,
}

/// Coordinate formulas for `F_U` in family 1, written out term by term.
pub fn family1_sketch_move(lambda1: f64, lambda2: f64, f: &CoVector, u: &AlgebraElement, y_form: SketchY) -> CoVector {
    let [alpha, beta, gamma, delta, sigma] = f.0;
    let [a, b, c, d, ff] = u.0;
    // Σₙ≥₁ bⁿ⁻¹ μⁿ / n! = μ φ₁(bμ)
    let delta_mu = match y_form {
        SketchY::Literal => lambda1,
        SketchY::Corrected => lambda2,
    };
    let x = alpha - gamma * phi_series(lambda1, b);
    let y = beta + gamma * (a - c * lambda1) * phi_k(1, b * lambda1)
        - delta * d * delta_mu * phi_k(1, b * delta_mu)
        - sigma * ff * phi_k(1, b);
    let z = gamma * (b * lambda1).exp();
    let t = delta * (b * lambda2).exp();
    let s = sigma * b.exp();
    CoVector([x, y, z, t, s])
}

/// A seeded point cloud on the orbit of `base`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSample {
    pub family: FamilyId,
    pub params: FamilyParams,
    pub base: CoVector,
    pub seed: u64,
    pub radius: f64,
    pub count: usize,
    pub points: Vec<CoVector>,
}

/// The group element used for sample `index` of a run.
pub fn sample_element(seed: u64, index: u64, radius: f64) -> AlgebraElement {
    AlgebraElement(uniform_cube(&mut substream(seed, index), radius))
}

/// `n` points `F_{U_k}` with `U_k` uniform in `[−radius, radius]⁵`.
pub fn sample_orbit(alg: &LieAlgebra, f: &CoVector, n: usize, radius: f64, seed: u64) -> Result<OrbitSample> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Precondition(format!("sampling radius must be positive, got {radius}")));
    }
    let points = (0..n as u64)
        .into_par_iter()
        .map(|k| coadjoint_move(alg, f, &sample_element(seed, k, radius)))
        .collect();
    Ok(OrbitSample {
        family: alg.family(),
        params: *alg.params(),
        base: *f,
        seed,
        radius,
        count: n,
        points,
    })
}

impl OrbitSample {
    /// Indices of points whose orbit dimension differs from the base's.
    pub fn dimension_mismatches(&self, alg: &LieAlgebra) -> Vec<usize> {
        let expected = orbit_dimension(alg, &self.base);
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| orbit_dimension(alg, p) != expected)
            .map(|(i, _)| i)
            .collect()
    }

    /// `x,y,z,t,s` header and one row per point, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z,t,s\n");
        for p in &self.points {
            let row: Vec<String> = p.0.iter().map(|&v| fmt_sig17(v)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_params;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    fn f1() -> LieAlgebra {
        build_algebra(FamilyId::F1, FamilyParams::Pair { lambda1: 2.0, lambda2: 3.0 }).unwrap()
    }

    /// Plain truncated Taylor series, no scaling. Only for small arguments.
    fn brute_exp(a: &Mat5, terms: u32) -> Mat5 {
        let mut sum = linalg::identity();
        let mut term = linalg::identity();
        for n in 1..terms {
            term = linalg::scale(&linalg::matmul(&term, a), 1.0 / f64::from(n));
            sum = linalg::add(&sum, &term);
        }
        sum
    }

    #[test]
    fn phi_series_examples() {
        // 30-term series oracle for (e^{2 ln 2} − 1)/2.
        let b = LN_2;
        let lambda = 2.0_f64;
        let mut series = 0.0;
        let mut fact = 1.0;
        for n in 1..30 {
            fact *= f64::from(n);
            series += b.powi(n as i32) * lambda.powi(n as i32 - 1) / fact;
        }
        assert!((series - 1.5).abs() < 1e-14);
        assert!((phi_series(2.0, LN_2) - 1.5).abs() < 1e-14);
        assert_eq!(phi_series(0.0, 7.0), 7.0);
        assert_eq!(phi_series(5.0, 0.0), 0.0);
        // series branch agrees with the closed form across the switch
        let l = 1e-5;
        assert!((phi_series(l, 3.0) - (3.0 * l).exp_m1() / l).abs() < 1e-12);
    }

    #[test]
    fn phi_k_branches_agree() {
        for k in 1..=3 {
            for &x in &[0.999_999, -0.999_999] {
                let below = phi_k(k, x);
                let above = phi_k(k, x * 1.000_002);
                assert!((below - above).abs() < 1e-5, "k={k} x={x}");
            }
        }
        assert!((phi_k(2, 0.0) - 0.5).abs() < 1e-16);
        assert!((phi_k(3, 0.0) - 1.0 / 6.0).abs() < 1e-16);
        assert!((phi_k(1, 2.0) - (2.0_f64.exp() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        for f in FamilyId::ALL {
            let g = build_algebra(f, default_params(f)).unwrap();
            assert_eq!(exp_ad(&g, &AlgebraElement::ZERO).m, linalg::identity());
            assert_eq!(exp_ad_closed_for(&g, &AlgebraElement::ZERO).m, linalg::identity());
        }
    }

    #[test]
    fn family1_diagonal_entries() {
        let b = 0.7;
        let e = exp_ad(&f1(), &AlgebraElement::basis(1).scaled(b)).m;
        assert!((e[2][2] - (2.0 * b).exp()).abs() < 1e-13);
        assert!((e[3][3] - (3.0 * b).exp()).abs() < 1e-13);
        assert!((e[4][4] - b.exp()).abs() < 1e-13);
    }

    #[test]
    fn family7_jordan_block() {
        let g = build_algebra(FamilyId::F7, FamilyParams::Unit).unwrap();
        let b = 0.8;
        let e = exp_ad(&g, &AlgebraElement::basis(1).scaled(b)).m;
        let oracle = brute_exp(&g.ad_matrix(&AlgebraElement::basis(1).scaled(b)), 40);
        assert!(linalg::max_abs_diff(&e, &oracle) < 1e-13);
        assert!((e[2][3] - b * b.exp()).abs() < 1e-13);
        assert!((e[2][4] - b * b * b.exp() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn generic_matches_series_oracle() {
        for f in FamilyId::ALL {
            let g = build_algebra(f, default_params(f)).unwrap();
            let u = AlgebraElement::new(0.3, -0.4, 0.2, 0.1, -0.25);
            let oracle = brute_exp(&g.ad_matrix(&u), 40);
            assert!(linalg::max_abs_diff(&exp_ad(&g, &u).m, &oracle) < 1e-14, "{f}");
        }
    }

    #[test]
    fn closed_form_family1_entries() {
        let u = AlgebraElement::new(1.0, 1.0, 0.0, 0.0, 0.0);
        let e = exp_ad_closed(FamilyId::F1, FamilyParams::Pair { lambda1: 2.0, lambda2: 3.0 }, &u)
            .unwrap()
            .m;
        let half = (2.0_f64.exp() - 1.0) / 2.0;
        assert!((e[2][0] + half).abs() < 1e-14);
        assert!((e[2][1] - half).abs() < 1e-14);
        assert!(linalg::max_abs_diff(&e, &exp_ad(&f1(), &u).m) < 1e-12);
    }

    #[test]
    fn closed_form_rotation_block() {
        let params = FamilyParams::Rotation { lambda: 1.0, phi: FRAC_PI_2 };
        let b = 1.3;
        let u = AlgebraElement::basis(1).scaled(b);
        let closed = exp_ad_closed(FamilyId::F8, params, &u).unwrap().m;
        let g = build_algebra(FamilyId::F8, params).unwrap();
        assert!(linalg::max_abs_diff(&closed, &exp_ad(&g, &u).m) < 1e-9);
        let col = (closed[2][2].powi(2) + closed[3][2].powi(2)).sqrt();
        assert!((col - (b * FRAC_PI_2.cos()).exp()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_rejects_bad_params() {
        assert!(exp_ad_closed(FamilyId::F2, FamilyParams::Single { lambda: 1.0 }, &AlgebraElement::ZERO).is_err());
    }

    #[test]
    fn coadjoint_move_examples() {
        let g = f1();
        let f = CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0);
        assert_eq!(coadjoint_move(&g, &f, &AlgebraElement::ZERO), f);
        let moved = coadjoint_move(&g, &f, &AlgebraElement::basis(1).scaled(LN_2));
        let expected = [-1.5, 0.0, 4.0, 8.0, 2.0];
        for k in 0..5 {
            assert!((moved.0[k] - expected[k]).abs() < 1e-13, "{moved}");
        }
        let sketch = family1_sketch_move(2.0, 3.0, &f, &AlgebraElement::basis(1).scaled(LN_2), SketchY::Corrected);
        for k in 0..5 {
            assert!((sketch.0[k] - expected[k]).abs() < 1e-13);
        }
        let fixed = CoVector::new(3.0, -2.0, 0.0, 0.0, 0.0);
        let u = AlgebraElement::new(1.0, -2.0, 0.5, 3.0, 1.5);
        for fam in FamilyId::ALL {
            let g = build_algebra(fam, default_params(fam)).unwrap();
            assert_eq!(coadjoint_move(&g, &fixed, &u), fixed);
        }
    }

    #[test]
    fn literal_sketch_y_differs_when_delta_term_is_active() {
        let f = CoVector::new(0.4, -0.3, 1.0, 1.0, 1.0);
        let u = AlgebraElement::new(0.5, 0.9, -0.2, 1.1, 0.3);
        let lit = family1_sketch_move(2.0, 3.0, &f, &u, SketchY::Literal);
        let fixed = family1_sketch_move(2.0, 3.0, &f, &u, SketchY::Corrected);
        let generic = coadjoint_move(&f1(), &f, &u);
        assert!((fixed.0[1] - generic.0[1]).abs() < 1e-12);
        assert!((lit.0[1] - generic.0[1]).abs() > 1e-3);
    }

    #[test]
    fn sample_orbit_basics() {
        let g = f1();
        let empty = sample_orbit(&g, &CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0), 0, 2.0, 1).unwrap();
        assert!(empty.points.is_empty());
        assert_eq!(empty.to_csv(), "x,y,z,t,s\n");
        let fixed = CoVector::new(1.0, 2.0, 0.0, 0.0, 0.0);
        let s = sample_orbit(&g, &fixed, 50, 2.0, 9).unwrap();
        assert!(s.points.iter().all(|p| *p == fixed));
        let generic = sample_orbit(&g, &CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0), 100, 2.0, 5).unwrap();
        assert!(generic.dimension_mismatches(&g).is_empty());
        assert!(generic
            .points
            .iter()
            .all(|p| orbit_dimension(&g, p) == 2));
        assert!(sample_orbit(&g, &fixed, 5, 0.0, 1).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = f1();
        let f = CoVector::new(0.2, 0.1, 1.0, -1.0, 1.0);
        let a = sample_orbit(&g, &f, 64, 2.0, 11).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_orbit(&g, &f, 64, 2.0, 11).unwrap());
        assert_eq!(a.to_csv(), b.to_csv());
    }
}
