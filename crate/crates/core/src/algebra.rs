//! The eight indecomposable MD5-algebra families with derived ideal ℝ³.
//!
//! Every family shares the basis `X₁ … X₅` with `[X₁, X₂] = X₃`, the derived
//! ideal spanned by `X₃, X₄, X₅` abelian, and `ad X₁` vanishing on it. A family
//! is fixed by the 3×3 matrix of `ad X₂` restricted to the derived ideal:
//! column `j` holds the coordinates of `[X₂, X_{j+3}]` in `(X₃, X₄, X₅)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::DomainError;
use crate::linalg::{Mat5, Vec5, ZERO};

/// One of the eight catalog families `G5.3.1 … G5.3.8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::F1,
        FamilyId::F2,
        FamilyId::F3,
        FamilyId::F4,
        FamilyId::F5,
        FamilyId::F6,
        FamilyId::F7,
        FamilyId::F8,
    ];

    /// 1-based position in the catalog.
    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_index(k: u8) -> Option<FamilyId> {
        FamilyId::ALL.get(usize::from(k).checked_sub(1)?).copied()
    }

    /// Catalog tag, e.g. `G5.3.4`.
    pub fn tag(self) -> String {
        format!("G5.3.{}", self.index())
    }

    /// Names of the real parameters, in the order they are passed on the command line.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyId::F1 => &["lambda1", "lambda2"],
            FamilyId::F2 | FamilyId::F3 | FamilyId::F5 | FamilyId::F6 => &["lambda"],
            FamilyId::F4 | FamilyId::F7 => &[],
            FamilyId::F8 => &["lambda", "phi"],
        }
    }

    /// Human-readable parameter domain, one entry per constraint.
    pub fn constraints(self) -> &'static [&'static str] {
        match self {
            FamilyId::F1 => &["λ₁ ≠ 1", "λ₂ ∉ {0, 1}", "λ₁ ≠ λ₂"],
            FamilyId::F2 | FamilyId::F6 => &["λ ∉ {0, 1}"],
            FamilyId::F3 | FamilyId::F5 => &["λ ≠ 1"],
            FamilyId::F4 | FamilyId::F7 => &[],
            FamilyId::F8 => &["λ ≠ 0", "φ ∈ (0, π)"],
        }
    }

    /// The `ad X₂` template with parameters written symbolically.
    pub fn ad_x2_template(self) -> [[&'static str; 3]; 3] {
        match self {
            FamilyId::F1 => [["λ₁", "0", "0"], ["0", "λ₂", "0"], ["0", "0", "1"]],
            FamilyId::F2 => [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "λ"]],
            FamilyId::F3 => [["λ", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
            FamilyId::F4 => [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
            FamilyId::F5 => [["λ", "0", "0"], ["0", "1", "1"], ["0", "0", "1"]],
            FamilyId::F6 => [["1", "1", "0"], ["0", "1", "0"], ["0", "0", "λ"]],
            FamilyId::F7 => [["1", "1", "0"], ["0", "1", "1"], ["0", "0", "1"]],
            FamilyId::F8 => [
                ["cos φ", "−sin φ", "0"],
                ["sin φ", "cos φ", "0"],
                ["0", "0", "λ"],
            ],
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "5.3.{}", self.index())
    }
}

impl FromStr for FamilyId {
    type Err = String;

    /// Accepts `5.3.k`, `G5.3.k` or a bare `k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_prefix('G').or_else(|| t.strip_prefix('g')).unwrap_or(t);
        let k = t.strip_prefix("5.3.").unwrap_or(t);
        k.parse::<u8>()
            .ok()
            .and_then(FamilyId::from_index)
            .ok_or_else(|| format!("unknown family `{s}` (expected 5.3.1 … 5.3.8)"))
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.tag())
    }
}

/// Real parameters of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    /// Family 1.
    Pair { lambda1: f64, lambda2: f64 },
    /// Families 2, 3, 5 and 6.
    Single { lambda: f64 },
    /// Families 4 and 7.
    Unit,
    /// Family 8; `phi` in radians.
    Rotation { lambda: f64, phi: f64 },
}

impl FamilyParams {
    /// Builds the parameter record for `family` from a flat list in
    /// [`FamilyId::param_names`] order.
    pub fn from_slice(family: FamilyId, values: &[f64]) -> Result<FamilyParams, DomainError> {
        let expected = family.param_names().len();
        if values.len() != expected {
            return Err(DomainError {
                family,
                constraint: format!("exactly {expected} parameter(s), got {}", values.len()),
            });
        }
        Ok(match family {
            FamilyId::F1 => FamilyParams::Pair {
                lambda1: values[0],
                lambda2: values[1],
            },
            FamilyId::F2 | FamilyId::F3 | FamilyId::F5 | FamilyId::F6 => {
                FamilyParams::Single { lambda: values[0] }
            }
            FamilyId::F4 | FamilyId::F7 => FamilyParams::Unit,
            FamilyId::F8 => FamilyParams::Rotation {
                lambda: values[0],
                phi: values[1],
            },
        })
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            FamilyParams::Pair { lambda1, lambda2 } => vec![lambda1, lambda2],
            FamilyParams::Single { lambda } => vec![lambda],
            FamilyParams::Unit => vec![],
            FamilyParams::Rotation { lambda, phi } => vec![lambda, phi],
        }
    }

    /// The `λ` of single-parameter families and of family 8.
    pub fn lambda(&self) -> Option<f64> {
        match *self {
            FamilyParams::Single { lambda } | FamilyParams::Rotation { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    fn matches(&self, family: FamilyId) -> bool {
        matches!(
            (family, self),
            (FamilyId::F1, FamilyParams::Pair { .. })
                | (
                    FamilyId::F2 | FamilyId::F3 | FamilyId::F5 | FamilyId::F6,
                    FamilyParams::Single { .. }
                )
                | (FamilyId::F4 | FamilyId::F7, FamilyParams::Unit)
                | (FamilyId::F8, FamilyParams::Rotation { .. })
        )
    }
}

impl Serialize for FamilyParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let names: &[&str] = match self {
            FamilyParams::Pair { .. } => &["lambda1", "lambda2"],
            FamilyParams::Single { .. } => &["lambda"],
            FamilyParams::Unit => &[],
            FamilyParams::Rotation { .. } => &["lambda", "phi"],
        };
        let values = self.values();
        let mut map = serializer.serialize_map(Some(names.len()))?;
        for (name, v) in names.iter().zip(values) {
            map.serialize_entry(name, &v)?;
        }
        map.end()
    }
}

/// Checks the family's parameter domain. Returns the parameters unchanged on success.
///
/// For family 1, `λ₁ = 0` is admitted; see [`lambda1_zero_warning`].
pub fn validate_params(family: FamilyId, params: FamilyParams) -> Result<FamilyParams, DomainError> {
    let fail = |constraint: &str| {
        Err(DomainError {
            family,
            constraint: constraint.to_string(),
        })
    };
    if !params.matches(family) {
        let names = family.param_names();
        return fail(&format!("parameters ({})", names.join(", ")));
    }
    if params.values().iter().any(|v| !v.is_finite()) {
        return fail("finite parameters");
    }
    match (family, params) {
        (FamilyId::F1, FamilyParams::Pair { lambda1, lambda2 }) => {
            if lambda1 == 1.0 {
                return fail("λ₁ ≠ 1");
            }
            if lambda2 == 0.0 || lambda2 == 1.0 {
                return fail("λ₂ ∉ {0, 1}");
            }
            if lambda1 == lambda2 {
                return fail("λ₁ ≠ λ₂");
            }
        }
        (FamilyId::F2 | FamilyId::F6, FamilyParams::Single { lambda }) => {
            if lambda == 0.0 || lambda == 1.0 {
                return fail("λ ∉ {0, 1}");
            }
        }
        (FamilyId::F3 | FamilyId::F5, FamilyParams::Single { lambda }) => {
            if lambda == 1.0 {
                return fail("λ ≠ 1");
            }
        }
        (FamilyId::F8, FamilyParams::Rotation { lambda, phi }) => {
            if lambda == 0.0 {
                return fail("λ ≠ 0");
            }
            if !(phi > 0.0 && phi < std::f64::consts::PI) {
                return fail("φ ∈ (0, π)");
            }
        }
        _ => {}
    }
    Ok(params)
}

/// Warning text for the admitted but ambiguous family-1 value `λ₁ = 0`.
pub fn lambda1_zero_warning(family: FamilyId, params: &FamilyParams) -> Option<&'static str> {
    match (family, params) {
        (FamilyId::F1, FamilyParams::Pair { lambda1, .. }) if *lambda1 == 0.0 => Some(
            "λ₁ = 0 is accepted but the family-1 constraint text is ambiguous about it; \
             orbits through γ ≠ 0 then use logarithmic x-equations",
        ),
        _ => None,
    }
}

/// `U = a·X₁ + b·X₂ + c·X₃ + d·X₄ + f·X₅`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraElement(pub Vec5);

impl AlgebraElement {
    pub const ZERO: AlgebraElement = AlgebraElement([0.0; 5]);

    /// The basis vector `X_{i+1}` (0-based `i`).
    pub fn basis(i: usize) -> AlgebraElement {
        let mut v = [0.0; 5];
        v[i] = 1.0;
        AlgebraElement(v)
    }

    pub fn new(a: f64, b: f64, c: f64, d: f64, f: f64) -> AlgebraElement {
        AlgebraElement([a, b, c, d, f])
    }

    pub fn scaled(&self, s: f64) -> AlgebraElement {
        AlgebraElement(self.0.map(|x| x * s))
    }

    pub fn coords(&self) -> &Vec5 {
        &self.0
    }
}

/// `F = α·X₁* + β·X₂* + γ·X₃* + δ·X₄* + σ·X₅*`; general points are written `(x, y, z, t, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CoVector(pub Vec5);

impl CoVector {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, sigma: f64) -> CoVector {
        CoVector([alpha, beta, gamma, delta, sigma])
    }

    pub fn alpha(&self) -> f64 {
        self.0[0]
    }
    pub fn beta(&self) -> f64 {
        self.0[1]
    }
    pub fn gamma(&self) -> f64 {
        self.0[2]
    }
    pub fn delta(&self) -> f64 {
        self.0[3]
    }
    pub fn sigma(&self) -> f64 {
        self.0[4]
    }

    pub fn coords(&self) -> &Vec5 {
        &self.0
    }

    /// `(γ, δ, σ)`, the components on the derived ideal.
    pub fn ideal_part(&self) -> [f64; 3] {
        [self.0[2], self.0[3], self.0[4]]
    }

    pub fn norm_inf(&self) -> f64 {
        crate::linalg::vec_norm_inf(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl fmt::Display for CoVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.0;
        write!(f, "({a}, {b}, {c}, {d}, {e})")
    }
}

/// Structure constants over the fixed basis: `c[i][j][k]` is the `X_k`
/// coefficient of `[X_i, X_j]` (all indices 0-based).
pub type StructureConstants = [[[f64; 5]; 5]; 5];

/// A validated family member with its structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    family: FamilyId,
    params: FamilyParams,
    ad_x2: [[f64; 3]; 3],
    c: StructureConstants,
}

/// Validates `params` and assembles the structure constants of the family member.
pub fn build_algebra(family: FamilyId, params: FamilyParams) -> Result<LieAlgebra, DomainError> {
    let params = validate_params(family, params)?;
    let ad_x2 = ad_x2_matrix(family, &params);
    let mut c = [[[0.0; 5]; 5]; 5];
    c[0][1][2] = 1.0;
    c[1][0][2] = -1.0;
    for j in 0..3 {
        for k in 0..3 {
            let v = ad_x2[k][j];
            c[1][j + 2][k + 2] = v;
            c[j + 2][1][k + 2] = -v;
        }
    }
    Ok(LieAlgebra {
        family,
        params,
        ad_x2,
        c,
    })
}

/// Numeric `ad X₂` on the derived ideal, as in the catalog.
pub fn ad_x2_matrix(family: FamilyId, params: &FamilyParams) -> [[f64; 3]; 3] {
    let lambda = params.lambda().unwrap_or(0.0);
    match (family, *params) {
        (FamilyId::F1, FamilyParams::Pair { lambda1, lambda2 }) => {
            [[lambda1, 0.0, 0.0], [0.0, lambda2, 0.0], [0.0, 0.0, 1.0]]
        }
        (FamilyId::F2, _) => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, lambda]],
        (FamilyId::F3, _) => [[lambda, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        (FamilyId::F4, _) => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        (FamilyId::F5, _) => [[lambda, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]],
        (FamilyId::F6, _) => [[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, lambda]],
        (FamilyId::F7, _) => [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]],
        (FamilyId::F8, FamilyParams::Rotation { lambda, phi }) => {
            let (s, c) = phi.sin_cos();
            [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, lambda]]
        }
        _ => unreachable!("parameters are validated against the family"),
    }
}

impl LieAlgebra {
    /// An algebra from raw structure constants, bypassing the catalog.
    /// Used for sanity checks such as the abelian case.
    pub fn from_structure_constants(family: FamilyId, params: FamilyParams, c: StructureConstants) -> LieAlgebra {
        let mut ad_x2 = [[0.0; 3]; 3];
        for j in 0..3 {
            for k in 0..3 {
                ad_x2[k][j] = c[1][j + 2][k + 2];
            }
        }
        LieAlgebra {
            family,
            params,
            ad_x2,
            c,
        }
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    /// `ad X₂` restricted to the derived ideal (column convention).
    pub fn ad_x2(&self) -> &[[f64; 3]; 3] {
        &self.ad_x2
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.c
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, u: &AlgebraElement, v: &AlgebraElement) -> AlgebraElement {
        let mut out = [0.0; 5];
        for i in 0..5 {
            if u.0[i] == 0.0 {
                continue;
            }
            for j in 0..5 {
                let w = u.0[i] * v.0[j];
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.c[i][j][k];
                }
            }
        }
        AlgebraElement(out)
    }

    /// Matrix of `ad U`: column `j` holds the coordinates of `[U, X_j]`.
    pub fn ad_matrix(&self, u: &AlgebraElement) -> Mat5 {
        let mut m = ZERO;
        for (i, &ui) in u.0.iter().enumerate() {
            if ui == 0.0 {
                continue;
            }
            for j in 0..5 {
                for k in 0..5 {
                    m[k][j] += ui * self.c[i][j][k];
                }
            }
        }
        m
    }

    /// Largest Euclidean norm of the Jacobi sum over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let basis: Vec<AlgebraElement> = (0..5).map(AlgebraElement::basis).collect();
        let mut worst = 0.0_f64;
        for i in 0..5 {
            for j in (i + 1)..5 {
                for k in (j + 1)..5 {
                    let (xi, xj, xk) = (&basis[i], &basis[j], &basis[k]);
                    let a = self.bracket(xi, &self.bracket(xj, xk));
                    let b = self.bracket(xj, &self.bracket(xk, xi));
                    let c = self.bracket(xk, &self.bracket(xi, xj));
                    let norm = (0..5)
                        .map(|n| {
                            let s = a.0[n] + b.0[n] + c.0[n];
                            s * s
                        })
                        .sum::<f64>()
                        .sqrt();
                    worst = worst.max(norm);
                }
            }
        }
        worst
    }
}

/// Free-function form of [`LieAlgebra::bracket`].
pub fn bracket(alg: &LieAlgebra, u: &AlgebraElement, v: &AlgebraElement) -> AlgebraElement {
    alg.bracket(u, v)
}

/// Free-function form of [`LieAlgebra::ad_matrix`].
pub fn ad_matrix(alg: &LieAlgebra, u: &AlgebraElement) -> Mat5 {
    alg.ad_matrix(u)
}

/// Free-function form of [`LieAlgebra::jacobi_residual`].
pub fn jacobi_residual(alg: &LieAlgebra) -> f64 {
    alg.jacobi_residual()
}

/// One catalog entry of the machine-readable family list.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub tag: String,
    pub name: String,
    pub parameters: Vec<&'static str>,
    pub constraints: Vec<&'static str>,
    pub ad_x2: [[&'static str; 3]; 3],
    pub default_params: Vec<f64>,
}

/// Parameters used when a family is named without explicit values.
pub fn default_params(family: FamilyId) -> FamilyParams {
    match family {
        FamilyId::F1 => FamilyParams::Pair {
            lambda1: 2.0,
            lambda2: 3.0,
        },
        FamilyId::F2 | FamilyId::F3 | FamilyId::F5 | FamilyId::F6 => FamilyParams::Single { lambda: 2.0 },
        FamilyId::F4 | FamilyId::F7 => FamilyParams::Unit,
        FamilyId::F8 => FamilyParams::Rotation {
            lambda: 1.0,
            phi: std::f64::consts::FRAC_PI_3,
        },
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    FamilyId::ALL
        .iter()
        .map(|&f| CatalogEntry {
            tag: f.tag(),
            name: f.to_string(),
            parameters: f.param_names().to_vec(),
            constraints: f.constraints().to_vec(),
            ad_x2: f.ad_x2_template(),
            default_params: default_params(f).values(),
        })
        .collect()
}
