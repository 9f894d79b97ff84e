//! Orbit descriptors: the closed-form equations and sign conditions of the
//! orbit through a base covector, per family and zero pattern.

use std::fmt;

use serde::Serialize;

use super::constraint::{Constraint, SignPredicate, Term, RIGHT_ANGLE_EPS};
use crate::algebra::{build_algebra, CoVector, FamilyId, FamilyParams, LieAlgebra};
use crate::error::{DomainError, Error, EvaluationError, Result};
use crate::kirillov::kirillov_form;
use crate::linalg::{rank_of_rows, vec_norm_inf, Vec5};

const X: usize = 0;
const Z: usize = 2;
const T: usize = 3;
const S: usize = 4;

/// Default membership tolerance on normalized residuals.
pub const DEFAULT_MEMBER_TOL: f64 = 1e-8;
/// Magnitudes below this count as zero when classifying scanned data.
pub const DEFAULT_SNAP_TOL: f64 = 1e-12;
/// Relative singular-value cutoff for the constraint Jacobian.
pub const JACOBIAN_RANK_TOL: f64 = 1e-8;

/// Which of `(γ, δ, σ)` vanish at the base covector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ZeroPattern {
    pub gamma: bool,
    pub delta: bool,
    pub sigma: bool,
}

impl ZeroPattern {
    pub fn of(f: &CoVector, snap: f64) -> ZeroPattern {
        let zero = |v: f64| if snap > 0.0 { v.abs() < snap } else { v == 0.0 };
        ZeroPattern {
            gamma: zero(f.gamma()),
            delta: zero(f.delta()),
            sigma: zero(f.sigma()),
        }
    }

    pub fn is_fixed_point(&self) -> bool {
        self.gamma && self.delta && self.sigma
    }

    /// Pattern of case `k` in the eight-case enumeration of families 1 to 7.
    pub fn from_case(case_index: u8) -> Option<ZeroPattern> {
        if !(1..=8).contains(&case_index) {
            return None;
        }
        let bits = case_index - 1;
        Some(ZeroPattern {
            gamma: bits & 4 == 0,
            delta: bits & 2 == 0,
            sigma: bits & 1 == 0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitCase {
    pub family: FamilyId,
    pub case_index: u8,
    pub zero_pattern: ZeroPattern,
}

/// Number of orbit cases listed for a family.
pub fn case_count(family: FamilyId) -> u8 {
    if family == FamilyId::F8 {
        3
    } else {
        8
    }
}

fn case_index(family: FamilyId, z: ZeroPattern) -> u8 {
    if family == FamilyId::F8 {
        return match (z.gamma && z.delta, z.sigma) {
            (true, true) => 1,
            (true, false) => 2,
            (false, _) => 3,
        };
    }
    1 + 4 * u8::from(!z.gamma) + 2 * u8::from(!z.delta) + u8::from(!z.sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Point,
    HalfPlane,
    Cylinder,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Point => "point",
            Shape::HalfPlane => "half-plane",
            Shape::Cylinder => "cylinder",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Literal,
    OracleCorrected,
}

/// The equation as displayed in the case listing, when it differs from the
/// adopted one. `constraint` is `None` when the listing gives nothing
/// evaluable for this relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiteralForm {
    pub text: String,
    pub constraint: Option<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equation {
    pub text: String,
    pub constraint: Constraint,
    /// Displayed form replaced by `constraint`.
    pub literal: Option<LiteralForm>,
    /// Suspect transcription kept literally; still adjudicated on every run.
    pub flagged: bool,
}

impl Equation {
    fn literal(text: impl Into<String>, terms: Vec<Term>) -> Equation {
        Equation {
            text: text.into(),
            constraint: Constraint::sum(terms),
            literal: None,
            flagged: false,
        }
    }

    fn flag(mut self) -> Equation {
        self.flagged = true;
        self
    }

    fn replacing(mut self, literal: Equation) -> Equation {
        self.literal = Some(LiteralForm {
            text: literal.text,
            constraint: Some(literal.constraint),
        });
        self
    }

    fn replacing_absent(mut self, text: impl Into<String>) -> Equation {
        self.literal = Some(LiteralForm {
            text: text.into(),
            constraint: None,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitDescriptor {
    pub case: OrbitCase,
    pub params: FamilyParams,
    pub base: CoVector,
    pub equations: Vec<Equation>,
    pub signs: Vec<SignPredicate>,
    pub dim: usize,
    /// Structural shape: affine equations give a half-plane.
    pub shape: Shape,
    /// Shape named in the case listing.
    pub stated_shape: Shape,
    pub provenance: Provenance,
    /// Some base coordinate was snapped to zero.
    pub snapped: bool,
}

fn lin(var: usize, coef: f64) -> Term {
    Term::Linear { var, coef }
}

fn cst(value: f64) -> Term {
    Term::Const { value }
}

fn pow(coef: f64, var: usize, scale: f64, exponent: f64) -> Term {
    Term::Power {
        coef,
        var,
        scale,
        exponent,
    }
}

fn xlog(coef: f64, var: usize, scale: f64, k: i32) -> Term {
    Term::XLog { coef, var, scale, k }
}

/// Base values and the equation builders shared by families 1 to 7.
struct Tx {
    a: f64,
    g: f64,
    d: f64,
    s: f64,
}

impl Tx {
    fn x_fixed(&self) -> Equation {
        Equation::literal("x = α", vec![lin(X, 1.0), cst(-self.a)])
    }

    fn zero(&self, var: usize) -> Equation {
        Equation::literal(format!("{} = 0", ["x", "y", "z", "t", "s"][var]), vec![lin(var, 1.0)])
    }

    /// `l·x = l·α + γ − z`
    fn x_affine(&self, sym: &str, l: f64) -> Equation {
        Equation::literal(
            format!("{sym}x = {sym}α + γ − z"),
            vec![lin(X, l), cst(-l * self.a - self.g), lin(Z, 1.0)],
        )
    }

    /// `l·x = l·α + γ(1 − (v/scale)^e)`
    fn x_power(&self, text: String, l: f64, var: usize, scale: f64, e: f64) -> Equation {
        Equation::literal(
            text,
            vec![lin(X, l), cst(-l * self.a - self.g), pow(self.g, var, scale, e)],
        )
    }

    /// `x = α − k·ln(v/scale)`, the `l → 0` limit of [`Tx::x_power`].
    fn x_log(&self, text: String, k: f64, var: usize, scale: f64) -> Equation {
        Equation::literal(
            text,
            vec![lin(X, 1.0), cst(-self.a), Term::Log { coef: k, var, scale }],
        )
    }

    /// `lhs = coef·(v/scale)^e`
    fn power(&self, text: &str, lhs: usize, coef: f64, var: usize, scale: f64, e: f64) -> Equation {
        Equation::literal(text, vec![lin(lhs, 1.0), pow(-coef, var, scale, e)])
    }

    /// `c1·p_{v1} = c2·p_{v2}`
    fn ratio(&self, text: &str, v1: usize, c1: f64, v2: usize, c2: f64) -> Equation {
        Equation::literal(text, vec![lin(v1, c1), lin(v2, -c2)])
    }

    fn same_sign(&self, var: usize) -> SignPredicate {
        let reference = match var {
            Z => self.g,
            T => self.d,
            _ => self.s,
        };
        SignPredicate::SameSign { var, reference }
    }
}

struct Transcription {
    equations: Vec<Equation>,
    signs: Vec<SignPredicate>,
    stated: Shape,
}

fn tr(equations: Vec<Equation>, sign: SignPredicate, stated: Shape) -> Transcription {
    Transcription {
        equations,
        signs: vec![sign],
        stated,
    }
}

use Shape::{Cylinder, HalfPlane};

/// Cases 2 and 3 are the same in every family of 1 to 7 except family 5 and 7, case 3.
fn coordinate_half_plane(x: &Tx, case: u8) -> Transcription {
    match case {
        2 => tr(vec![x.x_fixed(), x.zero(Z), x.zero(T)], x.same_sign(S), HalfPlane),
        _ => tr(vec![x.x_fixed(), x.zero(Z), x.zero(S)], x.same_sign(T), HalfPlane),
    }
}

fn family1(x: &Tx, l1: f64, l2: f64, case: u8) -> Transcription {
    let pair = |e: Equation, corrected: Equation| if l1 == 0.0 { corrected.replacing(e) } else { e };
    let x_s = || {
        pair(
            x.x_power("λ₁x = λ₁α + γ(1 − (s/σ)^λ₁)".into(), l1, S, x.s, l1),
            x.x_log("x = α − γ ln(s/σ)".into(), x.g, S, x.s),
        )
    };
    let t_s = || x.power("t = δ(s/σ)^λ₂", T, x.d, S, x.s, l2);
    match case {
        2 | 3 => coordinate_half_plane(x, case),
        4 => tr(vec![x.x_fixed(), x.zero(Z), t_s()], x.same_sign(S), Cylinder),
        5 => tr(vec![x.x_affine("λ₁", l1), x.zero(T), x.zero(S)], x.same_sign(Z), HalfPlane),
        6 => tr(vec![x.x_affine("λ₁", l1), x_s().flag(), x.zero(T)], x.same_sign(S), Cylinder),
        7 => {
            let e = pair(
                x.x_power("λ₁x = λ₁α + γ(1 − (t/δ)^(λ₁/λ₂))".into(), l1, T, x.d, l1 / l2),
                x.x_log("x = α − (γ/λ₂) ln(t/δ)".into(), x.g / l2, T, x.d),
            );
            tr(vec![x.x_affine("λ₁", l1), e, x.zero(S)], x.same_sign(T), Cylinder)
        }
        _ => tr(vec![x.x_affine("λ₁", l1), x_s(), t_s()], x.same_sign(S), Cylinder),
    }
}

fn family2(x: &Tx, l: f64, case: u8) -> Transcription {
    let x_t = || x.x_power("x = α + (1 − t/δ)γ".into(), 1.0, T, x.d, 1.0);
    match case {
        2 | 3 => coordinate_half_plane(x, case),
        4 => tr(
            vec![x.x_fixed(), x.zero(Z), x.power("s = σ(t/δ)^λ", S, x.s, T, x.d, l)],
            x.same_sign(T),
            Cylinder,
        ),
        5 => tr(vec![x.x_affine("", 1.0), x.zero(T), x.zero(S)], x.same_sign(Z), HalfPlane),
        6 => tr(
            vec![x.x_affine("", 1.0), x.power("s = σ(z/γ)^λ", S, x.s, Z, x.g, l), x.zero(T)],
            x.same_sign(Z),
            Cylinder,
        ),
        7 => tr(vec![x.x_affine("", 1.0), x_t(), x.zero(S)], x.same_sign(T), HalfPlane),
        _ => tr(
            vec![x.x_affine("", 1.0), x_t(), x.power("s = σ(t/δ)^λ", S, x.s, T, x.d, l)],
            x.same_sign(T),
            Cylinder,
        ),
    }
}

fn family3(x: &Tx, l: f64, case: u8) -> Transcription {
    let degenerate = l == 0.0;
    let x_t = || {
        let e = x.x_power("λx = λα + γ(1 − (t/δ)^λ)".into(), l, T, x.d, l);
        if degenerate {
            x.x_log("x = α − γ ln(t/δ)".into(), x.g, T, x.d).replacing(e)
        } else {
            e
        }
    };
    match case {
        2 | 3 => coordinate_half_plane(x, case),
        4 => tr(
            vec![x.x_fixed(), x.zero(Z), x.ratio("δs = σt", S, x.d, T, x.s)],
            x.same_sign(T),
            Cylinder,
        ),
        5 => tr(vec![x.x_affine("λ", l), x.zero(T), x.zero(S)], x.same_sign(Z), HalfPlane),
        6 => {
            let e = x.x_power("λx = λα + γ(1 − (s/σ)^λ)".into(), l, S, x.s, l);
            let e = if degenerate {
                x.x_log("x = α − γ ln(s/σ)".into(), x.g, S, x.s).replacing(e)
            } else {
                e
            };
            tr(vec![x.x_affine("λ", l), e, x.zero(T)], x.same_sign(S), Cylinder)
        }
        7 => {
            let e = x.power("z = γ(t/δ)^λ", Z, x.g, T, x.d, l);
            let e = if degenerate {
                x.x_log("x = α − γ ln(t/δ)".into(), x.g, T, x.d).replacing(e)
            } else {
                e
            };
            tr(vec![x.x_affine("λ", l), e, x.zero(S)], x.same_sign(T), Cylinder)
        }
        _ => tr(
            vec![x.x_affine("λ", l), x_t(), x.ratio("σt = δs", T, x.s, S, x.d)],
            x.same_sign(T),
            Cylinder,
        ),
    }
}

fn family4(x: &Tx, case: u8) -> Transcription {
    let x_s = || x.x_power("x = α + γ(1 − s/σ)".into(), 1.0, S, x.s, 1.0);
    match case {
        2 | 3 => coordinate_half_plane(x, case),
        4 => tr(
            vec![x.x_fixed(), x.zero(Z), x.ratio("δs = σt", S, x.d, T, x.s)],
            x.same_sign(T),
            HalfPlane,
        ),
        5 => tr(vec![x.x_affine("", 1.0), x.zero(T), x.zero(S)], x.same_sign(Z), HalfPlane),
        6 => tr(vec![x.x_affine("", 1.0), x_s(), x.zero(T)], x.same_sign(S), HalfPlane),
        7 => tr(
            vec![x.x_affine("", 1.0), x.power("z = γt/δ", Z, x.g, T, x.d, 1.0), x.zero(S)],
            x.same_sign(T),
            HalfPlane,
        ),
        _ => tr(
            vec![x.x_affine("", 1.0), x_s(), x.ratio("σt = δs", T, x.s, S, x.d)],
            x.same_sign(T),
            HalfPlane,
        ),
    }
}

/// `s = t ln(t/δ) + (σ/δ)t`
fn shear_log(x: &Tx, text: &str, with_sigma: bool) -> Equation {
    let mut terms = vec![lin(S, 1.0), xlog(-1.0, T, x.d, 1)];
    if with_sigma {
        terms.push(lin(T, -x.s / x.d));
    }
    Equation::literal(text, terms)
}

fn family5(x: &Tx, l: f64, case: u8) -> Transcription {
    let degenerate = l == 0.0;
    let log_t = || x.x_log("x = α − γ ln(t/δ)".into(), x.g, T, x.d);
    match case {
        2 => coordinate_half_plane(x, 2),
        3 => tr(
            vec![x.x_fixed(), x.zero(Z), shear_log(x, "s = t ln(t/δ)", false)],
            x.same_sign(T),
            Cylinder,
        ),
        4 => tr(
            vec![x.x_fixed(), x.zero(Z), shear_log(x, "s = σt/δ + t ln(t/δ)", true)],
            x.same_sign(T),
            Cylinder,
        ),
        5 => tr(vec![x.x_affine("λ", l), x.zero(T), x.zero(S)], x.same_sign(Z), HalfPlane),
        6 => {
            let e = x.x_power("λx = λα + γ(1 − (s/σ)^λ)".into(), l, S, x.s, l);
            let e = if degenerate {
                x.x_log("x = α − γ ln(s/σ)".into(), x.g, S, x.s).replacing(e)
            } else {
                e
            };
            tr(vec![x.x_affine("λ", l), e, x.zero(T)], x.same_sign(S), Cylinder)
        }
        7 => {
            let e = x.power("z = γ(t/δ)^λ", Z, x.g, T, x.d, l);
            let e = if degenerate { log_t().replacing(e) } else { e };
            tr(
                vec![x.x_affine("λ", l), e, shear_log(x, "s = t ln(t/δ)", false)],
                x.same_sign(T),
                Cylinder,
            )
        }
        _ => {
            // The listing constrains y here; y is free on every orbit.
            let shown = Equation::literal(
                "λy = λα + γ(1 − (t/δ)^λ)",
                vec![lin(1, l), cst(-l * x.a - x.g), pow(x.g, T, x.d, l)],
            );
            let adopted = if degenerate {
                log_t()
            } else {
                x.x_power("λx = λα + γ(1 − (t/δ)^λ)".into(), l, T, x.d, l)
            };
            tr(
                vec![
                    x.x_affine("λ", l),
                    adopted.replacing(shown),
                    shear_log(x, "s = σt/δ + t ln(t/δ)", true),
                ],
                x.same_sign(T),
                Cylinder,
            )
        }
    }
}

/// `t = z ln(z/γ) + (δ/γ)z`
fn t_zlog(x: &Tx, with_delta: bool) -> Equation {
    let mut terms = vec![lin(T, 1.0), xlog(-1.0, Z, x.g, 1)];
    if with_delta {
        terms.push(lin(Z, -x.d / x.g));
        Equation::literal("t = z ln(z/γ) + δz/γ", terms)
    } else {
        Equation::literal("t = z ln(z/γ)", terms)
    }
}

fn family6(x: &Tx, l: f64, case: u8) -> Transcription {
    let s_z = || x.power("s = σ(z/γ)^λ", S, x.s, Z, x.g, l);
    match case {
        2 | 3 => coordinate_half_plane(x, case),
        4 => tr(
            vec![x.x_fixed(), x.zero(Z), x.power("s = σ(t/δ)^λ", S, x.s, T, x.d, l)],
            x.same_sign(T),
            Cylinder,
        ),
        5 => tr(vec![x.x_affine("", 1.0), t_zlog(x, false), x.zero(S)], x.same_sign(Z), Cylinder),
        6 => tr(vec![x.x_affine("", 1.0), t_zlog(x, false), s_z()], x.same_sign(S), Cylinder),
        7 => tr(vec![x.x_affine("", 1.0), t_zlog(x, true), x.zero(S)], x.same_sign(Z), Cylinder),
        _ => tr(vec![x.x_affine("", 1.0), t_zlog(x, true), s_z()], x.same_sign(Z), Cylinder),
    }
}

fn family7(x: &Tx, case: u8) -> Transcription {
    let s_eq = |with_delta: bool, with_sigma: bool| {
        let mut terms = vec![lin(S, 1.0), xlog(-0.5, Z, x.g, 2)];
        let mut text = String::from("s = (z/2) ln²(z/γ)");
        if with_delta {
            terms.push(xlog(-x.d / x.g, Z, x.g, 1));
            text.push_str(" + (δ/γ)z ln(z/γ)");
        }
        if with_sigma {
            terms.push(lin(Z, -x.s / x.g));
            text.push_str(" + σz/γ");
        }
        Equation::literal(text, terms).flag()
    };
    match case {
        2 => coordinate_half_plane(x, 2),
        3 => tr(
            vec![x.x_fixed(), x.zero(Z), shear_log(x, "s = t ln(t/δ)", false)],
            x.same_sign(T),
            Cylinder,
        ),
        4 => tr(
            vec![x.x_fixed(), x.zero(Z), shear_log(x, "s = t ln(t/δ) + σt/δ", true)],
            x.same_sign(T),
            Cylinder,
        ),
        5..=8 => {
            let with_delta = case >= 7;
            let with_sigma = case.is_multiple_of(2);
            tr(
                vec![x.x_affine("", 1.0), t_zlog(x, with_delta), s_eq(with_delta, with_sigma)],
                x.same_sign(Z),
                Cylinder,
            )
        }
        _ => unreachable!(),
    }
}

fn family8(x: &Tx, lambda: f64, phi: f64, case: u8) -> Transcription {
    if case == 2 {
        return coordinate_half_plane(x, 2);
    }
    let (sn, cs) = phi.sin_cos();
    let x_rel = Equation::literal(
        "x = α − cos φ·(z − γ) + sin φ·(t − δ)",
        vec![lin(X, 1.0), cst(-x.a - cs * x.g + sn * x.d), lin(Z, cs), lin(T, -sn)],
    )
    .replacing_absent("x, y left free by the displayed set");
    let (gamma, delta, sigma) = (x.g, x.d, x.s);
    let mut equations = vec![x_rel];
    let mut signs = Vec::new();
    if sigma != 0.0 {
        for (component, name) in [(0, "z"), (1, "t")] {
            let adopted = Constraint::RotationScaling {
                component,
                gamma,
                delta,
                phi,
                sigma,
                lambda,
            };
            let shown = Constraint::LiteralRotation {
                component,
                gamma,
                delta,
                phi,
                sigma,
                lambda,
            };
            let part = if component == 0 { "Re" } else { "Im" };
            let shown_text = format!("{name} = {part}[γe^(b e^(−iφ)) + δe^(b e^(iφ))], s = σe^(λb)");
            // With δ = 0 the displayed curve is the true one.
            equations.push(if delta == 0.0 {
                Equation {
                    text: shown_text,
                    constraint: shown,
                    literal: None,
                    flagged: true,
                }
            } else {
                Equation {
                    text: format!("{name} = {part}[(γ + iδ)e^(b e^(−iφ))], b = ln(s/σ)/λ"),
                    constraint: adopted,
                    literal: Some(LiteralForm {
                        text: shown_text,
                        constraint: Some(shown),
                    }),
                    flagged: false,
                }
            });
        }
        signs.push(x.same_sign(S));
    } else {
        equations.push(x.zero(S));
        let shown = "z + it = γe^(b e^(−iφ)) + δe^(b e^(iφ))";
        if cs.abs() < RIGHT_ANGLE_EPS {
            equations.push(Equation {
                text: "z² + t² = γ² + δ²".into(),
                constraint: Constraint::Circle {
                    radius: gamma.hypot(delta),
                },
                literal: None,
                flagged: false,
            }
            .replacing_absent(shown));
        } else {
            equations.push(Equation {
                text: "z + it = (γ + iδ)e^(b e^(−iφ)), b = ln(|z + it|/|γ + iδ|)/cos φ".into(),
                constraint: Constraint::Spiral { gamma, delta, phi },
                literal: None,
                flagged: false,
            }
            .replacing_absent(shown));
            signs.push(SignPredicate::Aligned { gamma, delta, phi });
        }
    }
    Transcription {
        equations,
        signs,
        stated: Cylinder,
    }
}

/// Descriptor of the orbit through `f`. Zero entries of `(γ, δ, σ)` are
/// detected by exact comparison.
pub fn classify_orbit(family: FamilyId, params: FamilyParams, f: &CoVector) -> Result<OrbitDescriptor, DomainError> {
    let alg = build_algebra(family, params)?;
    Ok(classify_for(&alg, f, 0.0))
}

/// Like [`classify_orbit`], but `|·| < snap` counts as zero and the snapped
/// coordinates are set to zero in the frozen base.
pub fn classify_orbit_snapped(
    family: FamilyId,
    params: FamilyParams,
    f: &CoVector,
    snap: f64,
) -> Result<OrbitDescriptor, DomainError> {
    let alg = build_algebra(family, params)?;
    Ok(classify_for(&alg, f, snap))
}

/// Classification for an already validated algebra.
pub fn classify_for(alg: &LieAlgebra, f: &CoVector, snap: f64) -> OrbitDescriptor {
    let family = alg.family();
    let params = *alg.params();
    let zero_pattern = ZeroPattern::of(f, snap);
    let mut base = *f;
    let mut snapped = false;
    for (k, zero) in [zero_pattern.gamma, zero_pattern.delta, zero_pattern.sigma].into_iter().enumerate() {
        if zero && base.0[2 + k] != 0.0 {
            base.0[2 + k] = 0.0;
            snapped = true;
        }
    }
    let case = OrbitCase {
        family,
        case_index: case_index(family, zero_pattern),
        zero_pattern,
    };
    if case.case_index == 1 {
        return OrbitDescriptor {
            case,
            params,
            base,
            equations: Vec::new(),
            signs: Vec::new(),
            dim: 0,
            shape: Shape::Point,
            stated_shape: Shape::Point,
            provenance: Provenance::Literal,
            snapped,
        };
    }
    let x = Tx {
        a: base.alpha(),
        g: base.gamma(),
        d: base.delta(),
        s: base.sigma(),
    };
    let k = case.case_index;
    let t = match params {
        FamilyParams::Pair { lambda1, lambda2 } => family1(&x, lambda1, lambda2, k),
        FamilyParams::Single { lambda } => match family {
            FamilyId::F2 => family2(&x, lambda, k),
            FamilyId::F3 => family3(&x, lambda, k),
            FamilyId::F5 => family5(&x, lambda, k),
            _ => family6(&x, lambda, k),
        },
        FamilyParams::Unit => match family {
            FamilyId::F4 => family4(&x, k),
            _ => family7(&x, k),
        },
        FamilyParams::Rotation { lambda, phi } => family8(&x, lambda, phi, k),
    };
    let shape = if t.equations.iter().all(|e| e.constraint.is_affine()) {
        Shape::HalfPlane
    } else {
        Shape::Cylinder
    };
    let provenance = if t.equations.iter().any(|e| e.literal.is_some()) {
        Provenance::OracleCorrected
    } else {
        Provenance::Literal
    };
    OrbitDescriptor {
        case,
        params,
        base,
        equations: t.equations,
        signs: t.signs,
        dim: 2,
        shape,
        stated_shape: t.stated,
        provenance,
        snapped,
    }
}

fn normalizer(p: &Vec5) -> f64 {
    1.0 + vec_norm_inf(p)
}

impl OrbitDescriptor {
    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.equations.iter().map(|e| &e.constraint)
    }

    /// Normalized residuals `g_i(p)/(1 + |p|∞)`. A dim-0 descriptor yields the
    /// normalized coordinate differences from the base.
    pub fn residuals(&self, p: &CoVector) -> Result<Vec<f64>, EvaluationError> {
        let n = normalizer(&p.0);
        if self.dim == 0 {
            return Ok((0..5).map(|k| (p.0[k] - self.base.0[k]) / n).collect());
        }
        self.constraints().map(|c| c.eval(&p.0).map(|v| v / n)).collect()
    }

    pub fn signs_hold(&self, p: &CoVector) -> bool {
        self.signs.iter().all(|s| s.holds(&p.0))
    }

    /// Largest normalized residual, or `∞` when `p` is outside the sign
    /// stratum or some term cannot be evaluated.
    pub fn separation(&self, p: &CoVector) -> f64 {
        if !self.signs_hold(p) {
            return f64::INFINITY;
        }
        match self.residuals(p) {
            Ok(r) => r.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn is_member(&self, p: &CoVector, tol: f64) -> bool {
        self.separation(p) < tol
    }

    /// Gradient rows of the constraints at `p`.
    pub fn gradients(&self, p: &CoVector) -> Result<Vec<Vec5>, EvaluationError> {
        self.constraints().map(|c| c.gradient(&p.0)).collect()
    }

    /// Whether the displayed shape label agrees with the structural one.
    pub fn shape_matches_label(&self) -> bool {
        self.shape == self.stated_shape
    }
}

impl fmt::Display for OrbitDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "family {} case {}, {}, dim {}",
            self.case.family, self.case.case_index, self.shape, self.dim
        )?;
        writeln!(f, "base {}", self.base)?;
        if self.dim == 0 {
            return writeln!(f, "orbit = {{base}}");
        }
        for e in &self.equations {
            match &e.literal {
                Some(l) => writeln!(f, "  {}    [replaces: {}]", e.text, l.text)?,
                None if e.flagged => writeln!(f, "  {}    [flagged]", e.text)?,
                None => writeln!(f, "  {}", e.text)?,
            }
        }
        for s in &self.signs {
            writeln!(f, "  {}", s.text())?;
        }
        if !self.shape_matches_label() {
            writeln!(f, "listed as {}", self.stated_shape)?;
        }
        write!(f, "provenance {}", match self.provenance {
            Provenance::Literal => "literal",
            Provenance::OracleCorrected => "oracle-corrected",
        })
    }
}

pub fn constraint_residuals(desc: &OrbitDescriptor, p: &CoVector) -> Result<Vec<f64>, EvaluationError> {
    desc.residuals(p)
}

pub fn is_member(desc: &OrbitDescriptor, p: &CoVector, tol: f64) -> bool {
    desc.is_member(p, tol)
}

/// Largest `|B(p)_i · ∇g(p)| / (1 + |p|∞)` over constraints `g` and rows `i`
/// of the Kirillov form at `p`.
pub fn tangency_residual(alg: &LieAlgebra, desc: &OrbitDescriptor, p: &CoVector) -> Result<f64, EvaluationError> {
    if desc.dim == 0 {
        return Ok(0.0);
    }
    let b = kirillov_form(alg, p).b;
    let n = normalizer(&p.0);
    let mut worst = 0.0_f64;
    for grad in desc.gradients(p)? {
        for row in &b {
            let dot: f64 = row.iter().zip(&grad).map(|(r, g)| r * g).sum();
            worst = worst.max(dot.abs() / n);
        }
    }
    Ok(worst)
}

/// Numeric rank of the normalized constraint gradients at `p`.
pub fn jacobian_rank_check(desc: &OrbitDescriptor, p: &CoVector) -> Result<usize> {
    if desc.dim == 0 {
        return Err(Error::Precondition("Jacobian rank needs a 2-dimensional orbit".into()));
    }
    Ok(rank_of_rows(&normalized_gradients(desc, p)?, JACOBIAN_RANK_TOL))
}

pub(crate) fn normalized_gradients(desc: &OrbitDescriptor, p: &CoVector) -> Result<Vec<Vec5>, EvaluationError> {
    let mut rows = desc.gradients(p)?;
    for r in rows.iter_mut() {
        let n = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.0 {
            r.iter_mut().for_each(|v| *v /= n);
        }
    }
    Ok(rows)
}

/// Largest relative gap between analytic and central-difference gradients.
pub fn gradient_discrepancy(desc: &OrbitDescriptor, p: &CoVector, h: f64) -> Result<f64, EvaluationError> {
    let mut worst = 0.0_f64;
    for c in desc.constraints() {
        let an = c.gradient(&p.0)?;
        let scale = vec_norm_inf(&an).max(f64::MIN_POSITIVE);
        for k in 0..5 {
            let mut hi = p.0;
            let mut lo = p.0;
            hi[k] += h;
            lo[k] -= h;
            let fd = (c.eval(&hi)? - c.eval(&lo)?) / (2.0 * h);
            worst = worst.max((an[k] - fd).abs() / scale);
        }
    }
    Ok(worst)
}

/// Mutual membership of `f2` in the orbit of `f1` and vice versa.
pub fn orbits_equal(alg: &LieAlgebra, f1: &CoVector, f2: &CoVector, tol: f64) -> Result<bool> {
    let forward = classify_for(alg, f1, 0.0).is_member(f2, tol);
    let backward = classify_for(alg, f2, 0.0).is_member(f1, tol);
    if forward != backward {
        return Err(Error::Asymmetry { forward, backward });
    }
    Ok(forward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_params;

    fn f1() -> LieAlgebra {
        build_algebra(FamilyId::F1, FamilyParams::Pair { lambda1: 2.0, lambda2: 3.0 }).unwrap()
    }

    #[test]
    fn fixed_point_case() {
        let d = classify_for(&f1(), &CoVector::new(1.0, 2.0, 0.0, 0.0, 0.0), 0.0);
        assert_eq!(d.case.case_index, 1);
        assert_eq!(d.dim, 0);
        assert_eq!(d.shape, Shape::Point);
        assert!(d.is_member(&CoVector::new(1.0, 2.0, 0.0, 0.0, 0.0), 1e-12));
        assert!(!d.is_member(&CoVector::new(1.0, 2.5, 0.0, 0.0, 0.0), 1e-8));
    }

    #[test]
    fn family1_case4_is_a_cylinder() {
        let d = classify_for(&f1(), &CoVector::new(0.0, 0.0, 0.0, 1.0, 1.0), 0.0);
        assert_eq!(d.case.case_index, 4);
        assert_eq!(d.shape, Shape::Cylinder);
        assert_eq!(d.equations[2].text, "t = δ(s/σ)^λ₂");
        assert_eq!(d.signs[0].text(), "σs > 0");
    }

    #[test]
    fn family4_case8_is_a_half_plane() {
        let d = classify_orbit(FamilyId::F4, FamilyParams::Unit, &CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(d.case.case_index, 8);
        assert_eq!(d.shape, Shape::HalfPlane);
        let texts: Vec<_> = d.equations.iter().map(|e| e.text.as_str()).collect();
        assert_eq!(texts, ["x = α + γ − z", "x = α + γ(1 − s/σ)", "σt = δs"]);
        assert_eq!(d.signs[0].text(), "δt > 0");
        assert_eq!(jacobian_rank_check(&d, &d.base).unwrap(), 3);
    }

    #[test]
    fn residuals_at_a_moved_point() {
        let d = classify_for(&f1(), &CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0), 0.0);
        let p = CoVector::new(-1.5, 17.0, 4.0, 8.0, 2.0);
        for r in d.residuals(&p).unwrap() {
            assert!(r.abs() < 1e-12);
        }
        assert!(d.is_member(&p, 1e-8));
        let flipped = CoVector::new(-1.5, 17.0, 4.0, 8.0, -2.0);
        assert!(d.residuals(&flipped).is_err());
        assert!(!d.is_member(&flipped, 1e-8));
        assert!(!d.is_member(&CoVector::new(0.0, 0.0, -1.0, 1.0, 1.0), 1e-8));
    }

    #[test]
    fn every_base_satisfies_its_own_equations() {
        for family in FamilyId::ALL {
            let alg = build_algebra(family, default_params(family)).unwrap();
            for bits in 0..8u8 {
                for sign in [1.0, -1.0] {
                    let v = |b: u8| if bits & b != 0 { sign * 1.3 } else { 0.0 };
                    let f = CoVector::new(0.4, -0.2, v(4), v(2), v(1));
                    let d = classify_for(&alg, &f, 0.0);
                    assert!(d.is_member(&f, 1e-15), "{family} {f}");
                    if d.dim == 2 {
                        assert_eq!(jacobian_rank_check(&d, &f).unwrap(), 3, "{family} {f}");
                    }
                }
            }
        }
    }

    #[test]
    fn case_indices() {
        let alg = f1();
        let idx = |g, d, s| classify_for(&alg, &CoVector::new(0.0, 0.0, g, d, s), 0.0).case.case_index;
        assert_eq!(idx(0.0, 0.0, 1.0), 2);
        assert_eq!(idx(0.0, 1.0, 0.0), 3);
        assert_eq!(idx(1.0, 0.0, 0.0), 5);
        assert_eq!(idx(1.0, 1.0, 1.0), 8);
        let f8 = build_algebra(FamilyId::F8, default_params(FamilyId::F8)).unwrap();
        let idx8 = |g, d, s| classify_for(&f8, &CoVector::new(0.0, 0.0, g, d, s), 0.0).case.case_index;
        assert_eq!(idx8(0.0, 0.0, 0.0), 1);
        assert_eq!(idx8(0.0, 0.0, 2.0), 2);
        assert_eq!(idx8(0.0, 1.0, 0.0), 3);
        assert_eq!(idx8(1.0, 0.0, 1.0), 3);
    }

    #[test]
    fn snapping_zeroes_tiny_entries_and_flags_them() {
        let f = CoVector::new(0.0, 0.0, 1e-14, 1.0, 1.0);
        let exact = classify_orbit(FamilyId::F1, default_params(FamilyId::F1), &f).unwrap();
        assert_eq!(exact.case.case_index, 8);
        assert!(!exact.snapped);
        let d = classify_orbit_snapped(FamilyId::F1, default_params(FamilyId::F1), &f, DEFAULT_SNAP_TOL).unwrap();
        assert_eq!(d.case.case_index, 4);
        assert!(d.snapped);
        assert_eq!(d.base.gamma(), 0.0);
    }

    #[test]
    fn distinct_strata_are_not_equal() {
        let alg = f1();
        let a = CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0);
        assert!(orbits_equal(&alg, &a, &a, 1e-8).unwrap());
        assert!(!orbits_equal(&alg, &a, &CoVector::new(0.0, 0.0, 0.0, 0.0, 0.0), 1e-8).unwrap());
    }

    #[test]
    fn dim0_jacobian_is_a_precondition_error() {
        let d = classify_for(&f1(), &CoVector::new(0.0, 0.0, 0.0, 0.0, 0.0), 0.0);
        assert!(matches!(jacobian_rank_check(&d, &d.base), Err(Error::Precondition(_))));
        assert_eq!(tangency_residual(&f1(), &d, &d.base).unwrap(), 0.0);
    }

    #[test]
    fn shape_labels_that_disagree_with_structure() {
        let alg = build_algebra(FamilyId::F3, FamilyParams::Single { lambda: 2.0 }).unwrap();
        let d = classify_for(&alg, &CoVector::new(0.0, 0.0, 0.0, 1.0, 1.0), 0.0);
        assert_eq!(d.shape, Shape::HalfPlane);
        assert_eq!(d.stated_shape, Shape::Cylinder);
        assert!(!d.shape_matches_label());
    }
}
