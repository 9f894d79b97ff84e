//! Residual functions `g(x, y, z, t, s)` cutting out an orbit, with analytic
//! gradients.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::EvaluationError;
use crate::linalg::Vec5;

pub(crate) const VAR_NAMES: [&str; 5] = ["x", "y", "z", "t", "s"];

/// One summand of a [`Constraint::Sum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    Const { value: f64 },
    Linear { var: usize, coef: f64 },
    /// `coef · (p_var / scale)^exponent`
    Power { coef: f64, var: usize, scale: f64, exponent: f64 },
    /// `coef · p_var · ln^k(p_var / scale)`
    XLog { coef: f64, var: usize, scale: f64, k: i32 },
    /// `coef · ln(p_var / scale)`
    Log { coef: f64, var: usize, scale: f64 },
}

impl Term {
    fn ratio(&self, p: &Vec5, var: usize, scale: f64) -> Result<f64, EvaluationError> {
        let r = p[var] / scale;
        if r > 0.0 && r.is_finite() {
            Ok(r)
        } else {
            Err(EvaluationError {
                term: format!("{}/{}", VAR_NAMES[var], scale),
                argument: r,
            })
        }
    }

    pub fn eval(&self, p: &Vec5) -> Result<f64, EvaluationError> {
        Ok(match *self {
            Term::Const { value } => value,
            Term::Linear { var, coef } => coef * p[var],
            Term::Power { coef, var, scale, exponent } => {
                if exponent == 0.0 {
                    coef
                } else if exponent == 1.0 {
                    coef * p[var] / scale
                } else {
                    coef * self.ratio(p, var, scale)?.powf(exponent)
                }
            }
            Term::XLog { coef, var, scale, k } => coef * p[var] * self.ratio(p, var, scale)?.ln().powi(k),
            Term::Log { coef, var, scale } => coef * self.ratio(p, var, scale)?.ln(),
        })
    }

    /// Adds this term's gradient into `grad`.
    pub fn accumulate_gradient(&self, p: &Vec5, grad: &mut Vec5) -> Result<(), EvaluationError> {
        match *self {
            Term::Const { .. } => {}
            Term::Linear { var, coef } => grad[var] += coef,
            Term::Power { coef, var, scale, exponent } => {
                if exponent == 1.0 {
                    grad[var] += coef / scale;
                } else if exponent != 0.0 {
                    let r = self.ratio(p, var, scale)?;
                    grad[var] += coef * exponent * r.powf(exponent - 1.0) / scale;
                }
            }
            Term::XLog { coef, var, scale, k } => {
                let l = self.ratio(p, var, scale)?.ln();
                grad[var] += coef * (l.powi(k) + f64::from(k) * l.powi(k - 1));
            }
            Term::Log { coef, var, scale } => {
                self.ratio(p, var, scale)?;
                grad[var] += coef / p[var];
            }
        }
        Ok(())
    }

    fn is_affine(&self) -> bool {
        match *self {
            Term::Const { .. } | Term::Linear { .. } => true,
            Term::Power { exponent, .. } => exponent == 0.0 || exponent == 1.0,
            Term::XLog { .. } | Term::Log { .. } => false,
        }
    }
}

/// A single scalar equation `g(p) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    Sum { terms: Vec<Term> },
    /// Family 8 with `σ ≠ 0`: component `0` (z) or `1` (t) of
    /// `(z, t) − e^{bA}(γ, δ)`, `A = [[cos φ, sin φ], [−sin φ, cos φ]]`,
    /// with the group parameter recovered as `b = ln(s/σ)/λ`.
    RotationScaling {
        component: usize,
        gamma: f64,
        delta: f64,
        phi: f64,
        sigma: f64,
        lambda: f64,
    },
    /// Family 8 with `σ = 0` and `cos φ ≠ 0`: `(z, t)` on the logarithmic
    /// spiral through `(γ, δ)`. `b` comes from the modulus, and the residual
    /// is the cross product of `(z, t)` with the unit direction the spiral has
    /// at that modulus.
    Spiral { gamma: f64, delta: f64, phi: f64 },
    /// Family 8 with `σ = 0` and `cos φ = 0`: `|(z, t)| − |(γ, δ)|`.
    Circle { radius: f64 },
    /// The displayed family-8 curve `z + it = γ e^{b e^{−iφ}} + δ e^{b e^{iφ}}`
    /// with `b = ln(s/σ)/λ`; kept for adjudication only.
    LiteralRotation {
        component: usize,
        gamma: f64,
        delta: f64,
        phi: f64,
        sigma: f64,
        lambda: f64,
    },
}

/// `cos φ` is treated as zero below this magnitude.
pub const RIGHT_ANGLE_EPS: f64 = 1e-12;

fn positive_ratio(num: f64, den: f64, what: &str) -> Result<f64, EvaluationError> {
    let r = num / den;
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(EvaluationError {
            term: what.to_string(),
            argument: r,
        })
    }
}

/// Rotation-scaling image `e^{bA}(γ, δ)` and its `b`-derivative `A e^{bA}(γ, δ)`.
fn rotation_scaling(gamma: f64, delta: f64, phi: f64, b: f64) -> ([f64; 2], [f64; 2]) {
    let (s, c) = phi.sin_cos();
    let scale = (b * c).exp();
    let (sn, cs) = (b * s).sin_cos();
    let z = scale * (gamma * cs + delta * sn);
    let t = scale * (-gamma * sn + delta * cs);
    ([z, t], [c * z + s * t, -s * z + c * t])
}

/// Unit direction of the spiral through `(γ, δ)` at group parameter `b`.
fn spiral_direction(gamma: f64, delta: f64, phi: f64, b: f64) -> [f64; 2] {
    let r0 = gamma.hypot(delta);
    let s = phi.sin();
    let (sn, cs) = (b * s).sin_cos();
    [(gamma * cs + delta * sn) / r0, (-gamma * sn + delta * cs) / r0]
}

impl Constraint {
    pub fn sum(terms: Vec<Term>) -> Constraint {
        Constraint::Sum { terms }
    }

    pub fn eval(&self, p: &Vec5) -> Result<f64, EvaluationError> {
        match self {
            Constraint::Sum { terms } => terms.iter().map(|t| t.eval(p)).sum(),
            &Constraint::RotationScaling {
                component,
                gamma,
                delta,
                phi,
                sigma,
                lambda,
            } => {
                let b = positive_ratio(p[4], sigma, "s/σ")?.ln() / lambda;
                let (pred, _) = rotation_scaling(gamma, delta, phi, b);
                Ok(p[2 + component] - pred[component])
            }
            &Constraint::Spiral { gamma, delta, phi } => {
                let r = p[2].hypot(p[3]);
                let b = positive_ratio(r, gamma.hypot(delta), "|(z,t)|/|(γ,δ)|")?.ln() / phi.cos();
                let w = spiral_direction(gamma, delta, phi, b);
                Ok(w[0] * p[3] - w[1] * p[2])
            }
            &Constraint::Circle { radius } => Ok(p[2].hypot(p[3]) - radius),
            &Constraint::LiteralRotation {
                component,
                gamma,
                delta,
                phi,
                sigma,
                lambda,
            } => {
                let b = positive_ratio(p[4], sigma, "s/σ")?.ln() / lambda;
                let w = literal_curve(gamma, delta, phi, b);
                Ok(p[2 + component] - if component == 0 { w.re } else { w.im })
            }
        }
    }

    pub fn gradient(&self, p: &Vec5) -> Result<Vec5, EvaluationError> {
        let mut g = [0.0; 5];
        match self {
            Constraint::Sum { terms } => {
                for t in terms {
                    t.accumulate_gradient(p, &mut g)?;
                }
            }
            &Constraint::RotationScaling {
                component,
                gamma,
                delta,
                phi,
                sigma,
                lambda,
            } => {
                let b = positive_ratio(p[4], sigma, "s/σ")?.ln() / lambda;
                let (_, dpred) = rotation_scaling(gamma, delta, phi, b);
                g[2 + component] = 1.0;
                g[4] = -dpred[component] / (lambda * p[4]);
            }
            &Constraint::Spiral { gamma, delta, phi } => {
                let (s, c) = phi.sin_cos();
                let r2 = p[2] * p[2] + p[3] * p[3];
                let b = positive_ratio(r2.sqrt(), gamma.hypot(delta), "|(z,t)|/|(γ,δ)|")?.ln() / c;
                let w = spiral_direction(gamma, delta, phi, b);
                // d(residual)/db, using dw/db = sin φ · (w_t, −w_z)
                let d_db = s * (w[1] * p[3] + w[0] * p[2]);
                g[2] = -w[1] + d_db * p[2] / (c * r2);
                g[3] = w[0] + d_db * p[3] / (c * r2);
            }
            &Constraint::Circle { .. } => {
                let r = p[2].hypot(p[3]);
                if r == 0.0 {
                    return Err(EvaluationError {
                        term: "|(z,t)|".into(),
                        argument: 0.0,
                    });
                }
                g[2] = p[2] / r;
                g[3] = p[3] / r;
            }
            &Constraint::LiteralRotation {
                component,
                gamma,
                delta,
                phi,
                sigma,
                lambda,
            } => {
                let b = positive_ratio(p[4], sigma, "s/σ")?.ln() / lambda;
                let minus = Complex64::from_polar(1.0, -phi);
                let plus = Complex64::from_polar(1.0, phi);
                let dw = gamma * minus * (b * minus).exp() + delta * plus * (b * plus).exp();
                g[2 + component] = 1.0;
                g[4] = -(if component == 0 { dw.re } else { dw.im }) / (lambda * p[4]);
            }
        }
        Ok(g)
    }

    /// True when the equation is affine in `(x, y, z, t, s)`.
    pub fn is_affine(&self) -> bool {
        match self {
            Constraint::Sum { terms } => terms.iter().all(Term::is_affine),
            _ => false,
        }
    }
}

fn literal_curve(gamma: f64, delta: f64, phi: f64, b: f64) -> Complex64 {
    let minus = Complex64::from_polar(b, -phi);
    let plus = Complex64::from_polar(b, phi);
    gamma * minus.exp() + delta * plus.exp()
}

/// Strict inequality describing a connected component of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignPredicate {
    /// `reference · p_var > 0`
    SameSign { var: usize, reference: f64 },
    /// Family 8 spiral branch: `(z, t)` points along the spiral direction at its own modulus.
    Aligned { gamma: f64, delta: f64, phi: f64 },
}

impl SignPredicate {
    pub fn holds(&self, p: &Vec5) -> bool {
        match *self {
            SignPredicate::SameSign { var, reference } => reference * p[var] > 0.0,
            SignPredicate::Aligned { gamma, delta, phi } => {
                let r = p[2].hypot(p[3]);
                let r0 = gamma.hypot(delta);
                if !(r > 0.0 && r0 > 0.0) {
                    return false;
                }
                let b = (r / r0).ln() / phi.cos();
                let w = spiral_direction(gamma, delta, phi, b);
                w[0] * p[2] + w[1] * p[3] > 0.0
            }
        }
    }

    pub fn text(&self) -> String {
        match *self {
            SignPredicate::SameSign { var, .. } => {
                let base = ["α", "β", "γ", "δ", "σ"][var];
                format!("{base}{} > 0", VAR_NAMES[var])
            }
            SignPredicate::Aligned { .. } => "(z, t) on the spiral branch through (γ, δ)".into(),
        }
    }
}
