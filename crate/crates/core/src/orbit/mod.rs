//! Closed-form orbit descriptions, membership and tangency tests, and their
//! verification against sampled orbit points.

mod constraint;
mod descriptor;
mod verify;

pub use constraint::{Constraint, SignPredicate, Term, RIGHT_ANGLE_EPS};
pub use descriptor::{
    case_count, classify_for, classify_orbit, classify_orbit_snapped, constraint_residuals, gradient_discrepancy,
    is_member, jacobian_rank_check, orbits_equal, tangency_residual, Equation, LiteralForm, OrbitCase,
    OrbitDescriptor, Provenance, Shape, ZeroPattern, DEFAULT_MEMBER_TOL, DEFAULT_SNAP_TOL, JACOBIAN_RANK_TOL,
};
pub(crate) use descriptor::normalized_gradients;
pub use verify::{
    canonical_base, canonical_variants, verify_base, verify_case, verify_proposition, Adoption, ProvenanceNote,
    VerificationReport, VerifyOptions, FD_REL_TOL, FD_STEP, LITERAL_REJECT_TOL,
};
