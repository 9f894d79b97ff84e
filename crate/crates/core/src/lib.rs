//! Coadjoint orbits of the eight five-dimensional solvable Lie algebra
//! families `G5.3.1`–`G5.3.8`, whose derived ideal is `ℝ³`.
//!
//! The crate builds each algebra from its structure constants, moves
//! covectors with `exp(ad U)`, computes orbit dimensions from the Kirillov
//! form, describes every orbit by closed-form equations, and checks those
//! descriptions against sampled orbit points.
//!
//! ```
//! use korbit::{build_algebra, classify_orbit, default_params, CoVector, FamilyId};
//!
//! let family = FamilyId::F4;
//! let f = CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0);
//! let orbit = classify_orbit(family, default_params(family), &f).unwrap();
//! assert_eq!(orbit.case.case_index, 8);
//! assert_eq!(orbit.dim, 2);
//! # let _ = build_algebra(family, default_params(family));
//! ```

pub mod algebra;
pub mod commands;
pub mod config;
pub mod error;
pub mod exp_action;
pub mod foliation;
pub mod kirillov;
pub mod linalg;
pub mod orbit;
pub mod report;
pub mod sampling;

pub use algebra::{
    build_algebra, catalog, default_params, validate_params, AlgebraElement, CoVector, FamilyId, FamilyParams,
    LieAlgebra,
};
pub use config::{OutputFormat, RunConfig, Tolerances};
pub use error::{DomainError, Error, EvaluationError, Result};
pub use exp_action::{coadjoint_move, exp_ad, exp_ad_closed, sample_orbit, OrbitSample};
pub use foliation::{generic_stratum_contains, local_triviality_probe, partition_check, StratumReport};
pub use kirillov::{kirillov_form, md_scan, orbit_dimension, MdReport};
pub use orbit::{
    classify_orbit, is_member, orbits_equal, tangency_residual, verify_proposition, OrbitDescriptor, Shape,
    VerificationReport,
};
