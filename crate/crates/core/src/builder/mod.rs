//! The inductive construction, its corollaries, and certificates.

mod certificate;
mod config;
mod family;
mod session;
mod verify;

pub use certificate::{
    Certificate, CheckOutcome, CheckRecord, ProvenanceRecord, Target, VerificationMode, VerificationPolicy,
    WitnessRecord, CERTIFICATE_FORMAT,
};
pub use config::BuildConfig;
pub use family::{derived_family, derived_shapes, enumerate_derived, fixed_arguments, DerivedKey, DerivedMember};
pub use session::{
    build_finite_type, build_intersection, build_multilinear, build_through_point, build_zero_space, derived_scale,
    sample_combinations, table_size, vanishing_subspace, verification_policy, BuildSession,
};
pub use verify::{verify_certificate, VerificationFailure, VerificationReport};
