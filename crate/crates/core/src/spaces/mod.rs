//! Lazy infinite-dimensional subspaces: basis streams, kernels, exclusion,
//! complements and rank.

mod complement;
mod linalg;
mod provenance;
mod subspace;

pub use complement::{direct_complement, SeedSpace};
pub use linalg::{common_field, exact_rank, invert, Echelon, APPROX_PIVOT_RELATIVE};
pub use provenance::{flat_lineage, FlatNode, NodeKind, ProvenanceNode, ProvenanceWriter};
pub use subspace::{
    exclude_vector, full_space, full_space_with, kernel_within, refine_vanishing, StreamLimits, Subspace,
    VectorSource,
};
