use serde::{Deserialize, Serialize};

use crate::polynomials::{FiniteTypePoly, HomPoly, MultiIndex, MultilinearForm, SparseVector};
use crate::spaces::FlatNode;
use crate::zerofind::ZeroWitness;

pub const CERTIFICATE_FORMAT: &str = "lineable-certificate/1";

/// What the certificate is about.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Homogeneous {
        poly: HomPoly,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        finite_type: Option<FiniteTypePoly>,
    },
    /// Common zero set; the produced vectors come from a chain of constructions.
    Intersection { polys: Vec<HomPoly> },
    /// Produced vectors are placed in `slot` (0-based); the other slots are arbitrary.
    Multilinear { form: MultilinearForm, slot: usize },
}

impl Target {
    /// Polynomials whose vanishing on the span is certified.
    pub fn polynomials(&self) -> Vec<&HomPoly> {
        match self {
            Target::Homogeneous { poly, .. } => vec![poly],
            Target::Intersection { polys } => polys.iter().collect(),
            Target::Multilinear { .. } => Vec::new(),
        }
    }
}

/// The zero found at one step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub step: usize,
    #[serde(flatten)]
    pub witness: ZeroWitness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    ExactZero,
    WithinTolerance,
}

/// A derived polynomial verified to vanish at a step's witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub step: usize,
    /// Index into the target's polynomial list.
    pub polynomial: usize,
    pub degree: u32,
    /// Multiplicities over seed ++ produced (1-based).
    pub fixed: MultiIndex,
    pub outcome: CheckOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationMode {
    FullTable,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationPolicy {
    pub mode: VerificationMode,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
}

/// Flattened subspace derivations; `steps[k]` is the node the `k+1`-th produced vector was drawn from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceRecord {
    pub nodes: Vec<FlatNode>,
    pub steps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub polynomial: Target,
    pub seed: Vec<SparseVector>,
    pub produced: Vec<SparseVector>,
    pub zero_witnesses: Vec<WitnessRecord>,
    pub checks: Vec<CheckRecord>,
    pub verification: VerificationPolicy,
    pub exact: bool,
    pub provenance: ProvenanceRecord,
}

impl Certificate {
    /// Seed basis followed by the produced vectors.
    pub fn span_basis(&self) -> Vec<SparseVector> {
        self.seed.iter().chain(&self.produced).cloned().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}
