use serde::{Deserialize, Serialize};

use super::slice::{binary_slice, SliceReport};
use crate::error::Result;
use crate::polynomials::{HomPoly, SparseVector};
use crate::scalars::{find_exact_roots, RootSearch, Scalar};
use crate::spaces::Subspace;

/// Outcome of probing a real polynomial on binary slices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "diagnosis")]
pub enum RealDiagnosis {
    RootFound {
        witness: SparseVector,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        slice: Option<Box<SliceReport>>,
    },
    /// No probed slice had a real exact root. Not a proof of definiteness.
    NoRealRootOnProbedSlices {
        slices: Vec<SliceReport>,
        /// `b² − 4ac` per slice, for quadratic slices; negative certifies no real root.
        discriminants: Vec<Option<Scalar>>,
    },
}

impl RealDiagnosis {
    pub fn name(&self) -> &'static str {
        match self {
            RealDiagnosis::RootFound { .. } => "RootFound",
            RealDiagnosis::NoRealRootOnProbedSlices { .. } => "NoRealRootOnProbedSlices",
        }
    }
}

/// Examines `pairs` slices through consecutive pairs of stream vectors.
pub fn probe_real_definite(p: &HomPoly, s: &mut Subspace, pairs: usize, search: &RootSearch) -> Result<RealDiagnosis> {
    let mut slices = Vec::new();
    let mut discriminants = Vec::new();
    for _ in 0..pairs {
        let u = s.next_basis_vector()?;
        if p.evaluate(&u)?.is_zero() {
            return Ok(RealDiagnosis::RootFound { witness: u, slice: None });
        }
        let v = s.next_basis_vector()?;
        if p.evaluate(&v)?.is_zero() {
            return Ok(RealDiagnosis::RootFound { witness: v, slice: None });
        }
        let mut slice = binary_slice(p, &u, &v)?;
        if slice.coefficients.is_zero() {
            return Ok(RealDiagnosis::RootFound { witness: u, slice: Some(Box::new(slice)) });
        }
        if slice.exact {
            if let Some(r) = find_exact_roots(&slice.coefficients, search)?.into_iter().next() {
                slice.root = Some(r);
                return Ok(RealDiagnosis::RootFound { witness: slice.point(), slice: Some(Box::new(slice)) });
            }
        }
        let c = slice.coefficients.coeffs();
        discriminants.push((slice.coefficients.degree() == 2).then(|| &(&c[1] * &c[1]) - &(&Scalar::int(4) * &(&c[0] * &c[2]))));
        slices.push(slice);
    }
    Ok(RealDiagnosis::NoRealRootOnProbedSlices { slices, discriminants })
}
