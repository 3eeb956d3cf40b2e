use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomials::{derived_poly, vanishes_on_span, HomPoly, MultiIndex, SparseVector};
use crate::scalars::Tolerance;

/// One derived polynomial `P̌(z^β, xᵗ)`; `fixed` indexes the combined list
/// seed basis ++ produced vectors (1-based), exponents are multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedMember {
    pub degree: u32,
    pub fixed: MultiIndex,
    pub poly: HomPoly,
}

/// Identifier of a derived polynomial, as stored in certificates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerivedKey {
    pub degree: u32,
    pub fixed: MultiIndex,
}

impl DerivedMember {
    pub fn key(&self) -> DerivedKey {
        DerivedKey { degree: self.degree, fixed: self.fixed.clone() }
    }
}

/// Multisets of size `size` over `1..=count` that contain `required` (if any),
/// in lexicographic order of their sorted index sequences.
fn multisets(count: usize, size: u32, required: Option<usize>) -> Vec<MultiIndex> {
    MultiIndex::all_of_degree(count, size)
        .into_iter()
        .filter(|mi| required.is_none_or(|r| mi.exponent(r) >= 1))
        .collect()
}

/// The fixed-argument lists behind `fixed`.
pub fn fixed_arguments(fixed: &MultiIndex, combined: &[SparseVector]) -> Result<Vec<(SparseVector, u32)>> {
    fixed
        .iter()
        .map(|(i, b)| {
            combined
                .get(i - 1)
                .map(|v| (v.clone(), b))
                .ok_or_else(|| Error::InvalidInput(format!("fixed index {i} out of range")))
        })
        .collect()
}

/// Index shapes required at the step following `witnesses.len()` witnesses:
/// every degree `1 ≤ t ≤ m−1` and every multiset of `m − t` fixed vectors
/// from seed ++ witnesses that uses the latest witness (if there is one).
pub fn derived_shapes(m: u32, seed_len: usize, witness_len: usize) -> Vec<(u32, MultiIndex)> {
    let count = seed_len + witness_len;
    let required = (witness_len > 0).then_some(count);
    let mut out = Vec::new();
    for t in 1..m {
        for fixed in multisets(count, m - t, required) {
            out.push((t, fixed));
        }
    }
    out
}

/// Derived polynomials to impose at the next step, identically zero members
/// dropped, ordered by degree and then by fixed index.
pub fn enumerate_derived(p: &HomPoly, seed: &[SparseVector], witnesses: &[SparseVector]) -> Result<Vec<DerivedMember>> {
    if witnesses.is_empty() && !seed.is_empty() {
        let report = vanishes_on_span(p, seed, Tolerance::default())?;
        if let Some((gamma, c)) = report.witness {
            return Err(Error::SeedNotInZeroSet { monomial: gamma.to_string(), coefficient: c.to_string() });
        }
    }
    derived_family(p, seed, witnesses)
}

/// [`enumerate_derived`] without the seed check.
pub fn derived_family(p: &HomPoly, seed: &[SparseVector], witnesses: &[SparseVector]) -> Result<Vec<DerivedMember>> {
    let combined: Vec<SparseVector> = seed.iter().chain(witnesses).cloned().collect();
    let mut out = Vec::new();
    for (t, fixed) in derived_shapes(p.degree(), seed.len(), witnesses.len()) {
        let poly = derived_poly(p, &fixed_arguments(&fixed, &combined)?, t)?;
        if !poly.is_zero() {
            out.push(DerivedMember { degree: t, fixed, poly });
        }
    }
    Ok(out)
}
