use serde::{Deserialize, Serialize};

use super::linalg::{invert, Echelon};
use super::subspace::{full_space_with, kernel_within, StreamLimits, Subspace};
use crate::error::{Error, Result};
use crate::polynomials::SparseVector;
use crate::scalars::{Field, Scalar};

/// Basis of the finite-dimensional seed subspace; empty means the zero space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SparseVector>", into = "Vec<SparseVector>")]
pub struct SeedSpace {
    basis: Vec<SparseVector>,
}

impl SeedSpace {
    pub fn new(basis: Vec<SparseVector>) -> Result<Self> {
        let mut e = Echelon::new();
        for v in &basis {
            if !e.insert(v) {
                return Err(Error::DependentSeed);
            }
        }
        Ok(Self { basis })
    }

    pub fn empty() -> Self {
        Self { basis: Vec::new() }
    }

    pub fn basis(&self) -> &[SparseVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Functionals `ψᵢ` with `ψᵢ(xⱼ) = δᵢⱼ`, each supported on the pivot
    /// coordinates of an echelon form of the basis.
    pub fn dual_functionals(&self) -> Vec<SparseVector> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        let mut e = if self.basis.iter().all(SparseVector::is_exact) { Echelon::new() } else { Echelon::approximate() };
        for v in &self.basis {
            e.insert(v);
        }
        let pivots = e.pivots();
        let m: Vec<Vec<Scalar>> = self.basis.iter().map(|x| pivots.iter().map(|&j| x.get(j)).collect()).collect();
        let inv = invert(&m).expect("pivot minor of an independent basis is invertible");
        let field = self.basis.iter().fold(Field::Rational, |f, v| f.join(v.field()));
        (0..self.basis.len())
            .map(|i| SparseVector::from_entries(field, pivots.iter().enumerate().map(|(k, &j)| (j, inv[k][i].clone()))))
            .collect()
    }

    /// `z = Σ cᵢxᵢ + y` with `ψᵢ(y) = 0`; returns `(c, y)`.
    pub fn decompose(&self, z: &SparseVector) -> (Vec<Scalar>, SparseVector) {
        let duals = self.dual_functionals();
        let coeffs: Vec<Scalar> = duals.iter().map(|psi| psi.dot(z)).collect();
        let mut y = z.clone();
        for (c, x) in coeffs.iter().zip(&self.basis) {
            y = y.axpy(&-c, x);
        }
        (coeffs, y)
    }
}

impl TryFrom<Vec<SparseVector>> for SeedSpace {
    type Error = Error;

    fn try_from(v: Vec<SparseVector>) -> Result<Self> {
        SeedSpace::new(v)
    }
}

impl From<SeedSpace> for Vec<SparseVector> {
    fn from(s: SeedSpace) -> Self {
        s.basis
    }
}

/// Algebraic complement of the seed: the common kernel of its dual functionals.
pub fn direct_complement(w: &SeedSpace, field: Field, limits: StreamLimits) -> Subspace {
    let full = full_space_with(field, limits);
    if w.is_empty() {
        return full;
    }
    kernel_within(full, w.dual_functionals(), "complement of the seed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::exact_rank;

    const R: Field = Field::Rational;

    #[test]
    fn complement_examples() {
        let w = SeedSpace::new(vec![SparseVector::unit(R, 1)]).unwrap();
        let mut y = direct_complement(&w, R, StreamLimits::default());
        for v in y.take(5).unwrap() {
            assert!(v.get(1).is_zero());
        }

        let mut y = direct_complement(&SeedSpace::empty(), R, StreamLimits::default());
        assert_eq!(y.next_basis_vector().unwrap(), SparseVector::unit(R, 1));
    }

    /// Oracle: e₁ = a·(e₁+e₂) + y with y₁ = 0 forces a = 1, y = −e₂.
    #[test]
    fn decomposition_against_hand_solve() {
        let x = SparseVector::from_ints(R, &[(1, 1), (2, 1)]);
        let w = SeedSpace::new(vec![x.clone()]).unwrap();
        let (c, y) = w.decompose(&SparseVector::unit(R, 1));
        assert_eq!(c, vec![Scalar::one()]);
        assert_eq!(y, SparseVector::from_ints(R, &[(2, -1)]));
        let psi = &w.dual_functionals()[0];
        assert_eq!(psi.dot(&x), Scalar::one());
        let mut comp = direct_complement(&w, R, StreamLimits::default());
        let mut all = comp.take(4).unwrap();
        all.push(x);
        assert_eq!(exact_rank(&all), 5);
    }

    #[test]
    fn dependent_seed_rejected() {
        let a = SparseVector::from_ints(R, &[(1, 1), (2, 1)]);
        let b = a.scale(&Scalar::int(3));
        assert!(matches!(SeedSpace::new(vec![a, b]), Err(Error::DependentSeed)));
    }
}
