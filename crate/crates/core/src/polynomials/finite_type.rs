use serde::{Deserialize, Serialize};

use super::{HomPoly, SparseVector};
use crate::error::{Error, Result};
use crate::scalars::{Field, Scalar};

/// `P(x) = Σⱼ aⱼ·⟨φⱼ, x⟩ᵐ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FiniteTypeRepr", into = "FiniteTypeRepr")]
pub struct FiniteTypePoly {
    field: Field,
    degree: u32,
    terms: Vec<(Scalar, SparseVector)>,
}

impl FiniteTypePoly {
    pub fn new(field: Field, degree: u32, terms: Vec<(Scalar, SparseVector)>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPolynomial("finite-type exponent must be ≥ 1".into()));
        }
        let mut f = field;
        for (a, phi) in &terms {
            if field == Field::Rational && (a.field() != Field::Rational || phi.field() != Field::Rational) {
                return Err(Error::FieldMismatch { expected: field, found: a.field().join(phi.field()) });
            }
            f = f.join(a.field()).join(phi.field());
        }
        let terms = terms.into_iter().filter(|(a, phi)| !a.is_zero() && !phi.is_zero()).collect();
        Ok(Self { field: f, degree, terms })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Scalar, SparseVector)] {
        &self.terms
    }

    pub fn functionals(&self) -> impl Iterator<Item = &SparseVector> + '_ {
        self.terms.iter().map(|(_, phi)| phi)
    }

    pub fn evaluate(&self, x: &SparseVector) -> Result<Scalar> {
        if !self.field.accepts(x.field()) {
            return Err(Error::FieldMismatch { expected: self.field, found: x.field() });
        }
        Ok(self
            .terms
            .iter()
            .fold(Scalar::zero(), |acc, (a, phi)| &acc + &(a * &phi.dot(x).pow(self.degree))))
    }

    /// Multinomial expansion into a monomial table.
    pub fn to_hompoly(&self) -> HomPoly {
        let mut total = HomPoly::zero(self.field, self.degree);
        for (a, phi) in &self.terms {
            let linear = HomPoly::from_functional(phi);
            let mut power = linear.clone();
            for _ in 1..self.degree {
                power = power.mul(&linear).expect("tail-free");
            }
            total = total.add(&power.scale(a)).expect("equal degrees");
        }
        HomPoly::new(self.field, self.degree, total.terms().clone()).expect("valid by construction")
    }
}

#[derive(Serialize, Deserialize)]
struct FiniteTypeTermRepr {
    coeff: Scalar,
    functional: SparseVector,
}

#[derive(Serialize, Deserialize)]
struct FiniteTypeRepr {
    field: Field,
    degree: u32,
    terms: Vec<FiniteTypeTermRepr>,
}

impl TryFrom<FiniteTypeRepr> for FiniteTypePoly {
    type Error = Error;

    fn try_from(r: FiniteTypeRepr) -> Result<Self> {
        let terms = r.terms.into_iter().map(|t| (t.coeff, t.functional)).collect();
        FiniteTypePoly::new(r.field, r.degree, terms)
    }
}

impl From<FiniteTypePoly> for FiniteTypeRepr {
    fn from(f: FiniteTypePoly) -> Self {
        FiniteTypeRepr {
            field: f.field,
            degree: f.degree,
            terms: f
                .terms
                .into_iter()
                .map(|(coeff, functional)| FiniteTypeTermRepr { coeff, functional })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const R: Field = Field::Rational;

    fn phi(entries: &[(usize, i64)]) -> SparseVector {
        SparseVector::from_ints(R, entries)
    }

    #[test]
    fn expansion_examples() {
        let f = FiniteTypePoly::new(R, 2, vec![(Scalar::one(), phi(&[(1, 1), (2, 1)]))]).unwrap();
        let want = HomPoly::from_int_terms(R, 2, &[(&[1, 1], 1), (&[1, 2], 2), (&[2, 2], 1)]).unwrap();
        assert_eq!(f.to_hompoly(), want);

        let f = FiniteTypePoly::new(R, 2, vec![(Scalar::one(), phi(&[(1, 1)])), (Scalar::int(-1), phi(&[(2, 1)]))])
            .unwrap();
        assert_eq!(f.to_hompoly(), HomPoly::from_int_terms(R, 2, &[(&[1, 1], 1), (&[2, 2], -1)]).unwrap());
    }

    /// Oracle: evaluate both forms at 50 random rational vectors.
    #[test]
    fn cubic_expansion_agrees_pointwise() {
        let f = FiniteTypePoly::new(R, 3, vec![(Scalar::int(2), phi(&[(1, 1), (3, -1)]))]).unwrap();
        let p = f.to_hompoly();
        let want =
            HomPoly::from_int_terms(R, 3, &[(&[1, 1, 1], 2), (&[1, 1, 3], -6), (&[1, 3, 3], 6), (&[3, 3, 3], -2)])
                .unwrap();
        assert_eq!(p, want);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = SparseVector::from_entries(
                R,
                (1..=3).map(|j| (j, Scalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=5)))),
            );
            assert_eq!(p.evaluate(&x).unwrap(), f.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn json_round_trip() {
        let f = FiniteTypePoly::new(R, 2, vec![(Scalar::ratio(1, 4), phi(&[(1, 1), (2, 1)]))]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let back: FiniteTypePoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
