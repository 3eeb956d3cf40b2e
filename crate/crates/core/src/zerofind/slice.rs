use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomials::{derived_poly, HomPoly, SparseVector};
use crate::scalars::{binomial, Scalar, UniPoly};

/// The univariate restriction `t ↦ P(u + t·v)` of a polynomial to a 2-plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceReport {
    pub u: SparseVector,
    pub v: SparseVector,
    /// Coefficient of `tᵏ` is `C(m,k)·P̌(u^{m−k}, vᵏ)`.
    pub coefficients: UniPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<Scalar>,
    pub exact: bool,
}

impl SliceReport {
    /// `u + root·v`, or `u` when no root was used.
    pub fn point(&self) -> SparseVector {
        match &self.root {
            Some(r) => self.u.axpy(r, &self.v),
            None => self.u.clone(),
        }
    }
}

pub fn binary_slice(p: &HomPoly, u: &SparseVector, v: &SparseVector) -> Result<SliceReport> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let m = p.degree();
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    for k in 0..=m {
        let fixed: Vec<(SparseVector, u32)> =
            [(u.clone(), m - k), (v.clone(), k)].into_iter().filter(|(_, b)| *b > 0).collect();
        let value = derived_poly(p, &fixed, 0)?.constant_value().expect("degree 0");
        coeffs.push(&Scalar::rational(binomial(m, k).into()) * &value);
    }
    let field = p.field().join(u.field()).join(v.field());
    let coefficients = UniPoly::new(field, coeffs);
    let exact = coefficients.is_exact();
    Ok(SliceReport { u: u.clone(), v: v.clone(), coefficients, root: None, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const R: Field = Field::Rational;

    #[test]
    fn slice_examples() {
        let e1 = SparseVector::unit(R, 1);
        let e2 = SparseVector::unit(R, 2);
        let p = HomPoly::from_int_terms(R, 2, &[(&[1, 1], 1), (&[2, 2], 1)]).unwrap();
        assert_eq!(binary_slice(&p, &e1, &e2).unwrap().coefficients, UniPoly::from_ints(&[1, 0, 1]));
        let p = HomPoly::monomial(R, &[1, 2], 1);
        assert_eq!(binary_slice(&p, &e1, &e2).unwrap().coefficients, UniPoly::from_ints(&[0, 1]));
    }

    /// Oracle: 1 − (1+t)³ = −3t − 3t² − t³, plus pointwise agreement at random t.
    #[test]
    fn cubic_slice_against_expansion() {
        let p = HomPoly::from_int_terms(R, 3, &[(&[1, 1, 1], 1), (&[2, 2, 2], -1)]).unwrap();
        let u = SparseVector::from_ints(R, &[(1, 1), (2, 1)]);
        let v = SparseVector::unit(R, 2);
        let s = binary_slice(&p, &u, &v).unwrap();
        assert_eq!(s.coefficients, UniPoly::from_ints(&[0, -3, -3, -1]));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let t = Scalar::ratio(rng.random_range(-20..=20), rng.random_range(1..=7));
            assert_eq!(s.coefficients.eval(&t), p.evaluate(&u.axpy(&t, &v)).unwrap());
        }
    }
}
