//! The symmetric multilinear form of a homogeneous polynomial, computed by
//! iterated directional derivatives: `P̌(v₁,…,v_r, xᵗ) = (t!/m!)·D_{v₁}⋯D_{v_r}P(x)`.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::{HomPoly, MultiIndex, SparseVector};
use crate::error::{Error, Result};
use crate::scalars::{factorial, Scalar, Tolerance};

/// Relative size below which approximate derived coefficients are treated as cancellation noise.
const CHOP_RELATIVE: f64 = 1e-13;

fn ratio_of_factorials(num: u32, den: u32) -> Scalar {
    Scalar::rational(BigRational::new(factorial(num), factorial(den)))
}

/// `Q(x) = P̌(v₁^{β₁},…,v_r^{β_r}, xᵗ)` as a degree-`t` polynomial.
///
/// For `t = 0` the value is wrapped as a constant polynomial.
pub fn derived_poly(p: &HomPoly, fixed: &[(SparseVector, u32)], t: u32) -> Result<HomPoly> {
    let beta: u32 = fixed.iter().map(|(_, b)| b).sum();
    if beta + t != p.degree() {
        return Err(Error::ArityMismatch { expected: p.degree() as usize, found: (beta + t) as usize });
    }
    if beta == 0 {
        return Ok(p.clone());
    }
    let mut q = p.clone();
    let mut noise_scale = p.max_abs_coeff();
    for (v, b) in fixed {
        for _ in 0..*b {
            q = q.directional_derivative(v)?;
        }
        noise_scale *= v.l1_norm().powi(*b as i32);
    }
    let q = q.scale(&ratio_of_factorials(t, p.degree()));
    if q.is_exact() {
        Ok(q)
    } else {
        Ok(q.chop(CHOP_RELATIVE * noise_scale))
    }
}

/// `P̌(x₁,…,x_m)`; equal arguments are grouped before differentiating.
pub fn full_polarization(p: &HomPoly, args: &[SparseVector]) -> Result<Scalar> {
    if args.len() != p.degree() as usize {
        return Err(Error::ArityMismatch { expected: p.degree() as usize, found: args.len() });
    }
    let mut grouped: Vec<(SparseVector, u32)> = Vec::new();
    for a in args {
        match grouped.iter_mut().find(|(v, _)| v == a) {
            Some((_, count)) => *count += 1,
            None => grouped.push((a.clone(), 1)),
        }
    }
    let q = derived_poly(p, &grouped, 0)?;
    Ok(q.constant_value().expect("degree 0"))
}

/// Coefficient table of `c ↦ P(Σ cᵢ bᵢ)` in the formal coordinates `c₁,…,c_q`.
///
/// The coefficient of `c^γ` is `D^γ P / γ!`, a constant. Derivatives are taken
/// depth-first so prefixes are shared between the monomials. Zero
/// coefficients are omitted.
pub fn restrict_to_span(p: &HomPoly, basis: &[SparseVector]) -> Result<BTreeMap<MultiIndex, Scalar>> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let mut out = BTreeMap::new();
    let mut path = Vec::with_capacity(p.degree() as usize);
    restrict_rec(p, basis, 0, &mut path, &mut out)?;
    Ok(out)
}

fn restrict_rec(
    q: &HomPoly,
    basis: &[SparseVector],
    start: usize,
    path: &mut Vec<usize>,
    out: &mut BTreeMap<MultiIndex, Scalar>,
) -> Result<()> {
    if q.is_zero() {
        return Ok(());
    }
    if q.degree() == 0 {
        let gamma = MultiIndex::from_vars(&path.iter().map(|i| i + 1).collect::<Vec<_>>()).expect("1-based");
        let mut denom = num_bigint::BigInt::from(1);
        for (_, e) in gamma.iter() {
            denom *= factorial(e);
        }
        let value = &q.constant_value().expect("degree 0") / &Scalar::rational(BigRational::from_integer(denom));
        if !value.is_zero() {
            out.insert(gamma, value);
        }
        return Ok(());
    }
    for i in start..basis.len() {
        let d = q.directional_derivative(&basis[i])?;
        path.push(i);
        restrict_rec(&d, basis, i, path, out)?;
        path.pop();
    }
    Ok(())
}

/// Outcome of a vanishing-on-span check; `witness` names the first offending coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct VanishingReport {
    pub vanishes: bool,
    pub witness: Option<(MultiIndex, Scalar)>,
    /// Largest coefficient modulus seen (0 when the table is empty).
    pub max_residual: f64,
    /// Scale used for the approximate comparison.
    pub scale: f64,
}

/// Scale for approximate span checks: `maxcoef(P)·(max ‖bᵢ‖₁)^m`.
pub fn span_scale(p: &HomPoly, basis: &[SparseVector]) -> f64 {
    let b = basis.iter().map(SparseVector::l1_norm).fold(0.0, f64::max);
    p.max_abs_coeff() * b.powi(p.degree() as i32)
}

/// Whether every coefficient of the restriction to `span(basis)` is zero,
/// exactly for exact coefficients and within `ε·scale` for approximate ones.
pub fn vanishes_on_span(p: &HomPoly, basis: &[SparseVector], tol: Tolerance) -> Result<VanishingReport> {
    let table = restrict_to_span(p, basis)?;
    let scale = span_scale(p, basis);
    let bound = tol.epsilon * scale;
    let mut report = VanishingReport { vanishes: true, witness: None, max_residual: 0.0, scale };
    for (gamma, c) in table {
        report.max_residual = report.max_residual.max(c.abs());
        if !c.is_negligible(bound) && report.witness.is_none() {
            report.vanishes = false;
            report.witness = Some((gamma, c));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    fn e(j: usize) -> SparseVector {
        SparseVector::unit(Field::Rational, j)
    }

    /// Sign-sum oracle `(1/(2ᵐ m!)) Σ_ε (Πεᵢ) P(Σ εⱼ xⱼ)`.
    fn sign_sum(p: &HomPoly, args: &[SparseVector]) -> Scalar {
        let m = args.len();
        let mut acc = Scalar::zero();
        for mask in 0..(1u32 << m) {
            let mut x = SparseVector::zero(p.field());
            let mut sign = 1i64;
            for (j, a) in args.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    x = x.sub(a);
                    sign = -sign;
                } else {
                    x = x.add(a);
                }
            }
            acc = &acc + &(&Scalar::int(sign) * &p.evaluate(&x).unwrap());
        }
        let norm = num_bigint::BigInt::from(1u64 << m) * factorial(m as u32);
        &acc / &Scalar::rational(BigRational::from_integer(norm))
    }

    #[test]
    fn derived_examples() {
        let p = HomPoly::monomial(Field::Rational, &[1, 2], 1);
        let q = derived_poly(&p, &[(e(1), 1)], 1).unwrap();
        assert_eq!(q, HomPoly::monomial(Field::Rational, &[2], 1).scale(&Scalar::ratio(1, 2)));
        // oracle: P̌(e₁, x) at x = e₂ by sign-sum
        assert_eq!(q.evaluate(&e(2)).unwrap(), sign_sum(&p, &[e(1), e(2)]));

        let cube = HomPoly::monomial(Field::Rational, &[1, 1, 1], 1);
        let q = derived_poly(&cube, &[(e(1), 2)], 1).unwrap();
        assert_eq!(q, HomPoly::monomial(Field::Rational, &[1], 1));
        assert_eq!(q.evaluate(&e(1)).unwrap(), sign_sum(&cube, &[e(1), e(1), e(1)]));

        assert_eq!(derived_poly(&cube, &[], 3).unwrap(), cube);
        assert!(matches!(derived_poly(&cube, &[(e(1), 1)], 1), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn polarization_examples() {
        let sq = HomPoly::monomial(Field::Rational, &[1, 1], 1);
        assert_eq!(full_polarization(&sq, &[e(1), e(1)]).unwrap(), Scalar::one());
        assert!(full_polarization(&sq, &[e(1), e(2)]).unwrap().is_zero());
        let p = HomPoly::monomial(Field::Rational, &[1, 2], 1);
        let half = full_polarization(&p, &[e(1), e(2)]).unwrap();
        assert_eq!(half, Scalar::ratio(1, 2));
        assert_eq!(half, sign_sum(&p, &[e(1), e(2)]));
    }

    #[test]
    fn restrict_examples() {
        let p = HomPoly::monomial(Field::Rational, &[1, 2], 1);
        let t = restrict_to_span(&p, &[e(1), e(2)]).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[&MultiIndex::from_vars(&[1, 2]).unwrap()], Scalar::one());

        let sq = HomPoly::monomial(Field::Rational, &[1, 1], 1);
        let t = restrict_to_span(&sq, &[SparseVector::from_ints(Field::Rational, &[(1, 1), (2, 1)])]).unwrap();
        assert_eq!(t[&MultiIndex::from_vars(&[1, 1]).unwrap()], Scalar::one());

        let g = Field::GaussianRational;
        let sumsq = HomPoly::from_int_terms(g, 2, &[(&[1, 1], 1), (&[2, 2], 1)]).unwrap();
        let b = SparseVector::from_entries(g, [(1, Scalar::one()), (2, Scalar::i())]);
        assert!(restrict_to_span(&sumsq, &[b]).unwrap().is_empty());
        assert!(matches!(restrict_to_span(&sumsq, &[]), Err(Error::EmptyBasis)));
    }

    #[test]
    fn vanishing_examples() {
        let p = HomPoly::from_int_terms(Field::Rational, 2, &[(&[1, 3], 1), (&[2, 3], 1)]).unwrap();
        let b = SparseVector::from_ints(Field::Rational, &[(1, 1), (2, -1)]);
        assert!(vanishes_on_span(&p, &[b], Tolerance::exact()).unwrap().vanishes);

        let sq = HomPoly::monomial(Field::Rational, &[1, 1], 1);
        let r = vanishes_on_span(&sq, &[e(1)], Tolerance::exact()).unwrap();
        assert!(!r.vanishes);
        assert_eq!(r.witness.unwrap().0, MultiIndex::from_vars(&[1, 1]).unwrap());

        let g = Field::GaussianRational;
        let p4 = HomPoly::from_int_terms(g, 2, &[(&[1, 1], 1), (&[2, 2], 1), (&[3, 3], 1), (&[4, 4], 1)]).unwrap();
        let b1 = SparseVector::from_entries(g, [(1, Scalar::one()), (2, Scalar::i())]);
        let b2 = SparseVector::from_entries(g, [(3, Scalar::one()), (4, Scalar::i())]);
        assert!(vanishes_on_span(&p4, &[b1, b2], Tolerance::exact()).unwrap().vanishes);
    }

    #[test]
    fn tail_derived_is_finite() {
        let tail = super::super::TailRule::new(0, 1, 1, vec![(MultiIndex::from_vars(&[1, 1]).unwrap(), Scalar::one())])
            .unwrap();
        let p = HomPoly::zero(Field::Rational, 2).with_tail(tail).unwrap();
        let q = derived_poly(&p, &[(e(5), 1)], 1).unwrap();
        assert_eq!(q, HomPoly::monomial(Field::Rational, &[5], 1));
    }
}
