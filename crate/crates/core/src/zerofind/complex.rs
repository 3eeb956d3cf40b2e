use serde::{Deserialize, Serialize};

use super::slice::{binary_slice, SliceReport};
use crate::error::{Error, Result};
use crate::polynomials::{FiniteTypePoly, HomPoly, SparseVector};
use crate::scalars::{find_approx_roots, find_exact_roots, Field, RootSearch, Tolerance};
use crate::spaces::{kernel_within, Subspace};

/// Knobs for the zero finders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroFindConfig {
    /// Distinct `(u, v)` pairs tried for an exact slice root.
    pub pair_budget: usize,
    /// Acceptance bound for approximate zeros, relative to [`zero_scale`].
    pub tolerance: Tolerance,
    /// Residual bound handed to the approximate root finder.
    pub root_tolerance: Tolerance,
    pub root_search: RootSearch,
    pub max_iterations: usize,
}

impl Default for ZeroFindConfig {
    fn default() -> Self {
        Self {
            pair_budget: 8,
            tolerance: Tolerance::default(),
            root_tolerance: Tolerance::new(1e-12),
            root_search: RootSearch::default(),
            max_iterations: 200,
        }
    }
}

/// How a zero was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMethod {
    /// A stream vector that already was a zero.
    Direct,
    /// A root of a binary slice.
    Slice,
    /// First member of the kernel of a finite-type representation.
    Kernel,
    /// A real slice root found while probing.
    Probe,
}

/// A nonzero zero of a polynomial together with the evidence for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroWitness {
    pub method: WitnessMethod,
    pub vector: SparseVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<SliceReport>,
    pub exact: bool,
}

/// Scale for `|P(y)|`: `maxcoef(P)·‖y‖₁^m`.
pub fn zero_scale(p: &HomPoly, y: &SparseVector) -> f64 {
    p.max_abs_coeff() * y.l1_norm().powi(p.degree() as i32)
}

/// Whether `P(y)` is zero: bit-exactly for exact values, within `ε·scale` otherwise.
pub fn is_zero_of(p: &HomPoly, y: &SparseVector, tol: Tolerance) -> Result<bool> {
    let value = p.evaluate(y)?;
    Ok(value.is_negligible(tol.epsilon * zero_scale(p, y)))
}

fn direct(vector: SparseVector) -> ZeroWitness {
    let exact = vector.is_exact();
    ZeroWitness { method: WitnessMethod::Direct, vector, slice: None, exact }
}

/// A nonzero zero of `P` inside `S` over a complex field, via binary slices.
pub fn find_zero_complex(p: &HomPoly, s: &mut Subspace, config: &ZeroFindConfig) -> Result<ZeroWitness> {
    if p.field() == Field::Rational {
        return Err(Error::RealFieldRejected);
    }
    if p.degree() == 0 {
        return Err(Error::ZeroDegree);
    }
    let tol = config.tolerance;
    let mut pulled: Vec<SparseVector> = Vec::new();
    let mut first_slice: Option<SliceReport> = None;
    let mut tried = 0;
    while tried < config.pair_budget.max(1) {
        let w = s.next_basis_vector()?;
        if is_zero_of(p, &w, tol)? {
            return Ok(direct(w));
        }
        pulled.push(w);
        let b = pulled.len() - 1;
        for a in 0..b {
            if tried >= config.pair_budget.max(1) {
                break;
            }
            tried += 1;
            let mut slice = binary_slice(p, &pulled[a], &pulled[b])?;
            if slice.coefficients.is_zero() {
                return Ok(ZeroWitness { method: WitnessMethod::Slice, vector: pulled[a].clone(), exact: slice.exact, slice: Some(slice) });
            }
            if slice.exact {
                if let Some(r) = find_exact_roots(&slice.coefficients, &config.root_search)?.into_iter().next() {
                    slice.root = Some(r);
                    let vector = slice.point();
                    if !p.evaluate(&vector)?.is_zero() {
                        return Err(Error::CheckFailed("exact slice root is not a zero".into()));
                    }
                    return Ok(ZeroWitness { method: WitnessMethod::Slice, vector, exact: true, slice: Some(slice) });
                }
            }
            if first_slice.is_none() {
                first_slice = Some(slice);
            }
        }
    }
    if tol.is_exact() {
        return Err(Error::BudgetExhausted);
    }
    let mut slice = first_slice.ok_or(Error::BudgetExhausted)?;
    let roots = find_approx_roots(&slice.coefficients, config.root_tolerance, config.max_iterations)
        .map_err(|_| Error::BudgetExhausted)?;
    let r = roots.into_iter().min_by(|a, b| a.selection_cmp(b)).ok_or(Error::BudgetExhausted)?;
    slice.root = Some(r);
    slice.exact = false;
    let vector = slice.point();
    if vector.is_zero() || !is_zero_of(p, &vector, tol)? {
        return Err(Error::BudgetExhausted);
    }
    Ok(ZeroWitness { method: WitnessMethod::Slice, vector, exact: false, slice: Some(slice) })
}

/// First member of the common kernel of `F`'s functionals inside `S`; also
/// returns that kernel stream so the caller can keep drawing from it.
pub fn find_zero_finite_type(f: &FiniteTypePoly, s: Subspace) -> Result<(ZeroWitness, Subspace)> {
    let mut k = kernel_within(s, f.functionals().cloned().collect(), "finite-type functionals");
    let y = k.next_basis_vector()?;
    let exact = y.is_exact();
    Ok((ZeroWitness { method: WitnessMethod::Kernel, vector: y, slice: None, exact }, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{find_exact_roots, Scalar, UniPoly};
    use crate::spaces::full_space;

    const G: Field = Field::GaussianRational;

    #[test]
    fn sum_of_squares_slice_root() {
        let p = HomPoly::from_int_terms(G, 2, &[(&[1, 1], 1), (&[2, 2], 1)]).unwrap();
        let w = find_zero_complex(&p, &mut full_space(G), &ZeroFindConfig::default()).unwrap();
        assert!(w.exact);
        assert_eq!(w.vector, SparseVector::from_entries(G, [(1, Scalar::one()), (2, Scalar::i())]));
        assert!(p.evaluate(&w.vector).unwrap().is_zero());
    }

    #[test]
    fn direct_zero_returned_first() {
        let p = HomPoly::monomial(G, &[1, 2], 1);
        let w = find_zero_complex(&p, &mut full_space(G), &ZeroFindConfig::default()).unwrap();
        assert_eq!(w.method, WitnessMethod::Direct);
        assert_eq!(w.vector, SparseVector::unit(G, 1));
    }

    /// Oracle: the slice 1 + 2t² has no root in ℚ(i) (the divisor search finds
    /// none), so the zero is approximate with t ≈ ±i/√2.
    #[test]
    fn irrational_root_degrades_to_approximate() {
        let p = HomPoly::from_int_terms(G, 2, &[(&[1, 1], 1), (&[2, 2], 2)]).unwrap();
        assert!(find_exact_roots(&UniPoly::from_ints(&[1, 0, 2]), &RootSearch::default()).unwrap().is_empty());
        let config = ZeroFindConfig { pair_budget: 1, ..ZeroFindConfig::default() };
        let w = find_zero_complex(&p, &mut full_space(G), &config).unwrap();
        assert!(!w.exact);
        let t = w.slice.as_ref().unwrap().root.clone().unwrap().to_complex();
        assert!((t.re).abs() < 1e-12 && (t.im.abs() - 0.5f64.sqrt()).abs() < 1e-12);
        let value = p.evaluate(&w.vector).unwrap();
        assert!(value.abs() <= 1e-9 * zero_scale(&p, &w.vector));
    }

    #[test]
    fn real_field_rejected() {
        let p = HomPoly::monomial(Field::Rational, &[1, 1], 1);
        assert!(matches!(
            find_zero_complex(&p, &mut full_space(Field::Rational), &ZeroFindConfig::default()),
            Err(Error::RealFieldRejected)
        ));
    }

    #[test]
    fn finite_type_examples() {
        let r = Field::Rational;
        let f = FiniteTypePoly::new(r, 2, vec![(Scalar::one(), SparseVector::from_ints(r, &[(1, 1), (2, 1)]))]).unwrap();
        let (w, _) = find_zero_finite_type(&f, full_space(r)).unwrap();
        assert!(f.evaluate(&w.vector).unwrap().is_zero());
        assert!(f.functionals().all(|phi| phi.dot(&w.vector).is_zero()));

        let f = FiniteTypePoly::new(
            r,
            2,
            vec![(Scalar::one(), SparseVector::unit(r, 1)), (Scalar::one(), SparseVector::unit(r, 2))],
        )
        .unwrap();
        let (w, _) = find_zero_finite_type(&f, full_space(r)).unwrap();
        assert!(w.vector.min_index().unwrap() >= 3);

        let plus = SparseVector::from_ints(r, &[(1, 1), (2, 1)]);
        let minus = SparseVector::from_ints(r, &[(1, 1), (2, -1)]);
        let f = FiniteTypePoly::new(r, 2, vec![(Scalar::ratio(1, 4), plus.clone()), (Scalar::ratio(-1, 4), minus.clone())])
            .unwrap();
        let x3 = SparseVector::unit(r, 3);
        let s = kernel_within(full_space(r), vec![x3.clone()], "x3");
        let (w, _) = find_zero_finite_type(&f, s).unwrap();
        for phi in [&plus, &minus, &x3] {
            assert!(phi.dot(&w.vector).is_zero());
        }
    }
}
