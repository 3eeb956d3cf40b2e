use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SparseVector;
use crate::error::{Error, Result};
use crate::scalars::{Field, Scalar};

/// `A(x¹,…,xᵐ) = Σ_τ c_τ Πⱼ xʲ_{τⱼ}` over ordered index tuples.
///
/// `slot_dims[j] = Some(d)` marks slot `j` as the finite-dimensional space
/// spanned by `e₁..e_d`; `None` means the full sequence space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MultilinearRepr", into = "MultilinearRepr")]
pub struct MultilinearForm {
    field: Field,
    arity: usize,
    table: BTreeMap<Vec<usize>, Scalar>,
    slot_dims: Vec<Option<usize>>,
}

impl MultilinearForm {
    pub fn new(field: Field, arity: usize, entries: impl IntoIterator<Item = (Vec<usize>, Scalar)>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidPolynomial("multilinear arity must be ≥ 1".into()));
        }
        let mut form = Self { field, arity, table: BTreeMap::new(), slot_dims: vec![None; arity] };
        for (tau, c) in entries {
            if tau.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: tau.len() });
            }
            if tau.contains(&0) {
                return Err(Error::InvalidPolynomial("coordinates are 1-based".into()));
            }
            if field == Field::Rational && c.field() != Field::Rational {
                return Err(Error::FieldMismatch { expected: field, found: c.field() });
            }
            form.field = form.field.join(c.field());
            let sum = &form.table.get(&tau).cloned().unwrap_or_default() + &c;
            if sum.is_zero() {
                form.table.remove(&tau);
            } else {
                form.table.insert(tau, sum);
            }
        }
        Ok(form)
    }

    pub fn with_slot_dims(mut self, dims: Vec<Option<usize>>) -> Result<Self> {
        if dims.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: dims.len() });
        }
        for tau in self.table.keys() {
            for (j, (&idx, d)) in tau.iter().zip(&dims).enumerate() {
                if d.is_some_and(|d| idx > d) {
                    return Err(Error::InvalidPolynomial(format!("entry {tau:?} leaves slot {} of dimension {}", j + 1, d.unwrap())));
                }
            }
        }
        self.slot_dims = dims;
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &BTreeMap<Vec<usize>, Scalar> {
        &self.table
    }

    pub fn slot_dims(&self) -> &[Option<usize>] {
        &self.slot_dims
    }

    /// First slot whose space is infinite-dimensional.
    pub fn first_infinite_slot(&self) -> Option<usize> {
        self.slot_dims.iter().position(Option::is_none)
    }

    pub fn eval(&self, args: &[SparseVector]) -> Result<Scalar> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        for a in args {
            if !self.field.accepts(a.field()) {
                return Err(Error::FieldMismatch { expected: self.field, found: a.field() });
            }
        }
        let mut acc = Scalar::zero();
        'entries: for (tau, c) in &self.table {
            let mut prod = c.clone();
            for (a, &idx) in args.iter().zip(tau) {
                match a.entry(idx) {
                    Some(x) => prod = &prod * x,
                    None => continue 'entries,
                }
            }
            acc = &acc + &prod;
        }
        Ok(acc)
    }

    /// The linear functional `x ↦ A(…, x at slot, …)` with the other slots
    /// set to the unit vectors named by `others` (in slot order, skipping `slot`).
    pub fn slot_functional(&self, slot: usize, others: &[usize]) -> SparseVector {
        let mut phi = SparseVector::zero(self.field);
        for (tau, c) in &self.table {
            let rest = tau.iter().enumerate().filter(|&(j, _)| j != slot).map(|(_, &i)| i);
            if rest.eq(others.iter().copied()) {
                let cur = phi.get(tau[slot]);
                phi.set(tau[slot], &cur + c);
            }
        }
        phi
    }

    /// Distinct index assignments of the slots other than `slot` occurring in the table.
    pub fn other_slot_assignments(&self, slot: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .table
            .keys()
            .map(|tau| tau.iter().enumerate().filter(|&(j, _)| j != slot).map(|(_, &i)| i).collect())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    indices: Vec<usize>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct MultilinearRepr {
    field: Field,
    arity: usize,
    terms: Vec<EntryRepr>,
    #[serde(default)]
    slot_dims: Option<Vec<Option<usize>>>,
}

impl TryFrom<MultilinearRepr> for MultilinearForm {
    type Error = Error;

    fn try_from(r: MultilinearRepr) -> Result<Self> {
        let form = MultilinearForm::new(r.field, r.arity, r.terms.into_iter().map(|e| (e.indices, e.coeff)))?;
        match r.slot_dims {
            Some(d) => form.with_slot_dims(d),
            None => Ok(form),
        }
    }
}

impl From<MultilinearForm> for MultilinearRepr {
    fn from(f: MultilinearForm) -> Self {
        MultilinearRepr {
            field: f.field,
            arity: f.arity,
            terms: f.table.into_iter().map(|(indices, coeff)| EntryRepr { indices, coeff }).collect(),
            slot_dims: Some(f.slot_dims),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: Field = Field::Rational;

    #[test]
    fn eval_examples() {
        let a = MultilinearForm::new(R, 2, [(vec![1, 2], Scalar::one())]).unwrap();
        let e1 = SparseVector::unit(R, 1);
        let e2 = SparseVector::unit(R, 2);
        assert_eq!(a.eval(&[e1.clone(), e2.clone()]).unwrap(), Scalar::one());
        assert!(a.eval(&[e2, e1.clone()]).unwrap().is_zero());
        assert!(matches!(a.eval(&[e1]), Err(Error::ArityMismatch { .. })));
    }

    /// Oracle: bilinear expansion A(e₁+e₂, e₁−e₂) = A₁₁ − A₁₂ + A₂₁ − A₂₂.
    #[test]
    fn bilinear_expansion() {
        let a = MultilinearForm::new(R, 2, [(vec![1, 1], Scalar::one()), (vec![2, 2], Scalar::one())]).unwrap();
        let x = SparseVector::from_ints(R, &[(1, 1), (2, 1)]);
        let y = SparseVector::from_ints(R, &[(1, 1), (2, -1)]);
        let get = |i, j| a.table().get(&vec![i, j]).cloned().unwrap_or_default();
        let oracle = &(&(&get(1, 1) - &get(1, 2)) + &get(2, 1)) - &get(2, 2);
        assert_eq!(a.eval(&[x, y]).unwrap(), oracle);
        assert!(oracle.is_zero());
    }

    #[test]
    fn slot_functionals() {
        let a = MultilinearForm::new(R, 2, [(vec![1, 2], Scalar::one()), (vec![2, 1], Scalar::one())]).unwrap();
        assert_eq!(a.other_slot_assignments(0), vec![vec![1], vec![2]]);
        assert_eq!(a.slot_functional(0, &[1]), SparseVector::unit(R, 2));
        assert_eq!(a.slot_functional(0, &[2]), SparseVector::unit(R, 1));
    }

    #[test]
    fn json_round_trip() {
        let a = MultilinearForm::new(R, 2, [(vec![1, 2], Scalar::ratio(1, 3))])
            .unwrap()
            .with_slot_dims(vec![Some(4), None])
            .unwrap();
        let back: MultilinearForm = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.first_infinite_slot(), Some(1));
    }
}
