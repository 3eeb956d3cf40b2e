use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalars::{Field, Scalar};

/// Finitely supported vector in the space of sequences, indexed from 1.
/// No zero entries are stored.
///
/// Also read as a linear functional `x ↦ Σ φⱼ xⱼ` (no conjugation).
#[derive(Clone, Debug)]
pub struct SparseVector {
    field: Field,
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVector {
    pub fn zero(field: Field) -> Self {
        Self { field, entries: BTreeMap::new() }
    }

    /// Standard basis vector `e_j`.
    pub fn unit(field: Field, j: usize) -> Self {
        assert!(j >= 1, "coordinates are 1-based");
        Self { field, entries: BTreeMap::from([(j, Scalar::one())]) }
    }

    pub fn from_entries(field: Field, entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Self::zero(field);
        for (j, x) in entries {
            let cur = v.get(j);
            v.set(j, &cur + &x);
        }
        v
    }

    /// Integer entries, e.g. `from_ints(Field::Rational, &[(1, 1), (2, -1)])` for `e₁ − e₂`.
    pub fn from_ints(field: Field, entries: &[(usize, i64)]) -> Self {
        Self::from_entries(field, entries.iter().map(|&(j, x)| (j, Scalar::int(x))))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, j: usize) -> Scalar {
        self.entries.get(&j).cloned().unwrap_or_default()
    }

    pub fn entry(&self, j: usize) -> Option<&Scalar> {
        self.entries.get(&j)
    }

    pub fn set(&mut self, j: usize, x: Scalar) {
        assert!(j >= 1, "coordinates are 1-based");
        if x.is_zero() {
            self.entries.remove(&j);
        } else {
            self.field = self.field.join(x.field());
            self.entries.insert(j, x);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(&j, x)| (j, x))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(Scalar::is_exact)
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// Tags the vector with a (wider) ambient field.
    pub fn with_field(mut self, field: Field) -> Self {
        self.field = self.field.join(field);
        self
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &Scalar, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.field = out.field.join(other.field);
        if c.is_zero() {
            return out;
        }
        for (j, x) in other.iter() {
            let cur = out.get(j);
            out.set(j, &cur + &(c * x));
        }
        out
    }

    pub fn add(&self, other: &SparseVector) -> SparseVector {
        self.axpy(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVector) -> SparseVector {
        self.axpy(&Scalar::int(-1), other)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVector {
        SparseVector::from_entries(self.field, self.iter().map(|(j, x)| (j, c * x)))
    }

    /// Bilinear pairing `Σ selfⱼ·otherⱼ`.
    pub fn dot(&self, other: &SparseVector) -> Scalar {
        let (small, large) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        small.iter().fold(Scalar::zero(), |acc, (j, x)| match large.entry(j) {
            Some(y) => &acc + &(x * y),
            None => acc,
        })
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.values().map(Scalar::abs).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(Scalar::abs).fold(0.0, f64::max)
    }

    /// Smallest coordinate whose entry is non-negligible relative to the
    /// largest entry (any nonzero entry, for exact vectors).
    pub fn leading_coordinate(&self) -> Option<usize> {
        let scale = self.max_abs();
        self.iter()
            .find(|(_, x)| !x.is_negligible(1e-9 * scale))
            .map(|(j, _)| j)
    }

    pub fn to_approx(&self) -> SparseVector {
        SparseVector::from_entries(Field::Complex64, self.iter().map(|(j, x)| (j, x.to_approx())))
    }

    /// Entrywise comparison with an absolute tolerance (exact entries must match exactly).
    pub fn approx_eq(&self, other: &SparseVector, abs_tol: f64) -> bool {
        let keys: std::collections::BTreeSet<usize> = self.support().chain(other.support()).collect();
        keys.into_iter().all(|j| {
            let d = &self.get(j) - &other.get(j);
            d.is_negligible(abs_tol)
        })
    }
}

/// Equality compares entries only; the field tag is bookkeeping.
impl PartialEq for SparseVector {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (k, (j, x)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if x.is_one() {
                write!(f, "e{j}")?;
            } else {
                write!(f, "{x}·e{j}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for SparseVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.entries.len()))?;
        for (j, x) in &self.entries {
            m.serialize_entry(&j.to_string(), x)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for SparseVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, Scalar> = BTreeMap::deserialize(d)?;
        let mut v = SparseVector::zero(Field::Rational);
        for (k, x) in raw {
            let j: usize = k.parse().map_err(|_| D::Error::custom(format!("bad coordinate {k:?}")))?;
            if j == 0 {
                return Err(D::Error::custom("coordinates are 1-based"));
            }
            v.set(j, x);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_zero_entries() {
        let v = SparseVector::from_ints(Field::Rational, &[(1, 1), (2, 0), (1, -1), (3, 2)]);
        assert_eq!(v.nnz(), 1);
        assert_eq!(v.get(3), Scalar::int(2));
        assert_eq!(v.min_index(), Some(3));
    }

    #[test]
    fn field_tracks_entries() {
        let mut v = SparseVector::unit(Field::Rational, 1);
        assert_eq!(v.field(), Field::Rational);
        v.set(2, Scalar::i());
        assert_eq!(v.field(), Field::GaussianRational);
        v.set(3, Scalar::approx(1.0, 0.0));
        assert_eq!(v.field(), Field::Complex64);
        assert!(!v.is_exact());
    }

    #[test]
    fn pairing_and_combination() {
        let a = SparseVector::from_ints(Field::Rational, &[(1, 1), (2, 1)]);
        let b = SparseVector::from_ints(Field::Rational, &[(1, 1), (2, -1)]);
        assert!(a.dot(&b).is_zero());
        let c = a.axpy(&Scalar::int(-1), &b);
        assert_eq!(c, SparseVector::from_ints(Field::Rational, &[(2, 2)]));
    }

    #[test]
    fn json_round_trip() {
        let v = SparseVector::from_entries(Field::GaussianRational, [(1, Scalar::one()), (12, Scalar::i())]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"1":{"re":"1/1","im":"0/1"},"12":{"re":"0/1","im":"1/1"}}"#);
        let back: SparseVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
