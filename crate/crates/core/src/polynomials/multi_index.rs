use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exponent vector of a monomial: strictly increasing variable indices
/// (1-based), each with a positive exponent.
///
/// Also used as a multiplicity record for fixed arguments of a
/// polarization, where the "variables" index the fixed vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<(usize, u32)>);

impl MultiIndex {
    /// Builds from arbitrary `(index, exponent)` pairs, merging repeats and
    /// dropping zero exponents. Index 0 is not a variable and is rejected.
    pub fn new(pairs: impl IntoIterator<Item = (usize, u32)>) -> Option<Self> {
        let mut map: BTreeMap<usize, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if v == 0 {
                return None;
            }
            if e > 0 {
                *map.entry(v).or_default() += e;
            }
        }
        Some(Self(map.into_iter().collect()))
    }

    /// The constant monomial.
    pub fn one() -> Self {
        Self(Vec::new())
    }

    /// Monomial `x_{v₁} x_{v₂} ⋯` from a list of (possibly repeated) indices.
    pub fn from_vars(vars: &[usize]) -> Option<Self> {
        Self::new(vars.iter().map(|&v| (v, 1)))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn min_var(&self) -> Option<usize> {
        self.0.first().map(|&(v, _)| v)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(v, _)| v)
    }

    /// Every variable index shifted by `s`.
    pub fn shifted(&self, s: usize) -> Self {
        Self(self.0.iter().map(|&(v, e)| (v + s, e)).collect())
    }

    /// `α − e_var`, or `None` if `var` is absent.
    pub fn lowered(&self, var: usize) -> Option<Self> {
        let i = self.0.binary_search_by_key(&var, |&(v, _)| v).ok()?;
        let mut out = self.0.clone();
        if out[i].1 == 1 {
            out.remove(i);
        } else {
            out[i].1 -= 1;
        }
        Some(Self(out))
    }

    /// `α + β`.
    pub fn combined(&self, other: &MultiIndex) -> Self {
        Self::new(self.iter().chain(other.iter())).expect("indices already validated")
    }

    /// The index sequence with repetitions, e.g. `x₁²x₃ ↦ [1, 1, 3]`.
    pub fn expanded(&self) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize))
            .collect()
    }

    /// All multi-indices of total degree `degree` over variables `1..=vars`,
    /// in lexicographic order of their expanded index sequences.
    pub fn all_of_degree(vars: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(start: usize, vars: usize, left: u32, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if left == 0 {
                out.push(MultiIndex::from_vars(cur).expect("positive indices"));
                return;
            }
            for v in start..=vars {
                cur.push(v);
                rec(v, vars, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if vars > 0 || degree == 0 {
            rec(1, vars, degree, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // Written in numeric index order; a string-keyed map would put "10" before "2".
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for &(v, e) in &self.0 {
            m.serialize_entry(&v.to_string(), &e)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, u32> = BTreeMap::deserialize(d)?;
        let mut pairs = Vec::with_capacity(raw.len());
        for (k, e) in raw {
            let v: usize = k.parse().map_err(|_| D::Error::custom(format!("bad variable index {k:?}")))?;
            if e == 0 {
                return Err(D::Error::custom("zero exponent in monomial"));
            }
            pairs.push((v, e));
        }
        MultiIndex::new(pairs).ok_or_else(|| D::Error::custom("variable indices are 1-based"))
    }
}
