use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{MultiIndex, SparseVector};
use crate::error::{Error, Result};
use crate::scalars::{Field, Scalar};

/// Shift-periodic tail: the polynomial gains
/// `Σ_{k≥0} Σ_g c_g · shift(g, offset + k·period)` on top of its finite
/// part, where `shift` adds a constant to every variable index.
///
/// On a vector supported in `[1..N]` only shifts with
/// `offset + k·period + min_var(g) ≤ N` can contribute.
#[derive(Clone, Debug, PartialEq)]
pub struct TailRule {
    offset: usize,
    period: usize,
    window: usize,
    generators: Vec<(MultiIndex, Scalar)>,
}

impl TailRule {
    pub fn new(offset: usize, period: usize, window: usize, generators: Vec<(MultiIndex, Scalar)>) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidPolynomial("tail period must be ≥ 1".into()));
        }
        if window == 0 {
            return Err(Error::InvalidPolynomial("tail window must be ≥ 1".into()));
        }
        let generators: Vec<_> = generators.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if generators.is_empty() {
            return Err(Error::InvalidPolynomial("tail has no nonzero generator".into()));
        }
        for (g, _) in &generators {
            if g.max_var().is_none_or(|v| v > window) {
                return Err(Error::InvalidPolynomial(format!("tail generator {g} leaves window [1..{window}]")));
            }
        }
        Ok(Self { offset, period, window, generators })
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn generators(&self) -> &[(MultiIndex, Scalar)] {
        &self.generators
    }

    /// Shifted generator terms whose smallest variable is at most `up_to`.
    pub fn active_terms(&self, up_to: usize) -> impl Iterator<Item = (MultiIndex, &Scalar)> + '_ {
        self.generators.iter().flat_map(move |(g, c)| {
            let min = g.min_var().unwrap_or(1);
            let count = if self.offset + min > up_to {
                0
            } else {
                (up_to - self.offset - min) / self.period + 1
            };
            (0..count).map(move |k| (g.shifted(self.offset + k * self.period), c))
        })
    }
}

/// Homogeneous polynomial of degree `m`: a finite table of degree-`m`
/// monomials plus an optional shift-periodic tail.
///
/// Zero coefficients are never stored, so structural equality of two
/// tail-free polynomials is pointwise equality.
#[derive(Clone, Debug, PartialEq)]
pub struct HomPoly {
    field: Field,
    degree: u32,
    terms: BTreeMap<MultiIndex, Scalar>,
    tail: Option<TailRule>,
}

impl HomPoly {
    /// Validates degrees and the field, merges repeated monomials and drops zeros.
    pub fn new(field: Field, degree: u32, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Result<Self> {
        let mut p = Self::zero(field, degree);
        for (mono, c) in terms {
            if mono.degree() != degree {
                return Err(Error::InvalidPolynomial(format!(
                    "monomial {mono} has degree {} but the polynomial has degree {degree}",
                    mono.degree()
                )));
            }
            p.check_coefficient(&c)?;
            p.add_term(mono, c);
        }
        Ok(p)
    }

    pub fn zero(field: Field, degree: u32) -> Self {
        Self { field, degree, terms: BTreeMap::new(), tail: None }
    }

    /// Degree-0 polynomial holding a single value.
    pub fn constant(field: Field, value: Scalar) -> Self {
        let mut p = Self::zero(field.join(value.field()), 0);
        p.add_term(MultiIndex::one(), value);
        p
    }

    /// Monomial with an integer coefficient, e.g. `monomial(Field::Rational, &[1, 2], 1)` for `x₁x₂`.
    pub fn monomial(field: Field, vars: &[usize], coeff: i64) -> Self {
        let mono = MultiIndex::from_vars(vars).expect("1-based variable indices");
        let mut p = Self::zero(field, mono.degree());
        p.add_term(mono, Scalar::int(coeff));
        p
    }

    /// Sum of integer-coefficient monomials given as variable lists.
    pub fn from_int_terms(field: Field, degree: u32, terms: &[(&[usize], i64)]) -> Result<Self> {
        Self::new(
            field,
            degree,
            terms.iter().map(|(vars, c)| (MultiIndex::from_vars(vars).expect("1-based"), Scalar::int(*c))),
        )
    }

    pub fn with_tail(mut self, tail: TailRule) -> Result<Self> {
        for (g, c) in tail.generators() {
            if g.degree() != self.degree {
                return Err(Error::InvalidPolynomial(format!("tail generator {g} has the wrong degree")));
            }
            self.check_coefficient(c)?;
        }
        if let Some(max) = self.max_var() {
            if tail.offset() < max {
                return Err(Error::InvalidPolynomial(format!(
                    "tail offset {} is below the finite part's largest variable {max}",
                    tail.offset()
                )));
            }
        }
        for (_, c) in tail.generators() {
            self.field = self.field.join(c.field());
        }
        self.tail = Some(tail);
        Ok(self)
    }

    fn check_coefficient(&self, c: &Scalar) -> Result<()> {
        if self.field == Field::Rational && c.field() != Field::Rational {
            return Err(Error::FieldMismatch { expected: self.field, found: c.field() });
        }
        Ok(())
    }

    fn add_term(&mut self, mono: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        self.field = self.field.join(c.field());
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Scalar> {
        &self.terms
    }

    pub fn tail(&self) -> Option<&TailRule> {
        self.tail.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.tail.is_none()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(Scalar::is_exact)
            && self.tail.as_ref().is_none_or(|t| t.generators().iter().all(|(_, c)| c.is_exact()))
    }

    /// Largest variable index of the finite part.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(MultiIndex::max_var).max()
    }

    /// Variables occurring in the finite part, increasing.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn max_abs_coeff(&self) -> f64 {
        let finite = self.terms.values().map(Scalar::abs).fold(0.0, f64::max);
        let tail = self
            .tail
            .iter()
            .flat_map(|t| t.generators().iter().map(|(_, c)| c.abs()))
            .fold(0.0, f64::max);
        finite.max(tail)
    }

    /// Value of a degree-0 polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        (self.degree == 0).then(|| self.terms.get(&MultiIndex::one()).cloned().unwrap_or_default())
    }

    /// Coefficient vector of a tail-free linear form.
    pub fn as_functional(&self) -> Option<SparseVector> {
        if self.degree != 1 || self.tail.is_some() {
            return None;
        }
        Some(SparseVector::from_entries(
            self.field,
            self.terms.iter().map(|(m, c)| (m.min_var().expect("degree-1 monomial"), c.clone())),
        ))
    }

    /// The linear form with the given coefficient vector.
    pub fn from_functional(phi: &SparseVector) -> HomPoly {
        let mut p = HomPoly::zero(phi.field(), 1);
        for (j, c) in phi.iter() {
            p.add_term(MultiIndex::from_vars(&[j]).expect("1-based"), c.clone());
        }
        p
    }

    /// Finite polynomial agreeing with `self` on every vector supported in `[1..up_to]`.
    pub fn materialize(&self, up_to: usize) -> HomPoly {
        let mut out = HomPoly { tail: None, ..self.clone() };
        if let Some(tail) = &self.tail {
            for (mono, c) in tail.active_terms(up_to) {
                out.add_term(mono, c.clone());
            }
        }
        out
    }

    fn check_data(&self, data: Field) -> Result<()> {
        if self.field.accepts(data) {
            Ok(())
        } else {
            Err(Error::FieldMismatch { expected: self.field, found: data })
        }
    }

    fn eval_terms<'a>(terms: impl Iterator<Item = (&'a MultiIndex, &'a Scalar)>, x: &SparseVector) -> Scalar {
        let mut acc = Scalar::zero();
        'terms: for (mono, c) in terms {
            let mut prod = c.clone();
            for (v, e) in mono.iter() {
                match x.entry(v) {
                    Some(xv) => prod = &prod * &xv.pow(e),
                    None => continue 'terms,
                }
            }
            acc = &acc + &prod;
        }
        acc
    }

    /// `P(x)`; only the finitely many tail shifts meeting `x`'s support are visited.
    pub fn evaluate(&self, x: &SparseVector) -> Result<Scalar> {
        self.check_data(x.field())?;
        let mut value = Self::eval_terms(self.terms.iter(), x);
        if let (Some(tail), Some(n)) = (&self.tail, x.max_index()) {
            let shifted: Vec<(MultiIndex, Scalar)> = tail.active_terms(n).map(|(m, c)| (m, c.clone())).collect();
            value = &value + &Self::eval_terms(shifted.iter().map(|(m, c)| (m, c)), x);
        }
        Ok(value)
    }

    /// Formal derivative `D_v P(x) = Σ_α c_α Σⱼ αⱼ vⱼ x^{α−eⱼ}`, of degree `m − 1`.
    ///
    /// Tail shifts that miss `supp(v)` differentiate to zero, so the result
    /// is always tail-free.
    pub fn directional_derivative(&self, v: &SparseVector) -> Result<HomPoly> {
        if self.degree == 0 {
            return Err(Error::ZeroDegree);
        }
        self.check_data(v.field())?;
        let base;
        let source = match (&self.tail, v.max_index()) {
            (Some(_), Some(n)) => {
                base = self.materialize(n);
                &base
            }
            _ => self,
        };
        let mut out = HomPoly::zero(self.field.join(v.field()), self.degree - 1);
        for (mono, c) in &source.terms {
            for (var, e) in mono.iter() {
                if let Some(vj) = v.entry(var) {
                    let lowered = mono.lowered(var).expect("variable present");
                    out.add_term(lowered, &(c * vj) * &Scalar::int(e as i64));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> HomPoly {
        let mut out = HomPoly::zero(self.field.join(c.field()), self.degree);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), c * x);
        }
        if let Some(tail) = &self.tail {
            let gens = tail.generators().iter().map(|(g, x)| (g.clone(), c * x)).collect();
            if let Ok(t) = TailRule::new(tail.offset(), tail.period(), tail.window(), gens) {
                out.tail = Some(t);
            }
        }
        out
    }

    /// Sum of two tail-free polynomials of equal degree.
    pub fn add(&self, other: &HomPoly) -> Result<HomPoly> {
        if self.degree != other.degree {
            return Err(Error::ArityMismatch { expected: self.degree as usize, found: other.degree as usize });
        }
        if self.tail.is_some() || other.tail.is_some() {
            return Err(Error::InvalidPolynomial("sum of tail polynomials".into()));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product of two tail-free polynomials.
    pub fn mul(&self, other: &HomPoly) -> Result<HomPoly> {
        if self.tail.is_some() || other.tail.is_some() {
            return Err(Error::InvalidPolynomial("product of tail polynomials".into()));
        }
        let mut out = HomPoly::zero(self.field.join(other.field), self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.combined(b), x * y);
            }
        }
        Ok(out)
    }

    /// Drops approximate coefficients of modulus at most `threshold`.
    pub fn chop(&self, threshold: f64) -> HomPoly {
        let mut out = self.clone();
        out.terms.retain(|_, c| !(matches!(c, Scalar::Approx(_)) && c.abs() <= threshold));
        out
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() && self.tail.is_none() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        if let Some(t) = &self.tail {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "Σ_k shift(")?;
            for (i, (g, c)) in t.generators().iter().enumerate() {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                write!(f, "{c}*{g}")?;
            }
            write!(f, ", {} + {}k)", t.offset(), t.period())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TermRepr {
    pub monomial: MultiIndex,
    pub coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct TailRepr {
    offset: usize,
    period: usize,
    #[serde(default)]
    window: Option<usize>,
    generators: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct HomPolyRepr {
    field: Field,
    degree: u32,
    terms: Vec<TermRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<TailRepr>,
}

impl Serialize for HomPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = HomPolyRepr {
            field: self.field,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr { monomial: m.clone(), coeff: c.clone() })
                .collect(),
            tail: self.tail.as_ref().map(|t| TailRepr {
                offset: t.offset,
                period: t.period,
                window: Some(t.window),
                generators: t
                    .generators
                    .iter()
                    .map(|(m, c)| TermRepr { monomial: m.clone(), coeff: c.clone() })
                    .collect(),
            }),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = HomPolyRepr::deserialize(d)?;
        let p = HomPoly::new(repr.field, repr.degree, repr.terms.into_iter().map(|t| (t.monomial, t.coeff)))
            .map_err(D::Error::custom)?;
        match repr.tail {
            None => Ok(p),
            Some(t) => {
                let window = t
                    .window
                    .unwrap_or_else(|| t.generators.iter().filter_map(|g| g.monomial.max_var()).max().unwrap_or(1));
                let gens = t.generators.into_iter().map(|g| (g.monomial, g.coeff)).collect();
                let tail = TailRule::new(t.offset, t.period, window, gens).map_err(D::Error::custom)?;
                p.with_tail(tail).map_err(D::Error::custom)
            }
        }
    }
}
