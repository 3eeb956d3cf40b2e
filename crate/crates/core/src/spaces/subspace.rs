use std::fmt;
use std::sync::Arc;

use super::linalg::Echelon;
use super::provenance::{NodeKind, ProvenanceNode};
use crate::error::{Error, Result};
use crate::polynomials::{HomPoly, SparseVector};
use crate::scalars::{Field, Scalar};

/// Relative size below which approximate kernel values count as zero.
const KERNEL_ZERO_RELATIVE: f64 = 1e-9;

/// Resource bounds shared by every stream derived from one root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamLimits {
    /// Largest ambient coordinate a stream may touch.
    pub max_index: usize,
    /// Re-check the rank of the yield history after every yield.
    pub check_independence: bool,
}

impl Default for StreamLimits {
    fn default() -> Self {
        Self { max_index: 1_000_000, check_independence: false }
    }
}

/// An external producer of vectors, e.g. a nested construction.
///
/// Implementors must yield nonzero, linearly independent vectors.
pub trait VectorSource: Send {
    fn next_vector(&mut self) -> Result<SparseVector>;
    fn clone_box(&self) -> Box<dyn VectorSource>;
}

#[derive(Clone)]
struct Pivot {
    vector: SparseVector,
    values: Vec<Scalar>,
    col: usize,
}

#[derive(Clone)]
struct KernelState {
    upstream: Subspace,
    functionals: Vec<SparseVector>,
    pivots: Vec<Pivot>,
    functional_scale: f64,
}

enum Source {
    Full { next: usize },
    Kernel(Box<KernelState>),
    External(Box<dyn VectorSource>),
}

impl Clone for Source {
    fn clone(&self) -> Self {
        match self {
            Source::Full { next } => Source::Full { next: *next },
            Source::Kernel(k) => Source::Kernel(k.clone()),
            Source::External(s) => Source::External(s.clone_box()),
        }
    }
}

/// Lazy infinite-dimensional subspace of the finitely supported sequences.
///
/// Each call to [`Subspace::next_basis_vector`] yields a new member,
/// independent of everything yielded before. Cloning snapshots the stream.
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    node: Arc<ProvenanceNode>,
    source: Source,
    limits: StreamLimits,
    history: Vec<SparseVector>,
    echelon: Option<Echelon>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("field", &self.field)
            .field("node", &self.node.kind)
            .field("yielded", &self.history.len())
            .finish()
    }
}

/// `e₁, e₂, e₃, …`
pub fn full_space(field: Field) -> Subspace {
    full_space_with(field, StreamLimits::default())
}

pub fn full_space_with(field: Field, limits: StreamLimits) -> Subspace {
    Subspace::from_parts(field, ProvenanceNode::root(NodeKind::Full { field }), Source::Full { next: 1 }, limits)
}

impl Subspace {
    fn from_parts(field: Field, node: Arc<ProvenanceNode>, source: Source, limits: StreamLimits) -> Self {
        let echelon = limits.check_independence.then(Echelon::new);
        Self { field, node, source, limits, history: Vec::new(), echelon }
    }

    /// Wraps an external producer; `kind` records what its yields satisfy.
    pub fn from_source(
        field: Field,
        parent: &Arc<ProvenanceNode>,
        limits: StreamLimits,
        kind: NodeKind,
        source: Box<dyn VectorSource>,
    ) -> Subspace {
        let node = ProvenanceNode::child(parent, kind);
        Subspace::from_parts(field, node, Source::External(source), limits)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn limits(&self) -> StreamLimits {
        self.limits
    }

    pub fn provenance(&self) -> &Arc<ProvenanceNode> {
        &self.node
    }

    /// Vectors yielded so far, in order.
    pub fn history(&self) -> &[SparseVector] {
        &self.history
    }

    /// Same stream under an extra provenance node.
    pub fn annotated(mut self, kind: NodeKind) -> Subspace {
        self.node = ProvenanceNode::child(&self.node, kind);
        self
    }

    pub fn next_basis_vector(&mut self) -> Result<SparseVector> {
        let v = match &mut self.source {
            Source::Full { next } => {
                if *next > self.limits.max_index {
                    return Err(Error::StreamExhausted { max_index: self.limits.max_index });
                }
                let v = SparseVector::unit(self.field, *next);
                *next += 1;
                v
            }
            Source::Kernel(k) => k.next()?,
            Source::External(s) => s.next_vector()?,
        };
        if v.max_index().is_some_and(|j| j > self.limits.max_index) {
            return Err(Error::StreamExhausted { max_index: self.limits.max_index });
        }
        if v.is_zero() {
            return Err(Error::CheckFailed("stream yielded the zero vector".into()));
        }
        if let Some(e) = &mut self.echelon {
            if !e.insert(&v) {
                return Err(Error::CheckFailed(format!("stream yield {} is dependent on earlier yields", self.history.len() + 1)));
            }
        }
        self.history.push(v.clone());
        Ok(v)
    }

    pub fn take(&mut self, count: usize) -> Result<Vec<SparseVector>> {
        (0..count).map(|_| self.next_basis_vector()).collect()
    }
}

impl KernelState {
    fn is_negligible(&self, x: &Scalar, vector: &SparseVector) -> bool {
        x.is_negligible(KERNEL_ZERO_RELATIVE * self.functional_scale * vector.max_abs())
    }

    /// Pull-and-eliminate: each pulled vector is reduced against at most
    /// `r` pivot vectors; if its functional values vanish it is yielded,
    /// otherwise it becomes a pivot.
    fn next(&mut self) -> Result<SparseVector> {
        loop {
            let u = self.upstream.next_basis_vector()?;
            let mut values: Vec<Scalar> = self.functionals.iter().map(|phi| phi.dot(&u)).collect();
            let mut w = u;
            for p in &self.pivots {
                let c = &values[p.col] / &p.values[p.col];
                if c.is_zero() {
                    continue;
                }
                for (x, y) in values.iter_mut().zip(&p.values) {
                    *x = &*x - &(&c * y);
                }
                values[p.col] = Scalar::zero();
                w = w.axpy(&-&c, &p.vector);
            }
            let col = if values.iter().all(Scalar::is_exact) {
                values.iter().position(|x| !x.is_zero())
            } else {
                values
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !self.is_negligible(x, &w))
                    .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                    .map(|(i, _)| i)
            };
            match col {
                None => return Ok(w),
                Some(col) => self.pivots.push(Pivot { vector: w, values, col }),
            }
        }
    }
}

fn kernel_node(s: Subspace, functionals: Vec<SparseVector>, kind: NodeKind) -> Subspace {
    let field = functionals.iter().fold(s.field, |f, phi| f.join(phi.field()));
    let node = ProvenanceNode::child(&s.node, kind);
    let limits = s.limits;
    let functional_scale = functionals.iter().map(SparseVector::l1_norm).fold(0.0, f64::max);
    let state = KernelState { upstream: s, functionals, pivots: Vec::new(), functional_scale };
    Subspace::from_parts(field, node, Source::Kernel(Box::new(state)), limits)
}

/// Members of `s` annihilated by every functional. Zero functionals are dropped.
pub fn kernel_within(s: Subspace, functionals: Vec<SparseVector>, label: impl Into<String>) -> Subspace {
    let functionals: Vec<SparseVector> = functionals.into_iter().filter(|f| !f.is_zero()).collect();
    let kind = NodeKind::Kernel { functionals: functionals.clone(), label: label.into() };
    kernel_node(s, functionals, kind)
}

/// Members of `s` whose coordinate at `v`'s leading coordinate is zero; `v` is not among them.
pub fn exclude_vector(s: Subspace, v: &SparseVector) -> Result<Subspace> {
    let j = v.leading_coordinate().ok_or(Error::ZeroVector)?;
    let psi = SparseVector::unit(Field::Rational, j);
    let kind = NodeKind::Exclude { coordinate: j, excluded: v.clone() };
    Ok(kernel_node(s, vec![psi], kind))
}

/// Nests `vanisher` over the conditions in order; every condition vanishes on the result.
pub fn refine_vanishing<F>(s: Subspace, conditions: &[HomPoly], label: &str, mut vanisher: F) -> Result<Subspace>
where
    F: FnMut(&HomPoly, Subspace) -> Result<Subspace>,
{
    if conditions.is_empty() {
        return Ok(s);
    }
    let mut cur = s;
    for q in conditions {
        cur = vanisher(q, cur)?;
    }
    Ok(cur.annotated(NodeKind::Refine { label: label.to_string() }))
}
