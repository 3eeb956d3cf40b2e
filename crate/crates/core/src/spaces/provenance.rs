use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::polynomials::{HomPoly, SparseVector};
use crate::scalars::Field;

/// How a subspace was derived from its parent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeKind {
    /// The ambient space with its standard basis.
    Full { field: Field },
    /// Common kernel of finitely many functionals.
    Kernel { functionals: Vec<SparseVector>, label: String },
    /// Kernel of the coordinate functional `e_coordinate*`, which `excluded` fails.
    Exclude { coordinate: usize, excluded: SparseVector },
    /// Grouping marker over a chain of nested refinements.
    Refine { label: String },
    /// Vectors produced by a nested build for `polynomial`, on whose span it vanishes.
    VanishingRecursion { polynomial: HomPoly, depth: usize },
}

#[derive(Debug)]
pub struct ProvenanceNode {
    pub kind: NodeKind,
    pub parent: Option<Arc<ProvenanceNode>>,
}

impl ProvenanceNode {
    pub fn root(kind: NodeKind) -> Arc<Self> {
        Arc::new(Self { kind, parent: None })
    }

    pub fn child(parent: &Arc<Self>, kind: NodeKind) -> Arc<Self> {
        Arc::new(Self { kind, parent: Some(Arc::clone(parent)) })
    }

    /// This node followed by its ancestors.
    pub fn lineage(self: &Arc<Self>) -> Vec<&ProvenanceNode> {
        let mut out = vec![self.as_ref()];
        let mut cur = self.parent.as_deref();
        while let Some(n) = cur {
            out.push(n);
            cur = n.parent.as_deref();
        }
        out
    }
}

/// Serialized node: `parent` refers to an earlier entry of the node list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatNode {
    pub id: usize,
    pub parent: Option<usize>,
    #[serde(flatten)]
    pub kind: NodeKind,
}

/// Flattens shared provenance trees into a node list, parents first.
#[derive(Default)]
pub struct ProvenanceWriter {
    nodes: Vec<FlatNode>,
    ids: HashMap<*const ProvenanceNode, usize>,
}

impl ProvenanceWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Id of `node`, writing it and any unseen ancestors.
    pub fn add(&mut self, node: &Arc<ProvenanceNode>) -> usize {
        let key = Arc::as_ptr(node);
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let parent = node.parent.as_ref().map(|p| self.add(p));
        let id = self.nodes.len();
        self.nodes.push(FlatNode { id, parent, kind: node.kind.clone() });
        self.ids.insert(key, id);
        id
    }

    pub fn finish(self) -> Vec<FlatNode> {
        self.nodes
    }
}

/// Ancestor chain of node `id` within a flat list, starting at the node itself.
pub fn flat_lineage(nodes: &[FlatNode], id: usize) -> Option<Vec<&FlatNode>> {
    let mut out = Vec::new();
    let mut cur = Some(id);
    while let Some(i) = cur {
        let n = nodes.get(i)?;
        if n.id != i || out.len() > nodes.len() {
            return None;
        }
        if n.parent.is_some_and(|p| p >= i) {
            return None;
        }
        out.push(n);
        cur = n.parent;
    }
    Some(out)
}
