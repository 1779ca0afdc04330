//! Matchings between two trees and their structural validation.

use crate::cost::Cost;
use crate::model::CostModel;
use crate::tree::{LabeledTree, NodeId};

/// A set of matched node pairs (node in F, node in G).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(NodeId, NodeId)>,
}

impl Matching {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Optimal value plus a witnessing matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingResult {
    pub value: Cost,
    pub matching: Matching,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matching references node {0} outside tree {1}")]
    DanglingNode(usize, &'static str),
}

/// Pairwise relation of two distinct nodes of one tree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Rel {
    Equal,
    Ancestor,
    Descendant,
    Before,
    After,
}

/// Preorder number and subtree size per node; ancestry is interval
/// containment and Before/After is preorder comparison.
pub(crate) struct RelIndex {
    pre: Vec<usize>,
    size: Vec<usize>,
}

impl RelIndex {
    pub(crate) fn new(tree: &LabeledTree) -> Self {
        let order = tree.preorder();
        let mut pre = vec![0usize; tree.size()];
        for (i, v) in order.iter().enumerate() {
            pre[v.0] = i;
        }
        let mut size = vec![1usize; tree.size()];
        for v in tree.postorder() {
            for &c in tree.children(v) {
                size[v.0] += size[c.0];
            }
        }
        RelIndex { pre, size }
    }

    /// Relation of (u1,u2) in this tree equals the relation of (v1,v2) in the
    /// other. Callers guarantee u1 != u2 and v1 != v2.
    pub(crate) fn same_relation(
        &self,
        u1: NodeId,
        u2: NodeId,
        other: &RelIndex,
        v1: NodeId,
        v2: NodeId,
    ) -> bool {
        self.rel(u1, u2) == other.rel(v1, v2)
    }

    fn rel(&self, u: NodeId, v: NodeId) -> Rel {
        if u == v {
            return Rel::Equal;
        }
        let (pu, pv) = (self.pre[u.0], self.pre[v.0]);
        if pu < pv {
            if pv < pu + self.size[u.0] {
                Rel::Ancestor
            } else {
                Rel::Before
            }
        } else if pu < pv + self.size[v.0] {
            Rel::Descendant
        } else {
            Rel::After
        }
    }
}

/// True iff the matching is injective both ways and, for every two pairs, the
/// ancestor/descendant and left-right relations agree in both trees.
pub fn validate_matching(
    f: &LabeledTree,
    g: &LabeledTree,
    m: &Matching,
) -> Result<bool, MatchingError> {
    for &(u, v) in &m.pairs {
        if !f.contains(u) {
            return Err(MatchingError::DanglingNode(u.0, "F"));
        }
        if !g.contains(v) {
            return Err(MatchingError::DanglingNode(v.0, "G"));
        }
    }
    let rf = RelIndex::new(f);
    let rg = RelIndex::new(g);
    for (i, &(u1, v1)) in m.pairs.iter().enumerate() {
        for &(u2, v2) in &m.pairs[i + 1..] {
            let a = rf.rel(u1, u2);
            let b = rg.rel(v1, v2);
            if a == Rel::Equal || b == Rel::Equal {
                // Injectivity violation unless it is the same pair repeated.
                if !(a == Rel::Equal && b == Rel::Equal) {
                    return Ok(false);
                }
                continue;
            }
            if a != b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sum of the model costs over the matched pairs.
pub fn matching_value(
    f: &LabeledTree,
    g: &LabeledTree,
    model: &CostModel,
    m: &Matching,
) -> Cost {
    let mut total = Cost::zero();
    for &(u, v) in &m.pairs {
        total = &total + &model.match_cost(f.label(u), g.label(v));
    }
    total
}
