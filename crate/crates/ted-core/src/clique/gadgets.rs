//! Gadget trees: decrease, equality, connection, and the depth-metering path.
//!
//! Every gadget is a pair of trees plus cost entries over its own label group.
//! Left trees encode values; right trees are universal for their type. Label
//! groups of distinct gadget types are disjoint, so gadgets only interact
//! where the construction wants them to.

use crate::cost::Cost;
use crate::graph::WeightedGraph;
use crate::model::CostModel;
use crate::tree::{Label, LabeledTree};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

use super::{CliqueEnumeration, CliqueError, ShiftedWeights};

/// Sequential label allocator; layouts are deterministic.
#[derive(Default)]
pub(crate) struct LabelAlloc {
    next: u32,
}

impl LabelAlloc {
    pub fn fresh(&mut self) -> Label {
        let l = Label(self.next);
        self.next += 1;
        l
    }

    pub fn fresh_n(&mut self, n: usize) -> Vec<Label> {
        (0..n).map(|_| self.fresh()).collect()
    }

    pub fn count(&self) -> u32 {
        self.next
    }
}

/// Finite cost entries collected during construction. Conflicting values for
/// one ordered pair are a construction bug and abort.
#[derive(Default)]
pub(crate) struct CostRegistry {
    map: BTreeMap<(Label, Label), BigInt>,
}

impl CostRegistry {
    /// Registers the cost in both orientations: gadget sides may end up in
    /// either tree of the final instance.
    pub fn set_sym(&mut self, a: Label, b: Label, v: BigInt) {
        for key in [(a, b), (b, a)] {
            match self.map.get(&key) {
                Some(old) if *old != v => {
                    panic!("conflicting cost for label pair {key:?}: {old} vs {v}")
                }
                _ => {
                    self.map.insert(key, v.clone());
                }
            }
        }
    }

    pub fn to_model(&self, alphabet: u32) -> CostModel {
        let mut model = CostModel::new_matching(alphabet);
        for (&(a, b), v) in &self.map {
            model
                .set_match(a, b, Cost::Finite(v.clone()))
                .expect("label range");
        }
        model
    }
}

/// Path of nodes, top first. An empty slice gives the empty tree.
pub(crate) fn path_tree(labels: &[Label]) -> LabeledTree {
    let mut t = LabeledTree::empty();
    let mut below: Option<crate::tree::NodeId> = None;
    for &l in labels.iter().rev() {
        let id = t.add_node(l, below.into_iter().collect());
        below = Some(id);
    }
    if let Some(root) = below {
        t.set_root(root);
    }
    t
}

/// One decrease-gadget label type: d segment labels per side. Matching the
/// i-th left segment to the i-th right segment costs -base^i.
pub(crate) struct DecreaseType {
    pub left: Vec<Label>,
    pub right: Vec<Label>,
    pub base: usize,
    pub d: usize,
}

impl DecreaseType {
    pub fn new(
        alloc: &mut LabelAlloc,
        reg: &mut CostRegistry,
        base: usize,
        d: usize,
    ) -> DecreaseType {
        let left = alloc.fresh_n(d);
        let right = alloc.fresh_n(d);
        let mut pow = BigInt::from(1u8);
        for i in 0..d {
            reg.set_sym(left[i], right[i], -&pow);
            pow *= base as u64;
        }
        DecreaseType {
            left,
            right,
            base,
            d,
        }
    }

    fn digits(&self, x: &BigInt) -> Result<Vec<u64>, CliqueError> {
        use num_traits::ToPrimitive;
        if x.is_negative() {
            return Err(CliqueError::GadgetRange(x.clone(), self.base, self.d));
        }
        let mut rest = x.clone();
        let base = BigInt::from(self.base as u64);
        let mut out = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            let digit = &rest % &base;
            out.push(digit.to_u64().unwrap());
            rest /= &base;
        }
        if !rest.is_zero() {
            return Err(CliqueError::GadgetRange(x.clone(), self.base, self.d));
        }
        Ok(out)
    }

    /// Left tree of D(x): a path with alpha_i nodes of segment i, low digits
    /// at the bottom; x = 0 gives the empty tree.
    pub fn left_tree(&self, x: &BigInt) -> Result<LabeledTree, CliqueError> {
        let digits = self.digits(x)?;
        let mut labels = Vec::new();
        for i in (0..self.d).rev() {
            for _ in 0..digits[i] {
                labels.push(self.left[i]);
            }
        }
        Ok(path_tree(&labels))
    }

    /// Right tree: base-1 nodes per segment, independent of x.
    pub fn right_tree(&self) -> LabeledTree {
        let mut labels = Vec::new();
        for i in (0..self.d).rev() {
            for _ in 0..self.base - 1 {
                labels.push(self.right[i]);
            }
        }
        path_tree(&labels)
    }
}

/// Equality-gadget label type; matching either segment across sides costs
/// -c_eq.
pub(crate) struct EqualityType {
    pub l1: Label,
    pub l2: Label,
    pub r1: Label,
    pub r2: Label,
    pub n: usize,
}

impl EqualityType {
    pub fn new(
        alloc: &mut LabelAlloc,
        reg: &mut CostRegistry,
        n: usize,
        c_eq: &BigInt,
    ) -> EqualityType {
        let (l1, l2, r1, r2) = (alloc.fresh(), alloc.fresh(), alloc.fresh(), alloc.fresh());
        reg.set_sym(l1, r1, -c_eq.clone());
        reg.set_sym(l2, r2, -c_eq.clone());
        EqualityType { l1, l2, r1, r2, n }
    }

    /// Left tree of E(u, ., c): a path of u first-segment nodes above n-u
    /// second-segment nodes.
    pub fn left_tree(&self, u: usize) -> LabeledTree {
        let mut labels = vec![self.l1; u];
        labels.extend(std::iter::repeat(self.l2).take(self.n - u));
        path_tree(&labels)
    }

    pub fn right_tree(&self, v: usize) -> LabeledTree {
        let mut labels = vec![self.r1; v];
        labels.extend(std::iter::repeat(self.r2).take(self.n - v));
        path_tree(&labels)
    }
}

/// Connection-gadget label type over a fixed weight view. The optimal
/// matching of `left_tree(i)` against `right_tree(j)` is `-m_param - W(i,j)`
/// where W sums the internal edges of subset i and the edges from subset i to
/// subset j under the view.
pub(crate) struct ConnectionType {
    pub root_l: Label,
    pub root_r: Label,
    pub child_l: Label,
    pub child_r: Label,
    pub eq: EqualityType,
    pub dt: DecreaseType,
    pub m_param: BigInt,
    pub n: usize,
    pub kk: usize,
}

impl ConnectionType {
    /// `w_total` must bound every decrease argument of the view.
    pub fn new(
        alloc: &mut LabelAlloc,
        reg: &mut CostRegistry,
        n: usize,
        kk: usize,
        base: usize,
        d: usize,
        m_param: BigInt,
        w_total: &BigInt,
    ) -> Result<ConnectionType, CliqueError> {
        let m1 = w_total * BigInt::from((kk + 1) as u64);
        let m2 = &m1 * BigInt::from((n * kk) as u64) + &m1;
        let bound = &m2 * BigInt::from(kk as u64) + &m1 * BigInt::from((n * kk) as u64);
        if m_param <= bound {
            return Err(CliqueError::InsufficientM(m_param, bound + 1u8));
        }
        let root_l = alloc.fresh();
        let root_r = alloc.fresh();
        let child_l = alloc.fresh();
        let child_r = alloc.fresh();
        reg.set_sym(root_l, root_r, -&m_param + &bound);
        reg.set_sym(child_l, child_r, -&m2);
        let eq = EqualityType::new(alloc, reg, n, &m1);
        let dt = DecreaseType::new(alloc, reg, base, d);
        Ok(ConnectionType {
            root_l,
            root_r,
            child_l,
            child_r,
            eq,
            dt,
            m_param,
            n,
            kk,
        })
    }

    /// Left tree for subset i: one child per subset member (equality left
    /// tree plus universal decrease right tree), then the internal-edge
    /// decrease left tree as the rightmost child.
    pub fn left_tree(
        &self,
        subset: &[usize],
        view: &dyn Fn(usize, usize) -> BigInt,
    ) -> Result<LabeledTree, CliqueError> {
        let mut t = LabeledTree::empty();
        let mut children = Vec::with_capacity(self.kk + 1);
        for &u in subset {
            let e = t.graft(&self.eq.left_tree(u));
            let dr = t.graft(&self.dt.right_tree());
            children.push(t.add_node(self.child_l, vec![e, dr]));
        }
        let mut internal = BigInt::zero();
        for (x, &u) in subset.iter().enumerate() {
            for &v in &subset[x + 1..] {
                internal += view(u, v);
            }
        }
        let d_tree = self.dt.left_tree(&internal)?;
        if !d_tree.is_empty() {
            children.push(t.graft(&d_tree));
        }
        let root = t.add_node(self.root_l, children);
        t.set_root(root);
        Ok(t)
    }

    /// Right tree for subset j: one child per graph node t (equality right
    /// tree plus the decrease left tree of t's total weight into subset j),
    /// then the universal decrease right tree.
    pub fn right_tree(
        &self,
        subset: &[usize],
        view: &dyn Fn(usize, usize) -> BigInt,
    ) -> Result<LabeledTree, CliqueError> {
        let mut t = LabeledTree::empty();
        let mut children = Vec::with_capacity(self.n + 1);
        for node in 1..=self.n {
            let e = t.graft(&self.eq.right_tree(node));
            let sum: BigInt = subset.iter().map(|&v| view(node, v)).sum();
            let dl = self.dt.left_tree(&sum)?;
            let mut kids = vec![e];
            if !dl.is_empty() {
                kids.push(t.graft(&dl));
            }
            children.push(t.add_node(self.child_r, kids));
        }
        children.push(t.graft(&self.dt.right_tree()));
        let root = t.add_node(self.root_r, children);
        t.set_root(root);
        Ok(t)
    }

    /// The contracted value -m_param - W(i,j) under the view.
    pub fn expected_value(
        &self,
        ce: &CliqueEnumeration,
        view: &dyn Fn(usize, usize) -> BigInt,
        i: usize,
        j: usize,
    ) -> BigInt {
        let qi = ce.subset(i);
        let qj = ce.subset(j);
        let mut w = BigInt::zero();
        for (x, &u) in qi.iter().enumerate() {
            for &v in &qi[x + 1..] {
                w += view(u, v);
            }
        }
        for &u in qi {
            for &v in qj {
                w += view(u, v);
            }
        }
        -&self.m_param - w
    }
}

/// A standalone gadget pair plus the model that prices it.
#[derive(Clone, Debug)]
pub struct GadgetPair {
    pub left: LabeledTree,
    pub right: LabeledTree,
    pub model: CostModel,
}

/// Standalone decrease gadget D(x): optimal matching value is exactly -x.
pub fn decrease_gadget(x: &BigInt, d: usize, base: usize) -> Result<GadgetPair, CliqueError> {
    let mut alloc = LabelAlloc::default();
    let mut reg = CostRegistry::default();
    let ty = DecreaseType::new(&mut alloc, &mut reg, base, d);
    let left = ty.left_tree(x)?;
    let right = ty.right_tree();
    Ok(GadgetPair {
        left,
        right,
        model: reg.to_model(alloc.count()),
    })
}

/// Standalone equality gadget E(u, v, c): value -c*n iff u = v, otherwise
/// -c*(n - |u - v|).
pub fn equality_gadget(
    u: usize,
    v: usize,
    c_eq: &BigInt,
    n: usize,
) -> Result<GadgetPair, CliqueError> {
    if u == 0 || u > n {
        return Err(CliqueError::IndexOutOfRange(u, n));
    }
    if v == 0 || v > n {
        return Err(CliqueError::IndexOutOfRange(v, n));
    }
    let mut alloc = LabelAlloc::default();
    let mut reg = CostRegistry::default();
    let ty = EqualityType::new(&mut alloc, &mut reg, n, c_eq);
    Ok(GadgetPair {
        left: ty.left_tree(u),
        right: ty.right_tree(v),
        model: reg.to_model(alloc.count()),
    })
}

/// Standalone connection gadget over the shifted weights.
pub struct ConnectionGadget {
    ty: ConnectionType,
    ce: CliqueEnumeration,
    sw: ShiftedWeights,
    pub model: CostModel,
}

pub fn connection_gadget(
    g: &WeightedGraph,
    k: usize,
    m_param: &BigInt,
) -> Result<ConnectionGadget, CliqueError> {
    let ce = super::enumerate_subcliques(g, k)?;
    let sw = super::shift_weights(g, k);
    let w_total = sw.total();
    let n = g.node_count();
    let kk = k / 3;
    let base = n.max(2);
    // Smallest digit count covering every decrease argument of this gadget.
    let largest = &w_total * BigInt::from((kk + 1) as u64) + 1u8;
    let mut d = 1usize;
    let mut pow = BigInt::from(base as u64);
    while pow <= largest {
        pow *= base as u64;
        d += 1;
    }
    let mut alloc = LabelAlloc::default();
    let mut reg = CostRegistry::default();
    let ty = ConnectionType::new(
        &mut alloc,
        &mut reg,
        n,
        kk,
        base,
        d,
        m_param.clone(),
        &w_total,
    )?;
    let model = reg.to_model(alloc.count());
    Ok(ConnectionGadget { ty, ce, sw, model })
}

impl ConnectionGadget {
    pub fn left_tree(&self, i: usize) -> Result<LabeledTree, CliqueError> {
        let view = |u: usize, v: usize| self.sw.get(u, v);
        self.ty.left_tree(self.ce.subset(i), &view)
    }

    pub fn right_tree(&self, j: usize) -> Result<LabeledTree, CliqueError> {
        let view = |u: usize, v: usize| self.sw.get(u, v);
        self.ty.right_tree(self.ce.subset(j), &view)
    }

    pub fn expected_value(&self, i: usize, j: usize) -> BigInt {
        let view = |u: usize, v: usize| self.sw.get(u, v);
        self.ty.expected_value(&self.ce, &view, i, j)
    }

    pub fn subset_count(&self) -> usize {
        self.ce.count()
    }
}

/// The depth-metering path with fresh labels 0..k/3.
pub fn i_gadget(n: usize, kk: usize) -> (LabeledTree, Vec<Label>) {
    let mut alloc = LabelAlloc::default();
    i_gadget_with(n, kk, &mut alloc)
}

/// The depth-metering path: k/3 segments of n-1 nodes; segment labels are
/// returned so spine nodes can share them. Matching two segment-m nodes is
/// priced by the instance builder at -M^7 * n^m.
pub(crate) fn i_gadget_with(n: usize, kk: usize, alloc: &mut LabelAlloc) -> (LabeledTree, Vec<Label>) {
    let iota = alloc.fresh_n(kk);
    let mut labels = Vec::with_capacity(kk * (n - 1));
    for &l in &iota {
        for _ in 0..n - 1 {
            labels.push(l);
        }
    }
    (path_tree(&labels), iota)
}

/// Segment index for the extra spine node at depth z: the exponent of the
/// largest power of n dividing N-z, capped at the last segment.
pub fn i_segment_for(cap_n: usize, z: usize, n: usize, kk: usize) -> usize {
    assert!(z < cap_n);
    let mut rest = cap_n - z;
    let mut m = 0usize;
    while m + 1 < kk && rest % n == 0 {
        rest /= n;
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decrease_tree_shapes_match_the_figure() {
        // base 6, d 3, x = 2*36 + 4*6 + 3 = 99: left path 9 nodes with
        // segments 3, 4, 2 bottom-up; right path 15 nodes.
        let g = decrease_gadget(&BigInt::from(99), 3, 6).unwrap();
        assert_eq!(g.left.size(), 9);
        assert_eq!(g.right.size(), 15);
        // x = 0: empty left tree.
        let z = decrease_gadget(&BigInt::from(0), 3, 6).unwrap();
        assert!(z.left.is_empty());
        assert_eq!(z.right.size(), 15);
        // Out of range.
        assert!(decrease_gadget(&BigInt::from(216), 3, 6).is_err());
        assert!(decrease_gadget(&BigInt::from(-1), 3, 6).is_err());
    }

    #[test]
    fn i_segment_examples() {
        // N=16, n=4: 16-8 = 8, largest power of 4 dividing 8 is 4^1.
        assert_eq!(i_segment_for(16, 8, 4, 2), 1);
        assert_eq!(i_segment_for(16, 15, 4, 2), 0);
        assert_eq!(i_segment_for(16, 12, 4, 2), 1);
        // Cap at the last segment.
        assert_eq!(i_segment_for(28, 1, 3, 2), 1);
        // Single-segment gadget: always segment 0.
        assert_eq!(i_segment_for(4, 1, 4, 1), 0);
    }

    #[test]
    fn i_gadget_path_shape() {
        let mut alloc = LabelAlloc::default();
        let (tree, iota) = i_gadget(4, 1);
        assert_eq!(tree.size(), 3);
        assert_eq!(iota.len(), 1);
        let mut alloc = LabelAlloc::default();
        let (tree, iota) = i_gadget(3, 2);
        assert_eq!(tree.size(), 4);
        assert_eq!(iota.len(), 2);
        // Root belongs to segment 0.
        assert_eq!(tree.label(tree.root().unwrap()), iota[0]);
    }
}
