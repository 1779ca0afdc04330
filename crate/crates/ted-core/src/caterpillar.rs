//! Caterpillar instances and their fast solver.
//!
//! A hard-instance caterpillar is a single spine with exactly one leaf per
//! spine node; leaves hang to the right of the spine in the left tree and to
//! the left in the right tree. On such pairs the optimal matching always
//! splits into a spine-prefix part, a reversed leaf-suffix part, and at most
//! one spine-to-leaf cross pair per direction. [`caterpillar_ted`] exploits
//! that structure: it precomputes spine-prefix optima and reverse-matching
//! tables, then scans the cross positions and the (few) possible labels of
//! the cross spine nodes.

use crate::cost::Cost;
use crate::model::CostModel;
use crate::scalar::{LabelCosts, Sat, Scalar};
use crate::tree::{Label, LabeledTree, NodeId};
use std::collections::{BTreeMap, HashMap};

/// Which side of the spine the leaves hang on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LeafSide {
    /// Leaves to the right of the spine (the left tree of a hard instance).
    Right,
    /// Leaves to the left of the spine (the right tree).
    Left,
}

/// Label sequences of a caterpillar, depth order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caterpillar {
    pub spine_labels: Vec<Label>,
    pub leaf_labels: Vec<Label>,
    pub side: LeafSide,
}

/// Node ids of the spine and leaves, depth order; produced by the shape check.
#[derive(Clone, Debug)]
pub struct CaterpillarIndex {
    pub spine: Vec<NodeId>,
    pub leaves: Vec<NodeId>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CaterpillarError {
    #[error("node {node} at spine depth {depth}: {reason}")]
    Shape {
        node: usize,
        depth: usize,
        reason: String,
    },
    #[error("operation requires a matching-formulation model")]
    MatchingFormulationRequired,
}

fn shape_err(node: NodeId, depth: usize, reason: impl Into<String>) -> CaterpillarError {
    CaterpillarError::Shape {
        node: node.0,
        depth,
        reason: reason.into(),
    }
}

impl Caterpillar {
    pub fn new(spine_labels: Vec<Label>, leaf_labels: Vec<Label>, side: LeafSide) -> Self {
        assert_eq!(spine_labels.len(), leaf_labels.len());
        Caterpillar {
            spine_labels,
            leaf_labels,
            side,
        }
    }

    /// Spine length.
    pub fn len(&self) -> usize {
        self.spine_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spine_labels.is_empty()
    }

    /// Rebuilds the tree: node f_i has children (f_{i+1}, f'_i) when leaves
    /// hang right, (f'_i, f_{i+1}) when they hang left; the deepest spine
    /// node has only its leaf.
    pub fn to_tree(&self) -> LabeledTree {
        let n = self.len();
        let mut t = LabeledTree::empty();
        if n == 0 {
            return t;
        }
        let mut below: Option<NodeId> = None;
        for i in (0..n).rev() {
            let leaf = t.add_node(self.leaf_labels[i], Vec::new());
            let children = match (below, self.side) {
                (None, _) => vec![leaf],
                (Some(next), LeafSide::Right) => vec![next, leaf],
                (Some(next), LeafSide::Left) => vec![leaf, next],
            };
            below = Some(t.add_node(self.spine_labels[i], children));
        }
        t.set_root(below.unwrap());
        t
    }

    /// Shape check returning both the label view and the node index.
    pub fn from_tree(
        tree: &LabeledTree,
        side: LeafSide,
    ) -> Result<(Caterpillar, CaterpillarIndex), CaterpillarError> {
        let mut spine_labels = Vec::new();
        let mut leaf_labels = Vec::new();
        let mut spine = Vec::new();
        let mut leaves = Vec::new();
        let Some(root) = tree.root() else {
            return Ok((
                Caterpillar::new(Vec::new(), Vec::new(), side),
                CaterpillarIndex {
                    spine: Vec::new(),
                    leaves: Vec::new(),
                },
            ));
        };
        let mut v = root;
        let mut depth = 1usize;
        loop {
            let kids = tree.children(v);
            let (leaf, next) = match (kids.len(), side) {
                (1, _) => (kids[0], None),
                (2, LeafSide::Right) => (kids[1], Some(kids[0])),
                (2, LeafSide::Left) => (kids[0], Some(kids[1])),
                (0, _) => return Err(shape_err(v, depth, "spine node has no leaf")),
                (k, _) => {
                    return Err(shape_err(
                        v,
                        depth,
                        format!("spine node has {k} children, expected 1 or 2"),
                    ))
                }
            };
            if !tree.children(leaf).is_empty() {
                return Err(shape_err(
                    leaf,
                    depth,
                    "expected a leaf, found an inner node",
                ));
            }
            spine_labels.push(tree.label(v));
            leaf_labels.push(tree.label(leaf));
            spine.push(v);
            leaves.push(leaf);
            match next {
                Some(w) => {
                    v = w;
                    depth += 1;
                }
                None => break,
            }
        }
        Ok((
            Caterpillar::new(spine_labels, leaf_labels, side),
            CaterpillarIndex { spine, leaves },
        ))
    }
}

/// Shape check: succeeds iff the tree is exactly a spine with one leaf per
/// spine node on the declared side.
pub fn as_caterpillar(
    tree: &LabeledTree,
    side: LeafSide,
) -> Result<Caterpillar, CaterpillarError> {
    Caterpillar::from_tree(tree, side).map(|(c, _)| c)
}

/// `r[i][j]` = optimal matching of `s[1..i]` against the reverse of `t[1..j]`:
/// the minimum over pair sets with strictly increasing s-positions matched to
/// strictly decreasing t-positions, forbidden pairs excluded, the empty set
/// allowed.
#[derive(Clone, Debug)]
pub struct ReverseMatchTable {
    r: Vec<Vec<Cost>>,
}

impl ReverseMatchTable {
    pub fn get(&self, i: usize, j: usize) -> &Cost {
        &self.r[i][j]
    }

    pub fn rows(&self) -> usize {
        self.r.len()
    }

    pub fn cols(&self) -> usize {
        self.r[0].len()
    }
}

/// Reverse-matching table over label sequences.
pub fn reverse_matching_table(
    s: &[Label],
    t: &[Label],
    model: &CostModel,
) -> Result<ReverseMatchTable, CaterpillarError> {
    if !model.is_matching_formulation() {
        return Err(CaterpillarError::MatchingFormulationRequired);
    }
    let costs = LabelCosts::<Cost>::from_model(model);
    let r = reverse_table_engine(s, t, &costs);
    Ok(ReverseMatchTable { r })
}

/// Shared table engine.
///
/// Grid view: cell (r, c) means "r characters of s consumed, c characters of
/// reversed t consumed"; right and down moves are free, the diagonal into
/// (r, c) pays cost(s[r], t[nt+1-c]). `r[i][j]` is the cheapest path from the
/// top-row cell (0, nt-j) to (i, nt). Sources are processed right to left and
/// each step reseeds one top-row cell and relaxes only the cells whose value
/// improves; distances are monotone in the source position, so the sweep is
/// exact and, on typical cost models, touches far fewer than all cells per
/// source. Worst case matches the per-source quadratic bound.
pub(crate) fn reverse_table_engine<S: Scalar>(
    s: &[Label],
    t: &[Label],
    costs: &LabelCosts<S>,
) -> Vec<Vec<S>> {
    let ns = s.len();
    let nt = t.len();
    let w = nt + 1;
    let mut d = vec![S::inf(); (ns + 1) * w];
    let mut out = vec![vec![S::zero(); nt + 1]; ns + 1];
    // Dirty columns per row for the current source step, plus a stamp grid to
    // deduplicate enqueues.
    let mut pending: Vec<Vec<u32>> = vec![Vec::new(); ns + 2];
    let mut appended: Vec<Vec<u32>> = vec![Vec::new(); ns + 2];
    let mut stamp = vec![0u32; (ns + 1) * w];
    let mut epoch = 0u32;

    for sigma in (0..=nt).rev() {
        epoch += 1;
        stamp[sigma] = epoch;
        pending[0].push(sigma as u32);
        for row in 0..=ns {
            let base = std::mem::take(&mut pending[row]);
            let mut extra = std::mem::take(&mut appended[row]);
            let (mut bi, mut ei) = (0usize, 0usize);
            loop {
                // Merge the pre-sorted queue with in-row appends, ascending.
                let cc = match (base.get(bi), extra.get(ei)) {
                    (Some(&a), Some(&b)) => {
                        if a <= b {
                            bi += 1;
                            a as usize
                        } else {
                            ei += 1;
                            b as usize
                        }
                    }
                    (Some(&a), None) => {
                        bi += 1;
                        a as usize
                    }
                    (None, Some(&b)) => {
                        ei += 1;
                        b as usize
                    }
                    (None, None) => break,
                };
                let idx = row * w + cc;
                let mut best = if row == 0 && cc == sigma {
                    S::zero()
                } else {
                    S::inf()
                };
                if cc > 0 {
                    let left = &d[idx - 1];
                    if *left < best {
                        best = left.clone();
                    }
                }
                if row > 0 {
                    let up = &d[idx - w];
                    if *up < best {
                        best = up.clone();
                    }
                    if cc > 0 {
                        let diag = &d[idx - w - 1];
                        if !diag.is_inf() {
                            let c = costs.get(s[row - 1], t[nt - cc]);
                            if !c.is_inf() {
                                let via = diag.add(c);
                                if via < best {
                                    best = via;
                                }
                            }
                        }
                    }
                }
                if best < d[idx] {
                    d[idx] = best;
                    if cc < nt && stamp[idx + 1] != epoch {
                        stamp[idx + 1] = epoch;
                        extra.push(cc as u32 + 1);
                    }
                    if row < ns {
                        if stamp[idx + w] != epoch {
                            stamp[idx + w] = epoch;
                            pending[row + 1].push(cc as u32);
                        }
                        if cc < nt && stamp[idx + w + 1] != epoch {
                            stamp[idx + w + 1] = epoch;
                            pending[row + 1].push(cc as u32 + 1);
                        }
                    }
                }
            }
            // pending[row + 1] may now be unsorted across the two push sites;
            // both streams were ascending, so a merge sort pass is cheap.
            pending[row + 1].sort_unstable();
            appended[row].clear();
        }
        for row in 0..=ns {
            out[row][nt - sigma] = d[row * w + nt].clone();
        }
    }
    out
}

/// `p[i][j]` = minimum cost of matching an increasing subsequence of
/// f-spine positions 1..=i to an increasing subsequence of g-spine positions
/// 1..=j (spine-spine pairs only; the empty choice counts).
pub fn spine_prefix_table(
    f: &Caterpillar,
    g: &Caterpillar,
    model: &CostModel,
) -> Result<Vec<Vec<Cost>>, CaterpillarError> {
    if !model.is_matching_formulation() {
        return Err(CaterpillarError::MatchingFormulationRequired);
    }
    let costs = LabelCosts::<Cost>::from_model(model);
    Ok(spine_prefix_engine(
        &f.spine_labels,
        &g.spine_labels,
        &costs,
    ))
}

pub(crate) fn spine_prefix_engine<S: Scalar>(
    fs: &[Label],
    gs: &[Label],
    costs: &LabelCosts<S>,
) -> Vec<Vec<S>> {
    let (nf, ng) = (fs.len(), gs.len());
    let mut p = vec![vec![S::zero(); ng + 1]; nf + 1];
    for i in 1..=nf {
        for j in 1..=ng {
            let mut best = p[i - 1][j].clone();
            if p[i][j - 1] < best {
                best = p[i][j - 1].clone();
            }
            let c = costs.get(fs[i - 1], gs[j - 1]);
            if !c.is_inf() {
                let via = p[i - 1][j - 1].add(c);
                if via < best {
                    best = via;
                }
            }
            p[i][j] = best;
        }
    }
    p
}

/// Optimal matching value of two caterpillars, label-pair costs only.
pub fn caterpillar_ted(
    f: &Caterpillar,
    g: &Caterpillar,
    model: &CostModel,
) -> Result<Cost, CaterpillarError> {
    if !model.is_matching_formulation() {
        return Err(CaterpillarError::MatchingFormulationRequired);
    }
    if f.is_empty() || g.is_empty() {
        return Ok(Cost::zero());
    }
    let headroom = (f.len() + g.len()) as u64 * 2;
    if let Some(costs) = LabelCosts::<Sat>::try_from_model(model, headroom) {
        Ok(solve(f, g, &costs).to_cost())
    } else {
        let costs = LabelCosts::<Cost>::from_model(model);
        Ok(solve(f, g, &costs).to_cost())
    }
}

/// Positions are 1-based spine depths throughout; an anchor of `len + 1`
/// means "no cross spine node on this side" and admits every leaf.
fn solve<S: Scalar>(f: &Caterpillar, g: &Caterpillar, costs: &LabelCosts<S>) -> S {
    let nf = f.len();
    let ng = g.len();
    let p = spine_prefix_engine(&f.spine_labels, &g.spine_labels, costs);

    // Lowest (deepest) spine occurrence of each label.
    let mut low_f: BTreeMap<Label, usize> = BTreeMap::new();
    for (i, &l) in f.spine_labels.iter().enumerate() {
        low_f.insert(l, i + 1);
    }
    let mut low_g: BTreeMap<Label, usize> = BTreeMap::new();
    for (j, &l) in g.spine_labels.iter().enumerate() {
        low_g.insert(l, j + 1);
    }

    // Reverse tables for leaf chains strictly between the cross positions and
    // the anchors: s runs over f-leaves at depths anchor-1 down to 1, t over
    // g-leaves likewise. r[su][tv] covers f-depths > anchorF-su and g-depths
    // > anchorG-tv.
    let mut anchors: Vec<(usize, usize)> = vec![(nf + 1, ng + 1)];
    for &cap_i in low_f.values() {
        anchors.push((cap_i, ng + 1));
        for &cap_j in low_g.values() {
            anchors.push((cap_i, cap_j));
        }
    }
    for &cap_j in low_g.values() {
        anchors.push((nf + 1, cap_j));
    }
    let mut tables: HashMap<(usize, usize), Vec<Vec<S>>> = HashMap::new();
    for (af, ag) in anchors {
        tables.entry((af, ag)).or_insert_with(|| {
            let s: Vec<Label> = (1..af).rev().map(|d| f.leaf_labels[d - 1]).collect();
            let t: Vec<Label> = (1..ag).rev().map(|d| g.leaf_labels[d - 1]).collect();
            reverse_table_engine(&s, &t, costs)
        });
    }

    let mut best = S::zero();
    let consider = |v: S, best: &mut S| {
        if v < *best {
            *best = v;
        }
    };

    // No cross pairs: anchor at the first matched leaf on each side.
    let full = &tables[&(nf + 1, ng + 1)];
    for alpha in 1..=nf + 1 {
        for beta in 1..=ng + 1 {
            let chain = &full[nf + 1 - alpha][ng + 1 - beta];
            if chain.is_inf() {
                continue;
            }
            let v = p[alpha.min(nf)][beta.min(ng)].add(chain);
            consider(v, &mut best);
        }
    }

    // Cross in one direction: spine f_I matched to leaf g'_{j*}.
    for (&x, &cap_i) in &low_f {
        let tab = &tables[&(cap_i, ng + 1)];
        for jstar in 1..=ng {
            let cg = costs.get(x, g.leaf_labels[jstar - 1]);
            if cg.is_inf() {
                continue;
            }
            for alpha in 1..=cap_i {
                let chain = &tab[cap_i - alpha][ng - jstar];
                if chain.is_inf() {
                    continue;
                }
                let v = p[alpha.min(cap_i - 1)][jstar].add(cg).add(chain);
                consider(v, &mut best);
            }
        }
    }

    // Cross in the other direction: spine g_J matched to leaf f'_{i*}.
    for (&y, &cap_j) in &low_g {
        let tab = &tables[&(nf + 1, cap_j)];
        for istar in 1..=nf {
            let cf = costs.get(f.leaf_labels[istar - 1], y);
            if cf.is_inf() {
                continue;
            }
            for beta in 1..=cap_j {
                let chain = &tab[nf - istar][cap_j - beta];
                if chain.is_inf() {
                    continue;
                }
                let v = p[istar][beta.min(cap_j - 1)].add(cf).add(chain);
                consider(v, &mut best);
            }
        }
    }

    // Both cross pairs present.
    for (&x, &cap_i) in &low_f {
        for (&y, &cap_j) in &low_g {
            let tab = &tables[&(cap_i, cap_j)];
            for istar in 1..cap_i {
                let cf = costs.get(f.leaf_labels[istar - 1], y);
                if cf.is_inf() {
                    continue;
                }
                for jstar in 1..cap_j {
                    let cg = costs.get(x, g.leaf_labels[jstar - 1]);
                    if cg.is_inf() {
                        continue;
                    }
                    let chain = &tab[cap_i - 1 - istar][cap_j - 1 - jstar];
                    if chain.is_inf() {
                        continue;
                    }
                    let v = p[istar][jstar].add(cf).add(cg).add(chain);
                    consider(v, &mut best);
                }
            }
        }
    }

    best
}
