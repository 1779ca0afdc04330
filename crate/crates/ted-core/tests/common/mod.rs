//! Shared test oracles, deliberately independent of the library's solver
//! code paths: relations are recomputed from parent walks, optima by plain
//! enumeration without pruning.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use ted_core::caterpillar::{Caterpillar, LeafSide};
use ted_core::cost::Cost;
use ted_core::matching::Matching;
use ted_core::model::CostModel;
use ted_core::tree::{Label, LabeledTree, NodeId};

/// Pairwise node relation, recomputed from parent pointers and preorder.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rel {
    Anc,
    Desc,
    Before,
    After,
}

pub struct RelOracle {
    parents: Vec<Option<NodeId>>,
    pre: Vec<usize>,
}

impl RelOracle {
    pub fn new(t: &LabeledTree) -> Self {
        let mut pre = vec![0usize; t.size()];
        for (i, v) in t.preorder().into_iter().enumerate() {
            pre[v.0] = i;
        }
        RelOracle {
            parents: t.parents(),
            pre,
        }
    }

    fn is_ancestor(&self, u: NodeId, v: NodeId) -> bool {
        let mut cur = self.parents[v.0];
        while let Some(p) = cur {
            if p == u {
                return true;
            }
            cur = self.parents[p.0];
        }
        false
    }

    pub fn rel(&self, u: NodeId, v: NodeId) -> Rel {
        assert_ne!(u, v);
        if self.is_ancestor(u, v) {
            Rel::Anc
        } else if self.is_ancestor(v, u) {
            Rel::Desc
        } else if self.pre[u.0] < self.pre[v.0] {
            Rel::Before
        } else {
            Rel::After
        }
    }
}

/// Minimum matching value by unpruned enumeration of all valid matchings.
pub fn enumerate_optimal(f: &LabeledTree, g: &LabeledTree, model: &CostModel) -> Cost {
    let f_nodes = f.preorder();
    let g_nodes = g.preorder();
    let rf = RelOracle::new(f);
    let rg = RelOracle::new(g);
    let mut best = Cost::zero();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; g_nodes.len()];

    fn rec(
        i: usize,
        f: &LabeledTree,
        g: &LabeledTree,
        f_nodes: &[NodeId],
        g_nodes: &[NodeId],
        rf: &RelOracle,
        rg: &RelOracle,
        model: &CostModel,
        chosen: &mut Vec<(usize, usize)>,
        used: &mut [bool],
        cur: Cost,
        best: &mut Cost,
    ) {
        if i == f_nodes.len() {
            if cur < *best {
                *best = cur;
            }
            return;
        }
        for j in 0..g_nodes.len() {
            if used[j] {
                continue;
            }
            let c = model.match_cost(f.label(f_nodes[i]), g.label(g_nodes[j]));
            if c.is_infinite() {
                continue;
            }
            let ok = chosen.iter().all(|&(pi, pj)| {
                rf.rel(f_nodes[i], f_nodes[pi]) as u8 == rg.rel(g_nodes[j], g_nodes[pj]) as u8
            });
            if !ok {
                continue;
            }
            used[j] = true;
            chosen.push((i, j));
            rec(
                i + 1,
                f,
                g,
                f_nodes,
                g_nodes,
                rf,
                rg,
                model,
                chosen,
                used,
                &cur + &c,
                best,
            );
            chosen.pop();
            used[j] = false;
        }
        rec(
            i + 1,
            f,
            g,
            f_nodes,
            g_nodes,
            rf,
            rg,
            model,
            chosen,
            used,
            cur,
            best,
        );
    }
    rec(
        0, f, g, &f_nodes, &g_nodes, &rf, &rg, model, &mut chosen, &mut used,
        Cost::zero(), &mut best,
    );
    best
}

/// Standard tree edit distance by enumerating kept-node subsets and checking
/// order isomorphism of the induced forests.
pub fn subset_standard_ted(f: &LabeledTree, g: &LabeledTree, std_model: &CostModel) -> Cost {
    // Induced forest shape of the kept nodes, as a preorder-nested structure.
    fn induced(t: &LabeledTree, keep: u32) -> (Vec<usize>, Vec<NodeId>) {
        // Returns (shape, kept nodes in preorder). shape[i] = number of kept
        // children of the i-th kept node in preorder, with virtual super-root
        // at index 0.
        let order = t.preorder();
        let parents = t.parents();
        let kept: Vec<NodeId> = order
            .iter()
            .copied()
            .filter(|v| keep & (1 << v.0) != 0)
            .collect();
        let mut child_counts = vec![0usize; kept.len() + 1];
        for (idx, &v) in kept.iter().enumerate() {
            // Nearest kept ancestor.
            let mut cur = parents[v.0];
            let mut anc_idx = 0usize;
            while let Some(p) = cur {
                if keep & (1 << p.0) != 0 {
                    anc_idx = 1 + kept.iter().position(|&x| x == p).unwrap();
                    break;
                }
                cur = parents[p.0];
            }
            let _ = idx;
            child_counts[anc_idx] += 1;
        }
        // Shape as (nearest-kept-ancestor index) list; two kept sets induce
        // order-isomorphic forests iff these lists agree.
        let mut shape = Vec::with_capacity(kept.len());
        for &v in &kept {
            let mut cur = parents[v.0];
            let mut anc_idx = 0usize;
            while let Some(p) = cur {
                if keep & (1 << p.0) != 0 {
                    anc_idx = 1 + kept.iter().position(|&x| x == p).unwrap();
                    break;
                }
                cur = parents[p.0];
            }
            shape.push(anc_idx);
        }
        (shape, kept)
    }

    assert!(f.size() <= 16 && g.size() <= 16);
    let mut best = Cost::Infinity;
    let del_total = |t: &LabeledTree, keep: u32| -> Cost {
        let mut s = Cost::zero();
        for v in t.preorder() {
            if keep & (1 << v.0) == 0 {
                s = &s + &std_model.delete_cost(t.label(v)).unwrap();
            }
        }
        s
    };
    for keep_f in 0u32..(1 << f.size()) {
        let (shape_f, kept_f) = induced(f, keep_f);
        for keep_g in 0u32..(1 << g.size()) {
            if (keep_f.count_ones()) != (keep_g.count_ones()) {
                continue;
            }
            let (shape_g, kept_g) = induced(g, keep_g);
            if shape_f != shape_g {
                continue;
            }
            let mut cost = &del_total(f, keep_f) + &del_total(g, keep_g);
            for (u, v) in kept_f.iter().zip(kept_g.iter()) {
                cost = &cost + &std_model.match_cost(f.label(*u), g.label(*v));
                if cost.is_infinite() {
                    break;
                }
            }
            if cost < best {
                best = cost;
            }
        }
    }
    best
}

/// Reverse-matching optimum by chain enumeration: pick the outermost pair,
/// recurse into the strictly inner rectangle.
pub fn enumerate_reverse_matching(
    s: &[Label],
    t: &[Label],
    model: &CostModel,
    i: usize,
    j: usize,
) -> Cost {
    fn rec(
        s: &[Label],
        t: &[Label],
        model: &CostModel,
        s_min: usize,
        s_max: usize,
        t_max: usize,
    ) -> Cost {
        let mut best = Cost::zero();
        for a in s_min..=s_max {
            for b in 1..=t_max {
                let c = model.match_cost(s[a - 1], t[b - 1]);
                if c.is_infinite() {
                    continue;
                }
                let inner = if a + 1 <= s_max && b >= 2 {
                    rec(s, t, model, a + 1, s_max, b - 1)
                } else {
                    Cost::zero()
                };
                let total = &c + &inner;
                if total < best {
                    best = total;
                }
            }
        }
        best
    }
    if i == 0 || j == 0 {
        return Cost::zero();
    }
    rec(s, t, model, 1, i, j)
}

/// Spine-prefix optimum by chain enumeration (both coordinates increasing).
pub fn enumerate_spine_prefix(
    fs: &[Label],
    gs: &[Label],
    model: &CostModel,
    i: usize,
    j: usize,
) -> Cost {
    fn rec(
        fs: &[Label],
        gs: &[Label],
        model: &CostModel,
        a_min: usize,
        b_min: usize,
        i: usize,
        j: usize,
    ) -> Cost {
        let mut best = Cost::zero();
        for a in a_min..=i {
            for b in b_min..=j {
                let c = model.match_cost(fs[a - 1], gs[b - 1]);
                if c.is_infinite() {
                    continue;
                }
                let inner = rec(fs, gs, model, a + 1, b + 1, i, j);
                let total = &c + &inner;
                if total < best {
                    best = total;
                }
            }
        }
        best
    }
    rec(fs, gs, model, 1, 1, i, j)
}

/// Random ordered tree with `n` nodes.
pub fn random_tree(rng: &mut impl Rng, n: usize, alphabet: u32) -> LabeledTree {
    let mut t = LabeledTree::empty();
    if n == 0 {
        return t;
    }
    // Children lists per node, built over node indices 0..n with 0 the root.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        children[parent].push(v);
    }
    let labels: Vec<Label> = (0..n)
        .map(|_| Label(rng.gen_range(0..alphabet)))
        .collect();
    // Add in postorder so child ids exist before parents.
    fn add(
        v: usize,
        children: &Vec<Vec<usize>>,
        labels: &[Label],
        t: &mut LabeledTree,
    ) -> NodeId {
        let kids: Vec<NodeId> = children[v]
            .iter()
            .map(|&c| add(c, children, labels, t))
            .collect();
        t.add_node(labels[v], kids)
    }
    let root = add(0, &children, &labels, &mut t);
    t.set_root(root);
    t
}

/// Random matching-formulation model: each label pair is finite with the
/// given probability, costs uniform in [-9, 9].
pub fn random_matching_model(rng: &mut impl Rng, alphabet: u32, finite_prob: f64) -> CostModel {
    let mut model = CostModel::new_matching(alphabet);
    for a in 0..alphabet {
        for b in 0..alphabet {
            if rng.gen_bool(finite_prob) {
                let c = rng.gen_range(-9i64..=9);
                model.set_match(Label(a), Label(b), Cost::from(c)).unwrap();
            }
        }
    }
    model
}

/// Random standard model with total deletion costs.
pub fn random_standard_model(rng: &mut impl Rng, alphabet: u32) -> CostModel {
    let mut model = CostModel::new_standard(alphabet);
    for a in 0..alphabet {
        model
            .set_delete(Label(a), Cost::from(rng.gen_range(0i64..=5)))
            .unwrap();
        for b in 0..alphabet {
            if rng.gen_bool(0.6) {
                let c = rng.gen_range(0i64..=9);
                model.set_match(Label(a), Label(b), Cost::from(c)).unwrap();
            }
        }
    }
    model
}

pub fn random_caterpillar(rng: &mut impl Rng, n: usize, alphabet: u32, side: LeafSide) -> Caterpillar {
    let spine = (0..n).map(|_| Label(rng.gen_range(0..alphabet))).collect();
    let leaves = (0..n).map(|_| Label(rng.gen_range(0..alphabet))).collect();
    Caterpillar::new(spine, leaves, side)
}

/// Sum of matched pair costs, recomputed from the model.
pub fn value_of(f: &LabeledTree, g: &LabeledTree, model: &CostModel, m: &Matching) -> Cost {
    let mut s = Cost::zero();
    for &(u, v) in &m.pairs {
        s = &s + &model.match_cost(f.label(u), g.label(v));
    }
    s
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}
