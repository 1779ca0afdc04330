//! Keyroot/subforest dynamic program in the matching formulation.
//!
//! Classic left-to-right postorder layout: for every pair of keyroots the
//! forest table is filled once, and whole-subtree optima land in `td`. With
//! zero-cost skips the recurrence computes the minimum total cost over all
//! order- and ancestry-preserving pair sets.

use crate::matching::Matching;
use crate::scalar::Scalar;
use crate::solver::PairCosts;
use crate::tree::LabeledTree;

/// 1-based postorder view of a tree.
struct Indexed {
    post: Vec<crate::tree::NodeId>,
    /// lml[i]: postorder index of the leftmost leaf of the subtree rooted at i.
    lml: Vec<usize>,
    keyroots: Vec<usize>,
}

impl Indexed {
    fn new(tree: &LabeledTree) -> Self {
        let post = tree.postorder();
        let n = post.len();
        let pos = tree.postorder_index();
        let mut lml = vec![0usize; n + 1];
        for (i0, &v) in post.iter().enumerate() {
            let i = i0 + 1;
            let kids = tree.children(v);
            lml[i] = if kids.is_empty() {
                i
            } else {
                lml[pos[kids[0].0] + 1]
            };
        }
        // A node is a keyroot iff no node with a higher postorder index shares
        // its leftmost leaf.
        let mut last_for_lml = std::collections::HashMap::new();
        for i in 1..=n {
            last_for_lml.insert(lml[i], i);
        }
        let mut keyroots: Vec<usize> = (1..=n).filter(|&i| last_for_lml[&lml[i]] == i).collect();
        keyroots.sort_unstable();
        Indexed { post, lml, keyroots }
    }
}

pub(super) fn solve<S: Scalar>(
    f: &LabeledTree,
    g: &LabeledTree,
    costs: &PairCosts<S>,
) -> Matching {
    let fi = Indexed::new(f);
    let gi = Indexed::new(g);
    let (nf, ng) = (costs.nf, costs.ng);

    let mut td = vec![S::zero(); (nf + 1) * (ng + 1)];
    let mut fd = vec![S::zero(); (nf + 1) * (ng + 1)];

    let work: usize = fi
        .keyroots
        .iter()
        .map(|&i| i + 1 - fi.lml[i])
        .sum::<usize>()
        .saturating_mul(gi.keyroots.iter().map(|&j| j + 1 - gi.lml[j]).sum());
    if work > 200_000_000 {
        eprintln!("ted-core: large instance, about {work} DP cells");
    }

    for &kf in &fi.keyroots {
        for &kg in &gi.keyroots {
            forest_dist(&fi, &gi, costs, kf, kg, &mut fd, &mut td, ng);
        }
    }

    // Witness reconstruction: re-run the forest table for each subtree pair on
    // the path of optimal decisions and walk it back.
    let mut pairs = Vec::new();
    let mut stack = vec![(nf, ng)];
    while let Some((i1, j1)) = stack.pop() {
        forest_dist(&fi, &gi, costs, i1, j1, &mut fd, &mut td, ng);
        let (li, lj) = (fi.lml[i1], gi.lml[j1]);
        let (mut i, mut j) = (i1, j1);
        while i >= li && j >= lj {
            if fd[i * (ng + 1) + j] == fd[(i - 1) * (ng + 1) + j] {
                i -= 1;
            } else if fd[i * (ng + 1) + j] == fd[i * (ng + 1) + (j - 1)] {
                j -= 1;
            } else if fi.lml[i] == li && gi.lml[j] == lj {
                pairs.push((fi.post[i - 1], gi.post[j - 1]));
                i -= 1;
                j -= 1;
            } else {
                stack.push((i, j));
                i = fi.lml[i] - 1;
                j = gi.lml[j] - 1;
            }
        }
    }
    Matching { pairs }
}

#[allow(clippy::too_many_arguments)]
fn forest_dist<S: Scalar>(
    fi: &Indexed,
    gi: &Indexed,
    costs: &PairCosts<S>,
    kf: usize,
    kg: usize,
    fd: &mut [S],
    td: &mut [S],
    ng: usize,
) {
    let w = ng + 1;
    let (li, lj) = (fi.lml[kf], gi.lml[kg]);
    // Skips are free, so the boundary rows are zero.
    for i in li - 1..=kf {
        fd[i * w + (lj - 1)] = S::zero();
    }
    for j in lj - 1..=kg {
        fd[(li - 1) * w + j] = S::zero();
    }
    for i in li..=kf {
        for j in lj..=kg {
            let skip_f = fd[(i - 1) * w + j].clone();
            let skip_g = fd[i * w + (j - 1)].clone();
            let mut best = if skip_f < skip_g { skip_f } else { skip_g };
            if fi.lml[i] == li && gi.lml[j] == lj {
                let c = costs.get(i, j);
                if !c.is_inf() {
                    let via = fd[(i - 1) * w + (j - 1)].add(c);
                    if via < best {
                        best = via;
                    }
                }
                fd[i * w + j] = best.clone();
                td[i * w + j] = best;
            } else {
                let sub = &td[i * w + j];
                if !sub.is_inf() {
                    let via = fd[(fi.lml[i] - 1) * w + (gi.lml[j] - 1)].add(sub);
                    if via < best {
                        best = via;
                    }
                }
                fd[i * w + j] = best;
            }
        }
    }
}
