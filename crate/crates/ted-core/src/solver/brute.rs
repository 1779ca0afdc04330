//! Exhaustive matching search with pruning; the ground-truth oracle.

use crate::cost::Cost;
use crate::matching::{Matching, MatchingResult, RelIndex};
use crate::model::CostModel;
use crate::solver::SolveError;
use crate::tree::LabeledTree;

/// Default per-tree node guard; beyond it the search space is impractical.
pub const BRUTE_NODE_LIMIT: usize = 12;

pub fn brute_force_matching(
    f: &LabeledTree,
    g: &LabeledTree,
    model: &CostModel,
) -> Result<MatchingResult, SolveError> {
    brute_force_matching_with_limit(f, g, model, BRUTE_NODE_LIMIT)
}

/// Exhaustive search over valid matchings. Branches are cut when the partial
/// cost plus a per-node lower bound cannot beat the incumbent.
pub fn brute_force_matching_with_limit(
    f: &LabeledTree,
    g: &LabeledTree,
    model: &CostModel,
    limit: usize,
) -> Result<MatchingResult, SolveError> {
    if !model.is_matching_formulation() {
        return Err(SolveError::MatchingFormulationRequired);
    }
    let worst = f.size().max(g.size());
    if worst > limit {
        return Err(SolveError::BruteLimit(worst, limit));
    }
    if f.is_empty() || g.is_empty() {
        return Ok(MatchingResult {
            value: Cost::zero(),
            matching: Matching::empty(),
        });
    }

    let f_nodes = f.preorder();
    let g_nodes = g.preorder();
    let rf = RelIndex::new(f);
    let rg = RelIndex::new(g);
    let nf = f_nodes.len();
    let ng = g_nodes.len();

    // cost[i][j] for f_nodes[i] matched to g_nodes[j].
    let cost: Vec<Vec<Cost>> = f_nodes
        .iter()
        .map(|&u| {
            g_nodes
                .iter()
                .map(|&v| model.match_cost(f.label(u), g.label(v)))
                .collect()
        })
        .collect();

    // Candidate partners per F node, most negative first so good incumbents
    // appear early.
    let candidates: Vec<Vec<usize>> = (0..nf)
        .map(|i| {
            let mut c: Vec<usize> = (0..ng).filter(|&j| cost[i][j].is_finite()).collect();
            c.sort_by(|&a, &b| cost[i][a].cmp(&cost[i][b]));
            c
        })
        .collect();

    // lb[i]: lower bound on the contribution of f_nodes[i..].
    let mut lb = vec![Cost::zero(); nf + 1];
    for i in (0..nf).rev() {
        let best_here = candidates[i]
            .first()
            .map(|&j| cost[i][j].clone())
            .unwrap_or_else(Cost::zero);
        let gain = if best_here < Cost::zero() {
            best_here
        } else {
            Cost::zero()
        };
        lb[i] = &lb[i + 1] + &gain;
    }

    struct Search<'a> {
        f_nodes: &'a [crate::tree::NodeId],
        g_nodes: &'a [crate::tree::NodeId],
        rf: &'a RelIndex,
        rg: &'a RelIndex,
        cost: &'a [Vec<Cost>],
        candidates: &'a [Vec<usize>],
        lb: &'a [Cost],
        chosen: Vec<(usize, usize)>,
        used_g: Vec<bool>,
        best: MatchingResult,
    }

    impl Search<'_> {
        fn consistent(&self, i: usize, j: usize) -> bool {
            let (u, v) = (self.f_nodes[i], self.g_nodes[j]);
            self.chosen.iter().all(|&(pi, pj)| {
                self.rf.same_relation(
                    u,
                    self.f_nodes[pi],
                    self.rg,
                    v,
                    self.g_nodes[pj],
                )
            })
        }

        fn run(&mut self, i: usize, cur: Cost) {
            if &cur + &self.lb[i] >= self.best.value {
                return;
            }
            if i == self.f_nodes.len() {
                // cur < best is guaranteed by the bound check above.
                self.best = MatchingResult {
                    value: cur,
                    matching: Matching {
                        pairs: self
                            .chosen
                            .iter()
                            .map(|&(a, b)| (self.f_nodes[a], self.g_nodes[b]))
                            .collect(),
                    },
                };
                return;
            }
            for idx in 0..self.candidates[i].len() {
                let j = self.candidates[i][idx];
                if self.used_g[j] || !self.consistent(i, j) {
                    continue;
                }
                self.used_g[j] = true;
                self.chosen.push((i, j));
                let next = &cur + &self.cost[i][j];
                self.run(i + 1, next);
                self.chosen.pop();
                self.used_g[j] = false;
            }
            self.run(i + 1, cur);
        }
    }

    let mut search = Search {
        f_nodes: &f_nodes,
        g_nodes: &g_nodes,
        rf: &rf,
        rg: &rg,
        cost: &cost,
        candidates: &candidates,
        lb: &lb,
        chosen: Vec::new(),
        used_g: vec![false; ng],
        best: MatchingResult {
            value: Cost::zero(),
            matching: Matching::empty(),
        },
    };
    // The empty matching (value 0) is always feasible and is the incumbent.
    search.run(0, Cost::zero());
    Ok(search.best)
}
