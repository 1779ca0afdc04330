//! Exact optimal-matching solvers.
//!
//! [`brute_force_matching`] enumerates every valid matching (with pruning) and
//! serves as the ground-truth oracle at desk scale. [`optimal_matching`] is
//! the keyroot/subforest dynamic program adapted to the matching formulation:
//! unmatched nodes cost 0 and matched pairs pay the model cost.

mod brute;
mod red;
mod zs;

pub use brute::{brute_force_matching, brute_force_matching_with_limit, BRUTE_NODE_LIMIT};
pub use red::{decompose_red_structure, RedStructure, RedStructureError};

use crate::cost::Cost;
use crate::matching::{matching_value, validate_matching, Matching, MatchingResult};
use crate::model::{standard_ted_value, CostModel, ModelError};
use crate::scalar::{Sat, Scalar};
use crate::tree::LabeledTree;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("brute force guard exceeded: {0} nodes (limit {1}); override the limit explicitly")]
    BruteLimit(usize, usize),
    #[error("operation requires a matching-formulation model")]
    MatchingFormulationRequired,
    #[error("operation requires a standard-formulation model")]
    StandardFormulationRequired,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Per-node-pair costs in postorder indexing, the layout both DP engines use.
pub(crate) struct PairCosts<S> {
    pub nf: usize,
    pub ng: usize,
    cells: Vec<S>,
}

impl<S: Scalar> PairCosts<S> {
    /// `get(i, j)` with 1-based postorder positions.
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.cells[(i - 1) * self.ng + (j - 1)]
    }

    fn build(
        f: &LabeledTree,
        g: &LabeledTree,
        model: &CostModel,
        convert: impl Fn(&Cost) -> S,
    ) -> Self {
        let nf = f.size();
        let ng = g.size();
        let f_pos = f.postorder_index();
        let g_pos = g.postorder_index();
        let mut f_by_label: std::collections::HashMap<u32, Vec<usize>> = Default::default();
        for v in f.preorder() {
            f_by_label.entry(f.label(v).0).or_default().push(f_pos[v.0]);
        }
        let mut g_by_label: std::collections::HashMap<u32, Vec<usize>> = Default::default();
        for v in g.preorder() {
            g_by_label.entry(g.label(v).0).or_default().push(g_pos[v.0]);
        }
        let mut cells = vec![S::inf(); nf * ng];
        for ((a, b), c) in model.iter_finite() {
            let (Some(fs), Some(gs)) = (f_by_label.get(&a.0), g_by_label.get(&b.0)) else {
                continue;
            };
            let s = convert(c);
            for &fi in fs {
                for &gj in gs {
                    cells[fi * ng + gj] = s.clone();
                }
            }
        }
        PairCosts { nf, ng, cells }
    }
}

/// True when every finite cost, scaled by the largest possible matching size,
/// stays well inside i128.
fn fits_fast_path(model: &CostModel, pair_bound: usize) -> bool {
    let limit = BigInt::from(i128::MAX / 4) / BigInt::from(pair_bound.max(1));
    model
        .iter_finite()
        .all(|(_, c)| c.expect_finite().abs() <= limit)
}

/// Globally optimal matching value with a witness, via the subforest DP.
pub fn optimal_matching(
    f: &LabeledTree,
    g: &LabeledTree,
    model: &CostModel,
) -> Result<MatchingResult, SolveError> {
    if !model.is_matching_formulation() {
        return Err(SolveError::MatchingFormulationRequired);
    }
    if f.is_empty() || g.is_empty() {
        return Ok(MatchingResult {
            value: Cost::zero(),
            matching: Matching::empty(),
        });
    }
    let matching = if fits_fast_path(model, f.size().min(g.size())) {
        let costs = PairCosts::<Sat>::build(f, g, model, |c| {
            Sat(c.expect_finite().to_i128().expect("checked by fits_fast_path"))
        });
        zs::solve(f, g, &costs)
    } else {
        let costs = PairCosts::<Cost>::build(f, g, model, Cost::clone);
        zs::solve(f, g, &costs)
    };
    // The reported value is recomputed exactly from the witness.
    let value = matching_value(f, g, model, &matching);
    debug_assert!(validate_matching(f, g, &matching).unwrap_or(false));
    Ok(MatchingResult { value, matching })
}

/// Standard tree edit distance: convert to the matching formulation, solve,
/// and add back the total deletion cost.
pub fn standard_ted(
    f: &LabeledTree,
    g: &LabeledTree,
    std_model: &CostModel,
) -> Result<Cost, SolveError> {
    if std_model.is_matching_formulation() {
        return Err(SolveError::StandardFormulationRequired);
    }
    let converted = std_model.to_matching_formulation()?;
    let opt = optimal_matching(f, g, &converted)?;
    Ok(standard_ted_value(f, g, std_model, &opt.value)?)
}
