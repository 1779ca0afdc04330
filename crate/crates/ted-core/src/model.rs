//! Cost models in the standard and matching formulations.

use crate::cost::Cost;
use crate::tree::{Label, LabeledTree};
use std::collections::BTreeMap;

/// Matching costs per ordered label pair, with optional per-label deletion
/// costs.
///
/// A model without deletion costs is in the *matching formulation*: unmatched
/// nodes are free and absent pairs are forbidden (+inf). A model with a total
/// deletion cost map is a *standard* model; [`CostModel::to_matching_formulation`]
/// converts it by subtracting both deletion costs from every finite match
/// cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostModel {
    alphabet_size: u32,
    match_cost: BTreeMap<(Label, Label), Cost>,
    delete_cost: Option<BTreeMap<Label, Cost>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("label {0} out of alphabet range {1}")]
    LabelOutOfRange(u32, u32),
    #[error("model is not in the expected formulation")]
    WrongFormulation,
    #[error("missing delete cost for label {0}")]
    MissingDeleteCost(u32),
    #[error("delete cost for label {0} must be finite")]
    InfiniteDeleteCost(u32),
}

impl CostModel {
    /// Matching-formulation model with all pairs forbidden.
    pub fn new_matching(alphabet_size: u32) -> Self {
        CostModel {
            alphabet_size,
            match_cost: BTreeMap::new(),
            delete_cost: None,
        }
    }

    /// Standard model with an (initially empty) deletion table.
    pub fn new_standard(alphabet_size: u32) -> Self {
        CostModel {
            alphabet_size,
            match_cost: BTreeMap::new(),
            delete_cost: Some(BTreeMap::new()),
        }
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn is_matching_formulation(&self) -> bool {
        self.delete_cost.is_none()
    }

    fn check_label(&self, l: Label) -> Result<(), ModelError> {
        if l.0 < self.alphabet_size {
            Ok(())
        } else {
            Err(ModelError::LabelOutOfRange(l.0, self.alphabet_size))
        }
    }

    /// Sets a match cost. Infinite entries are normalized to "absent".
    pub fn set_match(&mut self, a: Label, b: Label, c: Cost) -> Result<(), ModelError> {
        self.check_label(a)?;
        self.check_label(b)?;
        match c {
            Cost::Infinity => {
                self.match_cost.remove(&(a, b));
            }
            finite => {
                self.match_cost.insert((a, b), finite);
            }
        }
        Ok(())
    }

    pub fn set_delete(&mut self, a: Label, c: Cost) -> Result<(), ModelError> {
        self.check_label(a)?;
        if c.is_infinite() {
            return Err(ModelError::InfiniteDeleteCost(a.0));
        }
        self.delete_cost
            .get_or_insert_with(BTreeMap::new)
            .insert(a, c);
        Ok(())
    }

    pub fn match_cost(&self, a: Label, b: Label) -> Cost {
        self.match_cost
            .get(&(a, b))
            .cloned()
            .unwrap_or(Cost::Infinity)
    }

    pub fn delete_cost(&self, a: Label) -> Result<Cost, ModelError> {
        let table = self
            .delete_cost
            .as_ref()
            .ok_or(ModelError::WrongFormulation)?;
        table
            .get(&a)
            .cloned()
            .ok_or(ModelError::MissingDeleteCost(a.0))
    }

    pub fn has_delete_costs(&self) -> bool {
        self.delete_cost.is_some()
    }

    pub fn iter_finite(&self) -> impl Iterator<Item = (&(Label, Label), &Cost)> {
        self.match_cost.iter()
    }

    pub fn iter_delete(&self) -> impl Iterator<Item = (&Label, &Cost)> {
        self.delete_cost.iter().flat_map(|m| m.iter())
    }

    pub fn finite_pair_count(&self) -> usize {
        self.match_cost.len()
    }

    /// Model with the key order of every match pair swapped. Used by symmetry
    /// checks: swapping (F, G) and transposing leaves the optimum unchanged.
    pub fn transpose(&self) -> CostModel {
        let mut m = self.clone();
        m.match_cost = self
            .match_cost
            .iter()
            .map(|(&(a, b), c)| ((b, a), c.clone()))
            .collect();
        m
    }

    /// Rewrites a standard model into the matching formulation:
    /// `match'(a,b) = match(a,b) - del(a) - del(b)`; forbidden pairs stay
    /// forbidden. Fails if some alphabet label lacks a deletion cost.
    pub fn to_matching_formulation(&self) -> Result<CostModel, ModelError> {
        if self.is_matching_formulation() {
            return Err(ModelError::WrongFormulation);
        }
        let mut dels = Vec::with_capacity(self.alphabet_size as usize);
        for l in 0..self.alphabet_size {
            dels.push(self.delete_cost(Label(l))?);
        }
        let mut out = CostModel::new_matching(self.alphabet_size);
        for (&(a, b), c) in &self.match_cost {
            let adjusted = &(c + &(-dels[a.0 as usize].clone())) + &(-dels[b.0 as usize].clone());
            out.set_match(a, b, adjusted)?;
        }
        Ok(out)
    }
}

/// Total deletion cost of every node in both trees plus the optimal matching
/// value under the converted model; this is the standard edit distance.
pub fn standard_ted_value(
    f: &LabeledTree,
    g: &LabeledTree,
    std_model: &CostModel,
    matching_value: &Cost,
) -> Result<Cost, ModelError> {
    if std_model.is_matching_formulation() {
        return Err(ModelError::WrongFormulation);
    }
    let mut total = Cost::zero();
    for t in [f, g] {
        for v in t.preorder() {
            total = &total + &std_model.delete_cost(t.label(v))?;
        }
    }
    Ok(&total + matching_value)
}
