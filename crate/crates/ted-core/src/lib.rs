//! Exact tree edit distance toolkit.
//!
//! The crate provides ordered labeled trees with arbitrary-precision matching
//! costs, exact optimal-matching solvers (an exponential oracle and a
//! keyroot/subforest dynamic program), a subquadratic-in-practice algorithm for
//! caterpillar instances, and two instance generators that compile weighted
//! graphs into tree pairs whose optimal matching value encodes the minimum
//! triangle weight or the maximum weight of a k-clique.
//!
//! Everything works in the *matching formulation*: one selects pairs of nodes
//! whose ancestor/descendant and left-right relations agree in both trees,
//! unmatched nodes are free, and the objective is the sum of the matched pair
//! costs. Standard tree edit distance is obtained through the documented
//! conversion in [`model`].

pub mod apsp;
pub mod caterpillar;
pub mod clique;
pub mod cost;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod model;
pub mod scalar;
pub mod solver;
pub mod tree;

pub use cost::Cost;
pub use graph::WeightedGraph;
pub use matching::{Matching, MatchingResult};
pub use model::CostModel;
pub use tree::{Label, LabeledTree, NodeId};
