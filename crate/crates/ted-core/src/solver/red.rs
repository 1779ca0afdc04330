//! Decomposition of a matching on hard-instance caterpillars into its three
//! structural parts: a spine-prefix, a reversed leaf block, and up to one
//! spine-to-leaf cross pair per direction.

use crate::caterpillar::{Caterpillar, CaterpillarError, LeafSide};
use crate::matching::Matching;
use crate::tree::LabeledTree;

/// The decomposition. All positions are 1-based spine depths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedStructure {
    /// Number of spine-prefix pairs.
    pub p: usize,
    /// Number of reversed leaf pairs.
    pub q: usize,
    /// Spine f-depths matched to spine g-depths, jointly increasing.
    pub spine_prefix_pairs: Vec<(usize, usize)>,
    /// Leaf f-depths (ascending) matched to leaf g-depths (descending).
    pub reversed_leaf_pairs: Vec<(usize, usize)>,
    /// Spine node in F matched to a leaf in G: (f-spine depth, g-leaf depth).
    pub optional_spine_leaf_f: Option<(usize, usize)>,
    /// Leaf in F matched to a spine node in G: (f-leaf depth, g-spine depth).
    pub optional_spine_leaf_g: Option<(usize, usize)>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RedStructureError {
    #[error("input is not a hard-instance caterpillar: {0}")]
    NonCaterpillar(#[from] CaterpillarError),
    #[error("matching does not fit the red structure: {0}")]
    Shape(String),
}

fn shape(reason: impl Into<String>) -> RedStructureError {
    RedStructureError::Shape(reason.into())
}

/// Splits a matching on caterpillar trees into the lemma parts, or fails if
/// it does not fit. Boundary positions may coincide: the leaf of the last
/// spine-prefix node can itself be matched.
pub fn decompose_red_structure(
    f: &LabeledTree,
    g: &LabeledTree,
    m: &Matching,
) -> Result<RedStructure, RedStructureError> {
    let (_, fi) = Caterpillar::from_tree(f, LeafSide::Right)?;
    let (_, gi) = Caterpillar::from_tree(g, LeafSide::Left)?;

    // Node id -> (is_spine, depth).
    let classify = |idx: &crate::caterpillar::CaterpillarIndex,
                    v: crate::tree::NodeId|
     -> Option<(bool, usize)> {
        if let Some(d) = idx.spine.iter().position(|&u| u == v) {
            return Some((true, d + 1));
        }
        idx.leaves.iter().position(|&u| u == v).map(|d| (false, d + 1))
    };

    let mut spine_pairs = Vec::new();
    let mut leaf_pairs = Vec::new();
    let mut opt_f: Option<(usize, usize)> = None;
    let mut opt_g: Option<(usize, usize)> = None;
    for &(u, v) in &m.pairs {
        let (fs, fd) = classify(&fi, u).ok_or_else(|| shape("dangling F node"))?;
        let (gs, gd) = classify(&gi, v).ok_or_else(|| shape("dangling G node"))?;
        match (fs, gs) {
            (true, true) => spine_pairs.push((fd, gd)),
            (false, false) => leaf_pairs.push((fd, gd)),
            (true, false) => {
                if opt_f.replace((fd, gd)).is_some() {
                    return Err(shape("two F-spine-to-G-leaf pairs"));
                }
            }
            (false, true) => {
                if opt_g.replace((fd, gd)).is_some() {
                    return Err(shape("two F-leaf-to-G-spine pairs"));
                }
            }
        }
    }

    spine_pairs.sort_unstable();
    for w in spine_pairs.windows(2) {
        if w[1].0 == w[0].0 || w[1].1 <= w[0].1 {
            return Err(shape("spine pairs are not jointly increasing"));
        }
    }
    leaf_pairs.sort_unstable();
    for w in leaf_pairs.windows(2) {
        if w[1].0 == w[0].0 || w[1].1 >= w[0].1 {
            return Err(shape("leaf pairs are not in reversed order"));
        }
    }

    // Ordering constraints between the parts.
    for &(c, d) in &spine_pairs {
        for &(a, b) in &leaf_pairs {
            if c > a || d > b {
                return Err(shape("spine pair below a matched leaf"));
            }
        }
        if let Some((i_end, jstar)) = opt_f {
            if c >= i_end || d > jstar {
                return Err(shape("spine pair conflicts with the F cross pair"));
            }
        }
        if let Some((istar, j_end)) = opt_g {
            if c > istar || d >= j_end {
                return Err(shape("spine pair conflicts with the G cross pair"));
            }
        }
    }
    for &(a, b) in &leaf_pairs {
        if let Some((i_end, jstar)) = opt_f {
            if a >= i_end || b <= jstar {
                return Err(shape("leaf pair conflicts with the F cross pair"));
            }
        }
        if let Some((istar, j_end)) = opt_g {
            if a <= istar || b >= j_end {
                return Err(shape("leaf pair conflicts with the G cross pair"));
            }
        }
    }
    if let (Some((i_end, jstar)), Some((istar, j_end))) = (opt_f, opt_g) {
        if i_end <= istar || j_end <= jstar {
            return Err(shape("cross pairs conflict with each other"));
        }
    }

    Ok(RedStructure {
        p: spine_pairs.len(),
        q: leaf_pairs.len(),
        spine_prefix_pairs: spine_pairs,
        reversed_leaf_pairs: leaf_pairs,
        optional_spine_leaf_f: opt_f,
        optional_spine_leaf_g: opt_g,
    })
}
