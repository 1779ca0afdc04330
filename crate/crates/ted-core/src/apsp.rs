//! Compilation of negative-triangle / minimum-triangle detection into a
//! caterpillar tree-edit-distance instance.
//!
//! Both trees are caterpillars with spine a_1..a_n, b_1..b_{n+1} (left tree)
//! and c_1..c_n, d_1..d_{n+1} (right tree), one leaf per spine node and all
//! labels distinct. Six cost families steer any optimal matching to pick
//! indices i, j, k and pay exactly `-3M^2 + w(i,k) + w(k,j) + w(i,j)`, so the
//! minimum triangle weight is `value + 3M^2`.

use crate::caterpillar::{Caterpillar, LeafSide};
use crate::cost::Cost;
use crate::graph::WeightedGraph;
use crate::model::CostModel;
use crate::tree::{Label, LabeledTree};
use num_bigint::BigInt;
use num_traits::Signed;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ApspError {
    #[error("triangle detection needs n >= 3, got {0}")]
    TooFewNodes(usize),
    #[error("M must be positive")]
    NonPositiveM,
    #[error("matching value must be finite")]
    InfiniteValue,
    #[error("extracted value {0} is outside the plausible band; M too small")]
    MTooSmall(BigInt),
}

/// Node roles of the instance labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApspRole {
    /// Spine a_i of the left tree (top part).
    A(usize),
    /// Leaf a'_i.
    ALeaf(usize),
    /// Spine b_k of the left tree (bottom part).
    B(usize),
    /// Leaf b'_k.
    BLeaf(usize),
    C(usize),
    CLeaf(usize),
    D(usize),
    DLeaf(usize),
}

/// Deterministic label layout of an instance for a given n.
#[derive(Clone, Copy, Debug)]
pub struct ApspLayout {
    pub n: usize,
}

impl ApspLayout {
    fn g_offset(&self) -> u32 {
        (4 * self.n + 2) as u32
    }

    pub fn a(&self, i: usize) -> Label {
        Label((i - 1) as u32)
    }
    pub fn b(&self, k: usize) -> Label {
        Label((self.n + k - 1) as u32)
    }
    pub fn a_leaf(&self, i: usize) -> Label {
        Label((2 * self.n + 1 + i - 1) as u32)
    }
    pub fn b_leaf(&self, k: usize) -> Label {
        Label((3 * self.n + 1 + k - 1) as u32)
    }
    pub fn c(&self, j: usize) -> Label {
        Label(self.g_offset() + (j - 1) as u32)
    }
    pub fn d(&self, k: usize) -> Label {
        Label(self.g_offset() + (self.n + k - 1) as u32)
    }
    pub fn c_leaf(&self, j: usize) -> Label {
        Label(self.g_offset() + (2 * self.n + 1 + j - 1) as u32)
    }
    pub fn d_leaf(&self, k: usize) -> Label {
        Label(self.g_offset() + (3 * self.n + 1 + k - 1) as u32)
    }

    pub fn alphabet_size(&self) -> u32 {
        2 * self.g_offset()
    }

    pub fn role_of(&self, l: Label) -> Option<ApspRole> {
        let n = self.n as u32;
        let (side, x) = if l.0 < self.g_offset() {
            (0, l.0)
        } else if l.0 < self.alphabet_size() {
            (1, l.0 - self.g_offset())
        } else {
            return None;
        };
        let role = if x < n {
            (x + 1, 0)
        } else if x < 2 * n + 1 {
            (x - n + 1, 1)
        } else if x < 3 * n + 1 {
            (x - 2 * n - 1 + 1, 2)
        } else {
            (x - 3 * n - 1 + 1, 3)
        };
        let idx = role.0 as usize;
        Some(match (side, role.1) {
            (0, 0) => ApspRole::A(idx),
            (0, 1) => ApspRole::B(idx),
            (0, 2) => ApspRole::ALeaf(idx),
            (0, 3) => ApspRole::BLeaf(idx),
            (1, 0) => ApspRole::C(idx),
            (1, 1) => ApspRole::D(idx),
            (1, 2) => ApspRole::CLeaf(idx),
            (1, 3) => ApspRole::DLeaf(idx),
            _ => unreachable!(),
        })
    }
}

/// Everything needed to solve the instance and invert the reduction.
#[derive(Clone, Debug)]
pub struct ApspInstance {
    pub f: LabeledTree,
    pub g: LabeledTree,
    pub model: CostModel,
    pub m: BigInt,
    pub n: usize,
    pub max_abs_weight: BigInt,
}

/// Default scale constant: dominates every lower-order term of the cost
/// families on the given graph. Overridable.
pub fn choose_m_apsp(g: &WeightedGraph) -> BigInt {
    BigInt::from(16) * BigInt::from(g.node_count() + 1) * (g.max_abs_weight() + 1)
}

/// Builds the two caterpillars and the six finite cost families.
pub fn build_negative_triangle_instance(
    g: &WeightedGraph,
    m: &BigInt,
) -> Result<ApspInstance, ApspError> {
    if m.sign() != num_bigint::Sign::Plus {
        return Err(ApspError::NonPositiveM);
    }
    let n = g.node_count();
    let layout = ApspLayout { n };
    let max_abs = g.max_abs_weight();
    // Cost families can formally address w(i, i); materialize the diagonal
    // large enough that repeated-index triples never win. A structure using
    // one diagonal term scores at least diag - 2*maxAbs, which must exceed
    // the largest possible genuine minimum 3*maxAbs.
    let diag: BigInt = BigInt::from(5) * &max_abs + 1;
    let w = |i: usize, j: usize| -> BigInt {
        if i == j {
            diag.clone()
        } else {
            g.weight(i, j).clone()
        }
    };

    let f_spine: Vec<Label> = (1..=n)
        .map(|i| layout.a(i))
        .chain((1..=n + 1).map(|k| layout.b(k)))
        .collect();
    let f_leaves: Vec<Label> = (1..=n)
        .map(|i| layout.a_leaf(i))
        .chain((1..=n + 1).map(|k| layout.b_leaf(k)))
        .collect();
    let g_spine: Vec<Label> = (1..=n)
        .map(|j| layout.c(j))
        .chain((1..=n + 1).map(|k| layout.d(k)))
        .collect();
    let g_leaves: Vec<Label> = (1..=n)
        .map(|j| layout.c_leaf(j))
        .chain((1..=n + 1).map(|k| layout.d_leaf(k)))
        .collect();
    let f = Caterpillar::new(f_spine, f_leaves, LeafSide::Right).to_tree();
    let gt = Caterpillar::new(g_spine, g_leaves, LeafSide::Left).to_tree();

    let mut model = CostModel::new_matching(layout.alphabet_size());
    let m2: BigInt = m * m;
    let mut set = |a: Label, b: Label, v: BigInt| {
        model.set_match(a, b, Cost::Finite(v)).expect("label range");
    };
    for k in 1..=n {
        // (1) leaf-to-leaf at equal depth.
        set(
            layout.b_leaf(k),
            layout.d_leaf(k),
            -&m2 - BigInt::from(2) * m * k,
        );
        for j in 1..=n {
            // (2) spine below the leaf block to a top leaf on the other side.
            set(
                layout.b(k + 1),
                layout.c_leaf(j),
                -&m2 + m * k + m * j + w(k, j),
            );
            // (3) symmetric direction.
            set(
                layout.a_leaf(j),
                layout.d(k + 1),
                -&m2 + m * k + m * j + w(j, k),
            );
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i >= 2 && j >= 2 {
                // (4) telescoping spine-prefix costs.
                set(layout.a(i), layout.c(j), BigInt::from(-2) * m + w(i, j) - w(i - 1, j - 1));
            }
        }
        // (5) and (6) anchor the telescope at depth 1; they agree at (1, 1).
        set(layout.a(i), layout.c(1), -(m * (i + 1)) + w(i, 1));
        set(layout.a(1), layout.c(i), -(m * (i + 1)) + w(1, i));
    }

    Ok(ApspInstance {
        f,
        g: gt,
        model,
        m: m.clone(),
        n,
        max_abs_weight: max_abs,
    })
}

/// Inverts the reduction: the minimum triangle weight is `value + 3M^2`.
/// Values outside the plausible band indicate an undersized M.
pub fn extract_min_triangle(inst: &ApspInstance, value: &Cost) -> Result<BigInt, ApspError> {
    let v = value.as_finite().ok_or(ApspError::InfiniteValue)?;
    let extracted = v + BigInt::from(3) * &inst.m * &inst.m;
    let band = BigInt::from(3) * (BigInt::from(2) * &inst.max_abs_weight + 1);
    if extracted.abs() > band {
        return Err(ApspError::MTooSmall(extracted));
    }
    Ok(extracted)
}

/// Minimum triangle weight over all unordered triples of distinct nodes.
pub fn brute_min_triangle(g: &WeightedGraph) -> Result<BigInt, ApspError> {
    let n = g.node_count();
    if n < 3 {
        return Err(ApspError::TooFewNodes(n));
    }
    let mut best: Option<BigInt> = None;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let s = g.weight(i, j) + g.weight(j, k) + g.weight(i, k);
                if best.as_ref().map_or(true, |b| &s < b) {
                    best = Some(s);
                }
            }
        }
    }
    Ok(best.unwrap())
}

pub fn detect_negative_triangle(g: &WeightedGraph) -> Result<bool, ApspError> {
    Ok(brute_min_triangle(g)?.sign() == num_bigint::Sign::Minus)
}
