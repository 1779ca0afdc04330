//! Complete weighted graphs and their text format.
//!
//! Format:
//! ```text
//! GRAPH v1
//! <n>
//! <i> <j> <w>      (1-based, i < j, every pair present exactly once)
//! ```

use num_bigint::BigInt;
use num_traits::Signed;
use std::fmt::Write as _;
use std::str::FromStr;

/// Complete undirected graph with exact integer edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    w: Vec<BigInt>, // upper triangle, (i, j) with 1 <= i < j <= n
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("expected header `GRAPH v1`")]
    BadHeader,
    #[error("line {0}: {1}")]
    BadLine(usize, String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) out of range for n = {2}")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("graph is not complete: missing edge ({0}, {1})")]
    Incomplete(usize, usize),
    #[error("graph needs at least {0} nodes, got {1}")]
    TooFewNodes(usize, usize),
}

impl WeightedGraph {
    fn tri_index(n: usize, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i < j && j <= n);
        (i - 1) * (2 * n - i) / 2 + (j - i - 1)
    }

    pub fn from_fn(n: usize, mut weight: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut w = Vec::with_capacity(n * (n - 1) / 2);
        for i in 1..=n {
            for j in i + 1..=n {
                w.push(weight(i, j));
            }
        }
        WeightedGraph { n, w }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, BigInt)]) -> Result<Self, GraphError> {
        let mut w: Vec<Option<BigInt>> = vec![None; n * (n - 1) / 2];
        for &(i, j, ref weight) in edges {
            if i == j || i == 0 || j == 0 || i > n || j > n {
                return Err(GraphError::EdgeOutOfRange(i, j, n));
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            let slot = &mut w[Self::tri_index(n, a, b)];
            if slot.is_some() {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            *slot = Some(weight.clone());
        }
        for i in 1..=n {
            for j in i + 1..=n {
                if w[Self::tri_index(n, i, j)].is_none() {
                    return Err(GraphError::Incomplete(i, j));
                }
            }
        }
        Ok(WeightedGraph {
            n,
            w: w.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Weight of edge {i, j}, 1-based, i != j.
    pub fn weight(&self, i: usize, j: usize) -> &BigInt {
        assert!(i != j, "no self-loops in a complete graph");
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        &self.w[Self::tri_index(self.n, a, b)]
    }

    pub fn max_abs_weight(&self) -> BigInt {
        self.w
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(|| BigInt::from(0))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        let n = self.n;
        (1..=n).flat_map(move |i| {
            (i + 1..=n).map(move |j| (i, j, &self.w[Self::tri_index(n, i, j)]))
        })
    }
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(GraphError::BadHeader)?;
    if header.trim() != "GRAPH v1" {
        return Err(GraphError::BadHeader);
    }
    let (ln, n_line) = lines
        .next()
        .ok_or_else(|| GraphError::BadLine(2, "missing node count".into()))?;
    let n: usize = n_line
        .trim()
        .parse()
        .map_err(|_| GraphError::BadLine(ln + 1, "invalid node count".into()))?;
    let mut edges = Vec::new();
    for (ln, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let bad = || GraphError::BadLine(ln + 1, format!("expected `<i> <j> <w>`, got `{line}`"));
        let i: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let j: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let w = BigInt::from_str(parts.next().ok_or_else(bad)?).map_err(|_| bad())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        edges.push((i, j, w));
    }
    WeightedGraph::from_edges(n, &edges)
}

pub fn emit_graph(g: &WeightedGraph) -> String {
    let mut out = String::from("GRAPH v1\n");
    let _ = writeln!(out, "{}", g.node_count());
    for (i, j, w) in g.edges() {
        let _ = writeln!(out, "{i} {j} {w}");
    }
    out
}
