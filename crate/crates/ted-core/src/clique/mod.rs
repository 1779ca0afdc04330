//! Compilation of max-weight k-clique into a constant-alphabet instance.
//!
//! The reduction enumerates all k/3-subsets, shifts weights so pairwise
//! disjoint subset triples dominate, and builds a macro caterpillar skeleton
//! whose nodes carry small gadget trees. Decrease gadgets encode numbers in
//! base n across labeled path segments, equality gadgets reward equal
//! positions, connection gadgets compose them so that a pair of subset trees
//! matches at exactly `-M - W(i,j)`, and a segmented path gadget meters the
//! depth of the chosen subset pair into the total. The optimal matching value
//! then determines the maximum shifted triple weight by a fixed formula.

mod build;
mod gadgets;

pub use build::{build_clique_instance, build_micro_structures, MicroStructures};
pub use gadgets::{
    connection_gadget, decrease_gadget, equality_gadget, i_gadget, ConnectionGadget, GadgetPair,
};

use crate::cost::Cost;
use crate::graph::WeightedGraph;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CliqueError {
    #[error("k must be divisible by 3, got {0}")]
    KNotDivisibleBy3(usize),
    #[error("k must be at least 3, got {0}")]
    KTooSmall(usize),
    #[error("graph needs at least {0} nodes, got {1}")]
    TooFewNodes(usize, usize),
    #[error("M = {0} violates the gadget sufficiency bounds (need at least {1})")]
    InsufficientM(BigInt, BigInt),
    #[error("decrease gadget argument {0} out of range [0, {1}^{2})")]
    GadgetRange(BigInt, usize, usize),
    #[error("matching value must be finite")]
    InfiniteValue,
    #[error("extracted shifted weight {0} is below the disjointness threshold {1}; no disjoint triple dominates (M or Lambda diagnostics)")]
    NoDominantTriple(BigInt, BigInt),
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
}

/// All k/3-subsets of the node set, in lexicographic order. Every subset of a
/// complete graph is a clique.
#[derive(Clone, Debug)]
pub struct CliqueEnumeration {
    pub k: usize,
    pub n: usize,
    /// 1-based node ids, each subset sorted ascending.
    pub subsets: Vec<Vec<usize>>,
}

impl CliqueEnumeration {
    pub fn count(&self) -> usize {
        self.subsets.len()
    }

    /// 1-based subset accessor.
    pub fn subset(&self, i: usize) -> &[usize] {
        &self.subsets[i - 1]
    }
}

pub fn enumerate_subcliques(
    g: &WeightedGraph,
    k: usize,
) -> Result<CliqueEnumeration, CliqueError> {
    if k % 3 != 0 {
        return Err(CliqueError::KNotDivisibleBy3(k));
    }
    if k < 3 {
        return Err(CliqueError::KTooSmall(k));
    }
    let n = g.node_count();
    let kk = k / 3;
    if n < kk {
        return Err(CliqueError::TooFewNodes(kk, n));
    }
    let mut subsets = Vec::with_capacity(binomial(n, kk));
    let mut cur: Vec<usize> = (1..=kk).collect();
    loop {
        subsets.push(cur.clone());
        // Next combination in lexicographic order.
        let mut i = kk;
        while i > 0 && cur[i - 1] == n - (kk - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for j in i..kk {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Ok(CliqueEnumeration { k, n, subsets })
}

/// Edge weights after the disjointness shift: `w(u,u) = 0` and every other
/// weight raised by `lambda`, so triples of pairwise disjoint subsets carry
/// strictly more total weight than any overlapping triple.
#[derive(Clone, Debug)]
pub struct ShiftedWeights {
    pub lambda: BigInt,
    n: usize,
    shifted: Vec<BigInt>,
}

pub fn shift_weights(g: &WeightedGraph, k: usize) -> ShiftedWeights {
    let lambda = BigInt::from((k * k) as u64) * (g.max_abs_weight() + 1);
    let n = g.node_count();
    let mut shifted = Vec::with_capacity(n * (n - 1) / 2);
    for (_, _, w) in g.edges() {
        shifted.push(w + &lambda);
    }
    ShiftedWeights { lambda, n, shifted }
}

impl ShiftedWeights {
    /// Shifted weight, with `w(u,u) = 0`.
    pub fn get(&self, u: usize, v: usize) -> BigInt {
        if u == v {
            return BigInt::zero();
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let idx = (a - 1) * (2 * self.n - a) / 2 + (b - a - 1);
        self.shifted[idx].clone()
    }

    /// Sum of all shifted weights over unordered pairs.
    pub fn total(&self) -> BigInt {
        self.shifted.iter().sum()
    }

    pub fn max(&self) -> BigInt {
        self.shifted
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }
}

/// `W(i,j)`: total shifted weight of edges inside subset i plus edges from
/// subset i to subset j.
pub fn pair_weight(
    ce: &CliqueEnumeration,
    sw: &ShiftedWeights,
    i: usize,
    j: usize,
) -> Result<BigInt, CliqueError> {
    let n_sub = ce.count();
    if i == 0 || i > n_sub {
        return Err(CliqueError::IndexOutOfRange(i, n_sub));
    }
    if j == 0 || j > n_sub {
        return Err(CliqueError::IndexOutOfRange(j, n_sub));
    }
    let qi = ce.subset(i);
    let qj = ce.subset(j);
    let mut total = BigInt::zero();
    for (x, &u) in qi.iter().enumerate() {
        for &v in &qi[x + 1..] {
            total += sw.get(u, v);
        }
    }
    for &u in qi {
        for &v in qj {
            total += sw.get(u, v);
        }
    }
    Ok(total)
}

/// Dense `W(i,j)` table, 1-based accessor.
#[derive(Clone, Debug)]
pub struct PairWeightTable {
    n_sub: usize,
    values: Vec<BigInt>,
}

impl PairWeightTable {
    pub fn build(ce: &CliqueEnumeration, sw: &ShiftedWeights) -> Self {
        let n_sub = ce.count();
        let mut values = Vec::with_capacity(n_sub * n_sub);
        for i in 1..=n_sub {
            for j in 1..=n_sub {
                values.push(pair_weight(ce, sw, i, j).expect("in range"));
            }
        }
        PairWeightTable { n_sub, values }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.values[(i - 1) * self.n_sub + (j - 1)]
    }
}

/// How to pick the scale constant M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MPolicy {
    /// A power of n chosen from the weight budget and k only, provably above
    /// every sufficiency bound. Keeps the digit count, and therefore the
    /// alphabet, independent of n for a fixed weight budget.
    Auto,
    /// Smallest power of two passing the hard gadget sufficiency checks.
    /// Instances are far smaller; exactness is confirmed against the oracle.
    Empirical,
    Fixed(BigInt),
}

/// Scale constants of one reduction.
#[derive(Clone, Debug)]
pub struct ReductionParams {
    pub n: usize,
    pub k: usize,
    pub kk: usize,
    /// Number of enumerated subsets N.
    pub cap_n: usize,
    pub base: usize,
    /// Digit count of every decrease gadget.
    pub d: usize,
    pub m: BigInt,
    pub lambda: BigInt,
    pub w_total: BigInt,
    /// m^0 ..= m^8.
    pub m_pows: Vec<BigInt>,
}

impl ReductionParams {
    pub fn m_pow(&self, e: usize) -> &BigInt {
        &self.m_pows[e]
    }

    /// Parameter of the A/C connection gadget.
    pub fn p1(&self) -> BigInt {
        &self.m * BigInt::from((self.kk * self.kk) as u64)
    }

    /// Parameter of the modified-weight A/C connection gadget; the constant
    /// soaks up the cross-term count so the pairwise optimum telescopes to
    /// exactly -M^2 plus weight terms.
    pub fn p2(&self) -> BigInt {
        let kk = self.kk;
        let cross = BigInt::from((2 * kk * kk + kk * (kk - 1) / 2) as u64);
        self.m_pow(2) - &self.m * cross
    }
}

fn sufficiency_gap(params_m: &BigInt, n: usize, kk: usize, w_total: &BigInt) -> BigInt {
    // m1/m2 as fixed by the connection gadget for a graph with total shifted
    // weight w_total; the gadget needs m_param >= m2*kk + m1*n*kk + 1.
    let m1 = w_total * BigInt::from((kk + 1) as u64);
    let m2 = &m1 * BigInt::from((n * kk) as u64) + &m1;
    params_m - (m2 * BigInt::from(kk as u64) + m1 * BigInt::from((n * kk) as u64) + 1u8)
}

fn check_m(
    m: &BigInt,
    n: usize,
    kk: usize,
    cap_n: usize,
    k: usize,
    w_total: &BigInt,
    sw_max: &BigInt,
) -> Result<(), BigInt> {
    let fail = |need: BigInt| -> Result<(), BigInt> { Err(need) };
    // Main and A/C connection gadgets (the A/C parameter m*kk^2 >= m).
    if sufficiency_gap(m, n, kk, w_total).is_negative() {
        return fail(m + BigInt::one());
    }
    // Modified-weight gadget: p2 must clear its own sufficiency bound.
    let cross = BigInt::from((2 * kk * kk + kk * (kk - 1) / 2) as u64);
    let p2 = m * m - m * &cross;
    let w_total_p = BigInt::from((n * (n - 1) / 2) as u64) * m - w_total;
    if w_total_p.is_negative() || sufficiency_gap(&p2, n, kk, &w_total_p).is_negative() {
        return fail(m + BigInt::one());
    }
    // Modified weights must stay positive.
    if m <= sw_max {
        return fail(sw_max + 1u8);
    }
    if m < &(cross * 2u8) {
        return fail(m + BigInt::one());
    }
    // Headroom for the macro dominance arguments.
    let macro_floor = BigInt::from((8 * (cap_n + n + k + 2)) as u64);
    if m < &macro_floor {
        return fail(macro_floor);
    }
    Ok(())
}

/// Computes all scale constants for a graph and k under the given policy.
pub fn reduction_params(
    g: &WeightedGraph,
    k: usize,
    policy: &MPolicy,
) -> Result<ReductionParams, CliqueError> {
    if k % 3 != 0 {
        return Err(CliqueError::KNotDivisibleBy3(k));
    }
    if k < 3 {
        return Err(CliqueError::KTooSmall(k));
    }
    let n = g.node_count();
    if n < 3 {
        return Err(CliqueError::TooFewNodes(3, n));
    }
    let kk = k / 3;
    if n < kk {
        return Err(CliqueError::TooFewNodes(kk, n));
    }
    let ce = enumerate_subcliques(g, k)?;
    let cap_n = ce.count();
    let sw = shift_weights(g, k);
    let w_total = sw.total();
    let sw_max = sw.max();
    let base = n;

    let (m, d) = match policy {
        MPolicy::Auto => {
            // Digit budget of the weights: smallest c with n^c > maxAbs.
            let max_abs = g.max_abs_weight();
            let mut c = 1usize;
            let mut pow = BigInt::from(n as u64);
            while pow <= max_abs {
                pow *= n as u64;
                c += 1;
            }
            let e = c + 2 * k + 7;
            let m = BigInt::from(n as u64).pow(e as u32);
            check_m(&m, n, kk, cap_n, k, &w_total, &sw_max)
                .map_err(|need| CliqueError::InsufficientM(m.clone(), need))?;
            (m, 6 * e + 1)
        }
        MPolicy::Empirical => {
            let mut m = BigInt::from(2u8);
            while check_m(&m, n, kk, cap_n, k, &w_total, &sw_max).is_err() {
                m *= 2u8;
            }
            let d = min_digits(&m, base, cap_n);
            (m, d)
        }
        MPolicy::Fixed(v) => {
            check_m(v, n, kk, cap_n, k, &w_total, &sw_max)
                .map_err(|need| CliqueError::InsufficientM(v.clone(), need))?;
            (v.clone(), min_digits(v, base, cap_n))
        }
    };

    let mut m_pows = Vec::with_capacity(9);
    m_pows.push(BigInt::one());
    for e in 1..=8 {
        let next = &m_pows[e - 1] * &m;
        m_pows.push(next);
    }
    // The largest decrease argument is m^6 + m^3 (N-1) - m.
    debug_assert!(BigInt::from(base as u64).pow(d as u32) > &m_pows[6] + &m_pows[3] * cap_n);

    Ok(ReductionParams {
        n,
        k,
        kk,
        cap_n,
        base,
        d,
        m,
        lambda: sw.lambda,
        w_total,
        m_pows,
    })
}

/// Smallest d with base^d > m^6 + m^3 * N.
fn min_digits(m: &BigInt, base: usize, cap_n: usize) -> usize {
    let target = m.pow(6) + m.pow(3) * cap_n;
    let mut d = 1usize;
    let mut pow = BigInt::from(base as u64);
    while pow <= target {
        pow *= base as u64;
        d += 1;
    }
    d
}

/// Extraction key serialized with a generated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueKey {
    pub m: BigInt,
    pub cap_n: usize,
    pub k: usize,
    pub lambda: BigInt,
    pub n: usize,
}

/// Inverts the reduction: recover the maximum (unshifted) k-clique weight
/// from the optimal matching value.
pub fn extract_max_clique_weight(key: &CliqueKey, value: &Cost) -> Result<BigInt, CliqueError> {
    let v = value.as_finite().ok_or(CliqueError::InfiniteValue)?;
    let m = &key.m;
    let cap_n = BigInt::from(key.cap_n as u64);
    let constants = -BigInt::from(2u8) * m.pow(8)
        - BigInt::from(2u8) * m.pow(7) * (&cap_n - 1u8)
        - BigInt::from(2u8) * m.pow(6)
        - m.pow(5)
        - BigInt::from(2u8) * m.pow(3) * &cap_n
        + m.pow(2);
    let max_shifted = constants - v;
    // A k-clique carries C(k,2) edges, each raised by lambda.
    let shift = BigInt::from(binomial(key.k, 2) as u64) * &key.lambda;
    if max_shifted < shift {
        return Err(CliqueError::NoDominantTriple(max_shifted, shift));
    }
    Ok(max_shifted - shift)
}

/// Maximum total edge weight over all k-subsets.
pub fn brute_max_weight_k_clique(g: &WeightedGraph, k: usize) -> Result<BigInt, CliqueError> {
    let n = g.node_count();
    if n < k {
        return Err(CliqueError::TooFewNodes(k, n));
    }
    let mut best: Option<BigInt> = None;
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        let mut s = BigInt::zero();
        for (x, &u) in cur.iter().enumerate() {
            for &v in &cur[x + 1..] {
                s += g.weight(u, v);
            }
        }
        if best.as_ref().map_or(true, |b| &s > b) {
            best = Some(s);
        }
        let mut i = k;
        while i > 0 && cur[i - 1] == n - (k - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize) -> WeightedGraph {
        WeightedGraph::from_fn(n, |i, j| BigInt::from((i + j) as i64 % 5))
    }

    #[test]
    fn enumeration_examples() {
        let g = graph(4);
        let ce = enumerate_subcliques(&g, 3).unwrap();
        assert_eq!(ce.count(), 4);
        assert_eq!(ce.subsets, vec![vec![1], vec![2], vec![3], vec![4]]);
        let ce = enumerate_subcliques(&g, 6).unwrap();
        assert_eq!(ce.count(), 6);
        assert_eq!(
            ce.subsets,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(
            enumerate_subcliques(&g, 4).unwrap_err(),
            CliqueError::KNotDivisibleBy3(4)
        );
    }

    #[test]
    fn enumeration_count_is_binomial() {
        for n in 3..=8 {
            let g = graph(n);
            for k in [3usize, 6] {
                if n >= k / 3 {
                    let ce = enumerate_subcliques(&g, k).unwrap();
                    assert_eq!(ce.count(), binomial(n, k / 3));
                }
            }
        }
    }

    #[test]
    fn shift_examples() {
        // k=3, max|w|=5, w(1,2)=5 -> lambda = 54, shifted 59.
        let g = WeightedGraph::from_fn(3, |i, j| {
            if (i, j) == (1, 2) {
                BigInt::from(5)
            } else {
                BigInt::from(-5)
            }
        });
        let sw = shift_weights(&g, 3);
        assert_eq!(sw.lambda, BigInt::from(54));
        assert_eq!(sw.get(1, 2), BigInt::from(59));
        assert_eq!(sw.get(2, 1), BigInt::from(59));
        assert_eq!(sw.get(2, 2), BigInt::zero());
    }

    #[test]
    fn pair_weight_examples() {
        let g = graph(4);
        let sw = shift_weights(&g, 3);
        let ce3 = enumerate_subcliques(&g, 3).unwrap();
        // k=3: W(i,j) degenerates to the single shifted edge weight.
        assert_eq!(
            pair_weight(&ce3, &sw, 1, 2).unwrap(),
            sw.get(1, 2)
        );
        assert_eq!(pair_weight(&ce3, &sw, 2, 2).unwrap(), BigInt::zero());

        let ce6 = enumerate_subcliques(&g, 6).unwrap();
        // Q(i) = {1,2}, Q(j) = {3,4}.
        let i = 1 + ce6.subsets.iter().position(|s| s == &[1, 2]).unwrap();
        let j = 1 + ce6.subsets.iter().position(|s| s == &[3, 4]).unwrap();
        let expected = sw.get(1, 2) + sw.get(1, 3) + sw.get(1, 4) + sw.get(2, 3) + sw.get(2, 4);
        assert_eq!(pair_weight(&ce6, &sw, i, j).unwrap(), expected);
    }

    #[test]
    fn pair_weight_matches_edge_loop_oracle() {
        // Independent summation: loop over all graph edges and count how often
        // each belongs to W(i, j).
        let g = graph(5);
        let sw = shift_weights(&g, 6);
        let ce = enumerate_subcliques(&g, 6).unwrap();
        for i in 1..=ce.count() {
            for j in 1..=ce.count() {
                let qi = ce.subset(i);
                let qj = ce.subset(j);
                let mut oracle = BigInt::zero();
                for (u, v, _) in g.edges() {
                    let internal = qi.contains(&u) && qi.contains(&v);
                    let mut cross_count = 0;
                    if qi.contains(&u) && qj.contains(&v) {
                        cross_count += 1;
                    }
                    if qi.contains(&v) && qj.contains(&u) {
                        cross_count += 1;
                    }
                    if internal {
                        oracle += sw.get(u, v);
                    }
                    for _ in 0..cross_count {
                        oracle += sw.get(u, v);
                    }
                }
                assert_eq!(&oracle, PairWeightTable::build(&ce, &sw).get(i, j));
            }
        }
    }

    #[test]
    fn disjointness_dominance_after_shift() {
        // For k=3, n=5: the best triple of subsets under W-sums is attained by
        // pairwise-disjoint triples.
        let g = WeightedGraph::from_fn(5, |i, j| BigInt::from(((i * 7 + j * 3) % 11) as i64 - 5));
        let sw = shift_weights(&g, 3);
        let ce = enumerate_subcliques(&g, 3).unwrap();
        let n_sub = ce.count();
        let w = PairWeightTable::build(&ce, &sw);
        let mut best: Option<(BigInt, bool)> = None;
        for i in 1..=n_sub {
            for j in 1..=n_sub {
                for z in 1..=n_sub {
                    let total = w.get(i, z) + w.get(z, j) + w.get(j, i);
                    let qi = ce.subset(i);
                    let qj = ce.subset(j);
                    let qz = ce.subset(z);
                    let disjoint = qi != qj && qj != qz && qi != qz;
                    match &best {
                        Some((b, _)) if *b >= total => {}
                        _ => best = Some((total, disjoint)),
                    }
                }
            }
        }
        assert!(best.unwrap().1, "maximum attained by an overlapping triple");
    }

    #[test]
    fn brute_clique_examples() {
        let tri = WeightedGraph::from_fn(3, |i, j| BigInt::from((i + j - 2) as i64));
        assert_eq!(brute_max_weight_k_clique(&tri, 3).unwrap(), BigInt::from(6));
        let g = graph(5);
        let all: BigInt = g.edges().map(|(_, _, w)| w.clone()).sum();
        assert_eq!(brute_max_weight_k_clique(&g, 5).unwrap(), all);
        assert!(brute_max_weight_k_clique(&tri, 4).is_err());
    }

    #[test]
    fn extraction_rearranges_the_formula() {
        let key = CliqueKey {
            m: BigInt::from(64),
            cap_n: 3,
            k: 3,
            lambda: BigInt::from(36),
            n: 3,
        };
        let m = &key.m;
        let constants = -BigInt::from(2u8) * m.pow(8)
            - BigInt::from(2u8) * m.pow(7) * 2u8
            - BigInt::from(2u8) * m.pow(6)
            - m.pow(5)
            - BigInt::from(2u8) * m.pow(3) * 3u8
            + m.pow(2);
        // value = constants - X  =>  maxShifted = X.
        let x = BigInt::from(3) * 36u8 + 6u8;
        let value = Cost::Finite(&constants - &x);
        assert_eq!(
            extract_max_clique_weight(&key, &value).unwrap(),
            BigInt::from(6)
        );
        // Below the threshold: diagnostic error.
        let bad = Cost::Finite(constants);
        assert!(matches!(
            extract_max_clique_weight(&key, &bad),
            Err(CliqueError::NoDominantTriple(_, _))
        ));
    }
}
