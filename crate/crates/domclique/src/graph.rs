//! Bit-vector graphs and G(n,p) sampling.
//!
//! A [`Graph`] stores one adjacency bit-row per node, 64 nodes per word, so
//! the neighborhood intersections that dominate downstream counting reduce to
//! word AND + popcount. Graphs are immutable in practice: construct, then
//! share freely across threads.
//!
//! Sampling is a pure function of `(n, p, seed)`. Potential edges are visited
//! in row-major pair order (0,1), (0,2), …, (0,n−1), (1,2), …; the k-th pair
//! consumes output k of the SplitMix64 stream for `seed` and the edge is
//! present iff that draw, mapped to [0,1), is `< p`. Thresholding the same
//! draws at several p values yields coupled graphs that are nested by
//! construction; [`sample_gnp_coupled`] exposes exactly that.

use crate::error::{Error, Result};
use crate::rng;

/// Hard cap on node count; keeps rows in fixed-width vectors.
pub const MAX_NODES: usize = 8192;

/// Largest n for which iterating all 2^C(n,2) labeled graphs is practical.
pub const MAX_EXHAUSTIVE_NODES: usize = 7;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// All unordered node pairs (i, j) with i < j, in row-major order.
pub fn node_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Sampling parameters for one G(n,p) draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnpParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl GnpParams {
    pub fn validate(&self) -> Result<()> {
        if self.n > MAX_NODES {
            return Err(Error::capacity(format!(
                "n = {} exceeds the {MAX_NODES}-node maximum",
                self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::domain(format!("p = {} outside [0, 1]", self.p)));
        }
        Ok(())
    }
}

/// Undirected simple graph on nodes 0..n as n adjacency bit-rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::capacity(format!(
                "n = {n} exceeds the {MAX_NODES}-node maximum"
            )));
        }
        let words = words_for(n);
        Ok(Graph {
            n,
            words,
            bits: vec![0; n * words],
        })
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for (i, j) in node_pairs(n) {
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Graph with the given edges; node indices must be in range and distinct.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Insert the undirected edge {i, j}.
    ///
    /// # Panics
    /// If `i == j` or either endpoint is out of range.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j, "self-loop {i}");
        assert!(i < self.n && j < self.n, "edge ({i},{j}) out of range");
        self.bits[i * self.words + (j >> 6)] |= 1 << (j & 63);
        self.bits[j * self.words + (i >> 6)] |= 1 << (i & 63);
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Words per adjacency row.
    #[inline]
    pub fn row_words(&self) -> usize {
        self.words
    }

    /// Adjacency row of node `i` as a bit-vector slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + (j >> 6)] >> (j & 63) & 1 == 1
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = self.bits.iter().map(|w| w.count_ones() as usize).sum();
        debug_assert!(total % 2 == 0);
        total / 2
    }

    /// Debug dump: line "n m", then one "i j" line per edge with i < j.
    pub fn edge_list_dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edge_count());
        for (i, j) in node_pairs(self.n) {
            if self.has_edge(i, j) {
                let _ = writeln!(out, "{i} {j}");
            }
        }
        out
    }

    #[cfg(debug_assertions)]
    pub(crate) fn check_invariants(&self) {
        for i in 0..self.n {
            debug_assert!(!self.has_edge_loopless(i), "self-loop at {i}");
        }
        for (i, j) in node_pairs(self.n) {
            debug_assert_eq!(self.has_edge(i, j), self.has_edge(j, i));
        }
        // no stray bits beyond column n
        if self.n % 64 != 0 {
            let mask = !0u64 << (self.n % 64);
            for i in 0..self.n {
                debug_assert_eq!(self.row(i)[self.words - 1] & mask, 0);
            }
        }
    }

    #[cfg(debug_assertions)]
    fn has_edge_loopless(&self, i: usize) -> bool {
        self.bits[i * self.words + (i >> 6)] >> (i & 63) & 1 == 1
    }
}

/// Node subset as a bit-vector with cached cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    n: usize,
    size: usize,
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        NodeSet {
            n,
            size: 0,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = NodeSet::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_indices(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut s = NodeSet::empty(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    /// # Panics
    /// If `v` is out of range.
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "node {v} out of range for width {}", self.n);
        let w = &mut self.words[v >> 6];
        if *w >> (v & 63) & 1 == 0 {
            *w |= 1 << (v & 63);
            self.size += 1;
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words[v >> 6] >> (v & 63) & 1 == 1
    }

    /// Cached cardinality; always equals the popcount of the bit-vector.
    #[inline]
    pub fn size(&self) -> usize {
        debug_assert_eq!(
            self.size,
            self.words.iter().map(|w| w.count_ones() as usize).sum::<usize>()
        );
        self.size
    }

    /// Width of the bit-vector (the owning graph's node count).
    #[inline]
    pub fn width(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.contains(v))
    }
}

/// Sample one graph from G(n,p); fully determined by the parameters.
pub fn sample_gnp(params: &GnpParams) -> Result<Graph> {
    params.validate()?;
    let mut g = Graph::empty(params.n)?;
    let mut k = 0u64;
    for (i, j) in node_pairs(params.n) {
        if rng::unit(rng::stream(params.seed, k)) < params.p {
            g.add_edge(i, j);
        }
        k += 1;
    }
    #[cfg(debug_assertions)]
    g.check_invariants();
    Ok(g)
}

/// Sample graphs at several edge probabilities from one set of uniform draws.
///
/// Each potential edge consumes a single draw shared by every threshold, so
/// the resulting edge sets are nested: `ps[a] <= ps[b]` implies every edge of
/// graph a is present in graph b.
pub fn sample_gnp_coupled(n: usize, seed: u64, ps: &[f64]) -> Result<Vec<Graph>> {
    for &p in ps {
        GnpParams { n, p, seed }.validate()?;
    }
    let mut graphs = Vec::with_capacity(ps.len());
    for _ in ps {
        graphs.push(Graph::empty(n)?);
    }
    let mut k = 0u64;
    for (i, j) in node_pairs(n) {
        let u = rng::unit(rng::stream(seed, k));
        for (g, &p) in graphs.iter_mut().zip(ps) {
            if u < p {
                g.add_edge(i, j);
            }
        }
        k += 1;
    }
    Ok(graphs)
}

/// ln Pr[G] under G(n,p): |E|·ln p + (C(n,2) − |E|)·ln(1−p).
pub fn graph_probability_log(g: &Graph, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p = {p} outside the open interval (0, 1)")));
    }
    let m = g.edge_count() as f64;
    let total = (g.node_count() * g.node_count().saturating_sub(1) / 2) as f64;
    Ok(m * p.ln() + (total - m) * (-p).ln_1p())
}

/// Iterator over every labeled graph on n nodes, one per edge bitmask.
///
/// Bit t of the mask is the t-th pair in row-major order, the same order
/// [`sample_gnp`] consumes draws in; masks run 0..2^C(n,2).
pub struct AllGraphs {
    n: usize,
    pairs: Vec<(usize, usize)>,
    next: u64,
    end: u64,
}

impl Iterator for AllGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.next == self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let mut g = Graph::empty(self.n).expect("capacity checked at construction");
        for (t, &(i, j)) in self.pairs.iter().enumerate() {
            if mask >> t & 1 == 1 {
                g.add_edge(i, j);
            }
        }
        Some(g)
    }
}

/// Every labeled graph on n nodes, for exhaustive oracles. n ≤ 7.
pub fn all_graphs(n: usize) -> Result<AllGraphs> {
    if n > MAX_EXHAUSTIVE_NODES {
        return Err(Error::capacity(format!(
            "all_graphs supports n ≤ {MAX_EXHAUSTIVE_NODES}, got {n}"
        )));
    }
    let pairs: Vec<_> = node_pairs(n).collect();
    Ok(AllGraphs {
        n,
        end: 1u64 << pairs.len(),
        pairs,
        next: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    // ---- sampling ------------------------------------------------------

    #[test]
    fn p_zero_edgeless_p_one_complete() {
        let g0 = sample_gnp(&GnpParams { n: 5, p: 0.0, seed: 99 }).unwrap();
        assert_eq!(g0.edge_count(), 0);
        let g1 = sample_gnp(&GnpParams { n: 5, p: 1.0, seed: 99 }).unwrap();
        assert_eq!(g1.edge_count(), 10);
    }

    #[test]
    fn sampling_is_deterministic() {
        let params = GnpParams { n: 100, p: 0.5, seed: 42 };
        let a = sample_gnp(&params).unwrap();
        let b = sample_gnp(&params).unwrap();
        assert_eq!(a, b);
        let c = sample_gnp(&GnpParams { seed: 43, ..params }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn samples_are_simple_and_symmetric() {
        for seed in 0..1000 {
            let g = sample_gnp(&GnpParams { n: 33, p: 0.37, seed }).unwrap();
            for i in 0..33 {
                assert!(!g.has_edge(i, i));
                for j in 0..33 {
                    if i != j {
                        assert_eq!(g.has_edge(i, j), g.has_edge(j, i));
                    }
                }
            }
        }
    }

    #[test]
    fn edge_density_within_four_sigma() {
        let n = 2000usize;
        let pairs = (n * (n - 1) / 2) as f64;
        for (seed, p) in [(11u64, 0.1f64), (12, 0.5), (13, 0.9)] {
            let g = sample_gnp(&GnpParams { n, p, seed }).unwrap();
            let mean = pairs * p;
            let sd = (pairs * p * (1.0 - p)).sqrt();
            let got = g.edge_count() as f64;
            assert!(
                (got - mean).abs() < 4.0 * sd,
                "density off at p={p}: {got} vs mean {mean} (sd {sd})"
            );
        }
    }

    #[test]
    fn coupled_samples_are_nested() {
        let ps = [0.1, 0.3, 0.5, 0.9];
        let gs = sample_gnp_coupled(40, 7, &ps).unwrap();
        for w in gs.windows(2) {
            for (i, j) in node_pairs(40) {
                if w[0].has_edge(i, j) {
                    assert!(w[1].has_edge(i, j));
                }
            }
        }
        let single = sample_gnp(&GnpParams { n: 40, p: 0.3, seed: 7 }).unwrap();
        assert_eq!(gs[1], single);
    }

    #[test]
    fn capacity_errors() {
        let r = sample_gnp(&GnpParams { n: MAX_NODES + 1, p: 0.5, seed: 0 });
        assert!(matches!(r, Err(Error::Capacity(_))));
        assert!(matches!(all_graphs(8), Err(Error::Capacity(_))));
    }

    // ---- probability weights -------------------------------------------

    #[test]
    fn probability_log_hand_values() {
        let g2 = Graph::empty(2).unwrap();
        assert!((graph_probability_log(&g2, 0.5).unwrap() - 0.5f64.ln()).abs() < 1e-15);

        let k3 = Graph::complete(3).unwrap();
        assert!((graph_probability_log(&k3, 0.5).unwrap() - 3.0 * 0.5f64.ln()).abs() < 1e-15);

        let want = 2.0 * 0.25f64.ln() + 0.75f64.ln();
        assert!((graph_probability_log(&path3(), 0.25).unwrap() - want).abs() < 1e-15);

        assert!(graph_probability_log(&k3, 0.0).is_err());
        assert!(graph_probability_log(&k3, 1.0).is_err());
    }

    #[test]
    fn probabilities_sum_to_one() {
        for n in 0..=5usize {
            for p in [0.3, 0.5, 0.7] {
                let total: f64 = all_graphs(n)
                    .unwrap()
                    .map(|g| graph_probability_log(&g, p).unwrap().exp())
                    .sum();
                assert!((total - 1.0).abs() < 1e-12, "n={n} p={p}: {total}");
            }
        }
    }

    // ---- exhaustive iteration -------------------------------------------

    #[test]
    fn all_graphs_counts() {
        assert_eq!(all_graphs(2).unwrap().count(), 2);
        assert_eq!(all_graphs(3).unwrap().count(), 8);
        assert_eq!(all_graphs(4).unwrap().count(), 64);
    }

    #[test]
    fn all_graphs_distinct() {
        let mut seen: Vec<Vec<u64>> = all_graphs(4).unwrap().map(|g| g.bits).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 64);
    }

    // ---- node sets and dumps ---------------------------------------------

    #[test]
    fn node_set_basics() {
        let mut s = NodeSet::from_indices(70, [0, 65, 3]);
        assert_eq!(s.size(), 3);
        assert!(s.contains(65));
        assert!(!s.contains(64));
        s.insert(65); // idempotent
        assert_eq!(s.size(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 65]);
        assert_eq!(NodeSet::full(5).size(), 5);
    }

    #[test]
    fn dump_format() {
        assert_eq!(path3().edge_list_dump(), "3 2\n0 1\n1 2\n");
        assert_eq!(Graph::empty(2).unwrap().edge_list_dump(), "2 0\n");
    }
}
