//! Exact clique, maximality, and domination counting on a single graph, plus
//! probability-weighted exhaustive oracles over every labeled graph at small n.
//!
//! The counting predicate used throughout: an r-subset S is a *maximal* clique
//! iff S is complete and every outside node has at most r−1 neighbors in S,
//! and a *dominating* clique iff additionally every outside node has at least
//! one neighbor in S. Both conditions are one popcount per outside node.

use crate::error::{Error, Result};
use crate::graph::{all_graphs, Graph, NodeSet};

// ---- bit-vector helpers -------------------------------------------------

#[inline]
fn test_bit(words: &[u64], v: usize) -> bool {
    words[v >> 6] >> (v & 63) & 1 == 1
}

#[inline]
fn set_bit(words: &mut [u64], v: usize) {
    words[v >> 6] |= 1 << (v & 63);
}

#[inline]
fn clear_bit(words: &mut [u64], v: usize) {
    words[v >> 6] &= !(1 << (v & 63));
}

#[inline]
fn and_popcount(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
fn is_empty(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

fn push_bits(words: &[u64], out: &mut Vec<usize>) {
    for (wi, &word) in words.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            out.push((wi << 6) + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

/// Bit-vector with bits 0..n set, stray high bits clear.
fn full_set(n: usize) -> Vec<u64> {
    let words = n.div_ceil(64);
    let mut v = vec![!0u64; words];
    if n % 64 != 0 {
        v[words - 1] = (1u64 << (n % 64)) - 1;
    }
    v
}

// ---- predicates ----------------------------------------------------------

/// True iff every node outside `s` has at least one neighbor in `s`.
pub fn is_dominating(g: &Graph, s: &NodeSet) -> bool {
    assert_eq!(s.width(), g.node_count(), "node set width must match graph");
    (0..g.node_count()).all(|u| s.contains(u) || and_popcount(g.row(u), s.words()) > 0)
}

fn is_complete(g: &Graph, s: &NodeSet) -> bool {
    s.iter().all(|v| and_popcount(g.row(v), s.words()) == s.size() - 1)
}

/// True iff `s` induces a complete subgraph and no outside node is adjacent
/// to every member of `s`.
pub fn is_maximal_clique(g: &Graph, s: &NodeSet) -> bool {
    assert!(s.size() > 0, "maximality is defined for nonempty sets");
    assert_eq!(s.width(), g.node_count(), "node set width must match graph");
    is_complete(g, s)
        && (0..g.node_count()).all(|u| s.contains(u) || and_popcount(g.row(u), s.words()) < s.size())
}

// ---- exact-size clique scan ----------------------------------------------

/// Visits every complete r-subset once, in lexicographic member order.
///
/// `visit` receives the clique as a bit-vector and returns true to stop the
/// scan early; `run` reports whether a visit stopped it. Candidate sets are
/// intersected neighborhoods restricted to higher node indices, with a
/// remaining-candidates prune, so cost is proportional to the number of
/// cliques of size ≤ r rather than to C(n,r).
struct RCliqueScan<'g> {
    g: &'g Graph,
    r: usize,
    words: usize,
    cur: Vec<u64>,
    levels: Vec<CandLevel>,
}

#[derive(Default)]
struct CandLevel {
    set: Vec<u64>,
    list: Vec<usize>,
}

impl<'g> RCliqueScan<'g> {
    fn new(g: &'g Graph, r: usize) -> Self {
        let n = g.node_count();
        assert!(r >= 1 && r <= n, "r = {r} outside 1..={n}");
        let words = g.row_words();
        let mut levels: Vec<CandLevel> = (0..=r)
            .map(|_| CandLevel { set: vec![0; words], list: Vec::new() })
            .collect();
        levels[0].set = full_set(n);
        RCliqueScan { g, r, words, cur: vec![0; words], levels }
    }

    fn run(&mut self, visit: &mut impl FnMut(&[u64]) -> bool) -> bool {
        self.descend(0, visit)
    }

    fn descend(&mut self, depth: usize, visit: &mut impl FnMut(&[u64]) -> bool) -> bool {
        if depth == self.r {
            return visit(&self.cur);
        }
        let CandLevel { set, mut list } = std::mem::take(&mut self.levels[depth]);
        list.clear();
        push_bits(&set, &mut list);
        let need = self.r - depth;
        let mut stopped = false;
        for (idx, &v) in list.iter().enumerate() {
            if list.len() - idx < need {
                break;
            }
            {
                let row = self.g.row(v);
                let child = &mut self.levels[depth + 1].set;
                let wv = v >> 6;
                for w in 0..self.words {
                    child[w] = if w < wv { 0 } else { set[w] & row[w] };
                }
                // keep only indices strictly above v
                let shift = (v & 63) + 1;
                child[wv] &= if shift == 64 { 0 } else { !0u64 << shift };
            }
            set_bit(&mut self.cur, v);
            stopped = self.descend(depth + 1, visit);
            clear_bit(&mut self.cur, v);
            if stopped {
                break;
            }
        }
        self.levels[depth] = CandLevel { set, list };
        stopped
    }
}

/// Counts of r-subsets that are maximal cliques / dominating cliques.
///
/// Returns `(maximal, dominating)`; the second counts subsets that are both
/// maximal and dominating, so it never exceeds the first.
pub fn count_maximal_and_dominating(g: &Graph, r: usize) -> (u64, u64) {
    let n = g.node_count();
    let mut maximal = 0u64;
    let mut dominating = 0u64;
    let mut scan = RCliqueScan::new(g, r);
    scan.run(&mut |clique| {
        let mut is_max = true;
        let mut is_dom = true;
        for u in 0..n {
            if test_bit(clique, u) {
                continue;
            }
            let c = and_popcount(g.row(u), clique);
            if c == r {
                is_max = false;
                break;
            }
            if c == 0 {
                is_dom = false;
            }
        }
        if is_max {
            maximal += 1;
            if is_dom {
                dominating += 1;
            }
        }
        false
    });
    (maximal, dominating)
}

/// Number of r-subsets that are complete and where every outside node has
/// between 1 and r−1 neighbors in the subset (maximal + dominating at once).
pub fn count_dominating_r_cliques(g: &Graph, r: usize) -> u64 {
    count_maximal_and_dominating(g, r).1
}

/// Number of r-subsets that are complete and unextendable.
pub fn count_maximal_r_cliques(g: &Graph, r: usize) -> u64 {
    count_maximal_and_dominating(g, r).0
}

/// True iff some complete r-subset dominates the graph. Maximality is *not*
/// required, which makes the property monotone under edge insertion; this is
/// the predicate behind the coupled monotonicity checks.
pub fn has_dominating_complete_set(g: &Graph, r: usize) -> bool {
    let n = g.node_count();
    let mut scan = RCliqueScan::new(g, r);
    scan.run(&mut |clique| {
        (0..n).all(|u| test_bit(clique, u) || and_popcount(g.row(u), clique) > 0)
    })
}

// ---- full maximal-clique enumeration --------------------------------------

/// Per-size tallies from one enumeration pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SizeCounts {
    /// Maximal cliques of this size.
    pub maximal: u64,
    /// Maximal cliques of this size that also dominate.
    pub dominating: u64,
}

/// Maximal-clique census of one graph, indexed by clique size 0..=n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCounts {
    pub by_size: Vec<SizeCounts>,
}

impl CliqueCounts {
    pub fn total_maximal(&self) -> u64 {
        self.by_size.iter().map(|s| s.maximal).sum()
    }

    /// Largest size with a maximal clique; 0 only for the empty graph.
    pub fn max_clique_size(&self) -> usize {
        (0..self.by_size.len())
            .rev()
            .find(|&r| self.by_size[r].maximal > 0)
            .unwrap_or(0)
    }
}

/// Enumerates every maximal clique once (pivoted recursion over bit-vector
/// candidate sets) and tallies sizes and domination.
pub fn enumerate_maximal_cliques(g: &Graph) -> CliqueCounts {
    let n = g.node_count();
    let mut by_size = vec![SizeCounts::default(); n + 1];
    if n > 0 {
        let words = g.row_words();
        let mut cur = vec![0u64; words];
        bron_kerbosch(g, &mut cur, 0, full_set(n), vec![0; words], &mut by_size);
    }
    CliqueCounts { by_size }
}

fn bron_kerbosch(
    g: &Graph,
    cur: &mut Vec<u64>,
    cur_size: usize,
    mut p: Vec<u64>,
    mut x: Vec<u64>,
    by_size: &mut [SizeCounts],
) {
    if is_empty(&p) && is_empty(&x) {
        by_size[cur_size].maximal += 1;
        let n = g.node_count();
        let dominates =
            (0..n).all(|u| test_bit(cur, u) || and_popcount(g.row(u), cur) > 0);
        if dominates {
            by_size[cur_size].dominating += 1;
        }
        return;
    }
    // pivot: the P∪X member covering the most of P prunes the most branches
    let mut pivot = usize::MAX;
    let mut covered = usize::MAX;
    let mut candidates = Vec::new();
    push_bits(&p, &mut candidates);
    let p_len = candidates.len();
    push_bits(&x, &mut candidates);
    for &u in &candidates {
        let c = and_popcount(&p, g.row(u));
        if pivot == usize::MAX || c > covered {
            pivot = u;
            covered = c;
        }
    }
    candidates.truncate(p_len);
    candidates.retain(|&v| !test_bit(g.row(pivot), v));
    for v in candidates {
        let row = g.row(v);
        let np: Vec<u64> = p.iter().zip(row).map(|(a, b)| a & b).collect();
        let nx: Vec<u64> = x.iter().zip(row).map(|(a, b)| a & b).collect();
        set_bit(cur, v);
        bron_kerbosch(g, cur, cur_size + 1, np, nx, by_size);
        clear_bit(cur, v);
        clear_bit(&mut p, v);
        set_bit(&mut x, v);
    }
}

// ---- maximum clique (branch and bound) -------------------------------------

/// Size of the largest clique, by branch and bound with greedy-coloring
/// bounds. Handles n = 500 at edge density 1/2 in well under a second.
pub fn clique_number(g: &Graph) -> usize {
    let n = g.node_count();
    assert!(n >= 1, "clique number needs at least one node");
    // dispatch on a power-of-two row width so the mask loops below all run a
    // compile-time trip count; MAX_NODES caps the widest case at 128 words
    match n.div_ceil(64) {
        1 => clique_number_w::<1>(g),
        2 => clique_number_w::<2>(g),
        3..=4 => clique_number_w::<4>(g),
        5..=8 => clique_number_w::<8>(g),
        9..=16 => clique_number_w::<16>(g),
        17..=32 => clique_number_w::<32>(g),
        33..=64 => clique_number_w::<64>(g),
        _ => clique_number_w::<128>(g),
    }
}

fn clique_number_w<const W: usize>(g: &Graph) -> usize {
    let n = g.node_count();
    debug_assert!(n <= W * 64);
    // relabel by descending degree: dense vertices first tightens the bounds
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut pos = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let mut adj = vec![[0u64; W]; n];
    for (new_i, &old_i) in order.iter().enumerate() {
        for old_j in 0..n {
            if old_j != old_i && g.has_edge(old_i, old_j) {
                adj[new_i][pos[old_j] >> 6] |= 1 << (pos[old_j] & 63);
            }
        }
    }
    // warm start: grow a clique greedily, always taking the candidate with the
    // most neighbours among the remaining candidates, so the search starts
    // from a realistic lower bound instead of 0
    let mut greedy = 0usize;
    {
        let mut cand = full_set_w::<W>(n);
        loop {
            let mut pick = usize::MAX;
            let mut pick_deg = 0usize;
            let mut any = false;
            for (w, &mask) in cand.iter().enumerate() {
                let mut m = mask;
                while m != 0 {
                    let v = (w << 6) + m.trailing_zeros() as usize;
                    m &= m - 1;
                    let row = &adj[v];
                    let mut deg = 0usize;
                    for i in 0..W {
                        deg += (cand[i] & row[i]).count_ones() as usize;
                    }
                    if !any || deg > pick_deg {
                        any = true;
                        pick = v;
                        pick_deg = deg;
                    }
                }
            }
            if !any {
                break;
            }
            greedy += 1;
            let row = &adj[pick];
            for i in 0..W {
                cand[i] &= row[i];
            }
        }
    }
    let mut solver = MaxCliqueSolver { adj, best: greedy, levels: Vec::new() };
    solver.ensure_level(0);
    solver.levels[0].p = full_set_w::<W>(n);
    solver.expand(0, 0);
    solver.best
}

struct MaxCliqueSolver<const W: usize> {
    adj: Vec<[u64; W]>,
    best: usize,
    levels: Vec<SolveLevel<W>>,
}

struct SolveLevel<const W: usize> {
    p: [u64; W],
    order: Vec<usize>,
    bounds: Vec<usize>,
    remaining: [u64; W],
    class: [u64; W],
}

impl<const W: usize> Default for SolveLevel<W> {
    fn default() -> Self {
        SolveLevel {
            p: [0; W],
            order: Vec::new(),
            bounds: Vec::new(),
            remaining: [0; W],
            class: [0; W],
        }
    }
}

impl<const W: usize> MaxCliqueSolver<W> {
    fn ensure_level(&mut self, depth: usize) {
        while self.levels.len() <= depth {
            self.levels.push(SolveLevel::default());
        }
    }

    fn expand(&mut self, depth: usize, size: usize) {
        self.ensure_level(depth + 1);
        let mut level = std::mem::take(&mut self.levels[depth]);
        // cardinality bound first: a popcount is far cheaper than a coloring
        let mut left = popcount_w(&level.p);
        if size + left <= self.best {
            self.levels[depth] = level;
            return;
        }
        // greedy coloring: emit one independent class at a time, so `order`
        // ends sorted by color and bounds[i] = color count up to position i
        level.order.clear();
        level.bounds.clear();
        level.remaining = level.p;
        let mut color = 0usize;
        while left > 0 {
            color += 1;
            level.class = level.remaining;
            // sweep the class left to right; `wi` never revisits cleared words
            let mut wi = 0;
            while wi < W {
                if level.class[wi] == 0 {
                    wi += 1;
                    continue;
                }
                let bit = level.class[wi].trailing_zeros() as usize;
                let v = (wi << 6) | bit;
                level.order.push(v);
                level.bounds.push(color);
                level.remaining[wi] &= !(1u64 << bit);
                level.class[wi] &= !(1u64 << bit);
                left -= 1;
                // drop v's neighbors; words before wi are already zero
                let row = &self.adj[v];
                for i in wi..W {
                    level.class[i] &= !row[i];
                }
            }
        }
        for i in (0..level.order.len()).rev() {
            // bounds ascend with i: once one fails, every earlier one fails
            if size + level.bounds[i] <= self.best {
                break;
            }
            let v = level.order[i];
            let mut nonempty = 0u64;
            {
                // index adj directly: a row() method would borrow all of self
                let row = &self.adj[v];
                let child = &mut self.levels[depth + 1].p;
                for k in 0..W {
                    child[k] = level.p[k] & row[k];
                    nonempty |= child[k];
                }
            }
            if nonempty == 0 {
                if size + 1 > self.best {
                    self.best = size + 1;
                }
            } else {
                self.expand(depth + 1, size + 1);
            }
            level.p[v >> 6] &= !(1u64 << (v & 63));
        }
        self.levels[depth] = level;
    }
}

#[inline]
fn popcount_w<const W: usize>(words: &[u64; W]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn full_set_w<const W: usize>(n: usize) -> [u64; W] {
    let mut s = [0u64; W];
    for v in 0..n {
        s[v >> 6] |= 1 << (v & 63);
    }
    s
}

// ---- exhaustive probability-weighted oracles --------------------------------

/// Per-edge-count integer tallies over every labeled graph on n nodes.
///
/// Counts depend only on the graph, so one enumeration pass serves every
/// (r, p) query: expectations are Σ_m tally[m][r] · p^m (1−p)^(M−m) with
/// M = C(n,2). All tallies are exact integers; only the final weighting is
/// floating point.
pub struct ExhaustiveTally {
    n: usize,
    pair_count: usize,
    // index [m][r]
    maximal: Vec<Vec<u64>>,
    dominating: Vec<Vec<u64>>,
    dominating_sq: Vec<Vec<u64>>,
}

/// Largest n the exhaustive oracles accept (2^C(6,2) = 32768 graphs).
pub const MAX_ORACLE_NODES: usize = 6;

impl ExhaustiveTally {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_ORACLE_NODES {
            return Err(Error::capacity(format!(
                "exhaustive oracle supports n ≤ {MAX_ORACLE_NODES}, got {n}"
            )));
        }
        if n < 2 {
            return Err(Error::domain(format!("exhaustive oracle needs n ≥ 2, got {n}")));
        }
        let pair_count = n * (n - 1) / 2;
        let mut maximal = vec![vec![0u64; n + 1]; pair_count + 1];
        let mut dominating = vec![vec![0u64; n + 1]; pair_count + 1];
        let mut dominating_sq = vec![vec![0u64; n + 1]; pair_count + 1];
        for g in all_graphs(n)? {
            let m = g.edge_count();
            for r in 1..=n {
                let (y, x) = count_maximal_and_dominating(&g, r);
                maximal[m][r] += y;
                dominating[m][r] += x;
                dominating_sq[m][r] += x * x;
            }
        }
        Ok(ExhaustiveTally { n, pair_count, maximal, dominating, dominating_sq })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    fn check_query(&self, r: usize, p: f64) -> Result<()> {
        if r < 1 || r > self.n {
            return Err(Error::domain(format!("r = {r} outside 1..={}", self.n)));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("p = {p} outside the open interval (0, 1)")));
        }
        Ok(())
    }

    fn weighted_sum(&self, table: &[Vec<u64>], r: usize, p: f64) -> f64 {
        (0..=self.pair_count)
            .map(|m| {
                table[m][r] as f64
                    * p.powi(m as i32)
                    * (1.0 - p).powi((self.pair_count - m) as i32)
            })
            .sum()
    }

    /// Exact expected number of dominating r-cliques under G(n,p).
    pub fn expected_dominating(&self, r: usize, p: f64) -> Result<f64> {
        self.check_query(r, p)?;
        Ok(self.weighted_sum(&self.dominating, r, p))
    }

    /// Exact expected number of maximal r-cliques under G(n,p).
    pub fn expected_maximal(&self, r: usize, p: f64) -> Result<f64> {
        self.check_query(r, p)?;
        Ok(self.weighted_sum(&self.maximal, r, p))
    }

    /// Exact second moment of the dominating r-clique count under G(n,p).
    pub fn second_moment_dominating(&self, r: usize, p: f64) -> Result<f64> {
        self.check_query(r, p)?;
        Ok(self.weighted_sum(&self.dominating_sq, r, p))
    }
}

/// One-shot exhaustive expectation of the dominating r-clique count.
pub fn exhaustive_expected_dominating_cliques(n: usize, r: usize, p: f64) -> Result<f64> {
    ExhaustiveTally::new(n)?.expected_dominating(r, p)
}

/// One-shot exhaustive expectation of the maximal r-clique count.
pub fn exhaustive_expected_maximal_cliques(n: usize, r: usize, p: f64) -> Result<f64> {
    ExhaustiveTally::new(n)?.expected_maximal(r, p)
}

/// One-shot exhaustive second moment of the dominating r-clique count.
pub fn exhaustive_second_moment_dominating_cliques(n: usize, r: usize, p: f64) -> Result<f64> {
    ExhaustiveTally::new(n)?.second_moment_dominating(r, p)
}
