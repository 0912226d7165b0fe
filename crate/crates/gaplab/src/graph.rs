//! Simple undirected graphs on {1, ..., n} with packed upper-triangular
//! storage, plus Erdős–Rényi sampling and overlap objectives.
//!
//! # Edge labels
//!
//! Unordered pairs (i, j) with 1 <= i < j <= n are numbered colexicographically:
//! label k = C(j-1, 2) + i, so k runs over 1, ..., C(n, 2) as
//! (1,2), (1,3), (2,3), (1,4), (2,4), (3,4), ...
//! Bit k-1 of the packed bitmap stores the indicator of pair with label k.
//! Two consequences are used throughout the crate:
//!
//! * the pairs contained in a prefix {1, ..., m} of labels are exactly the
//!   pairs with larger endpoint j <= j_m for a prefix of complete rows plus a
//!   partial row, so "first m labels" is a contiguous bit range;
//! * splicing two graphs at a label cutoff is a word-level copy.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rng::Seed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, Write};

/// C(n, 2) as u64: the number of unordered pairs, i.e. the largest edge label.
pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * (n.saturating_sub(1)) / 2
}

#[inline]
fn tri(j0: u64) -> u64 {
    j0 * (j0.saturating_sub(1)) / 2
}

/// The 1-based colexicographic label k = C(j-1, 2) + i of the pair (i, j).
/// Requires 1 <= i < j <= n.
pub fn edge_index(i: usize, j: usize, n: usize) -> Result<u64> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::invalid_input(format!(
            "pair ({i}, {j}) is not 1 <= i < j <= {n}"
        )));
    }
    Ok(tri(j as u64 - 1) + i as u64)
}

/// Inverse of [`edge_index`]: the pair (i, j) with label k, 1 <= k <= C(n, 2).
pub fn edge_pair(k: u64, n: usize) -> Result<(usize, usize)> {
    let total = pair_count(n);
    if k < 1 || k > total {
        return Err(Error::invalid_input(format!(
            "edge label {k} out of range 1..={total} for n = {n}"
        )));
    }
    let idx = k - 1;
    // Find j0 (= j - 1, 0-based larger endpoint) with tri(j0) <= idx < tri(j0 + 1).
    let s = (8 * idx + 1).isqrt();
    let mut j0 = s.div_ceil(2);
    while tri(j0) > idx {
        j0 -= 1;
    }
    while tri(j0 + 1) <= idx {
        j0 += 1;
    }
    let i0 = idx - tri(j0);
    Ok((i0 as usize + 1, j0 as usize + 1))
}

/// An undirected simple graph on vertices {1, ..., n}.
///
/// Stores both a packed adjacency bitmap (indexed by edge label) and sorted
/// neighbor lists, so membership tests, neighbor scans, and label-range
/// operations are all cheap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    bits: Vec<u64>,
    adj: Vec<Vec<u32>>, // 0-based, each sorted ascending
    edge_count: usize,
}

impl Graph {
    /// The empty graph on n vertices.
    pub fn empty(n: usize) -> Self {
        let words = (pair_count(n) as usize).div_ceil(64);
        Graph {
            n,
            bits: vec![0u64; words],
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from 1-based endpoint pairs. Rejects self-loops,
    /// out-of-range endpoints, and duplicate edges (in either orientation).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let words = (pair_count(n) as usize).div_ceil(64);
        let mut bits = vec![0u64; words];
        for &(a, b) in edges {
            if a == b {
                return Err(Error::invalid_input(format!("self-loop at vertex {a}")));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            let idx = edge_index(i, j, n)? - 1;
            let (w, o) = (idx as usize / 64, idx as usize % 64);
            if bits[w] >> o & 1 == 1 {
                return Err(Error::invalid_input(format!("duplicate edge ({i}, {j})")));
            }
            bits[w] |= 1u64 << o;
        }
        Ok(Graph::from_bits(n, bits))
    }

    /// Assembles the derived structures from a packed bitmap.
    pub(crate) fn from_bits(n: usize, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), (pair_count(n) as usize).div_ceil(64));
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut edge_count = 0usize;
        // Iterate labels in increasing order; see module docs for why the
        // resulting neighbor lists come out sorted without an explicit sort.
        let mut j0: u64 = 1; // current larger endpoint (0-based), row starts at tri(j0)
        for (w, &word) in bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let bit = word.trailing_zeros() as u64;
                word &= word - 1;
                let idx = (w as u64) * 64 + bit;
                while tri(j0 + 1) <= idx {
                    j0 += 1;
                }
                let i0 = idx - tri(j0);
                adj[i0 as usize].push(j0 as u32);
                adj[j0 as usize].push(i0 as u32);
                edge_count += 1;
            }
        }
        // Ascending label order already appends each vertex's neighbors in
        // ascending order; the sort is a cheap defensive pass that guarantees
        // the invariant independently of the enumeration argument.
        for list in adj.iter_mut() {
            debug_assert!(list.windows(2).all(|w| w[0] < w[1]));
            list.sort_unstable();
        }
        Graph {
            n,
            bits,
            adj,
            edge_count,
        }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Whether the (1-based) pair {i, j} is an edge. Order of endpoints is
    /// irrelevant; i == j returns false.
    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j || i < 1 || j < 1 || i > self.n || j > self.n {
            return false;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let idx = tri(j as u64 - 1) + i as u64 - 1;
        self.bits[idx as usize / 64] >> (idx % 64) & 1 == 1
    }

    /// 0-based bit test by 0-based pair (internal hot path).
    #[inline]
    pub(crate) fn has_edge0(&self, i0: usize, j0: usize) -> bool {
        let (i0, j0) = if i0 < j0 { (i0, j0) } else { (j0, i0) };
        let idx = tri(j0 as u64) + i0 as u64;
        self.bits[idx as usize / 64] >> (idx % 64) & 1 == 1
    }

    /// Degree of 1-based vertex v.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    /// Neighbors of 1-based vertex v, ascending, as 1-based labels.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v - 1].iter().map(|&u0| u0 as usize + 1)
    }

    /// 0-based sorted neighbor slice (internal hot path).
    #[inline]
    pub(crate) fn adj0(&self, v0: usize) -> &[u32] {
        &self.adj[v0]
    }

    /// Packed bitmap words (internal).
    pub(crate) fn bit_words(&self) -> &[u64] {
        &self.bits
    }

    /// Edges in lexicographic order of (i, j), 1-based.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i0| {
            let start = self.adj[i0].partition_point(|&j0| (j0 as usize) <= i0);
            self.adj[i0][start..]
                .iter()
                .map(move |&j0| (i0 + 1, j0 as usize + 1))
        })
    }

    /// Writes the edge-list format: a header line `n m`, then one line `i j`
    /// per edge with 1-based endpoints i < j, sorted lexicographically.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.n, self.edge_count)?;
        for (i, j) in self.edges() {
            writeln!(w, "{} {}", i, j)?;
        }
        Ok(())
    }

    /// The edge-list format as a string.
    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf)
            .expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    /// Parses the edge-list format produced by [`Graph::write_edge_list`].
    /// Blank lines and lines starting with `#` are skipped; edges may appear
    /// in any order but must be valid and distinct, and the count must match
    /// the header.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
        let mut lines = r
            .lines()
            .map(|l| l.map_err(Error::from))
            .filter(|l| match l {
                Ok(s) => {
                    let t = s.trim();
                    !t.is_empty() && !t.starts_with('#')
                }
                Err(_) => true,
            });
        let header = lines
            .next()
            .ok_or_else(|| Error::invalid_input("empty edge-list input"))??;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::invalid_input("bad header: expected `n m`"))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::invalid_input("bad header: expected `n m`"))?;
        if it.next().is_some() {
            return Err(Error::invalid_input("bad header: trailing tokens"));
        }
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let line = line?;
            let mut it = line.split_whitespace();
            let i: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::invalid_input(format!("bad edge line: {line:?}")))?;
            let j: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::invalid_input(format!("bad edge line: {line:?}")))?;
            if it.next().is_some() {
                return Err(Error::invalid_input(format!("bad edge line: {line:?}")));
            }
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(Error::invalid_input(format!(
                "header declares {m} edges but {} lines follow",
                edges.len()
            )));
        }
        Graph::from_edges(n, &edges)
    }

    /// Parses from a string.
    pub fn from_edge_list_str(s: &str) -> Result<Graph> {
        Graph::read_edge_list(s.as_bytes())
    }
}

/// Fills the 0-based bit range [lo, hi] (inclusive) with independent
/// Bernoulli(p) indicators using geometric skip sampling: successive gaps
/// between successes are Geometric(p), so the expected work is proportional
/// to the number of edges rather than the number of pairs.
pub(crate) fn fill_bernoulli_range(
    bits: &mut [u64],
    lo: u64,
    hi: u64,
    p: f64,
    rng: &mut ChaCha8Rng,
) {
    if lo > hi {
        return;
    }
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for idx in lo..=hi {
            bits[idx as usize / 64] |= 1u64 << (idx % 64);
        }
        return;
    }
    let log_q = (-p).ln_1p(); // ln(1 - p) < 0
    let mut cursor = lo;
    loop {
        // u in (0, 1]; gen::<f64>() is in [0, 1).
        let u = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor();
        // A huge skip can exceed u64 range; clamp through saturation.
        if skip >= (hi - cursor + 1) as f64 {
            return;
        }
        cursor += skip as u64;
        bits[cursor as usize / 64] |= 1u64 << (cursor % 64);
        if cursor == hi {
            return;
        }
        cursor += 1;
    }
}

/// Samples G(n, p): each of the C(n, 2) pairs is an edge independently with
/// probability p, drawn from the given seed's stream. The same (n, p, seed)
/// always yields the same graph.
pub fn sample_er(n: usize, p: f64, seed: &Seed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "edge probability p = {p} not in [0, 1]"
        )));
    }
    let total = pair_count(n);
    let words = (total as usize).div_ceil(64);
    let mut bits = vec![0u64; words];
    if total > 0 {
        let mut rng = seed.rng();
        fill_bernoulli_range(&mut bits, 0, total - 1, p, &mut rng);
    }
    Ok(Graph::from_bits(n, bits))
}

/// Whether two graphs agree on every pair with label ≤ m (word-level
/// comparison; the colex layout makes a label prefix a bit prefix).
pub fn agree_on_label_prefix(g: &Graph, h: &Graph, m: u64) -> Result<bool> {
    if g.n() != h.n() {
        return Err(Error::size_mismatch(format!(
            "agree_on_label_prefix: {} vs {} vertices",
            g.n(),
            h.n()
        )));
    }
    let total = pair_count(g.n());
    if m > total {
        return Err(Error::invalid_input(format!(
            "label prefix {m} exceeds C(n, 2) = {total}"
        )));
    }
    let full_words = (m / 64) as usize;
    if g.bits[..full_words] != h.bits[..full_words] {
        return Ok(false);
    }
    let rem = m % 64;
    if rem > 0 {
        let mask = (1u64 << rem) - 1;
        if g.bits[full_words] & mask != h.bits[full_words] & mask {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The alignment objective O(pi) = sum over i < j of G_{i,j} * H_{pi(i),pi(j)}:
/// the number of edges of `g` mapped onto edges of `h` by `pi`.
pub fn overlap(g: &Graph, h: &Graph, pi: &Permutation) -> Result<u64> {
    if g.n() != h.n() {
        return Err(Error::size_mismatch(format!(
            "overlap: graphs have {} vs {} vertices",
            g.n(),
            h.n()
        )));
    }
    if pi.n() != g.n() {
        return Err(Error::size_mismatch(format!(
            "overlap: permutation on {} elements vs graphs on {}",
            pi.n(),
            g.n()
        )));
    }
    let mut count = 0u64;
    for i0 in 0..g.n() {
        let pi_i0 = pi.img0(i0);
        let start = g.adj[i0].partition_point(|&j0| (j0 as usize) <= i0);
        for &j0 in &g.adj[i0][start..] {
            if h.has_edge0(pi_i0, pi.img0(j0 as usize)) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// The centered objective Õ(pi) = O(pi) - C(n, 2) p².
pub fn centered_overlap(g: &Graph, h: &Graph, pi: &Permutation, p: f64) -> Result<f64> {
    let o = overlap(g, h, pi)? as f64;
    Ok(o - pair_count(g.n()) as f64 * p * p)
}

/// |OL(G, pi)|: the number of pairs i < j with G_{i,j} = G_{pi(i),pi(j)} = 1,
/// i.e. edges of G mapped onto edges of G itself.
pub fn ol_count(g: &Graph, pi: &Permutation) -> Result<u64> {
    overlap(g, g, pi)
}

/// The pairs of OL(G, pi) in lexicographic order.
pub fn ol_pairs(g: &Graph, pi: &Permutation) -> Result<Vec<(usize, usize)>> {
    if pi.n() != g.n() {
        return Err(Error::size_mismatch(format!(
            "ol_pairs: permutation on {} elements vs graph on {}",
            pi.n(),
            g.n()
        )));
    }
    Ok(g.edges()
        .filter(|&(i, j)| g.has_edge0(pi.img0(i - 1), pi.img0(j - 1)))
        .collect())
}

/// E|OL(G, pi)| for G ~ G(n, p) and a fixed pi with F fixed points and T
/// transposition pairs: [C(F, 2) + T] (p - p²) + C(n, 2) p².
pub fn expected_ol(
    n: usize,
    p: f64,
    fixed_points: usize,
    transposition_pairs: usize,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "edge probability p = {p} not in [0, 1]"
        )));
    }
    if fixed_points > n || transposition_pairs > n / 2 {
        return Err(Error::invalid_input(format!(
            "F = {fixed_points}, T = {transposition_pairs} impossible for n = {n}"
        )));
    }
    let f = fixed_points as f64;
    let t = transposition_pairs as f64;
    Ok((f * (f - 1.0) / 2.0 + t) * (p - p * p) + pair_count(n) as f64 * p * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_enumerate_colex() {
        // (1,2) (1,3) (2,3) (1,4) (2,4) (3,4) for n = 4.
        let expect = [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)];
        for (k, &(i, j)) in expect.iter().enumerate() {
            let k = k as u64 + 1;
            assert_eq!(edge_index(i, j, 4).unwrap(), k);
            assert_eq!(edge_pair(k, 4).unwrap(), (i, j));
        }
    }

    #[test]
    fn labels_round_trip_exhaustively() {
        for n in [2usize, 3, 5, 17, 64, 101] {
            for k in 1..=pair_count(n) {
                let (i, j) = edge_pair(k, n).unwrap();
                assert!(1 <= i && i < j && j <= n);
                assert_eq!(edge_index(i, j, n).unwrap(), k);
            }
        }
    }

    #[test]
    fn label_bounds_rejected() {
        assert!(edge_index(2, 2, 4).is_err());
        assert!(edge_index(3, 2, 4).is_err());
        assert!(edge_index(1, 5, 4).is_err());
        assert!(edge_pair(0, 4).is_err());
        assert!(edge_pair(7, 4).is_err());
    }

    #[test]
    fn from_edges_and_queries() {
        let g = Graph::from_edges(5, &[(1, 2), (4, 2), (3, 5)]).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(2, 1));
        assert!(g.has_edge(2, 4));
        assert!(!g.has_edge(1, 3));
        assert!(!g.has_edge(2, 2));
        assert_eq!(g.degree(2), 2);
        let nbrs: Vec<usize> = g.neighbors(2).collect();
        assert_eq!(nbrs, vec![1, 4]);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(1, 2), (2, 4), (3, 5)]);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(4, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(4, &[(1, 5)]).is_err());
        assert!(Graph::from_edges(4, &[(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(6, &[(1, 6), (2, 3), (2, 5), (4, 6)]).unwrap();
        let s = g.to_edge_list_string();
        assert!(s.starts_with("6 4\n"));
        let h = Graph::from_edge_list_str(&s).unwrap();
        assert_eq!(g, h);
        // Order-insensitive parse, comments and blanks tolerated.
        let shuffled = "6 4\n# comment\n4 6\n\n2 3\n1 6\n2 5\n";
        assert_eq!(Graph::from_edge_list_str(shuffled).unwrap(), g);
        // Count mismatch rejected.
        assert!(Graph::from_edge_list_str("6 3\n1 2\n").is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_p_extremes_work() {
        let s = Seed::new(11).child_tag("er");
        let g1 = sample_er(40, 0.2, &s).unwrap();
        let g2 = sample_er(40, 0.2, &s).unwrap();
        assert_eq!(g1, g2);
        let g3 = sample_er(40, 0.2, &s.child(1)).unwrap();
        assert_ne!(g1, g3);
        assert_eq!(sample_er(10, 0.0, &s).unwrap().edge_count(), 0);
        assert_eq!(sample_er(10, 1.0, &s).unwrap().edge_count(), 45);
        assert!(sample_er(10, 1.5, &s).is_err());
    }

    #[test]
    fn sampling_density_is_plausible() {
        // Crude 6-sigma band around the mean edge count.
        let n = 200;
        let p = 0.1;
        let g = sample_er(n, p, &Seed::new(3)).unwrap();
        let mean = pair_count(n) as f64 * p;
        let sd = (pair_count(n) as f64 * p * (1.0 - p)).sqrt();
        let got = g.edge_count() as f64;
        assert!(
            (got - mean).abs() < 6.0 * sd,
            "edge count {got} vs mean {mean}"
        );
    }

    #[test]
    fn overlap_small_hand_case() {
        // g: path 1-2-3; h: triangle. pi = identity maps both path edges onto
        // triangle edges.
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let h = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let id = Permutation::identity(3);
        assert_eq!(overlap(&g, &h, &id).unwrap(), 2);
        // pi = (1 3) swaps endpoints; path edges map to (3,2) and (2,1): both
        // still triangle edges.
        let swap = Permutation::from_word(&[3, 2, 1]).unwrap();
        assert_eq!(overlap(&g, &h, &swap).unwrap(), 2);
        // Remove one triangle edge; identity now scores 1.
        let h2 = Graph::from_edges(3, &[(1, 2), (1, 3)]).unwrap();
        assert_eq!(overlap(&g, &h2, &id).unwrap(), 1);
    }

    #[test]
    fn overlap_direction_symmetry() {
        // O(g, h, pi) = O(h, g, pi^{-1}).
        let s = Seed::new(77);
        let g = sample_er(30, 0.3, &s.child(0)).unwrap();
        let h = sample_er(30, 0.3, &s.child(1)).unwrap();
        let pi = Permutation::random(30, &s.child(2));
        assert_eq!(
            overlap(&g, &h, &pi).unwrap(),
            overlap(&h, &g, &pi.inverse()).unwrap()
        );
    }

    #[test]
    fn centered_overlap_subtracts_mean() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let id = Permutation::identity(3);
        let c = centered_overlap(&g, &g, &id, 0.5).unwrap();
        assert!((c - (2.0 - 3.0 * 0.25)).abs() < 1e-12);
    }

    #[test]
    fn ol_matches_definition() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let pi = Permutation::from_word(&[2, 1, 4, 3]).unwrap();
        // Edge (1,2) -> (2,1): edge. (2,3) -> (1,4): non-edge. (3,4) -> (4,3): edge.
        assert_eq!(ol_count(&g, &pi).unwrap(), 2);
        assert_eq!(ol_pairs(&g, &pi).unwrap(), vec![(1, 2), (3, 4)]);
    }

    #[test]
    fn expected_ol_frozen_value() {
        // n = 10, p = 0.3, F = 6, T = 2:
        // (C(6,2) + 2)(0.3 - 0.09) + 45 * 0.09 = 17 * 0.21 + 4.05 = 7.62.
        let v = expected_ol(10, 0.3, 6, 2).unwrap();
        assert!((v - 7.62).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn size_mismatches_are_reported() {
        let g = Graph::empty(4);
        let h = Graph::empty(5);
        let pi = Permutation::identity(4);
        assert!(overlap(&g, &h, &pi).is_err());
        let pi5 = Permutation::identity(5);
        assert!(overlap(&g, &g, &pi5).is_err());
    }
}
