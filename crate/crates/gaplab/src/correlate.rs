//! Correlated instance constructions.
//!
//! Three ways to build families of G(n, p) samples that agree on controlled
//! portions of their randomness, all phrased through the colexicographic
//! edge-label order (see [`crate::graph`]):
//!
//! * [`sample_2alpha`] — a pair sharing the first ⌊α·C(n, 2)⌋ labels and
//!   independent beyond them;
//! * [`interpolation_path`] — the single-label splice G^k between two
//!   endpoints, stepping from one to the other one pair at a time;
//! * [`sample_tree_family`] — a depth-N, branching-D tree of instances
//!   driven by a mesh 0 = α_0 < α_1 < ... < α_N = 1: the node at depth k on
//!   a root-to-leaf path owns the indicators of pairs (i, j), i < j, with
//!   ⌊α_{k-1} n⌋ < j ≤ ⌊α_k n⌋, so two leaves share exactly the pairs whose
//!   larger endpoint is at most ⌊α_m n⌋, where m is the depth of their
//!   deepest common ancestor.
//!
//! [`coupled_greedy_runs`] runs the greedy aligner on several leaves with
//! tie randomness attached to the owning tree node, so runs on leaves
//! meeting at depth m make identical choices through step ⌊α_m n⌋.

use crate::error::{Error, Result};
use crate::graph::{fill_bernoulli_range, pair_count, Graph};
use crate::greedy::{AlignmentResult, GreedyConfig, TieBreak};
use crate::rng::Seed;
use crate::thresholds::beta_c;
use serde::Serialize;

/// ⌊alpha · total⌋ with a relative guard against decimal representation
/// error (adequate for any total this crate can sample in practice).
fn scaled_floor_u64(alpha: f64, total: u64) -> u64 {
    debug_assert!((0.0..=1.0).contains(&alpha));
    let v = (alpha * total as f64 * (1.0 + 1e-12) + 1e-9).floor();
    (v.max(0.0) as u64).min(total)
}

/// The number of shared labels of a (2, α) pair on n vertices:
/// ⌊α · C(n, 2)⌋, with the same rounding [`sample_2alpha`] uses.
pub fn shared_label_count(n: usize, alpha: f64) -> Result<u64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!(
            "alpha must be in [0, 1], got {alpha}"
        )));
    }
    Ok(scaled_floor_u64(alpha, pair_count(n)))
}

/// The smallest j with C(j, 2) ≥ ⌊alpha · C(n, 2)⌋: the number of vertices
/// spanned by the shared label prefix of a (2, α) pair.
pub fn prefix_span(alpha: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!(
            "alpha must be in [0, 1], got {alpha}"
        )));
    }
    let m = scaled_floor_u64(alpha, pair_count(n));
    if m == 0 {
        return Ok(1);
    }
    // Smallest j with j(j-1)/2 >= m.
    let mut j = ((1.0 + (1.0 + 8.0 * m as f64).sqrt()) / 2.0).ceil() as u64;
    while j > 1 && (j - 1) * (j - 2) / 2 >= m {
        j -= 1;
    }
    while j * (j - 1) / 2 < m {
        j += 1;
    }
    Ok((j as usize).min(n))
}

/// Samples a (2, α) pair: two G(n, p) graphs whose indicators agree on
/// exactly the labels 1, ..., ⌊α·C(n, 2)⌋ by construction (one shared stream
/// fills the prefix of both bitmaps; two independent streams fill the
/// suffixes).
pub fn sample_2alpha(n: usize, p: f64, alpha: f64, seed: &Seed) -> Result<(Graph, Graph)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "edge probability p = {p} not in [0, 1]"
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!(
            "alpha must be in [0, 1], got {alpha}"
        )));
    }
    let total = pair_count(n);
    let m = scaled_floor_u64(alpha, total);
    let words = (total as usize).div_ceil(64);
    let mut shared = vec![0u64; words];
    if m > 0 {
        let mut rng = seed.child_tag("shared").rng();
        fill_bernoulli_range(&mut shared, 0, m - 1, p, &mut rng);
    }
    let build = |branch: u64| -> Graph {
        let mut bits = shared.clone();
        if m < total {
            let mut rng = seed.child_tag("only").child(branch).rng();
            fill_bernoulli_range(&mut bits, m, total - 1, p, &mut rng);
        }
        Graph::from_bits(n, bits)
    };
    Ok((build(0), build(1)))
}

/// The k-th graph on the single-label interpolation path from `g` to
/// `g_new`: labels 1, ..., k are taken from `g_new` and labels k+1, ...,
/// C(n, 2) from `g`. k = 0 returns `g`; k = C(n, 2) returns `g_new`.
pub fn interpolation_path(g: &Graph, g_new: &Graph, k: u64) -> Result<Graph> {
    if g.n() != g_new.n() {
        return Err(Error::size_mismatch(format!(
            "interpolation_path: {} vs {} vertices",
            g.n(),
            g_new.n()
        )));
    }
    let total = pair_count(g.n());
    if k > total {
        return Err(Error::invalid_input(format!(
            "interpolation index {k} exceeds C(n, 2) = {total}"
        )));
    }
    let words = (total as usize).div_ceil(64);
    let mut bits = vec![0u64; words];
    let full = (k / 64) as usize;
    bits[..full].copy_from_slice(&g_new.bit_words()[..full]);
    bits[full..].copy_from_slice(&g.bit_words()[full..]);
    let rem = k % 64;
    if rem > 0 {
        let mask = (1u64 << rem) - 1;
        bits[full] = (g_new.bit_words()[full] & mask) | (g.bit_words()[full] & !mask);
    }
    Ok(Graph::from_bits(g.n(), bits))
}

/// A mesh 0 = α_0 < α_1 < ... < α_N = 1 together with the derived branching
/// parameters: the Riemann sum Σ (α_k − α_{k-1}) √(α_k + α_{k-1}), the
/// tolerance split δ with 1 + δ = (β_c + 2ε/3) / (β_c + ε/3), and the
/// branching factor D, the smallest integer exceeding
/// max_k α_{k-1} / (2 δ (α_k − α_{k-1})).
#[derive(Debug, Clone, Serialize)]
pub struct AlphaSchedule {
    pub alphas: Vec<f64>,
    pub epsilon: f64,
    pub riemann_sum: f64,
    pub delta: f64,
    pub d_branch: u64,
}

impl AlphaSchedule {
    /// Builds the derived parameters from an explicit mesh.
    pub fn from_alphas(alphas: Vec<f64>, epsilon: f64) -> Result<Self> {
        if epsilon <= 0.0 {
            return Err(Error::domain(format!("epsilon must be > 0, got {epsilon}")));
        }
        if alphas.len() < 2 || alphas[0] != 0.0 || *alphas.last().unwrap() != 1.0 {
            return Err(Error::invalid_input(
                "mesh must run from 0.0 to 1.0 with at least one interval".to_string(),
            ));
        }
        if alphas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid_input(
                "mesh must be strictly increasing".to_string(),
            ));
        }
        let riemann_sum: f64 = alphas
            .windows(2)
            .map(|w| (w[1] - w[0]) * (w[1] + w[0]).sqrt())
            .sum();
        let delta = (epsilon / 3.0) / (beta_c() + epsilon / 3.0);
        let bound = alphas
            .windows(2)
            .map(|w| w[0] / (2.0 * delta * (w[1] - w[0])))
            .fold(0.0f64, f64::max);
        let d_branch = bound.floor() as u64 + 1;
        let schedule = AlphaSchedule {
            alphas,
            epsilon,
            riemann_sum,
            delta,
            d_branch,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Number of mesh intervals N (= tree depth).
    pub fn n_levels(&self) -> usize {
        self.alphas.len() - 1
    }

    /// Re-checks the defining inequalities: mesh monotone through [0, 1],
    /// Riemann sum strictly below β_c + ε/3, and D strictly above every
    /// α_{k-1} / (2 δ (α_k − α_{k-1})).
    // Negated comparisons so that NaN fields fail validation.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if self.alphas.len() < 2
            || self.alphas[0] != 0.0
            || *self.alphas.last().unwrap() != 1.0
            || self.alphas.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::invalid_input("invalid mesh".to_string()));
        }
        if !(self.riemann_sum < beta_c() + self.epsilon / 3.0) {
            return Err(Error::invalid_input(format!(
                "Riemann sum {} not below beta_c + epsilon/3 = {}",
                self.riemann_sum,
                beta_c() + self.epsilon / 3.0
            )));
        }
        for w in self.alphas.windows(2) {
            let need = w[0] / (2.0 * self.delta * (w[1] - w[0]));
            if !(self.d_branch as f64 > need) {
                return Err(Error::invalid_input(format!(
                    "branching factor {} not above {need}",
                    self.d_branch
                )));
            }
        }
        Ok(())
    }
}

/// Chooses the uniform mesh α_k = k/N with N = ⌈3/ε⌉ intervals. For the
/// uniform mesh the Riemann sum is within O(1/N²) of its limit 2/3·√8 = β_c,
/// so the defining inequality riemann_sum < β_c + ε/3 always holds with
/// room; the constructor re-verifies it.
pub fn choose_schedule(epsilon: f64) -> Result<AlphaSchedule> {
    if epsilon <= 0.0 {
        return Err(Error::domain(format!("epsilon must be > 0, got {epsilon}")));
    }
    let n_levels = (3.0 / epsilon).ceil() as usize;
    let alphas: Vec<f64> = (0..=n_levels).map(|k| k as f64 / n_levels as f64).collect();
    AlphaSchedule::from_alphas(alphas, epsilon)
}

/// A leaf of the instance tree, identified by its root-to-leaf child path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeafId(pub Vec<u32>);

impl std::fmt::Display for LeafId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "(root)");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl std::str::FromStr for LeafId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let comps: std::result::Result<Vec<u32>, _> =
            s.split('.').map(|t| t.parse::<u32>()).collect();
        comps
            .map(LeafId)
            .map_err(|_| Error::invalid_input(format!("bad leaf path {s:?}")))
    }
}

/// A tree-shaped family of correlated G(n, p) instances (see module docs).
/// Leaf graphs are assembled lazily: the family stores only parameters and
/// the seed, and every node's block is a deterministic function of its path.
#[derive(Debug, Clone)]
pub struct CorrelatedFamily {
    n: usize,
    p: f64,
    d: u64,
    alphas: Vec<f64>,
    /// t[l] = ⌊α_l n⌋: the vertex thresholds; level l owns pairs with larger
    /// endpoint in (t[l-1], t[l]].
    t: Vec<usize>,
    seed: Seed,
}

/// Builds the family determined by a schedule: depth = number of mesh
/// intervals, branching = the schedule's D.
pub fn sample_tree_family(
    n: usize,
    p: f64,
    schedule: &AlphaSchedule,
    seed: &Seed,
) -> Result<CorrelatedFamily> {
    schedule.validate()?;
    new_family(n, p, schedule.d_branch, schedule.alphas.clone(), seed)
}

/// Builds a family over the uniform mesh α_k = k/depth with an explicit
/// branching factor — the small-scale variant for tests and examples, where
/// the schedule-mandated D would make the tree astronomically wide.
pub fn sample_tree_family_custom(
    n: usize,
    p: f64,
    d: u64,
    depth: usize,
    seed: &Seed,
) -> Result<CorrelatedFamily> {
    if depth < 1 {
        return Err(Error::invalid_input("depth must be at least 1".to_string()));
    }
    let alphas: Vec<f64> = (0..=depth).map(|k| k as f64 / depth as f64).collect();
    new_family(n, p, d, alphas, seed)
}

fn new_family(n: usize, p: f64, d: u64, alphas: Vec<f64>, seed: &Seed) -> Result<CorrelatedFamily> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "edge probability p = {p} not in [0, 1]"
        )));
    }
    if d < 1 {
        return Err(Error::invalid_input(
            "branching factor must be at least 1".to_string(),
        ));
    }
    let t: Vec<usize> = alphas.iter().map(|&a| crate::scaled_floor(a, n)).collect();
    debug_assert_eq!(*t.last().unwrap(), n);
    Ok(CorrelatedFamily {
        n,
        p,
        d,
        alphas,
        t,
        seed: seed.clone(),
    })
}

impl CorrelatedFamily {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    /// Branching factor D.
    pub fn branching(&self) -> u64 {
        self.d
    }
    /// Tree depth N (leaves live at this depth).
    pub fn depth(&self) -> usize {
        self.alphas.len() - 1
    }
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }
    /// Vertex thresholds t_l = ⌊α_l n⌋, l = 0, ..., N.
    pub fn thresholds(&self) -> &[usize] {
        &self.t
    }

    /// D^N, the number of leaves.
    pub fn leaf_count(&self) -> u128 {
        (self.d as u128).pow(self.depth() as u32)
    }

    /// All leaves in lexicographic path order, provided there are at most
    /// `cap` of them.
    pub fn enumerate_leaves(&self, cap: usize) -> Result<Vec<LeafId>> {
        let count = self.leaf_count();
        if count > cap as u128 {
            return Err(Error::cap_exceeded(format!(
                "family has {count} leaves, cap is {cap}"
            )));
        }
        let depth = self.depth();
        let mut leaves = Vec::with_capacity(count as usize);
        let mut path = vec![0u32; depth];
        loop {
            leaves.push(LeafId(path.clone()));
            // Odometer increment.
            let mut level = depth;
            loop {
                if level == 0 {
                    return Ok(leaves);
                }
                level -= 1;
                path[level] += 1;
                if (path[level] as u64) < self.d {
                    break;
                }
                path[level] = 0;
            }
        }
    }

    fn check_leaf(&self, leaf: &LeafId) -> Result<()> {
        if leaf.0.len() != self.depth() {
            return Err(Error::invalid_input(format!(
                "leaf path has {} components, tree depth is {}",
                leaf.0.len(),
                self.depth()
            )));
        }
        if leaf.0.iter().any(|&c| c as u64 >= self.d) {
            return Err(Error::invalid_input(format!(
                "leaf path {leaf} has a component outside 0..{}",
                self.d
            )));
        }
        Ok(())
    }

    /// Materializes a leaf's instance: the union of its ancestors' blocks.
    /// The block of the depth-k ancestor fills the labels of pairs with
    /// larger endpoint in (t_{k-1}, t_k], drawn from a stream keyed by that
    /// ancestor's path — so leaves sharing an ancestor share its block bit
    /// for bit.
    pub fn leaf_graph(&self, leaf: &LeafId) -> Result<Graph> {
        self.check_leaf(leaf)?;
        let total = pair_count(self.n);
        let mut bits = vec![0u64; (total as usize).div_ceil(64)];
        for k in 1..=self.depth() {
            let lo = pair_count(self.t[k - 1]); // first 0-based bit of the block
            let hi = pair_count(self.t[k]); // one past the last
            if lo >= hi {
                continue;
            }
            let path: Vec<u64> = leaf.0[..k].iter().map(|&c| c as u64).collect();
            let stream = self.seed.child_tag("blk").descend(&path);
            let mut rng = stream.rng();
            fill_bernoulli_range(&mut bits, lo, hi - 1, self.p, &mut rng);
        }
        Ok(Graph::from_bits(self.n, bits))
    }

    /// Depth of the deepest common ancestor of two leaves.
    pub fn meet_depth(&self, u: &LeafId, v: &LeafId) -> Result<usize> {
        self.check_leaf(u)?;
        self.check_leaf(v)?;
        Ok(u.0
            .iter()
            .zip(v.0.iter())
            .take_while(|(a, b)| a == b)
            .count())
    }

    /// The vertex bound of guaranteed agreement for two leaves: their
    /// instances agree on every pair with larger endpoint ≤ this value, and
    /// coupled greedy runs on them agree on at least these positions (up to
    /// the greedy horizon).
    pub fn agreement_bound(&self, u: &LeafId, v: &LeafId) -> Result<usize> {
        Ok(self.t[self.meet_depth(u, v)?])
    }

    /// The level whose owner provides step s's tie randomness: the smallest
    /// l ≥ 1 with s ≤ t_l. Requires 1 ≤ s ≤ n.
    pub fn level_of_step(&self, s: usize) -> usize {
        debug_assert!(1 <= s && s <= self.n);
        self.t.iter().position(|&tl| s <= tl).expect("t ends at n")
    }

    /// A JSON manifest describing the family (parameters, mesh, thresholds,
    /// seed path, leaf count).
    pub fn manifest(&self) -> String {
        #[derive(Serialize)]
        struct Manifest<'a> {
            n: usize,
            p: f64,
            branching: u64,
            depth: usize,
            alphas: &'a [f64],
            vertex_thresholds: &'a [usize],
            seed_root: u64,
            seed_path: &'a [u64],
            leaf_count: String,
        }
        serde_json::to_string_pretty(&Manifest {
            n: self.n,
            p: self.p,
            branching: self.d,
            depth: self.depth(),
            alphas: &self.alphas,
            vertex_thresholds: &self.t,
            seed_root: self.seed.root(),
            seed_path: self.seed.path(),
            leaf_count: self.leaf_count().to_string(),
        })
        .expect("manifest serialization cannot fail")
    }
}

/// Runs the greedy aligner on each requested leaf against a common target
/// graph `h`, with step-s tie randomness drawn from the stream of the leaf's
/// depth-`level_of_step(s)` ancestor. Runs on leaves meeting at depth m
/// therefore make identical choices through step t_m (their instances agree
/// there and their streams coincide there).
///
/// Only [`TieBreak::UniformSample`] is meaningful here; the perturbed
/// variant's fixed matrix has no per-node decomposition.
pub fn coupled_greedy_runs(
    family: &CorrelatedFamily,
    h: &Graph,
    cfg: &GreedyConfig,
    leaves: &[LeafId],
) -> Result<Vec<AlignmentResult>> {
    if cfg.tie_break != TieBreak::UniformSample {
        return Err(Error::invalid_input(
            "coupled runs require the uniform tie rule".to_string(),
        ));
    }
    if h.n() != family.n {
        return Err(Error::size_mismatch(format!(
            "coupled_greedy_runs: target graph on {} vertices, family on {}",
            h.n(),
            family.n
        )));
    }
    let mut out = Vec::with_capacity(leaves.len());
    for leaf in leaves {
        family.check_leaf(leaf)?;
        let g = family.leaf_graph(leaf)?;
        let owner_root = family.seed.child_tag("ctie");
        let result = crate::greedy::run_with_tie_streams(&g, h, cfg, &|s| {
            let level = family.level_of_step(s);
            let prefix: Vec<u64> = leaf.0[..level].iter().map(|&c| c as u64).collect();
            owner_root.descend(&prefix).child(s as u64)
        })?;
        out.push(result);
    }
    Ok(out)
}
