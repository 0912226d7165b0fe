//! Exact oracles and forbidden-structure detectors.
//!
//! Everything here enumerates permutations, so it only runs at small n
//! (every entry point takes an explicit cap). Enumeration uses the
//! Steinhaus–Johnson–Trotter order: successive permutations differ by one
//! adjacent transposition, so the objective is maintained incrementally in
//! O(degree) per permutation instead of O(n²).
//!
//! Detectors:
//!
//! * [`detect_forbidden_2ogp`] — a pair of near-maximizers of two correlated
//!   instances whose mutual overlap falls in the forbidden middle band
//!   ((ρ₀ − η)n, (ρ₀ + η)n);
//! * [`interpolation_ogp_scan`] — the four events (band freedom along an
//!   interpolation path, algorithm success, algorithm stability, separated
//!   endpoints) whose conjunction is impossible;
//! * [`detect_forbidden_branching`] — a consistent family of near-maximizers
//!   across the leaves of a correlated tree family, where consistency means
//!   agreement of leaf permutations through the vertex threshold of their
//!   meet.

use crate::correlate::{interpolation_path, CorrelatedFamily, LeafId};
use crate::error::{Error, Result};
use crate::graph::{pair_count, Graph};
use crate::perm::{permutation_distance, permutation_overlap, Permutation};
use crate::thresholds::{d_np, s_np, Regime};
use rayon::prelude::*;

const MASK_CAP: usize = 31;

/// Steinhaus–Johnson–Trotter enumeration over an arbitrary set of distinct
/// values: after construction the current arrangement is the initial one;
/// each `next_swap` performs one adjacent transposition and returns its left
/// position, until all arrangements have been visited.
struct Sjt {
    vals: Vec<u32>,
    dirs: Vec<i8>, // -1 left, +1 right, attached to vals positions
}

impl Sjt {
    fn new(vals: Vec<u32>) -> Self {
        let n = vals.len();
        Sjt {
            vals,
            dirs: vec![-1; n],
        }
    }

    /// Performs the next adjacent swap and returns its left index, or None
    /// when the enumeration is exhausted.
    fn next_swap(&mut self) -> Option<usize> {
        let n = self.vals.len();
        // Largest mobile value: direction points at a smaller adjacent value.
        let mut mobile: Option<usize> = None;
        for i in 0..n {
            let j = if self.dirs[i] < 0 {
                if i == 0 {
                    continue;
                }
                i - 1
            } else {
                if i + 1 >= n {
                    continue;
                }
                i + 1
            };
            if self.vals[j] < self.vals[i] && mobile.is_none_or(|m| self.vals[m] < self.vals[i]) {
                mobile = Some(i);
            }
        }
        let i = mobile?;
        let moving = self.vals[i];
        let j = if self.dirs[i] < 0 { i - 1 } else { i + 1 };
        self.vals.swap(i, j);
        self.dirs.swap(i, j);
        // Reverse direction of everything larger than the moved value.
        for k in 0..n {
            if self.vals[k] > moving {
                self.dirs[k] = -self.dirs[k];
            }
        }
        Some(i.min(j))
    }
}

/// Adjacency bitmask rows (bit k of row v set iff {v+1, k+1} is an edge).
pub(crate) fn mask_rows(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut rows = vec![0u32; n];
    for (v0, row) in rows.iter_mut().enumerate() {
        for &u0 in g.adj0(v0) {
            *row |= 1u32 << u0;
        }
    }
    rows
}

/// Objective of an image array under bitmask rows.
// q doubles as a bit position in `grow[p]`, so the index loop is the
// natural form.
#[allow(clippy::needless_range_loop)]
fn overlap_of(grow: &[u32], hrow: &[u32], img: &[u32]) -> u64 {
    let n = img.len();
    let mut o = 0u64;
    for p in 0..n {
        let hp = hrow[img[p] as usize];
        for q in (p + 1)..n {
            if (grow[p] >> q) & 1 == 1 && (hp >> img[q]) & 1 == 1 {
                o += 1;
            }
        }
    }
    o
}

/// Objective change from swapping img[p] and img[p+1] (computed before the
/// swap is applied): only cross terms against other positions move, and only
/// positions adjacent to exactly one of p, p+1 in G contribute.
#[inline]
fn swap_delta(grow: &[u32], hrow: &[u32], img: &[u32], p: usize) -> i64 {
    let a = img[p] as usize;
    let b = img[p + 1] as usize;
    let ha = hrow[a];
    let hb = hrow[b];
    let mut diff = (grow[p] ^ grow[p + 1]) & !(1u32 << p) & !(1u32 << (p + 1));
    let mut delta = 0i64;
    while diff != 0 {
        let k = diff.trailing_zeros() as usize;
        diff &= diff - 1;
        let m = img[k];
        let t = ((hb >> m) & 1) as i64 - ((ha >> m) & 1) as i64;
        if (grow[p] >> k) & 1 == 1 {
            delta += t;
        } else {
            delta -= t;
        }
    }
    delta
}

/// Visits every permutation of {1, ..., n} as (0-based image array,
/// objective), starting from a given arrangement of the positions
/// `offset..n` (earlier positions stay fixed throughout).
pub(crate) fn visit_arrangements(
    grow: &[u32],
    hrow: &[u32],
    img: &mut [u32],
    offset: usize,
    mut visit: impl FnMut(&[u32], u64),
) {
    let mut o = overlap_of(grow, hrow, img) as i64;
    visit(img, o as u64);
    let mut sjt = Sjt::new(img[offset..].to_vec());
    while let Some(p) = sjt.next_swap() {
        let p = p + offset;
        o += swap_delta(grow, hrow, img, p);
        img.swap(p, p + 1);
        debug_assert!(o >= 0);
        visit(img, o as u64);
    }
}

/// Result of a brute-force maximization.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    /// max over all permutations of O(pi).
    pub max_overlap: u64,
    /// The lexicographically first maximizer (by its word).
    pub argmax: Permutation,
    /// Number of permutations attaining the maximum.
    pub tie_count: u64,
    /// Number of permutations enumerated (= n!).
    pub enumerated: u64,
}

/// Exhaustively maximizes O(pi) over all n! permutations. Requires
/// n ≤ cap (and n ≤ 31 structurally); practical up to n ≈ 10. Parallelizes
/// over the image of position 1 with a deterministic reduction, so the
/// result does not depend on the worker count.
pub fn brute_max_overlap(g: &Graph, h: &Graph, cap: usize) -> Result<BruteForceResult> {
    if g.n() != h.n() {
        return Err(Error::size_mismatch(format!(
            "brute_max_overlap: {} vs {} vertices",
            g.n(),
            h.n()
        )));
    }
    let n = g.n();
    if n > cap {
        return Err(Error::cap_exceeded(format!(
            "brute_max_overlap: n = {n} exceeds cap {cap}"
        )));
    }
    if n > MASK_CAP {
        return Err(Error::cap_exceeded(format!(
            "brute_max_overlap: n = {n} exceeds the structural cap {MASK_CAP}"
        )));
    }
    if n == 0 {
        return Ok(BruteForceResult {
            max_overlap: 0,
            argmax: Permutation::identity(0),
            tie_count: 1,
            enumerated: 1,
        });
    }
    let grow = mask_rows(g);
    let hrow = mask_rows(h);

    struct Branch {
        max: u64,
        best: Vec<u32>,
        ties: u64,
        count: u64,
    }

    let branches: Vec<Branch> = (0..n as u32)
        .into_par_iter()
        .map(|first| {
            let mut img: Vec<u32> = Vec::with_capacity(n);
            img.push(first);
            img.extend((0..n as u32).filter(|&v| v != first));
            let mut max = 0u64;
            let mut best: Vec<u32> = img.clone();
            let mut ties = 0u64;
            let mut count = 0u64;
            let mut first_seen = true;
            visit_arrangements(&grow, &hrow, &mut img, 1, |im, o| {
                count += 1;
                if first_seen || o > max {
                    max = o;
                    best.copy_from_slice(im);
                    ties = 1;
                    first_seen = false;
                } else if o == max {
                    ties += 1;
                    if im < best.as_slice() {
                        best.copy_from_slice(im);
                    }
                }
            });
            Branch {
                max,
                best,
                ties,
                count,
            }
        })
        .collect();

    let mut total = 0u64;
    let mut max = 0u64;
    let mut best: Option<Vec<u32>> = None;
    let mut ties = 0u64;
    for br in branches {
        total += br.count;
        match best {
            None => {
                max = br.max;
                best = Some(br.best);
                ties = br.ties;
            }
            Some(ref mut b) => {
                if br.max > max {
                    max = br.max;
                    *b = br.best;
                    ties = br.ties;
                } else if br.max == max {
                    ties += br.ties;
                    if br.best.as_slice() < b.as_slice() {
                        *b = br.best;
                    }
                }
            }
        }
    }
    let expected: u64 = (1..=n as u64).product();
    debug_assert_eq!(total, expected);
    Ok(BruteForceResult {
        max_overlap: max,
        argmax: Permutation::from_images_unchecked(best.expect("n >= 1")),
        tie_count: ties,
        enumerated: total,
    })
}

/// The set of β-near-maximizers at a given centered threshold.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    /// The centered threshold the set was built with.
    pub threshold_centered: f64,
    /// The equivalent integer bar on the raw objective: members satisfy
    /// O(pi) ≥ min_overlap.
    pub min_overlap: u64,
    pub count: u64,
    /// Members sorted by word, lexicographically.
    pub members: Vec<Permutation>,
}

impl SolutionSet {
    pub fn contains(&self, pi: &Permutation) -> bool {
        self.members
            .binary_search_by(|m| m.images0().cmp(pi.images0()))
            .is_ok()
    }
}

/// Enumerates S = {pi : O(pi) − C(n, 2) p² ≥ threshold_centered} by full
/// enumeration (n ≤ cap ≤ 31 required; practical up to n ≈ 9). The
/// threshold comparison places the integer bar at
/// ceil(threshold + C(n, 2) p² − 10⁻⁹), so boundary values within 10⁻⁹ count
/// as inside.
pub fn enumerate_solution_set_absolute(
    g: &Graph,
    h: &Graph,
    p: f64,
    threshold_centered: f64,
    cap: usize,
) -> Result<SolutionSet> {
    if g.n() != h.n() {
        return Err(Error::size_mismatch(format!(
            "enumerate_solution_set: {} vs {} vertices",
            g.n(),
            h.n()
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "edge probability p = {p} not in [0, 1]"
        )));
    }
    let n = g.n();
    if n > cap {
        return Err(Error::cap_exceeded(format!(
            "enumerate_solution_set: n = {n} exceeds cap {cap}"
        )));
    }
    if n > MASK_CAP {
        return Err(Error::cap_exceeded(format!(
            "enumerate_solution_set: n = {n} exceeds the structural cap {MASK_CAP}"
        )));
    }
    let bar = threshold_centered + pair_count(n) as f64 * p * p;
    let min_overlap = (bar - 1e-9).ceil().max(0.0) as u64;
    let mut members: Vec<Vec<u32>> = Vec::new();
    if n == 0 {
        if min_overlap == 0 {
            members.push(Vec::new());
        }
    } else {
        let grow = mask_rows(g);
        let hrow = mask_rows(h);
        let mut img: Vec<u32> = (0..n as u32).collect();
        visit_arrangements(&grow, &hrow, &mut img, 0, |im, o| {
            if o >= min_overlap {
                members.push(im.to_vec());
            }
        });
    }
    members.sort_unstable();
    let count = members.len() as u64;
    Ok(SolutionSet {
        threshold_centered,
        min_overlap,
        count,
        members: members
            .into_iter()
            .map(Permutation::from_images_unchecked)
            .collect(),
    })
}

/// [`enumerate_solution_set_absolute`] with the threshold expressed as
/// β times the regime scale (S_{n,p} or D_{n,p}); the critical regime has no
/// scale and is rejected.
pub fn enumerate_solution_set(
    g: &Graph,
    h: &Graph,
    p: f64,
    beta: f64,
    regime: Regime,
    cap: usize,
) -> Result<SolutionSet> {
    let scale = match regime {
        Regime::Sparse => s_np(g.n(), p)?,
        Regime::Dense => d_np(g.n(), p)?,
        Regime::Critical => {
            return Err(Error::domain(
                "no scale is defined in the critical window; use an absolute threshold".to_string(),
            ))
        }
    };
    enumerate_solution_set_absolute(g, h, p, beta * scale, cap)
}

/// Parameters of the forbidden middle band: near-maximizer pairs with
/// mutual overlap in ((ρ₀ − η)n, (ρ₀ + η)n) are the forbidden structure.
#[derive(Debug, Clone, Copy)]
pub struct ForbiddenBandConfig {
    pub rho0: f64,
    pub beta0: f64,
    pub eta: f64,
}

impl Default for ForbiddenBandConfig {
    fn default() -> Self {
        ForbiddenBandConfig {
            rho0: 1.0 / 3.0,
            beta0: 0.97,
            eta: 0.01,
        }
    }
}

impl ForbiddenBandConfig {
    /// Checks the defining constraints: √(25/27) < β₀ < 1, 0 < ρ₀,
    /// 0 < η, ρ₀ + η < 1, and the band inequality
    /// 2 − ρ₀ + η − 2β₀²/(1 + (ρ₀ + η)²) < 0.
    // Negated comparisons so that NaN fields fail validation.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let lo = (25.0f64 / 27.0).sqrt();
        if !(self.beta0 > lo && self.beta0 < 1.0) {
            return Err(Error::invalid_input(format!(
                "beta0 = {} outside (sqrt(25/27), 1) = ({lo}, 1)",
                self.beta0
            )));
        }
        if !(self.rho0 > 0.0 && self.eta > 0.0 && self.rho0 + self.eta < 1.0) {
            return Err(Error::invalid_input(format!(
                "need 0 < rho0, 0 < eta, rho0 + eta < 1; got rho0 = {}, eta = {}",
                self.rho0, self.eta
            )));
        }
        let lhs = 2.0 - self.rho0 + self.eta
            - 2.0 * self.beta0 * self.beta0 / (1.0 + (self.rho0 + self.eta).powi(2));
        if !(lhs < 0.0) {
            return Err(Error::invalid_input(format!(
                "band inequality violated: 2 − ρ₀ + η − 2β₀²/(1 + (ρ₀+η)²) = {lhs} ≥ 0"
            )));
        }
        Ok(())
    }

    /// Whether an integer overlap value lies strictly inside the band
    /// ((ρ₀ − η)n, (ρ₀ + η)n). A 10⁻⁶ inward guard resolves floating-point
    /// representation of the bounds: exact-boundary values count as outside,
    /// which matches the open interval.
    pub fn in_band(&self, overlap: usize, n: usize) -> bool {
        let lo = (self.rho0 - self.eta) * n as f64;
        let hi = (self.rho0 + self.eta) * n as f64;
        let x = overlap as f64;
        x > lo + 1e-6 && x < hi - 1e-6
    }
}

/// Searches for the forbidden two-instance structure: pi1 a near-maximizer
/// for (g1, h), pi2 for (g2, h), with permutation overlap strictly inside
/// the band. Returns the lexicographically first witness pair, if any.
pub fn detect_forbidden_2ogp(
    g1: &Graph,
    g2: &Graph,
    h: &Graph,
    p: f64,
    band: &ForbiddenBandConfig,
    threshold_centered: f64,
    cap: usize,
) -> Result<Option<(Permutation, Permutation)>> {
    band.validate()?;
    let s1 = enumerate_solution_set_absolute(g1, h, p, threshold_centered, cap)?;
    let s2 = enumerate_solution_set_absolute(g2, h, p, threshold_centered, cap)?;
    let n = g1.n();
    for pi1 in &s1.members {
        for pi2 in &s2.members {
            let ov = permutation_overlap(pi1, pi2)?;
            if band.in_band(ov, n) {
                return Ok(Some((pi1.clone(), pi2.clone())));
            }
        }
    }
    Ok(None)
}

/// The four events evaluated along a single-label interpolation path between
/// two instances (see [`interpolation_ogp_scan`]).
#[derive(Debug, Clone, serde::Serialize)]
pub struct OgpScanReport {
    pub n: usize,
    /// Number of path points (C(n, 2) + 1).
    pub path_len: usize,
    pub threshold_centered: f64,
    /// Band freedom: no path point admits a forbidden pair against the
    /// first endpoint. None when n exceeded the enumeration cap.
    pub ogp_holds: Option<bool>,
    /// Index of the first path point with a forbidden pair, if any.
    pub first_band_hit: Option<usize>,
    /// The algorithm produced a near-maximizer at every path point.
    pub success_holds: bool,
    /// Consecutive algorithm outputs moved by at most η n.
    pub stable_holds: bool,
    /// The endpoint outputs overlap in at most (ρ₀ − η) n positions.
    pub ends_separated: bool,
    /// d(A_k, A_{k+1}) for each consecutive pair.
    pub consecutive_distances: Vec<usize>,
    /// Centered objective of the algorithm output at each path point.
    pub algo_centered: Vec<f64>,
    /// overlap(A_0, A_N).
    pub end_overlap: usize,
}

impl OgpScanReport {
    /// The conjunction of all four events — provably empty, so this must
    /// never return true when `ogp_holds` was evaluated.
    pub fn four_event_conjunction(&self) -> bool {
        self.ogp_holds == Some(true)
            && self.success_holds
            && self.stable_holds
            && self.ends_separated
    }
}

/// Walks the interpolation path G^0, ..., G^{C(n,2)} from `g0` to `g1`, runs
/// `algo` at every point, and evaluates the four events. The enumeration
/// behind the band-freedom event runs only when n ≤ enum_cap (the
/// algorithmic events have no size restriction).
///
/// `algo` receives the path index and the pair (G^k, h) and must be
/// deterministic given its arguments.
#[allow(clippy::too_many_arguments)]
pub fn interpolation_ogp_scan(
    g0: &Graph,
    g1: &Graph,
    h: &Graph,
    p: f64,
    band: &ForbiddenBandConfig,
    threshold_centered: f64,
    algo: &mut dyn FnMut(usize, &Graph, &Graph) -> Result<Permutation>,
    enum_cap: usize,
) -> Result<OgpScanReport> {
    band.validate()?;
    if g0.n() != g1.n() || g0.n() != h.n() {
        return Err(Error::size_mismatch(
            "interpolation_ogp_scan: all graphs must share n".to_string(),
        ));
    }
    let n = g0.n();
    let total = pair_count(n);
    let path_len = total as usize + 1;
    let mean = pair_count(n) as f64 * p * p;

    let mut outputs: Vec<Permutation> = Vec::with_capacity(path_len);
    let mut algo_centered = Vec::with_capacity(path_len);
    let mut success_holds = true;
    let enumerate = n <= enum_cap;
    let mut s0: Option<SolutionSet> = None;
    let mut ogp_holds = if enumerate { Some(true) } else { None };
    let mut first_band_hit = None;

    for k in 0..path_len {
        let gk = interpolation_path(g0, g1, k as u64)?;
        let pi = algo(k, &gk, h)?;
        if pi.n() != n {
            return Err(Error::size_mismatch(
                "algorithm returned a permutation of the wrong size".to_string(),
            ));
        }
        let centered = crate::graph::overlap(&gk, h, &pi)? as f64 - mean;
        if centered < threshold_centered - 1e-9 {
            success_holds = false;
        }
        algo_centered.push(centered);
        outputs.push(pi);

        if enumerate {
            let sk = enumerate_solution_set_absolute(&gk, h, p, threshold_centered, enum_cap)?;
            if k == 0 {
                s0 = Some(sk.clone());
            }
            let s0 = s0.as_ref().expect("set at k = 0 stored");
            'scan: for pi1 in &s0.members {
                for pi2 in &sk.members {
                    if band.in_band(permutation_overlap(pi1, pi2)?, n) {
                        if ogp_holds == Some(true) {
                            ogp_holds = Some(false);
                            first_band_hit = Some(k);
                        }
                        break 'scan;
                    }
                }
            }
        }
    }

    let consecutive_distances: Vec<usize> = outputs
        .windows(2)
        .map(|w| permutation_distance(&w[0], &w[1]))
        .collect::<Result<_>>()?;
    let stable_holds = consecutive_distances
        .iter()
        .all(|&d| d as f64 <= band.eta * n as f64 + 1e-9);
    let end_overlap = permutation_overlap(&outputs[0], &outputs[path_len - 1])?;
    let ends_separated = end_overlap as f64 <= (band.rho0 - band.eta) * n as f64 + 1e-9;

    Ok(OgpScanReport {
        n,
        path_len,
        threshold_centered,
        ogp_holds,
        first_band_hit,
        success_holds,
        stable_holds,
        ends_separated,
        consecutive_distances,
        algo_centered,
        end_overlap,
    })
}

/// A consistent assignment of near-maximizers to tree-family leaves:
/// leaf permutations agree position-by-position through the vertex
/// threshold at their meet.
pub type BranchingWitness = Vec<(LeafId, Permutation)>;

/// Verifies a claimed branching witness against its family: every leaf's
/// permutation must clear the centered threshold on that leaf's instance,
/// and every pair must agree through t_{meet}.
pub fn check_branching_witness(
    family: &CorrelatedFamily,
    h: &Graph,
    threshold_centered: f64,
    witness: &BranchingWitness,
) -> Result<bool> {
    let mean = pair_count(family.n()) as f64 * family.p() * family.p();
    for (leaf, pi) in witness {
        let g = family.leaf_graph(leaf)?;
        if pi.n() != family.n() {
            return Err(Error::size_mismatch(
                "witness permutation size differs from family n".to_string(),
            ));
        }
        let centered = crate::graph::overlap(&g, h, pi)? as f64 - mean;
        if centered < threshold_centered - 1e-9 {
            return Ok(false);
        }
    }
    for (i, (u, pu)) in witness.iter().enumerate() {
        for (v, pv) in witness.iter().skip(i + 1) {
            let bound = family.agreement_bound(u, v)?;
            for s in 1..=bound {
                if pu.apply(s) != pv.apply(s) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Searches for the forbidden branching structure over the full leaf set of
/// a tree family: an assignment of a near-maximizer to every leaf that is
/// pairwise consistent through the meets. Backtracks over leaves in
/// lexicographic path order with members in lexicographic word order, so a
/// found witness is the lexicographically first one. Requires at most
/// `leaf_cap` leaves and n ≤ perm_cap.
pub fn detect_forbidden_branching(
    family: &CorrelatedFamily,
    h: &Graph,
    threshold_centered: f64,
    leaf_cap: usize,
    perm_cap: usize,
) -> Result<Option<BranchingWitness>> {
    let leaves = family.enumerate_leaves(leaf_cap)?;
    let mut sets: Vec<SolutionSet> = Vec::with_capacity(leaves.len());
    for leaf in &leaves {
        let g = family.leaf_graph(leaf)?;
        sets.push(enumerate_solution_set_absolute(
            &g,
            h,
            family.p(),
            threshold_centered,
            perm_cap,
        )?);
    }
    // Pairwise agreement bounds.
    let m = leaves.len();
    let mut bounds = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            bounds[i][j] = family.agreement_bound(&leaves[i], &leaves[j])?;
        }
    }

    fn consistent(pu: &Permutation, pv: &Permutation, bound: usize) -> bool {
        (1..=bound).all(|s| pu.apply(s) == pv.apply(s))
    }

    fn backtrack(
        idx: usize,
        chosen: &mut Vec<usize>,
        sets: &[SolutionSet],
        bounds: &[Vec<usize>],
    ) -> bool {
        if idx == sets.len() {
            return true;
        }
        for (mi, member) in sets[idx].members.iter().enumerate() {
            if chosen
                .iter()
                .enumerate()
                .all(|(j, &cj)| consistent(&sets[j].members[cj], member, bounds[j][idx]))
            {
                chosen.push(mi);
                if backtrack(idx + 1, chosen, sets, bounds) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    if backtrack(0, &mut chosen, &sets, &bounds) {
        let witness: BranchingWitness = leaves
            .into_iter()
            .zip(
                chosen
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| sets[i].members[c].clone()),
            )
            .collect();
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlate::sample_tree_family_custom;
    use crate::graph::{overlap, sample_er};
    use crate::greedy::{greedy_align, GreedyConfig};
    use crate::rng::Seed;

    /// Independent reference: Heap's algorithm + full objective recount.
    fn heap_all_perms(n: usize, mut visit: impl FnMut(&[u32])) {
        let mut a: Vec<u32> = (0..n as u32).collect();
        let mut c = vec![0usize; n];
        visit(&a);
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                visit(&a);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
    }

    fn reference_max(g: &Graph, h: &Graph) -> (u64, u64) {
        let mut max = 0u64;
        let mut ties = 0u64;
        heap_all_perms(g.n(), |img| {
            let pi = Permutation::from_images_unchecked(img.to_vec());
            let o = overlap(g, h, &pi).unwrap();
            if o > max {
                max = o;
                ties = 1;
            } else if o == max {
                ties += 1;
            }
        });
        (max, ties)
    }

    #[test]
    fn sjt_visits_every_permutation_once() {
        let mut seen = std::collections::HashSet::new();
        let mut img: Vec<u32> = vec![0, 1, 2, 3];
        seen.insert(img.clone());
        let mut sjt = Sjt::new(img.clone());
        while let Some(p) = sjt.next_swap() {
            img.swap(p, p + 1);
            assert!(seen.insert(img.clone()), "repeated arrangement {img:?}");
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn brute_force_matches_reference_on_random_instances() {
        for root in 0..6 {
            let s = Seed::new(root);
            let n = 6;
            let g = sample_er(n, 0.4, &s.child(0)).unwrap();
            let h = sample_er(n, 0.4, &s.child(1)).unwrap();
            let res = brute_max_overlap(&g, &h, 8).unwrap();
            let (max, ties) = reference_max(&g, &h);
            assert_eq!(res.max_overlap, max);
            assert_eq!(res.tie_count, ties);
            assert_eq!(res.enumerated, 720);
            assert_eq!(overlap(&g, &h, &res.argmax).unwrap(), max);
        }
    }

    #[test]
    fn brute_force_argmax_is_lex_first() {
        let s = Seed::new(42);
        let g = sample_er(5, 0.5, &s.child(0)).unwrap();
        let h = sample_er(5, 0.5, &s.child(1)).unwrap();
        let res = brute_max_overlap(&g, &h, 8).unwrap();
        // Reference: scan in lexicographic order, first argmax.
        let mut words: Vec<Vec<u32>> = Vec::new();
        heap_all_perms(5, |img| words.push(img.to_vec()));
        words.sort_unstable();
        let lex_first = words
            .iter()
            .find(|w| {
                let pi = Permutation::from_images_unchecked((*w).clone());
                overlap(&g, &h, &pi).unwrap() == res.max_overlap
            })
            .unwrap();
        assert_eq!(&res.argmax.images0().to_vec(), lex_first);
    }

    #[test]
    fn brute_force_identity_instances() {
        // g = h = 5-cycle: identity (and every automorphism) attains 5.
        let edges = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)];
        let g = Graph::from_edges(5, &edges).unwrap();
        let res = brute_max_overlap(&g, &g, 8).unwrap();
        assert_eq!(res.max_overlap, 5);
        assert_eq!(res.argmax.word(), vec![1, 2, 3, 4, 5]);
        // The 5-cycle has 10 automorphisms (dihedral group).
        assert_eq!(res.tie_count, 10);
    }

    #[test]
    fn brute_force_cap() {
        let g = Graph::empty(7);
        assert!(brute_max_overlap(&g, &g, 6).is_err());
    }

    #[test]
    fn greedy_never_beats_brute_force() {
        for root in 0..10 {
            let s = Seed::new(1000 + root);
            let n = 7;
            let g = sample_er(n, 0.35, &s.child(0)).unwrap();
            let h = sample_er(n, 0.35, &s.child(1)).unwrap();
            let brute = brute_max_overlap(&g, &h, 8).unwrap();
            let cfg = GreedyConfig::new(0.1, s.child(2)).unwrap();
            let res = greedy_align(&g, &h, &cfg).unwrap();
            assert!(res.overlap_value <= brute.max_overlap);
        }
    }

    #[test]
    fn solution_set_matches_reference_filter() {
        let s = Seed::new(7);
        let n = 6;
        let p = 0.4;
        let g = sample_er(n, p, &s.child(0)).unwrap();
        let h = sample_er(n, p, &s.child(1)).unwrap();
        for thr in [-3.0, 0.0, 1.5, 4.0] {
            let set = enumerate_solution_set_absolute(&g, &h, p, thr, 8).unwrap();
            let mean = pair_count(n) as f64 * p * p;
            let mut expect: Vec<Vec<u32>> = Vec::new();
            heap_all_perms(n, |img| {
                let pi = Permutation::from_images_unchecked(img.to_vec());
                if overlap(&g, &h, &pi).unwrap() as f64 - mean >= thr - 1e-9 {
                    expect.push(img.to_vec());
                }
            });
            expect.sort_unstable();
            assert_eq!(set.count as usize, expect.len(), "threshold {thr}");
            let got: Vec<Vec<u32>> = set.members.iter().map(|m| m.images0().to_vec()).collect();
            assert_eq!(got, expect, "threshold {thr}");
            // Monotonicity sanity: higher thresholds shrink the set.
        }
        // Absurdly low threshold: everything qualifies.
        let all = enumerate_solution_set_absolute(&g, &h, p, -1e9, 8).unwrap();
        assert_eq!(all.count, 720);
        // Absurdly high: nothing does.
        let none = enumerate_solution_set_absolute(&g, &h, p, 1e9, 8).unwrap();
        assert_eq!(none.count, 0);
    }

    #[test]
    fn solution_set_regime_scales() {
        let s = Seed::new(17);
        let n = 6;
        let g = sample_er(n, 0.5, &s.child(0)).unwrap();
        let h = sample_er(n, 0.5, &s.child(1)).unwrap();
        // Dense tag: threshold = beta * D_{n,p}.
        let set = enumerate_solution_set(&g, &h, 0.5, 0.1, Regime::Dense, 8).unwrap();
        let manual =
            enumerate_solution_set_absolute(&g, &h, 0.5, 0.1 * d_np(n, 0.5).unwrap(), 8).unwrap();
        assert_eq!(set.count, manual.count);
        assert!(enumerate_solution_set(&g, &h, 0.5, 0.1, Regime::Critical, 8).is_err());
    }

    #[test]
    fn band_config_validation_and_membership() {
        let cfg = ForbiddenBandConfig::default();
        cfg.validate().unwrap();
        // beta0 below sqrt(25/27) fails.
        assert!(ForbiddenBandConfig { beta0: 0.96, ..cfg }
            .validate()
            .is_err());
        assert!(ForbiddenBandConfig { beta0: 1.0, ..cfg }
            .validate()
            .is_err());
        // eta too large for the band inequality fails.
        assert!(ForbiddenBandConfig { eta: 0.02, ..cfg }.validate().is_err());
        // Band membership at n = 300: bounds 97 and 103 exclusive.
        assert!(!cfg.in_band(97, 300));
        assert!(cfg.in_band(98, 300));
        assert!(cfg.in_band(102, 300));
        assert!(!cfg.in_band(103, 300));
    }

    #[test]
    fn forbidden_2ogp_planted_and_absent() {
        // Planted: identical instances, threshold low enough that every
        // permutation is a solution. Any overlap in the band then yields a
        // witness; n = 6 has permutations with exactly 2 fixed... overlap 2
        // common images inside the band (1/3 ± 0.01) * 6 = (1.94, 2.06).
        let s = Seed::new(3);
        let n = 6;
        let g = sample_er(n, 0.4, &s.child(0)).unwrap();
        let h = sample_er(n, 0.4, &s.child(1)).unwrap();
        let band = ForbiddenBandConfig::default();
        let hit = detect_forbidden_2ogp(&g, &g, &h, 0.4, &band, -1e9, 8).unwrap();
        let (p1, p2) = hit.expect("with all permutations admitted, a band pair exists");
        assert_eq!(permutation_overlap(&p1, &p2).unwrap(), 2);
        // Absent: impossible threshold empties the sets.
        let none = detect_forbidden_2ogp(&g, &g, &h, 0.4, &band, 1e9, 8).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn ogp_scan_four_events_never_conjoin() {
        let s = Seed::new(11);
        let n = 6;
        let p = 0.5;
        let g0 = sample_er(n, p, &s.child(0)).unwrap();
        let g1 = sample_er(n, p, &s.child(1)).unwrap();
        let h = sample_er(n, p, &s.child(2)).unwrap();
        let band = ForbiddenBandConfig::default();
        for thr in [-1e9, 0.0, 2.0] {
            let mut algo = |k: usize, gk: &Graph, h: &Graph| {
                let cfg = GreedyConfig::new(0.0, s.child(100 + k as u64))?;
                Ok(greedy_align(gk, h, &cfg)?.pi_star)
            };
            let report = interpolation_ogp_scan(&g0, &g1, &h, p, &band, thr, &mut algo, 8).unwrap();
            assert_eq!(report.path_len, 16);
            assert!(report.ogp_holds.is_some());
            assert!(
                !report.four_event_conjunction(),
                "threshold {thr}: {report:?}"
            );
        }
        // Enumeration cap: band clause skipped above the cap.
        let mut algo = |k: usize, gk: &Graph, h: &Graph| {
            let cfg = GreedyConfig::new(0.0, s.child(200 + k as u64))?;
            Ok(greedy_align(gk, h, &cfg)?.pi_star)
        };
        let report = interpolation_ogp_scan(&g0, &g1, &h, p, &band, 0.0, &mut algo, 4).unwrap();
        assert!(report.ogp_holds.is_none());
        assert!(!report.four_event_conjunction());
    }

    #[test]
    fn branching_witness_found_when_thresholds_are_low() {
        let s = Seed::new(23);
        let n = 6;
        let fam = sample_tree_family_custom(n, 0.4, 2, 2, &s.child(0)).unwrap();
        let h = sample_er(n, 0.4, &s.child(1)).unwrap();
        let witness = detect_forbidden_branching(&fam, &h, -1e9, 8, 8)
            .unwrap()
            .expect("threshold admits everything, identity works everywhere");
        assert_eq!(witness.len(), 4);
        assert!(check_branching_witness(&fam, &h, -1e9, &witness).unwrap());
        // The detected witness is the lexicographically first: with every
        // permutation admitted, that is the identity at every leaf.
        for (_, pi) in &witness {
            assert_eq!(pi.word(), vec![1, 2, 3, 4, 5, 6]);
        }
        // Impossible threshold: no witness.
        assert!(detect_forbidden_branching(&fam, &h, 1e9, 8, 8)
            .unwrap()
            .is_none());
    }

    #[test]
    fn branching_consistency_is_enforced() {
        // Tamper with a valid witness: change one leaf's prefix so pairwise
        // consistency fails.
        let s = Seed::new(29);
        let n = 6;
        let fam = sample_tree_family_custom(n, 0.4, 2, 2, &s.child(0)).unwrap();
        let h = sample_er(n, 0.4, &s.child(1)).unwrap();
        let mut witness = detect_forbidden_branching(&fam, &h, -1e9, 8, 8)
            .unwrap()
            .unwrap();
        // t_1 = 3: leaves meeting at depth 1 must agree on positions 1..=3.
        // Replace the last leaf's permutation by one that differs at
        // position 1 but is still a "solution" (threshold is -1e9).
        let tampered = Permutation::from_word(&[2, 1, 3, 4, 5, 6]).unwrap();
        witness.last_mut().unwrap().1 = tampered;
        assert!(!check_branching_witness(&fam, &h, -1e9, &witness).unwrap());
    }

    #[test]
    fn branching_caps_enforced() {
        let s = Seed::new(31);
        let fam = sample_tree_family_custom(6, 0.4, 3, 3, &s.child(0)).unwrap();
        let h = sample_er(6, 0.4, &s.child(1)).unwrap();
        // 27 leaves > cap 8.
        assert!(detect_forbidden_branching(&fam, &h, 0.0, 8, 8).is_err());
    }
}
