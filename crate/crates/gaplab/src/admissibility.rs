//! Admissibility checks: three concentration clauses that a typical
//! instance satisfies with overwhelming probability, each verifiable either
//! exhaustively (small n) or by Monte Carlo probing (any n).
//!
//! For a graph on n vertices with edge probability p (natural logs
//! throughout):
//!
//! 1. **Edge clause** — the edge count deviates from C(n, 2) p by at most
//!    2 √(n² p ln n).
//! 2. **Subgraph clause** — every induced subgraph on k vertices has edge
//!    count within n² p / (ln n)^{1/4} of C(k, 2) p.
//! 3. **Overlap-set clause** — for every permutation σ, the number of pairs
//!    e with both e and σ(e) present deviates from its expectation by at
//!    most 2 √(F(σ) n p ln n) + 3 √(2 n³ p² ln n), where F(σ) counts fixed
//!    points.
//!
//! Monte Carlo mode for the subgraph clause always probes the prefix
//! subsets {1..k} in addition to uniform random subsets: prefix subsets
//! catch planted structure on leading vertices that uniform sampling would
//! almost surely miss. Monte Carlo mode for the overlap-set clause probes
//! the identity, the reversal, and the transposition (1 2) in addition to
//! uniform random permutations.

use crate::error::{Error, Result};
use crate::graph::{expected_ol, ol_count, pair_count, Graph};
use crate::oracle::{mask_rows, visit_arrangements};
use crate::perm::Permutation;
use crate::rng::Seed;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::str::FromStr;

/// How a clause quantified over an exponential family is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckMode {
    /// Full enumeration (subsets up to n = 20, permutations up to n = 8).
    Exact,
    /// Random probes plus the mandatory structured probes.
    MonteCarlo { samples: u64 },
}

impl FromStr for CheckMode {
    type Err = Error;

    /// Accepts "exact", "mc" (2000 samples), or "mc:SAMPLES".
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CheckMode::Exact),
            "mc" => Ok(CheckMode::MonteCarlo { samples: 2000 }),
            _ => {
                if let Some(num) = s.strip_prefix("mc:") {
                    let samples: u64 = num.parse().map_err(|_| {
                        Error::invalid_input(format!("bad sample count in mode '{s}'"))
                    })?;
                    Ok(CheckMode::MonteCarlo { samples })
                } else {
                    Err(Error::invalid_input(format!(
                        "unknown check mode '{s}'; expected exact, mc, or mc:SAMPLES"
                    )))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeClause {
    pub edges: u64,
    pub expected: f64,
    pub deviation: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgraphClause {
    pub mode: CheckMode,
    /// Number of subsets inspected.
    pub checked: u64,
    pub worst_deviation: f64,
    pub worst_subset_size: usize,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OlClause {
    pub mode: CheckMode,
    /// Number of permutations inspected.
    pub checked: u64,
    /// Worst deviation-to-bound ratio (the bound varies per permutation).
    pub worst_ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub n: usize,
    pub p: f64,
    pub edge: EdgeClause,
    pub subgraphs: SubgraphClause,
    pub ol: OlClause,
    pub admissible: bool,
}

fn validate_np(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!(
            "admissibility checks need n >= 2, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "edge probability p = {p} not in [0, 1]"
        )));
    }
    Ok((n as f64).ln())
}

/// Clause 1: |edges − C(n, 2) p| ≤ 2 √(n² p ln n).
pub fn check_edge_count(g: &Graph, p: f64) -> Result<EdgeClause> {
    let n = g.n();
    let ln_n = validate_np(n, p)?;
    let expected = pair_count(n) as f64 * p;
    let deviation = (g.edge_count() as f64 - expected).abs();
    let bound = 2.0 * ((n * n) as f64 * p * ln_n).sqrt();
    Ok(EdgeClause {
        edges: g.edge_count() as u64,
        expected,
        deviation,
        bound,
        pass: deviation <= bound + 1e-9,
    })
}

/// Edge count of the subset encoded as a bit mask over 0-based vertices.
fn subset_edges(g: &Graph, words: &[u64]) -> u64 {
    let inside = |v: usize| (words[v / 64] >> (v % 64)) & 1 == 1;
    let mut count = 0u64;
    for v in 0..g.n() {
        if !inside(v) {
            continue;
        }
        for &u in g.adj0(v) {
            let u = u as usize;
            if u < v && inside(u) {
                count += 1;
            }
        }
    }
    count
}

/// Clause 2: every induced subgraph on k vertices has edge count within
/// n² p / (ln n)^{1/4} of C(k, 2) p. Exact mode enumerates all 2^n subsets
/// via a Gray code (n ≤ 20); Monte Carlo mode probes the n + 1 prefix
/// subsets plus uniform random subsets.
pub fn check_induced_subgraphs(
    g: &Graph,
    p: f64,
    mode: CheckMode,
    seed: &Seed,
) -> Result<SubgraphClause> {
    let n = g.n();
    let ln_n = validate_np(n, p)?;
    let bound = (n * n) as f64 * p / ln_n.powf(0.25);
    let dev_of = |edges: u64, k: usize| (edges as f64 - pair_count(k) as f64 * p).abs();

    let (checked, worst_deviation, worst_subset_size) = match mode {
        CheckMode::Exact => {
            if n > 20 {
                return Err(Error::cap_exceeded(format!(
                    "exact subgraph check: n = {n} exceeds cap 20"
                )));
            }
            let rows = mask_rows(g);
            let mut set = 0u32;
            let mut k = 0usize;
            let mut edges = 0u64;
            let mut worst = (0.0f64, 0usize);
            for i in 1..(1u64 << n) {
                let v = i.trailing_zeros() as usize;
                let bit = 1u32 << v;
                if set & bit != 0 {
                    set ^= bit;
                    edges -= (rows[v] & set).count_ones() as u64;
                    k -= 1;
                } else {
                    edges += (rows[v] & set).count_ones() as u64;
                    set ^= bit;
                    k += 1;
                }
                let d = dev_of(edges, k);
                if d > worst.0 {
                    worst = (d, k);
                }
            }
            (1u64 << n, worst.0, worst.1)
        }
        CheckMode::MonteCarlo { samples } => {
            // Mandatory prefix subsets {1..k}, grown incrementally.
            let mut worst = (0.0f64, 0usize);
            let mut edges = 0u64;
            for k in 1..=n {
                let v = k - 1;
                let added = g.adj0(v).partition_point(|&u| (u as usize) < v);
                edges += added as u64;
                let d = dev_of(edges, k);
                if d > worst.0 {
                    worst = (d, k);
                }
            }
            // Uniform random subsets, reduced deterministically.
            let words_len = n.div_ceil(64);
            let tail_bits = n % 64;
            let random_worst = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = seed.child_tag("subset").child(i).rng();
                    let mut words: Vec<u64> = (0..words_len).map(|_| rng.gen()).collect();
                    if tail_bits != 0 {
                        *words.last_mut().expect("n >= 2") &= (1u64 << tail_bits) - 1;
                    }
                    let k: usize = words.iter().map(|w| w.count_ones() as usize).sum();
                    (dev_of(subset_edges(g, &words), k), k)
                })
                .reduce(|| (0.0f64, 0usize), |a, b| if b.0 > a.0 { b } else { a });
            if random_worst.0 > worst.0 {
                worst = random_worst;
            }
            (samples + n as u64, worst.0, worst.1)
        }
    };
    Ok(SubgraphClause {
        mode,
        checked,
        worst_deviation,
        worst_subset_size,
        bound,
        pass: worst_deviation <= bound + 1e-9,
    })
}

/// Deviation-to-bound ratio of one permutation for clause 3.
fn ol_ratio(g: &Graph, p: f64, ln_n: f64, common: f64, pi: &Permutation) -> Result<f64> {
    let n = g.n();
    let f = pi.fixed_points();
    let t = pi.transposition_pairs();
    let dev = (ol_count(g, pi)? as f64 - expected_ol(n, p, f, t)?).abs();
    let bound = 2.0 * (f as f64 * n as f64 * p * ln_n).sqrt() + common;
    if bound <= 0.0 {
        return Ok(if dev <= 1e-12 { 0.0 } else { f64::INFINITY });
    }
    Ok(dev / bound)
}

/// Clause 3: for every permutation σ, the overlap-set size deviates from
/// its expectation by at most 2 √(F(σ) n p ln n) + 3 √(2 n³ p² ln n).
/// Exact mode enumerates all n! permutations (n ≤ 8); Monte Carlo mode
/// probes identity, reversal, and (1 2) plus uniform random permutations.
pub fn check_ol_concentration(g: &Graph, p: f64, mode: CheckMode, seed: &Seed) -> Result<OlClause> {
    let n = g.n();
    let ln_n = validate_np(n, p)?;
    let common = 3.0 * (2.0 * (n as f64).powi(3) * p * p * ln_n).sqrt();

    let (checked, worst_ratio) = match mode {
        CheckMode::Exact => {
            if n > 8 {
                return Err(Error::cap_exceeded(format!(
                    "exact overlap-set check: n = {n} exceeds cap 8"
                )));
            }
            let rows = mask_rows(g);
            // Per-F part of the bound, precomputed.
            let f_part: Vec<f64> = (0..=n)
                .map(|f| 2.0 * (f as f64 * n as f64 * p * ln_n).sqrt())
                .collect();
            let mut worst = 0.0f64;
            let mut count = 0u64;
            let mut img: Vec<u32> = (0..n as u32).collect();
            let mut bad_expect = None;
            visit_arrangements(&rows, &rows, &mut img, 0, |im, o| {
                count += 1;
                let mut f = 0usize;
                let mut t = 0usize;
                for (k, &m) in im.iter().enumerate() {
                    let m = m as usize;
                    if m == k {
                        f += 1;
                    } else if m > k && im[m] == k as u32 {
                        t += 1;
                    }
                }
                match expected_ol(n, p, f, t) {
                    Ok(eol) => {
                        let dev = (o as f64 - eol).abs();
                        let bound = f_part[f] + common;
                        let ratio = if bound <= 0.0 {
                            if dev <= 1e-12 {
                                0.0
                            } else {
                                f64::INFINITY
                            }
                        } else {
                            dev / bound
                        };
                        if ratio > worst {
                            worst = ratio;
                        }
                    }
                    Err(e) => bad_expect = Some(e),
                }
            });
            if let Some(e) = bad_expect {
                return Err(e);
            }
            (count, worst)
        }
        CheckMode::MonteCarlo { samples } => {
            let mut probes: Vec<Permutation> = vec![Permutation::identity(n)];
            let reversal: Vec<u32> = (1..=n as u32).rev().collect();
            probes.push(Permutation::from_word(&reversal)?);
            let mut swap01: Vec<u32> = (1..=n as u32).collect();
            swap01.swap(0, 1);
            probes.push(Permutation::from_word(&swap01)?);
            let mut worst = 0.0f64;
            for pi in &probes {
                worst = worst.max(ol_ratio(g, p, ln_n, common, pi)?);
            }
            let random_worst = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let pi = Permutation::random(n, &seed.child_tag("olperm").child(i));
                    ol_ratio(g, p, ln_n, common, &pi)
                })
                .try_reduce(|| 0.0f64, |a, b| Ok(a.max(b)))?;
            (samples + probes.len() as u64, worst.max(random_worst))
        }
    };
    Ok(OlClause {
        mode,
        checked,
        worst_ratio,
        pass: worst_ratio <= 1.0 + 1e-9,
    })
}

/// Runs all three clauses and combines them. The two randomized clauses
/// derive disjoint substreams from `seed`, so one seed drives the whole
/// report reproducibly.
pub fn is_admissible(
    g: &Graph,
    p: f64,
    subgraph_mode: CheckMode,
    ol_mode: CheckMode,
    seed: &Seed,
) -> Result<AdmissibilityReport> {
    let edge = check_edge_count(g, p)?;
    let subgraphs = check_induced_subgraphs(g, p, subgraph_mode, seed)?;
    let ol = check_ol_concentration(g, p, ol_mode, seed)?;
    let admissible = edge.pass && subgraphs.pass && ol.pass;
    Ok(AdmissibilityReport {
        n: g.n(),
        p,
        edge,
        subgraphs,
        ol,
        admissible,
    })
}
