//! 09 — Admissibility checks: edge-count, induced-subgraph, and
//! overlap-concentration clauses, in exact mode at small n and Monte Carlo
//! mode at scale — plus a planted clique getting caught.
//!
//! Run: cargo run -p gaplab --example admissibility_report

use gaplab::graph::sample_er;
use gaplab::rng::Seed;
use gaplab::{is_admissible, CheckMode, Graph};

fn main() -> gaplab::Result<()> {
    let root = Seed::new(60);

    // Small instance: both quantified clauses can be checked exhaustively
    // (all 2^n subsets; all n! permutations, so n must stay tiny).
    let g = sample_er(8, 0.4, &root.child(0))?;
    let report = is_admissible(&g, 0.4, CheckMode::Exact, CheckMode::Exact, &root.child(1))?;
    println!("exact report at n = 8, p = 0.4:");
    println!(
        "  edges {} vs expected {:.1} (bound {:.1}): pass = {}",
        report.edge.edges, report.edge.expected, report.edge.bound, report.edge.pass
    );
    println!(
        "  worst subgraph deviation {:.1} at subset size {} (bound {:.1}): pass = {}",
        report.subgraphs.worst_deviation,
        report.subgraphs.worst_subset_size,
        report.subgraphs.bound,
        report.subgraphs.pass
    );
    println!(
        "  worst overlap-set ratio {:.3}: pass = {}",
        report.ol.worst_ratio, report.ol.pass
    );
    println!("  admissible = {}", report.admissible);

    // Larger instance: Monte Carlo modes sample random subsets and random
    // permutations (plus fixed worst-case probes) instead of enumerating.
    let n = 100;
    let p = 0.05;
    let mc = CheckMode::MonteCarlo { samples: 2000 };
    let clean = sample_er(n, p, &root.child(2))?;
    let rep = is_admissible(&clean, p, mc, mc, &root.child(3))?;
    println!(
        "\nMonte Carlo report at n = {n}, p = {p}: admissible = {}",
        rep.admissible
    );

    // Plant a 50-clique on top of the same background: the prefix subset
    // {1, ..., 50} now carries ~1160 excess edges against a bound of ~341,
    // so the subgraph clause must fail.
    let mut edges: Vec<(usize, usize)> = clean.edges().collect();
    for j in 2..=50 {
        for i in 1..j {
            if !clean.has_edge(i, j) {
                edges.push((i, j));
            }
        }
    }
    let planted = Graph::from_edges(n, &edges)?;
    let rep = is_admissible(&planted, p, mc, mc, &root.child(3))?;
    println!("\nafter planting a 50-clique:");
    println!(
        "  subgraph clause: worst deviation {:.1} vs bound {:.1} → pass = {}",
        rep.subgraphs.worst_deviation, rep.subgraphs.bound, rep.subgraphs.pass
    );
    println!("  admissible = {}", rep.admissible);
    assert!(!rep.admissible);
    Ok(())
}
