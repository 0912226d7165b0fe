//! 07 — Tree-structured families: a D-ary tree of instances whose leaves
//! agree on vertex prefixes determined by their meet, plus coupled greedy
//! runs that share tie randomness the same way.
//!
//! Run: cargo run -p gaplab --example tree_family_coupling

use gaplab::correlate::coupled_greedy_runs;
use gaplab::graph::{agree_on_label_prefix, pair_count, sample_er};
use gaplab::greedy::GreedyConfig;
use gaplab::rng::Seed;
use gaplab::{choose_schedule, sample_tree_family_custom};

fn main() -> gaplab::Result<()> {
    let n = 120;
    let p = 0.3;
    let root = Seed::new(5);

    // A binary tree of depth 2 over the uniform mesh α = 0, 1/2, 1: four
    // leaves, each one a marginal G(n, p) instance.
    let fam = sample_tree_family_custom(n, p, 2, 2, &root)?;
    let leaves = fam.enumerate_leaves(16)?;
    println!(
        "family: d = {}, depth = {}, thresholds = {:?}",
        fam.branching(),
        fam.depth(),
        fam.thresholds()
    );
    println!(
        "leaves: {:?}",
        leaves.iter().map(|l| l.to_string()).collect::<Vec<_>>()
    );

    for (a, b) in [(0, 1), (0, 2)] {
        let bound = fam.agreement_bound(&leaves[a], &leaves[b])?;
        let gu = fam.leaf_graph(&leaves[a])?;
        let gv = fam.leaf_graph(&leaves[b])?;
        println!(
            "leaves {} and {} meet at depth {}: agree on all pairs inside the first {bound} vertices: {}",
            leaves[a],
            leaves[b],
            fam.meet_depth(&leaves[a], &leaves[b])?,
            agree_on_label_prefix(&gu, &gv, pair_count(bound))?
        );
    }

    // Coupled greedy: runs on sibling leaves share tie streams level by
    // level, so their outputs agree exactly as far as their graphs do.
    let h = sample_er(n, p, &root.child_tag("h"))?;
    let cfg = GreedyConfig::new(0.05, root.child_tag("greedy"))?;
    let runs = coupled_greedy_runs(&fam, &h, &cfg, &leaves)?;
    let bound = fam.agreement_bound(&leaves[0], &leaves[1])?;
    let agree = (1..=bound).all(|s| runs[0].pi_star.apply(s) == runs[1].pi_star.apply(s));
    println!(
        "\ncoupled runs on {} and {} assign identical images through position {bound}: {agree}",
        leaves[0], leaves[1]
    );

    // For the full construction, a target accuracy ε dictates the mesh and
    // the branching factor.
    let schedule = choose_schedule(0.25)?;
    println!(
        "\nschedule for ε = 0.25: {} mesh steps, branching D = {}, Riemann sum = {:.4}",
        schedule.alphas.len() - 1,
        schedule.d_branch,
        schedule.riemann_sum
    );
    Ok(())
}
