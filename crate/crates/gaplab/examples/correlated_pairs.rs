//! 06 — (2, α) pairs: two marginally-G(n, p) instances that share exactly
//! the first ⌊α·C(n,2)⌋ edge indicators, and the interpolation path that
//! walks one label at a time between independent endpoints.
//!
//! Run: cargo run -p gaplab --example correlated_pairs

use gaplab::graph::{agree_on_label_prefix, pair_count, sample_er};
use gaplab::rng::Seed;
use gaplab::{interpolation_path, prefix_span, sample_2alpha, shared_label_count};

fn main() -> gaplab::Result<()> {
    let n = 80;
    let p = 0.25;
    let alpha = 0.5;
    let root = Seed::new(99);

    let (g0, g1) = sample_2alpha(n, p, alpha, &root)?;
    let m = shared_label_count(n, alpha)?;
    println!(
        "n = {n}, α = {alpha}: shared label prefix = {m} of {} pairs",
        pair_count(n)
    );
    println!(
        "prefix agreement holds: {}",
        agree_on_label_prefix(&g0, &g1, m)?
    );
    println!(
        "full agreement (would mean α = 1): {}",
        agree_on_label_prefix(&g0, &g1, pair_count(n))?
    );

    // The colexicographic labels fill vertices in order: the shared prefix
    // covers all pairs inside the first `span` vertices.
    let span = prefix_span(alpha, n)?;
    println!("the shared prefix spans the first {span} vertices");

    // Interpolation: label k switches from the old endpoint to the new one.
    let g_new = sample_er(n, p, &root.child_tag("fresh"))?;
    let total = pair_count(n);
    for k in [0, total / 2, total] {
        let gk = interpolation_path(&g0, &g_new, k)?;
        println!(
            "path point k = {k:>4}: agrees with new endpoint through {k} labels: {}",
            agree_on_label_prefix(&gk, &g_new, k)?
        );
    }
    Ok(())
}
