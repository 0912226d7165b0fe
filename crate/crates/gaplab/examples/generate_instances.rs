//! 01 — Sampling instances: seeded G(n, p) graphs, the edge-list text
//! format, and how child seeds give independent-but-reproducible streams.
//!
//! Run: cargo run -p gaplab --example generate_instances

use gaplab::graph::{pair_count, sample_er, Graph};
use gaplab::rng::Seed;

fn main() -> gaplab::Result<()> {
    let n = 12;
    let p = 0.3;
    let root = Seed::new(42);

    // Two children of one root: decorrelated, but each fully reproducible.
    let g = sample_er(n, p, &root.child(0))?;
    let h = sample_er(n, p, &root.child(1))?;
    println!(
        "G: {} vertices, {} edges (expected {:.1})",
        g.n(),
        g.edge_count(),
        pair_count(n) as f64 * p
    );
    println!("H: {} vertices, {} edges", h.n(), h.edge_count());

    // Resampling with the same seed is bit-identical.
    assert_eq!(g, sample_er(n, p, &root.child(0))?);
    println!("resampling child 0 reproduces G exactly");

    // The text format is a "n m" header plus one "i j" line per edge.
    let text = g.to_edge_list_string();
    println!("\nedge list:\n{text}");
    let back = Graph::from_edge_list_str(&text)?;
    assert_eq!(back, g);
    println!("round-trip through the text format preserves the graph");

    // Adjacency queries.
    let v = 3;
    let nbrs: Vec<usize> = g.neighbors(v).collect();
    println!("\nneighbors of {v}: {nbrs:?} (degree {})", g.degree(v));
    Ok(())
}
