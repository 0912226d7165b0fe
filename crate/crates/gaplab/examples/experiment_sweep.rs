//! 10 — Declarative sweeps: a TOML config drives a replicated grid of
//! greedy runs with per-replicate seed derivation, parallel execution that
//! never changes the output bytes, and CSV/JSONL serialization.
//!
//! Run: cargo run -p gaplab --example experiment_sweep

use gaplab::experiment::{run_convergence, write_jsonl, write_summary_csv, ExperimentConfig};

fn main() -> gaplab::Result<()> {
    let mut cfg = ExperimentConfig::from_toml_str(
        r#"
        id = "demo-sweep"
        ns = [100, 200, 400]
        p_rule = "pc:3"
        eta = 0.05
        replicates = 4
        seed = 2718
        "#,
    )?;

    println!("grid:");
    for pt in cfg.grid()? {
        println!("  n = {:>4}, p = {:.4}", pt.n, pt.p);
    }

    let (records, summary) = run_convergence(&cfg)?;
    println!("\n{} records; per-size ratio summary:", records.len());
    println!("  n      mean     stderr   median");
    for row in &summary {
        println!(
            "  {:>4}  {:.4}  {:.4}  {:.4}",
            row.n,
            row.mean_ratio.unwrap(),
            row.stderr_ratio.unwrap(),
            row.median_ratio.unwrap()
        );
    }

    // The worker count is a performance knob, not a semantic one.
    let mut single = Vec::new();
    write_jsonl(&records, &mut single)?;
    cfg.workers = 4;
    let (records4, _) = run_convergence(&cfg)?;
    let mut quad = Vec::new();
    write_jsonl(&records4, &mut quad)?;
    assert_eq!(single, quad);
    println!("\nJSONL output is byte-identical at 1 and 4 workers");

    println!("\nfirst record as JSONL:");
    println!(
        "  {}",
        String::from_utf8(single).unwrap().lines().next().unwrap()
    );

    let mut csv = Vec::new();
    write_summary_csv(&summary, &mut csv)?;
    println!("\nsummary CSV:");
    for line in String::from_utf8(csv).unwrap().lines() {
        println!("  {line}");
    }
    Ok(())
}
