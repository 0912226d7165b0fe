//! 05 — Per-step trajectory: neighbor counts, objective increments, and the
//! standardized gain that should hover near 1 in the dense regime.
//!
//! Run: cargo run -p gaplab --example trajectory_diagnostics

use gaplab::experiment::run_trajectory;
use gaplab::rng::Seed;
use gaplab::{p_c, write_trajectory_csv};

fn main() -> gaplab::Result<()> {
    let n = 400;
    let p = 3.0 * p_c(n)?;
    let out = run_trajectory(n, p, 0.05, 0.5, &Seed::new(11))?;

    println!(
        "n = {n}, p = {p:.4} (3 p_c), greedy window = steps {}..={}",
        out.window.0, out.window.1
    );
    println!(
        "mean standardized gain over the window = {:.3}",
        out.mean_std_gain
    );
    println!(
        "per-step floor √(1 − slack)            = {:.3}",
        out.threshold
    );
    println!(
        "fraction of window steps above it      = {:.3}",
        out.frac_above
    );

    // A few records from the middle of the run. n_s counts the pivot's
    // already-placed neighbors; o_s is the step's objective increment.
    println!("\n  s   n_s  o_s  standardized");
    for r in out.records.iter().skip(n / 2).take(8) {
        match r.standardized_gain {
            Some(z) => println!("{:>4}  {:>3}  {:>3}  {z:+.3}", r.s, r.n_s, r.o_s),
            None => println!("{:>4}  {:>3}  {:>3}      —", r.s, r.n_s, r.o_s),
        }
    }

    // The same records serialize as CSV (header s,n_s,o_s,standardized_gain).
    let mut csv = Vec::new();
    write_trajectory_csv(&out.records, &mut csv)?;
    println!("\nCSV preview:");
    for line in String::from_utf8(csv).unwrap().lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
