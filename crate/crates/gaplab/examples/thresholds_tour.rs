//! 03 — The scale landscape: critical probability, mean objective, sparse
//! and dense scales, regime classification, and the dense-regime prediction.
//!
//! Run: cargo run -p gaplab --example thresholds_tour

use gaplab::thresholds::{predicted_greedy_dense, RegimeParams};
use gaplab::{beta_c, classify_regime, d_np, e_np, p_c, s_np};

fn main() -> gaplab::Result<()> {
    let n = 10_000;
    println!("n = {n}");
    println!(
        "p_c(n)  = {:.6}  (√(ln n / n): the sparse/dense watershed)",
        p_c(n)?
    );
    println!(
        "beta_c  = {:.6}  (√(8/9): the greedy constant on the dense side)",
        beta_c()
    );

    // Three probabilities straddling the critical window.
    for p in [0.004, p_c(n)?, 0.1] {
        let regime = classify_regime(n, p)?;
        print!("\np = {p:.4}: regime = {regime}, E = {:.1}", e_np(n, p)?);
        print!(", D = {:.1}", d_np(n, p)?);
        match s_np(n, p) {
            Ok(s) => println!(", S = {s:.1}"),
            Err(_) => println!(", S undefined (np² ≥ ln n)"),
        }
    }

    // The bundled view used by reports.
    let params = RegimeParams::new(2000, 3.0 * p_c(2000)?)?;
    println!(
        "\nbundle at (2000, 3p_c): ratio to critical = {:.2}, regime = {}",
        params.ratio_to_critical, params.regime
    );
    println!(
        "predicted dense greedy objective ≈ E + beta_c·D = {:.1}",
        predicted_greedy_dense(2000, 3.0 * p_c(2000)?)?
    );
    Ok(())
}
