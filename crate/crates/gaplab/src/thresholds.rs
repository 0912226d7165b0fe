//! Closed-form scales, critical thresholds, and tail bounds for the random
//! graph alignment problem with independent G(n, p) instances.
//!
//! All logarithms are natural. Conventions:
//!
//! * `e_np` — the mean objective C(n, 2) p² of any fixed relabeling;
//! * `s_np` — the sparse-regime scale n·ln n / ln(ln n / (np²)), defined
//!   when np² < ln n;
//! * `d_np` — the dense-regime scale √(n³ p² ln n);
//! * `p_c`  — the critical edge probability √(ln n / n) separating the two;
//! * `beta_c` — √(8/9), the asymptotic ratio achieved by the greedy
//!   aligner on the dense scale.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// √(8/9): the constant in front of the dense scale that online greedy
/// alignment attains in the large-n limit.
pub fn beta_c() -> f64 {
    (8.0f64 / 9.0).sqrt()
}

/// The critical edge probability p_c = √(ln n / n). Requires n ≥ 2.
pub fn p_c(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("p_c requires n >= 2, got {n}")));
    }
    Ok(((n as f64).ln() / n as f64).sqrt())
}

/// The mean objective E_{n,p} = C(n, 2) p² of any fixed permutation.
pub fn e_np(n: usize, p: f64) -> Result<f64> {
    check_prob_closed(p)?;
    Ok(crate::graph::pair_count(n) as f64 * p * p)
}

/// The sparse scale S_{n,p} = n·ln n / ln(ln n / (n p²)).
///
/// Defined for n ≥ 2, p ∈ (0, 1), and n p² < ln n (equivalently p < p_c);
/// outside that domain the expression is meaningless and a domain error is
/// returned.
pub fn s_np(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("s_np requires n >= 2, got {n}")));
    }
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!("s_np requires p in (0, 1), got {p}")));
    }
    let ln_n = (n as f64).ln();
    let np2 = n as f64 * p * p;
    if np2 >= ln_n {
        return Err(Error::domain(format!(
            "s_np undefined: n p^2 = {np2} >= ln n = {ln_n}"
        )));
    }
    Ok(n as f64 * ln_n / (ln_n / np2).ln())
}

/// The dense scale D_{n,p} = √(n³ p² ln n). Requires n ≥ 2 and p ∈ [0, 1].
pub fn d_np(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("d_np requires n >= 2, got {n}")));
    }
    check_prob_closed(p)?;
    let n = n as f64;
    Ok((n * n * n * p * p * n.ln()).sqrt())
}

/// Regime of (n, p) relative to the critical window around p_c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Sparse,
    Critical,
    Dense,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Sparse => write!(f, "sparse"),
            Regime::Critical => write!(f, "critical"),
            Regime::Dense => write!(f, "dense"),
        }
    }
}

/// Classifies (n, p) with the default window multipliers c_lo = 0.5 and
/// c_hi = 2.0: Sparse if p ≤ 0.5 p_c, Dense if p ≥ 2 p_c, else Critical.
pub fn classify_regime(n: usize, p: f64) -> Result<Regime> {
    classify_regime_with(n, p, 0.5, 2.0)
}

/// [`classify_regime`] with explicit window multipliers. The multipliers are
/// a reporting convention, not a mathematically distinguished boundary; the
/// ratio p / p_c should be reported alongside the tag.
pub fn classify_regime_with(n: usize, p: f64, c_lo: f64, c_hi: f64) -> Result<Regime> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!(
            "classify_regime requires p in (0, 1), got {p}"
        )));
    }
    if !(0.0 < c_lo && c_lo <= c_hi) {
        return Err(Error::invalid_input(format!(
            "window multipliers must satisfy 0 < c_lo <= c_hi, got {c_lo}, {c_hi}"
        )));
    }
    let pc = p_c(n)?;
    let ratio = p / pc;
    Ok(if ratio <= c_lo {
        Regime::Sparse
    } else if ratio >= c_hi {
        Regime::Dense
    } else {
        Regime::Critical
    })
}

/// Multiplicative Chernoff upper-tail bound for X ~ Binomial(N, P):
/// P(X ≥ (1+δ) NP) ≤ exp(−NP((1+δ)ln(1+δ) − δ)).
pub fn chernoff_upper(n: u64, p: f64, delta: f64) -> Result<f64> {
    check_chernoff_args(n, p)?;
    if delta < 0.0 {
        return Err(Error::domain(format!("delta must be >= 0, got {delta}")));
    }
    let mu = n as f64 * p;
    Ok((-mu * ((1.0 + delta) * (1.0 + delta).ln() - delta)).exp())
}

/// Chernoff lower-tail bound: P(X ≤ (1−δ) NP) ≤ exp(−δ² NP / 2).
pub fn chernoff_lower(n: u64, p: f64, delta: f64) -> Result<f64> {
    check_chernoff_args(n, p)?;
    if delta < 0.0 {
        return Err(Error::domain(format!("delta must be >= 0, got {delta}")));
    }
    let mu = n as f64 * p;
    Ok((-delta * delta * mu / 2.0).exp())
}

/// Two-sided additive Chernoff bound: for any K ≥ 0,
/// P(|X − NP| ≥ K) ≤ 2·exp(−K² / (2(NP + K))).
pub fn chernoff_two_sided(n: u64, p: f64, k: f64) -> Result<f64> {
    check_chernoff_args(n, p)?;
    if k < 0.0 {
        return Err(Error::domain(format!("K must be >= 0, got {k}")));
    }
    let mu = n as f64 * p;
    Ok(2.0 * (-k * k / (2.0 * (mu + k))).exp())
}

fn check_chernoff_args(n: u64, p: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("binomial bound requires N >= 1".to_string()));
    }
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!(
            "binomial bound requires P in (0, 1), got {p}"
        )));
    }
    Ok(())
}

/// The typical per-step objective gain of greedy alignment in the sparse
/// regime: M₀ = ln n / ln(ln n / (n p²)), so that S_{n,p} = n · M₀.
/// Same domain as [`s_np`].
pub fn sparse_step_gain(n: usize, p: f64) -> Result<f64> {
    Ok(s_np(n, p)? / n as f64)
}

/// The typical step-s objective gain of greedy alignment in the dense
/// regime, for a step whose pivot has `n_s` earlier neighbors: the best of
/// roughly n^α independent Binomial(n_s, p) scores sits near
/// n_s·p + √(2 α n_s p ln n).
///
/// Only ln n is used, so `n` is accepted as a real > 1.
// Negated comparisons so that NaN inputs fail validation.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn dense_step_gain(n_s: u64, p: f64, n: f64, alpha: f64) -> Result<f64> {
    if n_s < 1 {
        return Err(Error::domain(
            "dense_step_gain requires N_s >= 1".to_string(),
        ));
    }
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!(
            "dense_step_gain requires p in (0, 1), got {p}"
        )));
    }
    if !(n > 1.0) {
        return Err(Error::domain(format!(
            "dense_step_gain requires n > 1, got {n}"
        )));
    }
    if alpha < 0.0 {
        return Err(Error::domain(format!("alpha must be >= 0, got {alpha}")));
    }
    let mean = n_s as f64 * p;
    Ok(mean + (2.0 * alpha * mean * n.ln()).sqrt())
}

/// The heuristic prediction for the (uncentered) greedy objective in the
/// dense regime: E_{n,p} + β_c · D_{n,p}.
pub fn predicted_greedy_dense(n: usize, p: f64) -> Result<f64> {
    Ok(e_np(n, p)? + beta_c() * d_np(n, p)?)
}

/// The scales and classification of a parameter pair (n, p), bundled.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeParams {
    pub n: usize,
    pub p: f64,
    pub p_c: f64,
    /// p / p_c.
    pub ratio_to_critical: f64,
    pub regime: Regime,
    /// E_{n,p}.
    pub mean: f64,
    /// S_{n,p} when its domain condition n p² < ln n holds.
    pub sparse_scale: Option<f64>,
    /// D_{n,p}.
    pub dense_scale: f64,
}

impl RegimeParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        let pc = p_c(n)?;
        let regime = classify_regime(n, p)?;
        Ok(RegimeParams {
            n,
            p,
            p_c: pc,
            ratio_to_critical: p / pc,
            regime,
            mean: e_np(n, p)?,
            sparse_scale: s_np(n, p).ok(),
            dense_scale: d_np(n, p)?,
        })
    }

    /// The scale used to normalize the centered objective in this regime:
    /// S_{n,p} in the sparse regime, D_{n,p} in the dense regime, none in
    /// the critical window (where neither asymptotic applies cleanly).
    pub fn regime_scale(&self) -> Option<f64> {
        match self.regime {
            Regime::Sparse => self.sparse_scale,
            Regime::Dense => Some(self.dense_scale),
            Regime::Critical => None,
        }
    }
}

fn check_prob_closed(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::domain(format!("probability {p} not in [0, 1]")));
    }
    Ok(())
}
