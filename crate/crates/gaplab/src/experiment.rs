//! Reproducible experiment harness: seeded convergence sweeps over an
//! (n, p) grid and single-run trajectory diagnostics.
//!
//! Sweeps are configured in TOML, run on a dedicated thread pool, and emit
//! one JSONL record per replicate plus a CSV summary per grid point. Every
//! replicate derives its own substream from the root seed and tasks are
//! collected in a fixed order, so outputs are byte-identical regardless of
//! the worker count. Wall-clock timing is off by default for the same
//! reason; enabling it adds a `runtime_ms` field that naturally varies
//! between machines.

use crate::error::{Error, Result};
use crate::graph::sample_er;
use crate::greedy::{greedy_align, GreedyConfig, TieBreak, TrajectoryRecord};
use crate::rng::Seed;
use crate::thresholds::p_c;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

/// Rule mapping grid size n to edge probability p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PRule {
    /// Fixed probability for every n.
    Absolute(f64),
    /// Multiple of the critical probability: p = c √(ln n / n).
    PcMultiple(f64),
    /// Power decay: p = n^(−a).
    Power(f64),
}

impl PRule {
    pub fn resolve(&self, n: usize) -> Result<f64> {
        let p = match self {
            PRule::Absolute(x) => *x,
            PRule::PcMultiple(c) => c * p_c(n)?,
            PRule::Power(a) => (n as f64).powf(-a),
        };
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!(
                "{self} resolves to p = {p} at n = {n}, outside (0, 1)"
            )));
        }
        Ok(p)
    }
}

impl fmt::Display for PRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PRule::Absolute(x) => write!(f, "abs:{x}"),
            PRule::PcMultiple(c) => write!(f, "pc:{c}"),
            PRule::Power(a) => write!(f, "pow:{a}"),
        }
    }
}

impl FromStr for PRule {
    type Err = Error;

    /// Accepts "abs:X", "pc:C", "pow:A", or a bare float (absolute).
    fn from_str(s: &str) -> Result<Self> {
        let parse = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::invalid_input(format!("bad number in p rule '{s}'")))
        };
        if let Some(v) = s.strip_prefix("abs:") {
            Ok(PRule::Absolute(parse(v)?))
        } else if let Some(v) = s.strip_prefix("pc:") {
            Ok(PRule::PcMultiple(parse(v)?))
        } else if let Some(v) = s.strip_prefix("pow:") {
            Ok(PRule::Power(parse(v)?))
        } else {
            Ok(PRule::Absolute(parse(s)?))
        }
    }
}

/// One resolved grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub n: usize,
    pub p: f64,
}

/// Output file names, relative to the output directory chosen at run time.
#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
pub struct OutputsConfig {
    #[serde(default)]
    pub jsonl: Option<String>,
    #[serde(default)]
    pub summary: Option<String>,
}

fn default_replicates() -> usize {
    8
}

fn default_eta() -> f64 {
    0.05
}

fn default_algorithm() -> String {
    "uniform".to_string()
}

/// A declarative sweep: grid sizes, a p rule, greedy parameters, and
/// reproducibility settings. Deserializes from TOML.
#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
pub struct ExperimentConfig {
    pub id: String,
    /// Grid sizes, run in order.
    pub ns: Vec<usize>,
    /// See [`PRule`]; e.g. "abs:0.3", "pc:2.0", "pow:0.5".
    pub p_rule: String,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    /// Root seed; None lets the caller decide (the CLI falls back to the
    /// GAPLAB_SEED environment variable, then 0).
    #[serde(default)]
    pub seed: Option<u64>,
    /// Worker threads; 0 means one per logical CPU.
    #[serde(default)]
    pub workers: usize,
    /// Tie rule: "uniform" or "perturbation".
    #[serde(default = "default_algorithm")]
    pub algorithm: String,
    /// Adds wall-clock `runtime_ms` per record (breaks byte-identical
    /// outputs across machines; off by default).
    #[serde(default)]
    pub include_timing: bool,
    #[serde(default)]
    pub outputs: Option<OutputsConfig>,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(s).map_err(|e| Error::invalid_input(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() {
            return Err(Error::invalid_input(
                "config lists no grid sizes".to_string(),
            ));
        }
        if self.replicates == 0 {
            return Err(Error::invalid_input(
                "replicates must be positive".to_string(),
            ));
        }
        if !(0.0..0.5).contains(&self.eta) {
            return Err(Error::invalid_input(format!(
                "eta = {} outside [0, 0.5)",
                self.eta
            )));
        }
        self.tie_break()?;
        self.p_rule()?;
        Ok(())
    }

    pub fn p_rule(&self) -> Result<PRule> {
        self.p_rule.parse()
    }

    /// The seed actually used: configured value, or 0.
    pub fn root_seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn tie_break(&self) -> Result<TieBreak> {
        match self.algorithm.as_str() {
            "uniform" => Ok(TieBreak::UniformSample),
            "perturbation" => Ok(TieBreak::Perturbation),
            other => Err(Error::invalid_input(format!(
                "unknown algorithm '{other}'; expected uniform or perturbation"
            ))),
        }
    }

    /// The resolved (n, p) grid.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        let rule = self.p_rule()?;
        self.ns
            .iter()
            .map(|&n| {
                Ok(GridPoint {
                    n,
                    p: rule.resolve(n)?,
                })
            })
            .collect()
    }
}

/// One replicate of one grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    pub n: usize,
    pub p: f64,
    pub eta: f64,
    /// Root seed of the sweep (substreams are derived per replicate).
    pub seed: u64,
    pub replicate: usize,
    pub regime: String,
    pub algorithm: String,
    pub overlap: u64,
    pub centered: f64,
    #[serde(default)]
    pub scale: Option<f64>,
    #[serde(default)]
    pub ratio: Option<f64>,
    pub ops: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

/// Per-grid-point summary of the centered-value-to-scale ratios.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub p: f64,
    pub replicates: usize,
    /// Replicates whose regime admits a scale (all, outside the critical
    /// window).
    pub ratio_count: usize,
    pub mean_ratio: Option<f64>,
    pub stderr_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
}

fn run_one(
    cfg: &ExperimentConfig,
    point: GridPoint,
    grid_idx: usize,
    replicate: usize,
) -> Result<RunRecord> {
    let s = Seed::new(cfg.root_seed())
        .child_tag("exp")
        .child(grid_idx as u64)
        .child(replicate as u64);
    let g = sample_er(point.n, point.p, &s.child(0))?;
    let h = sample_er(point.n, point.p, &s.child(1))?;
    let gcfg = GreedyConfig::new(cfg.eta, s.child(2))?
        .with_p(point.p)?
        .with_tie_break(cfg.tie_break()?);
    let started = cfg.include_timing.then(std::time::Instant::now);
    let res = greedy_align(&g, &h, &gcfg)?;
    let runtime_ms = started.map(|t| t.elapsed().as_millis() as u64);
    Ok(RunRecord {
        experiment: cfg.id.clone(),
        n: point.n,
        p: point.p,
        eta: cfg.eta,
        seed: cfg.root_seed(),
        replicate,
        regime: res.regime.expect("p was supplied").to_string(),
        algorithm: cfg.algorithm.clone(),
        overlap: res.overlap_value,
        centered: res.centered_value.expect("p was supplied"),
        scale: res.scale,
        ratio: res.ratio,
        ops: res.ops,
        runtime_ms,
    })
}

fn summarize(grid: &[GridPoint], records: &[RunRecord]) -> Vec<SummaryRow> {
    grid.iter()
        .map(|pt| {
            let mut ratios: Vec<f64> = records
                .iter()
                .filter(|r| r.n == pt.n && r.p == pt.p)
                .filter_map(|r| r.ratio)
                .collect();
            let replicates = records
                .iter()
                .filter(|r| r.n == pt.n && r.p == pt.p)
                .count();
            ratios.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
            let count = ratios.len();
            let (mean, stderr, min, max, median) = if count == 0 {
                (None, None, None, None, None)
            } else {
                let mean = ratios.iter().sum::<f64>() / count as f64;
                let stderr = (count >= 2).then(|| {
                    let var =
                        ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
                    (var / count as f64).sqrt()
                });
                let median = if count % 2 == 1 {
                    ratios[count / 2]
                } else {
                    (ratios[count / 2 - 1] + ratios[count / 2]) / 2.0
                };
                (
                    Some(mean),
                    stderr,
                    Some(ratios[0]),
                    Some(ratios[count - 1]),
                    Some(median),
                )
            };
            SummaryRow {
                n: pt.n,
                p: pt.p,
                replicates,
                ratio_count: count,
                mean_ratio: mean,
                stderr_ratio: stderr,
                min_ratio: min,
                max_ratio: max,
                median_ratio: median,
            }
        })
        .collect()
}

/// Runs the full sweep: every grid point times every replicate, in a fixed
/// task order on `cfg.workers` threads. Returns (records, summaries);
/// records are ordered by (grid index, replicate).
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<(Vec<RunRecord>, Vec<SummaryRow>)> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let tasks: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|gi| (0..cfg.replicates).map(move |rep| (gi, rep)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::invalid_input(format!("thread pool: {e}")))?;
    let records: Vec<RunRecord> = pool.install(|| {
        use rayon::prelude::*;
        tasks
            .par_iter()
            .map(|&(gi, rep)| run_one(cfg, grid[gi], gi, rep))
            .collect::<Result<Vec<_>>>()
    })?;
    let summaries = summarize(&grid, &records);
    Ok((records, summaries))
}

/// Serializes records as JSON Lines.
pub fn write_jsonl<W: Write>(records: &[RunRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)
            .map_err(|e| Error::invalid_input(format!("serialize record: {e}")))?;
        writeln!(w)?;
    }
    Ok(())
}

/// Serializes summary rows as CSV with a header row.
pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)
            .map_err(|e| Error::invalid_input(format!("serialize summary: {e}")))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Single-run trajectory diagnostics over the greedy window (a, b].
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryOutcome {
    pub n: usize,
    pub p: f64,
    pub eta: f64,
    /// All n per-step records (prefix, greedy window, and tail).
    pub records: Vec<TrajectoryRecord>,
    /// First and last greedy step (1-based, inclusive).
    pub window: (usize, usize),
    /// Mean standardized gain over the window.
    pub mean_std_gain: f64,
    /// √(1 − slack): the per-step floor the fraction below refers to.
    pub threshold: f64,
    /// Fraction of window steps with standardized gain ≥ the floor.
    pub frac_above: f64,
}

/// Runs one seeded greedy alignment on a fresh instance pair and summarizes
/// the standardized gains over the greedy window. `slack` ∈ (0, 1) sets the
/// per-step floor √(1 − slack).
pub fn run_trajectory(
    n: usize,
    p: f64,
    eta: f64,
    slack: f64,
    seed: &Seed,
) -> Result<TrajectoryOutcome> {
    if !(0.0 < slack && slack < 1.0) {
        return Err(Error::domain(format!("slack = {slack} outside (0, 1)")));
    }
    let g = sample_er(n, p, &seed.child(0))?;
    let h = sample_er(n, p, &seed.child(1))?;
    let cfg = GreedyConfig::new(eta, seed.child(2))?
        .with_p(p)?
        .with_trajectory();
    let res = greedy_align(&g, &h, &cfg)?;
    let records = res.trajectory.expect("trajectory capture was enabled");
    let a = crate::scaled_floor(eta, n);
    let b = crate::scaled_floor(1.0 - eta, n);
    if b <= a {
        return Err(Error::domain(format!(
            "empty greedy window for n = {n}, eta = {eta}"
        )));
    }
    let window_records = &records[a..b];
    let gains: Vec<f64> = window_records
        .iter()
        .map(|r| r.standardized_gain.expect("p was supplied and s >= 1"))
        .collect();
    let mean_std_gain = gains.iter().sum::<f64>() / gains.len() as f64;
    let threshold = (1.0 - slack).sqrt();
    let frac_above = gains.iter().filter(|&&x| x >= threshold).count() as f64 / gains.len() as f64;
    Ok(TrajectoryOutcome {
        n,
        p,
        eta,
        records,
        window: (a + 1, b),
        mean_std_gain,
        threshold,
        frac_above,
    })
}
