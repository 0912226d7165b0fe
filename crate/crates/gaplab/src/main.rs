//! Thin command-line front end over the gaplab library.
//!
//! Every subcommand wraps one library entry point and emits JSON (reports)
//! or the plain edge-list / CSV formats (graphs, trajectories). Exit codes:
//! 0 on success, 1 on runtime failure (bad domain, I/O, caps), 2 on usage
//! errors. The root seed defaults to the GAPLAB_SEED environment variable
//! when a subcommand's --seed flag is absent, and to 0 when both are.

use clap::{Parser, Subcommand, ValueEnum};
use gaplab::admissibility::{is_admissible, CheckMode};
use gaplab::correlate::{
    choose_schedule, sample_2alpha, sample_tree_family, sample_tree_family_custom,
    shared_label_count, LeafId,
};
use gaplab::experiment::{
    run_convergence, run_trajectory, write_jsonl, write_summary_csv, ExperimentConfig, PRule,
};
use gaplab::greedy::{greedy_align, write_trajectory_csv, GreedyConfig, TieBreak};
use gaplab::oracle::{
    brute_max_overlap, enumerate_solution_set_absolute, interpolation_ogp_scan, ForbiddenBandConfig,
};
use gaplab::{sample_er, Error, Graph, Result, Seed};
use serde_json::json;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "gaplab",
    version,
    about = "Random graph alignment: generation, greedy alignment, exact oracles, \
             correlated instances, and reproducible experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieArg {
    /// Sample uniformly among tied targets.
    Uniform,
    /// Deterministic fixed-perturbation refinement.
    Perturbation,
}

impl From<TieArg> for TieBreak {
    fn from(t: TieArg) -> TieBreak {
        match t {
            TieArg::Uniform => TieBreak::UniformSample,
            TieArg::Perturbation => TieBreak::Perturbation,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

fn parse_mode(s: &str) -> std::result::Result<CheckMode, String> {
    s.parse::<CheckMode>().map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a G(n, p) instance and write it as an edge list ("n m" header,
    /// one "i j" pair per line).
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        /// Rule form: abs:X, pc:C (multiple of the critical probability),
        /// or pow:A (p = n^-A).
        #[arg(long = "p-rule", value_name = "RULE")]
        p_rule: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when absent.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Greedy online alignment of two instances; prints a JSON result record.
    Align {
        /// First graph as an edge-list file ("-" for stdin).
        #[arg(long, value_name = "FILE", requires = "h")]
        g: Option<PathBuf>,
        /// Second graph as an edge-list file.
        #[arg(long, value_name = "FILE", requires = "g")]
        h: Option<PathBuf>,
        /// Sample a fresh pair of this size instead of reading files.
        #[arg(long, conflicts_with = "g")]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "p-rule", value_name = "RULE")]
        p_rule: Option<String>,
        /// Identity-prefix fraction in [0, 0.5).
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        #[arg(long, value_enum, default_value_t = TieArg::Uniform)]
        tie: TieArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the per-step trajectory CSV here.
        #[arg(long = "trajectory-out", value_name = "FILE")]
        trajectory_out: Option<PathBuf>,
        /// Include the full permutation word in the JSON record.
        #[arg(long)]
        emit_perm: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Exact brute-force maximization over all n! permutations (small n).
    Oracle {
        #[arg(long, value_name = "FILE", requires = "h")]
        g: Option<PathBuf>,
        #[arg(long, value_name = "FILE", requires = "g")]
        h: Option<PathBuf>,
        #[arg(long, conflicts_with = "g")]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "p-rule", value_name = "RULE")]
        p_rule: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Enumeration cap on n.
        #[arg(long, default_value_t = 10)]
        cap: usize,
        /// Also enumerate the solution set at this centered threshold
        /// (requires a known p).
        #[arg(long = "set-threshold", value_name = "T")]
        set_threshold: Option<f64>,
        /// Include solution-set member words in the output.
        #[arg(long)]
        emit_members: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Admissibility report (edge, subgraph, and overlap-set clauses).
    Admissible {
        #[arg(long, value_name = "FILE")]
        g: Option<PathBuf>,
        #[arg(long, conflicts_with = "g")]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "p-rule", value_name = "RULE")]
        p_rule: Option<String>,
        /// exact, mc, or mc:SAMPLES.
        #[arg(long = "subgraph-mode", value_parser = parse_mode, default_value = "mc")]
        subgraph_mode: CheckMode,
        #[arg(long = "ol-mode", value_parser = parse_mode, default_value = "mc")]
        ol_mode: CheckMode,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Correlated constructions: (2, α) pairs and D-ary tree families.
    Correlate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "p-rule", value_name = "RULE")]
        p_rule: Option<String>,
        /// Pair mode: shared label fraction α in [0, 1].
        #[arg(long)]
        alpha: Option<f64>,
        /// Tree mode: derive the mesh and branching from ε.
        #[arg(long, conflicts_with = "alpha")]
        epsilon: Option<f64>,
        /// Tree mode with an explicit uniform mesh: branching factor.
        #[arg(long, conflicts_with_all = ["alpha", "epsilon"], requires = "depth")]
        branching: Option<u64>,
        /// Tree mode with an explicit uniform mesh: depth.
        #[arg(long, requires = "branching")]
        depth: Option<usize>,
        /// Materialize one leaf instance (tree modes), e.g. "0.1.0".
        #[arg(long, value_name = "PATH")]
        leaf: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for edge lists / manifest (manifest also goes
        /// to stdout).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Interpolation-path scan between two fresh instances: band freedom,
    /// algorithm success, stability, and endpoint separation.
    OgpScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "p-rule", value_name = "RULE")]
        p_rule: Option<String>,
        /// Centered objective threshold defining near-maximizers.
        #[arg(long, value_name = "T")]
        threshold: f64,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        rho0: f64,
        #[arg(long, default_value_t = 0.97)]
        beta0: f64,
        /// Band half-width η (also the stability budget as a fraction of n).
        #[arg(long = "band-eta", default_value_t = 0.01)]
        band_eta: f64,
        /// Greedy identity-prefix fraction used for the scanned algorithm.
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        /// Solution sets are enumerated only when n is at most this.
        #[arg(long = "enum-cap", default_value_t = 8)]
        enum_cap: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run a TOML-configured convergence sweep; writes per-replicate JSONL
    /// and a per-grid-point summary.
    Experiment {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
        /// Override the configured worker count.
        #[arg(long)]
        workers: Option<usize>,
        /// Override the configured replicate count.
        #[arg(long)]
        reps: Option<usize>,
        /// Override the configured root seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Add wall-clock runtime_ms to each record (breaks byte-identical
        /// outputs across machines).
        #[arg(long)]
        timing: bool,
        /// Summary file format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// One seeded greedy run with per-step trajectory records
    /// (s, n_s, o_s, standardized_gain) and window diagnostics.
    Trajectory {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "p-rule", value_name = "RULE")]
        p_rule: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        /// Slack σ in (0, 1): the per-step floor reported is √(1 − σ).
        #[arg(long, default_value_t = 0.5)]
        slack: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Records file; with it set, stdout carries the diagnostics JSON.
        /// Without it, the records themselves go to stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        // A closed stdout (e.g. piping into `head`) is not a failure.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            std::process::ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::FAILURE
        }
    }
}

/// Usage-level failure discovered after clap parsing: report and exit 2,
/// matching clap's own exit code for bad invocations.
fn usage(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2)
}

fn env_seed() -> Option<u64> {
    let v = std::env::var("GAPLAB_SEED").ok()?;
    match v.trim().parse() {
        Ok(s) => Some(s),
        Err(_) => usage(&format!(
            "GAPLAB_SEED must be an unsigned integer, got '{v}'"
        )),
    }
}

fn effective_seed(flag: Option<u64>) -> u64 {
    flag.or_else(env_seed).unwrap_or(0)
}

/// Resolves --p / --p-rule into a probability. Flag conflicts and absence
/// are usage errors; out-of-range resolution is a runtime error.
fn resolve_p(n: usize, p: Option<f64>, rule: Option<&str>) -> Result<f64> {
    match (p, rule) {
        (Some(_), Some(_)) => usage("--p conflicts with --p-rule"),
        (Some(x), None) => PRule::Absolute(x).resolve(n),
        (None, Some(r)) => match r.parse::<PRule>() {
            Ok(rule) => rule.resolve(n),
            Err(e) => usage(&e.to_string()),
        },
        (None, None) => usage("one of --p or --p-rule is required"),
    }
}

fn resolve_p_opt(n: usize, p: Option<f64>, rule: Option<&str>) -> Result<Option<f64>> {
    match (p, rule) {
        (None, None) => Ok(None),
        _ => resolve_p(n, p, rule).map(Some),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    if path == Path::new("-") {
        Graph::read_edge_list(std::io::stdin().lock())
    } else {
        Graph::read_edge_list(BufReader::new(File::open(path)?))
    }
}

fn writer(out: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    match out {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(p) if p == Path::new("-") => Ok(Box::new(std::io::stdout().lock())),
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p)?))),
    }
}

fn emit_json(out: Option<&PathBuf>, value: &serde_json::Value) -> Result<()> {
    let mut w = writer(out)?;
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::invalid_input(format!("serialize: {e}")))?;
    writeln!(w, "{text}")?;
    Ok(())
}

/// Reads a pair of instances from files, or samples a fresh pair from the
/// root seed (children 0 and 1). Returns the graphs and the known p, if any.
#[allow(clippy::too_many_arguments)]
fn instance_pair(
    g: Option<&PathBuf>,
    h: Option<&PathBuf>,
    n: Option<usize>,
    p: Option<f64>,
    p_rule: Option<&str>,
    root: &Seed,
) -> Result<(Graph, Graph, Option<f64>)> {
    match (g, h) {
        (Some(gp), Some(hp)) => {
            let g = read_graph(gp)?;
            let h = read_graph(hp)?;
            let p = resolve_p_opt(g.n(), p, p_rule)?;
            Ok((g, h, p))
        }
        (None, None) => {
            let n = n.unwrap_or_else(|| usage("either --g/--h files or --n is required"));
            let p = resolve_p(n, p, p_rule)?;
            let g = sample_er(n, p, &root.child(0))?;
            let h = sample_er(n, p, &root.child(1))?;
            Ok((g, h, Some(p)))
        }
        // clap's `requires` makes mixed cases unreachable, but be explicit.
        _ => usage("--g and --h must be given together"),
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Generate {
            n,
            p,
            p_rule,
            seed,
            out,
        } => {
            let p = resolve_p(n, p, p_rule.as_deref())?;
            let root = Seed::new(effective_seed(seed));
            let g = sample_er(n, p, &root)?;
            let mut w = writer(out.as_ref())?;
            g.write_edge_list(&mut w)?;
            Ok(())
        }

        Cmd::Align {
            g,
            h,
            n,
            p,
            p_rule,
            eta,
            tie,
            seed,
            trajectory_out,
            emit_perm,
            out,
        } => {
            let root = Seed::new(effective_seed(seed));
            let (g, h, p) = instance_pair(g.as_ref(), h.as_ref(), n, p, p_rule.as_deref(), &root)?;
            let mut cfg =
                GreedyConfig::new(eta, root.child(2))?.with_tie_break(TieBreak::from(tie));
            if let Some(p) = p {
                cfg = cfg.with_p(p)?;
            }
            if trajectory_out.is_some() {
                cfg = cfg.with_trajectory();
            }
            let res = greedy_align(&g, &h, &cfg)?;
            if let Some(path) = &trajectory_out {
                let w = writer(Some(path))?;
                write_trajectory_csv(res.trajectory.as_deref().expect("capture was on"), w)?;
            }
            let mut record = json!({
                "n": g.n(),
                "eta": eta,
                "tie": match tie { TieArg::Uniform => "uniform", TieArg::Perturbation => "perturbation" },
                "p": p,
                "overlap": res.overlap_value,
                "centered": res.centered_value,
                "regime": res.regime.map(|r| r.to_string()),
                "scale": res.scale,
                "ratio": res.ratio,
                "ops": res.ops,
            });
            if emit_perm {
                record["pi"] = json!(res.pi_star.word());
            }
            emit_json(out.as_ref(), &record)
        }

        Cmd::Oracle {
            g,
            h,
            n,
            p,
            p_rule,
            seed,
            cap,
            set_threshold,
            emit_members,
            out,
        } => {
            let root = Seed::new(effective_seed(seed));
            let (g, h, p) = instance_pair(g.as_ref(), h.as_ref(), n, p, p_rule.as_deref(), &root)?;
            let brute = brute_max_overlap(&g, &h, cap)?;
            let mut record = json!({
                "n": g.n(),
                "max_overlap": brute.max_overlap,
                "argmax": brute.argmax.word(),
                "tie_count": brute.tie_count,
                "enumerated": brute.enumerated,
            });
            if let Some(thr) = set_threshold {
                let p =
                    p.unwrap_or_else(|| usage("--set-threshold needs a known p (--p or --p-rule)"));
                let set = enumerate_solution_set_absolute(&g, &h, p, thr, cap)?;
                let mut entry = json!({
                    "threshold_centered": set.threshold_centered,
                    "min_overlap": set.min_overlap,
                    "count": set.count,
                });
                if emit_members {
                    entry["members"] =
                        json!(set.members.iter().map(|m| m.word()).collect::<Vec<_>>());
                }
                record["solution_set"] = entry;
            }
            emit_json(out.as_ref(), &record)
        }

        Cmd::Admissible {
            g,
            n,
            p,
            p_rule,
            subgraph_mode,
            ol_mode,
            seed,
            out,
        } => {
            let root = Seed::new(effective_seed(seed));
            let (graph, p) = match g {
                Some(path) => {
                    let graph = read_graph(&path)?;
                    let p = resolve_p(graph.n(), p, p_rule.as_deref())?;
                    (graph, p)
                }
                None => {
                    let n = n.unwrap_or_else(|| usage("either --g or --n is required"));
                    let p = resolve_p(n, p, p_rule.as_deref())?;
                    (sample_er(n, p, &root.child(0))?, p)
                }
            };
            let report = is_admissible(&graph, p, subgraph_mode, ol_mode, &root.child(1))?;
            let value = serde_json::to_value(&report)
                .map_err(|e| Error::invalid_input(format!("serialize: {e}")))?;
            emit_json(out.as_ref(), &value)
        }

        Cmd::Correlate {
            n,
            p,
            p_rule,
            alpha,
            epsilon,
            branching,
            depth,
            leaf,
            seed,
            out,
        } => {
            let p = resolve_p(n, p, p_rule.as_deref())?;
            let root = Seed::new(effective_seed(seed));
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
            }
            if let Some(alpha) = alpha {
                if leaf.is_some() {
                    usage("--leaf applies to tree modes only");
                }
                let dir = out
                    .as_ref()
                    .unwrap_or_else(|| usage("pair mode (--alpha) requires --out DIR"));
                let (g0, g1) = sample_2alpha(n, p, alpha, &root)?;
                for (name, g) in [("g0.edgelist", &g0), ("g1.edgelist", &g1)] {
                    let mut w = BufWriter::new(File::create(dir.join(name))?);
                    g.write_edge_list(&mut w)?;
                }
                let manifest = json!({
                    "mode": "pair",
                    "n": n,
                    "p": p,
                    "alpha": alpha,
                    "shared_labels": shared_label_count(n, alpha)?,
                    "files": ["g0.edgelist", "g1.edgelist"],
                });
                return emit_json(None, &manifest);
            }
            let family = if let Some(eps) = epsilon {
                sample_tree_family(n, p, &choose_schedule(eps)?, &root)?
            } else if let (Some(d), Some(k)) = (branching, depth) {
                sample_tree_family_custom(n, p, d, k, &root)?
            } else {
                usage("pick a mode: --alpha, --epsilon, or --branching with --depth")
            };
            let manifest = family.manifest();
            if let Some(dir) = &out {
                std::fs::write(dir.join("manifest.json"), &manifest)?;
            }
            if let Some(leaf) = &leaf {
                let id: LeafId = leaf.parse()?;
                let g = family.leaf_graph(&id)?;
                match &out {
                    Some(dir) => {
                        let name = format!("leaf-{id}.edgelist");
                        let mut w = BufWriter::new(File::create(dir.join(name))?);
                        g.write_edge_list(&mut w)?;
                    }
                    None => {
                        g.write_edge_list(std::io::stdout().lock())?;
                        return Ok(());
                    }
                }
            }
            println!("{manifest}");
            Ok(())
        }

        Cmd::OgpScan {
            n,
            p,
            p_rule,
            threshold,
            rho0,
            beta0,
            band_eta,
            eta,
            enum_cap,
            seed,
            out,
        } => {
            let p = resolve_p(n, p, p_rule.as_deref())?;
            let root = Seed::new(effective_seed(seed));
            let g0 = sample_er(n, p, &root.child(0))?;
            let g1 = sample_er(n, p, &root.child(1))?;
            let h = sample_er(n, p, &root.child(2))?;
            let band = ForbiddenBandConfig {
                rho0,
                beta0,
                eta: band_eta,
            };
            let algo_root = root.child_tag("algo");
            let mut algo = |k: usize, gk: &Graph, h: &Graph| {
                let cfg = GreedyConfig::new(eta, algo_root.child(k as u64))?;
                Ok(greedy_align(gk, h, &cfg)?.pi_star)
            };
            let report =
                interpolation_ogp_scan(&g0, &g1, &h, p, &band, threshold, &mut algo, enum_cap)?;
            let value = serde_json::to_value(&report)
                .map_err(|e| Error::invalid_input(format!("serialize: {e}")))?;
            emit_json(out.as_ref(), &value)
        }

        Cmd::Experiment {
            config,
            out,
            workers,
            reps,
            seed,
            timing,
            format,
        } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            cfg.seed = Some(seed.or_else(env_seed).or(cfg.seed).unwrap_or(0));
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Some(r) = reps {
                cfg.replicates = r;
            }
            if timing {
                cfg.include_timing = true;
            }
            std::fs::create_dir_all(&out)?;
            let (records, summaries) = run_convergence(&cfg)?;
            let outputs = cfg
                .outputs
                .clone()
                .unwrap_or(gaplab::experiment::OutputsConfig {
                    jsonl: None,
                    summary: None,
                });
            let records_name = outputs.jsonl.unwrap_or_else(|| "runs.jsonl".to_string());
            let records_path = out.join(&records_name);
            write_jsonl(&records, BufWriter::new(File::create(&records_path)?))?;
            let summary_name = outputs.summary.unwrap_or_else(|| match format {
                Format::Csv => "summary.csv".to_string(),
                Format::Jsonl => "summary.jsonl".to_string(),
            });
            let summary_path = out.join(&summary_name);
            match format {
                Format::Csv => {
                    write_summary_csv(&summaries, BufWriter::new(File::create(&summary_path)?))?
                }
                Format::Jsonl => {
                    let mut w = BufWriter::new(File::create(&summary_path)?);
                    for row in &summaries {
                        let line = serde_json::to_string(row)
                            .map_err(|e| Error::invalid_input(format!("serialize: {e}")))?;
                        writeln!(w, "{line}")?;
                    }
                }
            }
            let digest = json!({
                "experiment": cfg.id,
                "seed": cfg.root_seed(),
                "grid_points": summaries.len(),
                "records": records.len(),
                "records_file": records_path,
                "summary_file": summary_path,
                "summary": serde_json::to_value(&summaries)
                    .map_err(|e| Error::invalid_input(format!("serialize: {e}")))?,
            });
            emit_json(None, &digest)
        }

        Cmd::Trajectory {
            n,
            p,
            p_rule,
            eta,
            slack,
            seed,
            out,
            format,
        } => {
            let p = resolve_p(n, p, p_rule.as_deref())?;
            let root = Seed::new(effective_seed(seed));
            let outcome = run_trajectory(n, p, eta, slack, &root)?;
            let write_records = |w: Box<dyn Write>| -> Result<()> {
                match format {
                    Format::Csv => write_trajectory_csv(&outcome.records, w),
                    Format::Jsonl => {
                        let mut w = w;
                        for r in &outcome.records {
                            let line = serde_json::to_string(r)
                                .map_err(|e| Error::invalid_input(format!("serialize: {e}")))?;
                            writeln!(w, "{line}")?;
                        }
                        Ok(())
                    }
                }
            };
            match &out {
                Some(path) => {
                    write_records(writer(Some(path))?)?;
                    let digest = json!({
                        "n": outcome.n,
                        "p": outcome.p,
                        "eta": outcome.eta,
                        "window": { "first": outcome.window.0, "last": outcome.window.1 },
                        "mean_std_gain": outcome.mean_std_gain,
                        "threshold": outcome.threshold,
                        "frac_above": outcome.frac_above,
                        "records_file": path,
                    });
                    emit_json(None, &digest)
                }
                None => write_records(writer(None)?),
            }
        }
    }
}
