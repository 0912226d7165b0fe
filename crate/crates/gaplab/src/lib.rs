//! gaplab: alignment of independent Erdős–Rényi graphs.
//!
//! Given two independent samples G, H ~ G(n, p) on the vertex set
//! {1, ..., n}, the alignment objective of a permutation pi is
//!
//! ```text
//! O(pi) = sum over 1 <= i < j <= n of G_{i,j} * H_{pi(i),pi(j)},
//! ```
//!
//! the number of edges of G that pi maps onto edges of H. Because the two
//! graphs are independent there is nothing to "recover": the interesting
//! question is how far above the mean C(n, 2) p² an efficient algorithm can
//! push the objective, and how that compares to the global maximum.
//!
//! The crate provides:
//!
//! * [`graph`] — packed graphs, G(n, p) sampling, edge-label algebra,
//!   overlap objectives, and the self-overlap set OL(G, pi);
//! * [`thresholds`] — the mean/sparse/dense scales E, S, D, the critical
//!   probability p_c, the constant β_c = √(8/9), regime classification, and
//!   binomial tail bounds;
//! * [`greedy`] — the online greedy aligner A_η with per-step trajectory
//!   capture and two interchangeable scoring engines;
//! * [`correlate`] — correlated instance families: pairs agreeing on a
//!   prefix of edge labels, single-edge interpolation paths, and tree-shaped
//!   families driven by a mesh 0 = α_0 < α_1 < ... < α_N = 1;
//! * [`oracle`] — exact brute-force maxima, near-maximizer enumeration, and
//!   detectors for the forbidden overlap structures used in the
//!   overlap-gap analysis;
//! * [`admissibility`] — concentration checks a typical G(n, p) sample
//!   satisfies (edge count, induced subgraph densities, self-overlap
//!   concentration);
//! * [`experiment`] — a reproducible experiment harness with deterministic
//!   seed derivation, JSONL/CSV outputs, and parallel execution that is
//!   byte-identical across worker counts.
//!
//! Vertices are 1-based in every public interface. All randomness flows
//! through [`rng::Seed`] paths, so every result in the crate is a pure
//! function of its inputs and seeds.

// Reference constants are written with more digits than f64 retains so the
// exact target value stays readable; the literals round to the nearest float.
#![allow(clippy::excessive_precision)]

pub mod admissibility;
pub mod correlate;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod greedy;
pub mod oracle;
pub mod perm;
pub mod rng;
pub mod thresholds;

pub use admissibility::{
    check_edge_count, check_induced_subgraphs, check_ol_concentration, is_admissible,
    AdmissibilityReport, CheckMode, EdgeClause, OlClause, SubgraphClause,
};
pub use correlate::{
    choose_schedule, coupled_greedy_runs, interpolation_path, prefix_span, sample_2alpha,
    sample_tree_family, sample_tree_family_custom, shared_label_count, AlphaSchedule,
    CorrelatedFamily, LeafId,
};
pub use error::{Error, Result};
pub use experiment::{
    run_convergence, run_trajectory, write_jsonl, write_summary_csv, ExperimentConfig, GridPoint,
    PRule, RunRecord, SummaryRow, TrajectoryOutcome,
};
pub use graph::{
    centered_overlap, edge_index, edge_pair, expected_ol, ol_count, ol_pairs, overlap, pair_count,
    sample_er, Graph,
};
pub use greedy::{
    greedy_align, greedy_align_perturbed, online_prefix_check, write_trajectory_csv,
    AlignmentResult, GreedyConfig, TieBreak, TrajectoryRecord,
};
pub use oracle::{
    brute_max_overlap, check_branching_witness, detect_forbidden_2ogp, detect_forbidden_branching,
    enumerate_solution_set, enumerate_solution_set_absolute, interpolation_ogp_scan,
    BranchingWitness, BruteForceResult, ForbiddenBandConfig, OgpScanReport, SolutionSet,
};
pub use perm::{permutation_distance, permutation_overlap, Permutation};
pub use rng::Seed;
pub use thresholds::{beta_c, classify_regime, d_np, e_np, p_c, s_np, Regime, RegimeParams};

/// ⌊x · n⌋ with a guard against decimal-representation error: fractions such
/// as 0.3 have no exact binary representation, and a product that lands a
/// hair below an integer must still floor to that integer when the intended
/// real value is exact. The guard (10⁻⁷, far above the accumulated rounding
/// error for any n this crate handles) only matters within that distance of
/// an integer.
pub(crate) fn scaled_floor(x: f64, n: usize) -> usize {
    debug_assert!((0.0..=1.0).contains(&x));
    let v = (x * n as f64 + 1e-7).floor();
    (v.max(0.0) as usize).min(n)
}

#[cfg(test)]
mod tests {
    use super::scaled_floor;

    #[test]
    fn scaled_floor_handles_inexact_decimals() {
        assert_eq!(scaled_floor(0.3, 20), 6);
        assert_eq!(scaled_floor(0.02, 4000), 80);
        assert_eq!(scaled_floor(0.98, 4000), 3920);
        assert_eq!(scaled_floor(0.1, 10), 1);
        assert_eq!(scaled_floor(0.0, 100), 0);
        assert_eq!(scaled_floor(1.0, 100), 100);
        assert_eq!(scaled_floor(0.5, 7), 3);
        assert_eq!(scaled_floor(1.0 / 3.0, 3_000_000), 1_000_000);
    }
}
