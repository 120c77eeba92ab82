//! Protocol for scoring metrics: controlled perturbations of a reference
//! set, rank correlation against the perturbation strength, sample
//! efficiency and timing.

mod benchmark;
mod cluster;
mod experiment;
mod perturb;
mod stats;
mod timing;

pub use benchmark::{
    random_architectures, resolve_dataset, run_benchmark, run_experiment, BenchmarkReport, BenchmarkSpec,
    ExperimentKind, ExperimentOutput, ExperimentReport, ExperimentSpec, ReportRow, CSV_COLUMNS,
};
pub use cluster::{
    affinity_propagation, cluster_graphs, wl_features, wl_similarity_matrix, wl_subtree_kernel,
    wl_subtree_kernel_normalized, AffinityOptions, Clustering, WlFeatures, WL_ITERATIONS,
};
pub use experiment::{
    default_t_grid, rank_trial, run_rank_experiment, run_sample_efficiency, sample_efficiency, RankOptions,
    RankResult, RankTrial, SampleEfficiencyResult, SampleEfficiencyTrial, SetScorer, TrialOutcome, SAMPLE_GRID,
};
pub use perturb::{
    perturb_edge_feats, perturb_mix, perturb_mode_collapse, perturb_mode_drop, perturb_node_feats,
    perturb_rewire, PerturbationKind, PerturbationStep,
};
pub use stats::{average_ranks, mean_stderr, pearson, spearman};
pub use timing::{time_sweep, timing_suite, Stage, Sweep, SweepPoint, Timing, TimingSpec, PROTEINS_DENSITY};
