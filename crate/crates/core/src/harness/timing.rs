//! Wall-clock scaling of every metric on Erdős–Rényi sets, sweeping one of
//! sample count, edge density or graph size at a time.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classic::{classical_mmd, Statistic, Statistics};
use crate::embed::{embed_set, EmbeddingMatrix, GinConfig, GinWeights};
use crate::error::{Error, Result};
use crate::graph::{generate_er, FeatureSchema, GraphSet};
use crate::metrics::{frechet_distance, kid, mmd_linear, mmd_rbf, prdc, MetricId};
use crate::rng::{derive_seed, seeded};
use crate::suite::DEFAULT_K;

const STREAM_SETS: u64 = 20;

/// Edge density of the sample sweep: average |E| over average |V|² of the
/// 100–500 node protein graphs.
pub const PROTEINS_DENSITY: f64 = 0.0097;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    Samples,
    Edges,
    Nodes,
}

impl Sweep {
    pub const ALL: [Sweep; 3] = [Sweep::Samples, Sweep::Edges, Sweep::Nodes];

    pub fn name(&self) -> &'static str {
        match self {
            Sweep::Samples => "samples",
            Sweep::Edges => "edges",
            Sweep::Nodes => "nodes",
        }
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sweep> {
        Sweep::ALL
            .into_iter()
            .find(|w| w.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown timing sweep {s:?}")))
    }
}

/// One set size in a sweep: both compared sets hold `graphs` G(`nodes`, `p`)
/// graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub sweep: Sweep,
    pub graphs: usize,
    pub nodes: usize,
    pub p: f64,
}

impl SweepPoint {
    /// The value being swept.
    pub fn x(&self) -> f64 {
        match self.sweep {
            Sweep::Samples => self.graphs as f64,
            Sweep::Edges => self.p,
            Sweep::Nodes => self.nodes as f64,
        }
    }

    pub fn expected_edges(&self) -> f64 {
        let n = self.nodes as f64;
        self.p * n * (n - 1.0) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingSpec {
    pub sweeps: Vec<Sweep>,
    pub samples: Vec<usize>,
    pub edge_densities: Vec<f64>,
    pub node_counts: Vec<usize>,
    /// Nodes per graph in the sample sweep.
    pub sample_nodes: usize,
    /// Graphs per set in the edge and node sweeps.
    pub sweep_graphs: usize,
    /// Nodes per graph in the edge sweep.
    pub edge_sweep_nodes: usize,
    /// Target adjacency entries (twice the undirected edges) per graph in
    /// the node sweep.
    pub node_sweep_edges: f64,
    pub metrics: Vec<MetricId>,
    pub gin: GinConfig,
    pub k: usize,
    pub seed: u64,
    /// Once a stage takes longer than this, its later points in the same
    /// sweep are skipped.
    pub budget_secs: Option<f64>,
}

impl Default for TimingSpec {
    fn default() -> Self {
        TimingSpec::full()
    }
}

impl TimingSpec {
    /// The full grids: up to 10k samples, p up to 1 on 1000 nodes, up to 100k
    /// nodes.
    pub fn full() -> TimingSpec {
        let mut samples = vec![100];
        samples.extend((1..=10).map(|i| i * 1000));
        let mut edge_densities = vec![0.01];
        edge_densities.extend((1..=10).map(|i| i as f64 / 10.0));
        let mut node_counts = vec![1000];
        node_counts.extend((1..=10).map(|i| i * 10_000));
        TimingSpec {
            sweeps: Sweep::ALL.to_vec(),
            samples,
            edge_densities,
            node_counts,
            sample_nodes: 50,
            sweep_graphs: 50,
            edge_sweep_nodes: 1000,
            node_sweep_edges: 10_000.0,
            metrics: MetricId::ALL.to_vec(),
            gin: GinConfig {
                layers: 7,
                dim: 20,
                ..GinConfig::default()
            },
            k: DEFAULT_K,
            seed: 0,
            budget_secs: Some(600.0),
        }
    }

    /// Truncated grids that finish in minutes on one core.
    pub fn desk() -> TimingSpec {
        TimingSpec {
            samples: vec![100, 1000, 2000],
            edge_densities: vec![0.01, 0.1, 0.2],
            node_counts: vec![1000, 10_000],
            budget_secs: Some(60.0),
            ..TimingSpec::full()
        }
    }

    pub fn points(&self, sweep: Sweep) -> Vec<SweepPoint> {
        match sweep {
            Sweep::Samples => self
                .samples
                .iter()
                .map(|&graphs| SweepPoint {
                    sweep,
                    graphs,
                    nodes: self.sample_nodes,
                    p: PROTEINS_DENSITY,
                })
                .collect(),
            Sweep::Edges => self
                .edge_densities
                .iter()
                .map(|&p| SweepPoint {
                    sweep,
                    graphs: self.sweep_graphs,
                    nodes: self.edge_sweep_nodes,
                    p,
                })
                .collect(),
            Sweep::Nodes => self
                .node_counts
                .iter()
                .map(|&nodes| SweepPoint {
                    sweep,
                    graphs: self.sweep_graphs,
                    nodes,
                    p: (self.node_sweep_edges / (nodes as f64 * nodes as f64)).min(1.0),
                })
                .collect(),
        }
    }
}

/// What a timing row measures: embedding both sets, or one metric computed
/// from scratch (classical metrics include computing the graph statistics).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Embedding,
    Metric(MetricId),
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Embedding => "embedding",
            Stage::Metric(m) => m.name(),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub point: SweepPoint,
    pub stage: Stage,
    /// `None` when the stage was skipped after exceeding the budget.
    pub seconds: Option<f64>,
}

fn er_set(point: &SweepPoint, seed: u64) -> Result<GraphSet> {
    let graphs = (0..point.graphs)
        .into_par_iter()
        .map(|i| generate_er(point.nodes, point.p, &mut seeded(derive_seed(seed, STREAM_SETS, i as u64))))
        .collect::<Result<Vec<_>>>()?;
    GraphSet::new(graphs)
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64()))
}

fn embedding_metric(m: MetricId, x: &EmbeddingMatrix, y: &EmbeddingMatrix, k: usize) -> Result<()> {
    match m {
        MetricId::Fd => frechet_distance(x, y).map(drop),
        MetricId::Kid => kid(x, y).map(drop),
        MetricId::MmdLinear => mmd_linear(x, y).map(drop),
        MetricId::MmdRbf => mmd_rbf(x, y).map(drop),
        _ => prdc(x, y, k).map(drop),
    }
}

fn classical_metric(stat: Statistic, r: &GraphSet, g: &GraphSet) -> Result<()> {
    let sr = Statistics::compute(r, &[stat])?;
    let sg = Statistics::compute(g, &[stat])?;
    classical_mmd(&sr, &sg, stat).map(drop)
}

/// Times every stage of `spec` at every point of one sweep.
pub fn time_sweep(spec: &TimingSpec, sweep: Sweep) -> Result<Vec<Timing>> {
    if spec.metrics.is_empty() {
        return Err(Error::InvalidParameter("no metrics to time".into()));
    }
    let needs_embedding = spec.metrics.iter().any(|m| !m.is_classical());
    let mut stages = Vec::new();
    if needs_embedding {
        stages.push(Stage::Embedding);
    }
    stages.extend(spec.metrics.iter().map(|&m| Stage::Metric(m)));
    let weights = if needs_embedding {
        Some(GinWeights::init(&spec.gin, FeatureSchema::PLAIN)?)
    } else {
        None
    };
    let budget = spec.budget_secs.map(Duration::from_secs_f64);
    let mut over_budget = vec![false; stages.len()];

    let mut out = Vec::new();
    for (pi, point) in spec.points(sweep).into_iter().enumerate() {
        let base = derive_seed(spec.seed, sweep as u64, pi as u64);
        let reference = er_set(&point, derive_seed(base, 0, 0))?;
        let generated = er_set(&point, derive_seed(base, 1, 0))?;
        let mut embeddings = None;
        for (si, &stage) in stages.iter().enumerate() {
            if over_budget[si] || (stage != Stage::Embedding && needs_embedding_but_skipped(stage, &embeddings)) {
                out.push(Timing { point, stage, seconds: None });
                continue;
            }
            let seconds = match stage {
                Stage::Embedding => {
                    let w = weights.as_ref().expect("weights exist when embedding is timed");
                    let ((x, y), s) = timed(|| Ok((embed_set(&reference, w)?, embed_set(&generated, w)?)))?;
                    embeddings = Some((x, y));
                    s
                }
                Stage::Metric(m) => match Statistic::from_metric(m) {
                    Some(stat) => timed(|| classical_metric(stat, &reference, &generated))?.1,
                    None => {
                        let (x, y) = embeddings.as_ref().expect("embedding precedes embedding metrics");
                        timed(|| embedding_metric(m, x, y, spec.k))?.1
                    }
                },
            };
            if budget.is_some_and(|b| seconds > b.as_secs_f64()) {
                over_budget[si] = true;
            }
            out.push(Timing {
                point,
                stage,
                seconds: Some(seconds),
            });
        }
    }
    Ok(out)
}

/// An embedding metric cannot run once the embedding itself was skipped.
fn needs_embedding_but_skipped(stage: Stage, embeddings: &Option<(EmbeddingMatrix, EmbeddingMatrix)>) -> bool {
    matches!(stage, Stage::Metric(m) if !m.is_classical()) && embeddings.is_none()
}

/// All sweeps of `spec`, in order.
pub fn timing_suite(spec: &TimingSpec) -> Result<Vec<Timing>> {
    let mut out = Vec::new();
    for &sweep in &spec.sweeps {
        out.extend(time_sweep(spec, sweep)?);
    }
    Ok(out)
}
