//! Seeded perturbations of a graph set with a strength `t ∈ [0, 1]`.
//!
//! All random draws depend only on the seed and the graph/edge/node index,
//! never on `t`, so for a fixed seed the set of perturbed items grows
//! monotonically with `t`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::Clustering;
use crate::error::{Error, Result};
use crate::graph::{er_twin, Graph, GraphSet, TwinDensity};
use crate::rng::{self, derive_seed, seeded};

const REWIRE_TRIES: usize = 100;

const STREAM_ORDER: u64 = 1;
const STREAM_TWIN: u64 = 2;
const STREAM_GRAPH: u64 = 3;
const STREAM_EDGE: u64 = 4;
const STREAM_FILL: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PerturbationKind {
    Mix,
    Rewire,
    ModeCollapse,
    ModeDrop,
    NodeFeats,
    EdgeFeats,
}

impl PerturbationKind {
    pub const ALL: [PerturbationKind; 6] = [
        PerturbationKind::Mix,
        PerturbationKind::Rewire,
        PerturbationKind::ModeCollapse,
        PerturbationKind::ModeDrop,
        PerturbationKind::NodeFeats,
        PerturbationKind::EdgeFeats,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PerturbationKind::Mix => "mix",
            PerturbationKind::Rewire => "rewire",
            PerturbationKind::ModeCollapse => "mode_collapse",
            PerturbationKind::ModeDrop => "mode_drop",
            PerturbationKind::NodeFeats => "node_feats",
            PerturbationKind::EdgeFeats => "edge_feats",
        }
    }

    /// Mode perturbations need a clustering of the set.
    pub fn needs_clustering(&self) -> bool {
        matches!(self, PerturbationKind::ModeCollapse | PerturbationKind::ModeDrop)
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerturbationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<PerturbationKind> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        PerturbationKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown perturbation '{s}'")))
    }
}

/// One step of an experiment's perturbation sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationStep {
    pub kind: PerturbationKind,
    pub t: f64,
    pub seed: u64,
}

impl PerturbationStep {
    pub fn apply(&self, set: &GraphSet, clustering: Option<&Clustering>) -> Result<GraphSet> {
        let need = || {
            clustering.ok_or_else(|| {
                Error::Precondition(format!("{} needs a clustering of the set", self.kind))
            })
        };
        match self.kind {
            PerturbationKind::Mix => perturb_mix(set, self.t, self.seed),
            PerturbationKind::Rewire => perturb_rewire(set, self.t, self.seed),
            PerturbationKind::ModeCollapse => perturb_mode_collapse(set, need()?, self.t, self.seed),
            PerturbationKind::ModeDrop => perturb_mode_drop(set, need()?, self.t, self.seed),
            PerturbationKind::NodeFeats => perturb_node_feats(set, self.t, self.seed),
            PerturbationKind::EdgeFeats => perturb_edge_feats(set, self.t, self.seed),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("perturbation degree t = {t} outside [0, 1]")))
    }
}

fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    rng::shuffle(&mut seeded(derive_seed(seed, STREAM_ORDER, 0)), &mut order);
    order
}

/// Replaces `round(t·|S|)` randomly chosen graphs by Erdős–Rényi twins.
pub fn perturb_mix(set: &GraphSet, t: f64, seed: u64) -> Result<GraphSet> {
    check_t(t)?;
    let n = set.len();
    let replace = ((t * n as f64).round() as usize).min(n);
    let mut graphs = set.graphs().to_vec();
    for &i in &shuffled(n, seed)[..replace] {
        let mut r = seeded(derive_seed(seed, STREAM_TWIN, i as u64));
        graphs[i] = er_twin(&set[i], TwinDensity::default(), &mut r).map_err(|e| Error::at_graph(i, e))?;
    }
    GraphSet::new(graphs)
}

fn rewire_graph(g: &Graph, t: f64, seed: u64) -> Result<Graph> {
    let n = g.num_nodes();
    let mut present: BTreeSet<(usize, usize)> = g.edges().iter().copied().collect();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut draws = seeded(seed);
    for (e, slot) in edges.iter_mut().enumerate() {
        let u: f64 = draws.random();
        let keep_first: bool = draws.random_bool(0.5);
        if u >= t {
            continue;
        }
        let (i, j) = *slot;
        let keep = if keep_first { i } else { j };
        present.remove(&(i, j));
        let mut r = seeded(derive_seed(seed, STREAM_EDGE, e as u64));
        let mut placed = None;
        for _ in 0..REWIRE_TRIES {
            let w = rng::index(&mut r, n);
            let cand = (keep.min(w), keep.max(w));
            if w != keep && !present.contains(&cand) {
                placed = Some(cand);
                break;
            }
        }
        let new = placed.unwrap_or((i, j));
        present.insert(new);
        *slot = new;
    }
    let mut out = Graph::new(n, edges.iter().copied())?;
    if let (Some(labels), Some(classes)) = (g.edge_features(), g.schema().edge_classes) {
        out = out.with_edge_features(
            edges.iter().zip(labels).map(|(&(a, b), &c)| (a, b, c)),
            classes,
        )?;
    }
    if let (Some(labels), Some(classes)) = (g.node_features(), g.schema().node_classes) {
        out = out.with_node_features(labels.to_vec(), classes)?;
    }
    Ok(out)
}

/// Rewires each edge with probability `t`: one endpoint (chosen by a fair
/// coin) is kept and the other is redrawn uniformly over the nodes, retrying
/// on self-loops and duplicates up to 100 times before leaving the edge as
/// it was. Edge counts and labels are preserved.
pub fn perturb_rewire(set: &GraphSet, t: f64, seed: u64) -> Result<GraphSet> {
    check_t(t)?;
    let graphs = set
        .iter()
        .enumerate()
        .map(|(i, g)| {
            rewire_graph(g, t, derive_seed(seed, STREAM_GRAPH, i as u64)).map_err(|e| Error::at_graph(i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    GraphSet::new(graphs)
}

fn check_clustering(set: &GraphSet, c: &Clustering) -> Result<()> {
    if c.assignment.len() != set.len() {
        return Err(Error::InvalidParameter(format!(
            "clustering covers {} graphs but the set has {}",
            c.assignment.len(),
            set.len()
        )));
    }
    Ok(())
}

/// Replaces every member of the first `⌊t·K⌋` clusters (in seeded random
/// order) by its cluster's exemplar.
pub fn perturb_mode_collapse(set: &GraphSet, clustering: &Clustering, t: f64, seed: u64) -> Result<GraphSet> {
    check_t(t)?;
    check_clustering(set, clustering)?;
    let k = clustering.num_clusters();
    let collapsed = ((t * k as f64).floor() as usize).min(k);
    let order = shuffled(k, seed);
    let mut hit = vec![false; k];
    for &c in &order[..collapsed] {
        hit[c] = true;
    }
    let graphs = set
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let c = clustering.assignment[i];
            if hit[c] {
                set[clustering.exemplars[c]].clone()
            } else {
                g.clone()
            }
        })
        .collect();
    GraphSet::new(graphs)
}

/// Removes the first `⌊t·(K−1)⌋` clusters (in seeded random order) and fills
/// their slots with uniform draws from the members of the surviving clusters.
pub fn perturb_mode_drop(set: &GraphSet, clustering: &Clustering, t: f64, seed: u64) -> Result<GraphSet> {
    check_t(t)?;
    check_clustering(set, clustering)?;
    let k = clustering.num_clusters();
    let dropped = ((t * k.saturating_sub(1) as f64).floor() as usize).min(k.saturating_sub(1));
    let order = shuffled(k, seed);
    let mut gone = vec![false; k];
    for &c in &order[..dropped] {
        gone[c] = true;
    }
    let survivors: Vec<usize> = (0..set.len())
        .filter(|&i| !gone[clustering.assignment[i]])
        .collect();
    let mut fill = seeded(derive_seed(seed, STREAM_FILL, 0));
    let graphs = (0..set.len())
        .map(|i| {
            let u: f64 = fill.random();
            if gone[clustering.assignment[i]] {
                let pick = ((u * survivors.len() as f64) as usize).min(survivors.len() - 1);
                set[survivors[pick]].clone()
            } else {
                set[i].clone()
            }
        })
        .collect();
    GraphSet::new(graphs)
}

fn resample_labels(labels: &[usize], classes: usize, t: f64, seed: u64) -> Vec<usize> {
    let mut r = seeded(seed);
    labels
        .iter()
        .map(|&old| {
            let u: f64 = r.random();
            let new = rng::index(&mut r, classes);
            if u < t {
                new
            } else {
                old
            }
        })
        .collect()
}

/// Each node label is replaced, with probability `t`, by a uniform draw
/// over the label classes.
pub fn perturb_node_feats(set: &GraphSet, t: f64, seed: u64) -> Result<GraphSet> {
    check_t(t)?;
    let classes = set
        .schema()
        .and_then(|s| s.node_classes)
        .ok_or_else(|| Error::Precondition("node-feature randomisation needs node labels".into()))?;
    let graphs = set
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut g = g.clone();
            let labels = resample_labels(
                g.node_features().unwrap(),
                classes,
                t,
                derive_seed(seed, STREAM_GRAPH, i as u64),
            );
            g.set_node_labels(labels, classes);
            g
        })
        .collect();
    GraphSet::new(graphs)
}

/// Each edge label is replaced, with probability `t`, by a uniform draw
/// over the label classes.
pub fn perturb_edge_feats(set: &GraphSet, t: f64, seed: u64) -> Result<GraphSet> {
    check_t(t)?;
    let classes = set
        .schema()
        .and_then(|s| s.edge_classes)
        .ok_or_else(|| Error::Precondition("edge-feature randomisation needs edge labels".into()))?;
    let graphs = set
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut g = g.clone();
            let labels = resample_labels(
                g.edge_features().unwrap(),
                classes,
                t,
                derive_seed(seed, STREAM_GRAPH, i as u64),
            );
            g.set_edge_labels(labels, classes);
            g
        })
        .collect();
    GraphSet::new(graphs)
}
