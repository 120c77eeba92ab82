//! Synthetic graph families and the dataset samplers built on them.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{Graph, GraphSet};
use crate::error::{Error, Result};
use crate::rng::{self, seeded};

/// `rows × cols` lattice; node `r·cols + c` sits at row `r`, column `c`.
pub fn generate_grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    edges.sort_unstable();
    Graph::from_sorted(rows * cols, edges)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LobsterParams {
    pub expected_backbone: usize,
    pub p1: f64,
    pub p2: f64,
}

impl Default for LobsterParams {
    fn default() -> Self {
        LobsterParams {
            expected_backbone: 40,
            p1: 0.7,
            p2: 0.7,
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {p} is not a probability")))
    }
}

/// Random lobster: a backbone path of length `round(2·U·expected_backbone)`
/// (at least one node), a geometric number of legs per backbone node
/// (continue with probability `p1`) and a geometric number of second-level
/// legs per leg (continue with probability `p2`).
pub fn generate_lobster<R: Rng + ?Sized>(params: &LobsterParams, rng: &mut R) -> Result<Graph> {
    check_probability("p1", params.p1)?;
    check_probability("p2", params.p2)?;
    if params.p1 >= 1.0 || params.p2 >= 1.0 {
        return Err(Error::InvalidParameter(
            "lobster leg probabilities must be below 1".into(),
        ));
    }
    let backbone = loop {
        let len = (2.0 * rng.random::<f64>() * params.expected_backbone as f64 + 0.5) as usize;
        if len > 0 {
            break len;
        }
    };
    let mut edges: Vec<(usize, usize)> = (1..backbone).map(|i| (i - 1, i)).collect();
    let mut next = backbone;
    for spine in 0..backbone {
        while rng.random::<f64>() < params.p1 {
            let leg = next;
            edges.push((spine, leg));
            next += 1;
            while rng.random::<f64>() < params.p2 {
                edges.push((leg, next));
                next += 1;
            }
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted(next, edges))
}

/// Erdős–Rényi G(n, p), sampled by geometric skipping over the pair list so
/// sparse large graphs cost `O(n + |E|)`.
pub fn generate_er<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    check_probability("p", p)?;
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        return Ok(Graph::from_sorted(n, edges));
    }
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    // Pairs (v, w) with w < v enumerated row by row.
    let (mut v, mut w) = (1usize, -1i64);
    loop {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v >= n {
            break;
        }
        edges.push((w as usize, v));
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted(n, edges))
}

/// Two G(n/2, 0.3) blocks joined by `round(0.05·n)` uniformly chosen
/// cross-block edges.
pub fn generate_community<R: Rng + ?Sized>(num_nodes: usize, rng: &mut R) -> Result<Graph> {
    if num_nodes < 4 || !num_nodes.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "community graphs need an even node count >= 4, got {num_nodes}"
        )));
    }
    let half = num_nodes / 2;
    let a = generate_er(half, 0.3, rng)?;
    let b = generate_er(half, 0.3, rng)?;
    let mut edges: Vec<(usize, usize)> = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|&(i, j)| (i + half, j + half)));
    let inter = (0.05 * num_nodes as f64).round() as usize;
    // Cross pairs start out all absent; draw without replacement.
    let mut chosen = std::collections::BTreeSet::new();
    while chosen.len() < inter.min(half * half) {
        let i = rng::index(rng, half);
        let j = rng::index(rng, half);
        chosen.insert((i, j + half));
    }
    edges.extend(chosen);
    edges.sort_unstable();
    Ok(Graph::from_sorted(num_nodes, edges))
}

/// How `|E|` enters the twin density `p = |E| / |V|²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TwinDensity {
    /// Each undirected edge counted once.
    #[default]
    Undirected,
    /// Each undirected edge counted in both directions.
    Doubled,
}

/// An Erdős–Rényi graph with the node count of `g` and `p = |E| / |V|²`.
pub fn er_twin<R: Rng + ?Sized>(g: &Graph, density: TwinDensity, rng: &mut R) -> Result<Graph> {
    let n = g.num_nodes();
    if n == 0 {
        return Err(Error::InvalidGraph("cannot build a twin of an empty graph".into()));
    }
    generate_er(n, twin_probability(g, density), rng)
}

pub(crate) fn twin_probability(g: &Graph, density: TwinDensity) -> f64 {
    let n = g.num_nodes() as f64;
    let e = match density {
        TwinDensity::Undirected => g.num_edges() as f64,
        TwinDensity::Doubled => 2.0 * g.num_edges() as f64,
    };
    (e / (n * n)).min(1.0)
}

const NODE_LABEL_WEIGHTS: [f64; 4] = [0.55, 0.25, 0.15, 0.05];
const EDGE_LABEL_WEIGHTS: [f64; 3] = [0.7, 0.2, 0.1];

fn categorical<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random::<f64>() * weights.iter().sum::<f64>();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Attaches 4-class node and 3-class edge labels drawn from fixed skewed
/// distributions, so uniform resampling visibly shifts the label marginals.
pub fn label_randomly<R: Rng + ?Sized>(g: Graph, rng: &mut R) -> Graph {
    let mut g = g;
    let nodes = (0..g.num_nodes())
        .map(|_| categorical(&NODE_LABEL_WEIGHTS, rng))
        .collect();
    let edges = (0..g.num_edges())
        .map(|_| categorical(&EDGE_LABEL_WEIGHTS, rng))
        .collect();
    g.set_node_labels(nodes, NODE_LABEL_WEIGHTS.len());
    g.set_edge_labels(edges, EDGE_LABEL_WEIGHTS.len());
    g
}

/// Named synthetic datasets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dataset {
    /// Lattices with rows and columns uniform in `[10, 20]`.
    Grid,
    /// Lobsters with default parameters, kept when `10 ≤ |V| ≤ 100`.
    Lobster,
    /// Two-community graphs with an even size uniform in `[60, 160]`.
    Community,
    /// [`Dataset::Community`] with random skewed node and edge labels.
    LabeledCommunity,
    ErdosRenyi { nodes: usize, p: f64 },
}

impl Dataset {
    pub fn name(&self) -> &'static str {
        match self {
            Dataset::Grid => "grid",
            Dataset::Lobster => "lobster",
            Dataset::Community => "community",
            Dataset::LabeledCommunity => "labeled-community",
            Dataset::ErdosRenyi { .. } => "er",
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        match *self {
            Dataset::Grid => {
                let rows = 10 + rng::index(rng, 11);
                let cols = 10 + rng::index(rng, 11);
                Ok(generate_grid(rows, cols))
            }
            Dataset::Lobster => loop {
                let g = generate_lobster(&LobsterParams::default(), rng)?;
                if (10..=100).contains(&g.num_nodes()) {
                    return Ok(g);
                }
            },
            Dataset::Community => generate_community(60 + 2 * rng::index(rng, 51), rng),
            Dataset::LabeledCommunity => {
                let g = generate_community(60 + 2 * rng::index(rng, 51), rng)?;
                Ok(label_randomly(g, rng))
            }
            Dataset::ErdosRenyi { nodes, p } => {
                if nodes == 0 {
                    return Err(Error::InvalidParameter("er datasets need nodes >= 1".into()));
                }
                generate_er(nodes, p, rng)
            }
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dataset::ErdosRenyi { nodes, p } => write!(f, "er(n={nodes},p={p})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Dataset {
    type Err = Error;

    /// Accepts `grid`, `lobster`, `community`, `labeled-community` and
    /// `er:<nodes>:<p>`.
    fn from_str(s: &str) -> Result<Dataset> {
        match s.trim() {
            "grid" => Ok(Dataset::Grid),
            "lobster" => Ok(Dataset::Lobster),
            "community" => Ok(Dataset::Community),
            "labeled-community" | "labeled_community" => Ok(Dataset::LabeledCommunity),
            other => {
                let parts: Vec<_> = other.split(':').collect();
                if parts.len() == 3 && parts[0] == "er" {
                    let nodes = parts[1]
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad node count in {s}")))?;
                    let p = parts[2]
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad p in {s}")))?;
                    check_probability("p", p)?;
                    Ok(Dataset::ErdosRenyi { nodes, p })
                } else {
                    Err(Error::InvalidParameter(format!("unknown dataset family '{s}'")))
                }
            }
        }
    }
}

/// `count` graphs of `dataset`, drawn from one stream seeded by `seed`.
pub fn generate_dataset(dataset: Dataset, count: usize, seed: u64) -> Result<GraphSet> {
    let mut rng = seeded(seed);
    let graphs = (0..count)
        .map(|_| dataset.sample(&mut rng))
        .collect::<Result<Vec<_>>>()?;
    GraphSet::new(graphs)
}
