//! Undirected simple graphs with optional categorical node and edge labels.

mod generators;
mod io;

pub use generators::{
    er_twin, generate_community, generate_dataset, generate_er, generate_grid, generate_lobster,
    label_randomly, Dataset, LobsterParams, TwinDensity,
};
pub use io::{load_graphset, read_graphset, save_graphset, write_graphset};

use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Category counts of the node and edge labels, when present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub node_classes: Option<usize>,
    pub edge_classes: Option<usize>,
}

impl FeatureSchema {
    pub const PLAIN: FeatureSchema = FeatureSchema {
        node_classes: None,
        edge_classes: None,
    };

    /// Width of the per-node input vector: the label one-hot, or the degree.
    pub fn input_width(&self) -> usize {
        self.node_classes.unwrap_or(1)
    }

    pub fn edge_width(&self) -> usize {
        self.edge_classes.unwrap_or(0)
    }
}

/// An undirected simple graph.
///
/// Edges are stored once as `(i, j)` with `i < j`, sorted. Edge labels, when
/// present, are aligned with that order. A CSR adjacency is built on
/// construction so neighbourhood queries are slices.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    node_features: Option<Vec<usize>>,
    edge_features: Option<Vec<usize>>,
    schema: FeatureSchema,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    neighbor_edges: Vec<usize>,
}

impl Graph {
    /// Builds a graph, validating endpoints and rejecting self-loops and
    /// repeated pairs.
    pub fn new<I>(num_nodes: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (i, j) in edges {
            if i >= num_nodes || j >= num_nodes {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) out of range for {num_nodes} nodes"
                )));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at node {i}")));
            }
            list.push((i.min(j), i.max(j)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted(num_nodes, list))
    }

    /// `edges` must already be normalized (`i < j`), sorted and unique.
    pub(crate) fn from_sorted(num_nodes: usize, edges: Vec<(usize, usize)>) -> Graph {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut degree = vec![0usize; num_nodes];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = Vec::with_capacity(num_nodes + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..num_nodes].to_vec();
        let mut neighbors = vec![0; 2 * edges.len()];
        let mut neighbor_edges = vec![0; 2 * edges.len()];
        for (e, &(i, j)) in edges.iter().enumerate() {
            neighbors[fill[i]] = j;
            neighbor_edges[fill[i]] = e;
            fill[i] += 1;
            neighbors[fill[j]] = i;
            neighbor_edges[fill[j]] = e;
            fill[j] += 1;
        }
        // Sorted edge order already yields sorted neighbour lists for the
        // `i < j` side; the other side needs sorting.
        for v in 0..num_nodes {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            let mut pairs: Vec<(usize, usize)> = neighbors[lo..hi]
                .iter()
                .copied()
                .zip(neighbor_edges[lo..hi].iter().copied())
                .collect();
            pairs.sort_unstable();
            for (k, (u, e)) in pairs.into_iter().enumerate() {
                neighbors[lo + k] = u;
                neighbor_edges[lo + k] = e;
            }
        }
        Graph {
            num_nodes,
            edges,
            node_features: None,
            edge_features: None,
            schema: FeatureSchema::PLAIN,
            offsets,
            neighbors,
            neighbor_edges,
        }
    }

    pub fn empty(num_nodes: usize) -> Graph {
        Self::from_sorted(num_nodes, Vec::new())
    }

    /// Attaches one node label per node, each `< classes`.
    pub fn with_node_features(mut self, labels: Vec<usize>, classes: usize) -> Result<Graph> {
        if labels.len() != self.num_nodes {
            return Err(Error::InvalidGraph(format!(
                "{} node labels for {} nodes",
                labels.len(),
                self.num_nodes
            )));
        }
        if let Some(&c) = labels.iter().find(|&&c| c >= classes) {
            return Err(Error::InvalidGraph(format!(
                "node label {c} outside {classes} classes"
            )));
        }
        self.node_features = Some(labels);
        self.schema.node_classes = Some(classes);
        Ok(self)
    }

    /// Attaches edge labels given as `(i, j, label)`; every edge needs exactly
    /// one entry.
    pub fn with_edge_features<I>(mut self, labels: I, classes: usize) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let mut aligned = vec![usize::MAX; self.edges.len()];
        for (i, j, c) in labels {
            let e = self.edge_index(i, j).ok_or_else(|| {
                Error::InvalidGraph(format!("edge label for absent edge ({i}, {j})"))
            })?;
            if c >= classes {
                return Err(Error::InvalidGraph(format!(
                    "edge label {c} outside {classes} classes"
                )));
            }
            if aligned[e] != usize::MAX {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) labelled twice"
                )));
            }
            aligned[e] = c;
        }
        if let Some(e) = aligned.iter().position(|&c| c == usize::MAX) {
            let (i, j) = self.edges[e];
            return Err(Error::InvalidGraph(format!("edge ({i}, {j}) has no label")));
        }
        self.edge_features = Some(aligned);
        self.schema.edge_classes = Some(classes);
        Ok(self)
    }

    /// Edge labels aligned with [`Graph::edges`].
    pub(crate) fn set_edge_labels(&mut self, labels: Vec<usize>, classes: usize) {
        debug_assert_eq!(labels.len(), self.edges.len());
        self.edge_features = Some(labels);
        self.schema.edge_classes = Some(classes);
    }

    pub(crate) fn set_node_labels(&mut self, labels: Vec<usize>, classes: usize) {
        debug_assert_eq!(labels.len(), self.num_nodes);
        self.node_features = Some(labels);
        self.schema.node_classes = Some(classes);
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn schema(&self) -> FeatureSchema {
        self.schema
    }

    pub fn node_features(&self) -> Option<&[usize]> {
        self.node_features.as_deref()
    }

    /// Edge labels aligned with [`Graph::edges`].
    pub fn edge_features(&self) -> Option<&[usize]> {
        self.edge_features.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge indices parallel to [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.neighbor_edges[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_nodes).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_nodes).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.num_nodes && j < self.num_nodes && self.neighbors(i).binary_search(&j).is_ok()
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.num_nodes || j >= self.num_nodes {
            return None;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        self.edges.binary_search(&(lo, hi)).ok()
    }

    pub fn edge_feature(&self, i: usize, j: usize) -> Option<usize> {
        let e = self.edge_index(i, j)?;
        self.edge_features.as_ref().map(|f| f[e])
    }

    /// Returns the isomorphic copy where node `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.num_nodes;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter(
                "relabel needs a permutation of the node indices".into(),
            ));
        }
        let mut g = Graph::new(n, self.edges.iter().map(|&(i, j)| (perm[i], perm[j])))?;
        if let (Some(labels), Some(classes)) = (&self.node_features, self.schema.node_classes) {
            let mut moved = vec![0; n];
            for (v, &c) in labels.iter().enumerate() {
                moved[perm[v]] = c;
            }
            g = g.with_node_features(moved, classes)?;
        }
        if let (Some(labels), Some(classes)) = (&self.edge_features, self.schema.edge_classes) {
            let triples: Vec<_> = self
                .edges
                .iter()
                .zip(labels)
                .map(|(&(i, j), &c)| (perm[i], perm[j], c))
                .collect();
            g = g.with_edge_features(triples, classes)?;
        }
        Ok(g)
    }
}

/// Per-node GIN input: the one-hot node label when the graph carries one,
/// otherwise the integer degree as a scalar.
pub fn node_inputs(g: &Graph) -> Vec<Vec<f64>> {
    match (&g.node_features, g.schema.node_classes) {
        (Some(labels), Some(classes)) => labels
            .iter()
            .map(|&c| {
                let mut x = vec![0.0; classes];
                x[c] = 1.0;
                x
            })
            .collect(),
        _ => (0..g.num_nodes).map(|v| vec![g.degree(v) as f64]).collect(),
    }
}

/// An ordered collection of graphs sharing one feature schema.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphSet {
    graphs: Vec<Graph>,
    schema: Option<FeatureSchema>,
}

impl GraphSet {
    pub fn new(graphs: Vec<Graph>) -> Result<GraphSet> {
        let schema = graphs.first().map(Graph::schema);
        if let Some(s) = schema {
            if let Some((idx, g)) = graphs.iter().enumerate().find(|(_, g)| g.schema() != s) {
                return Err(Error::Schema(format!(
                    "graph {idx} has schema {:?}, expected {:?}",
                    g.schema(),
                    s
                )));
            }
        }
        Ok(GraphSet { graphs, schema })
    }

    /// `None` only for the empty set.
    pub fn schema(&self) -> Option<FeatureSchema> {
        self.schema
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Graph> {
        self.graphs.iter()
    }

    pub fn into_graphs(self) -> Vec<Graph> {
        self.graphs
    }

    /// The members at `indices`, in that order (repeats allowed).
    pub fn select(&self, indices: &[usize]) -> GraphSet {
        GraphSet {
            graphs: indices.iter().map(|&i| self.graphs[i].clone()).collect(),
            schema: if indices.is_empty() { None } else { self.schema },
        }
    }
}

impl Index<usize> for GraphSet {
    type Output = Graph;

    fn index(&self, i: usize) -> &Graph {
        &self.graphs[i]
    }
}

impl<'a> IntoIterator for &'a GraphSet {
    type Item = &'a Graph;
    type IntoIter = std::slice::Iter<'a, Graph>;

    fn into_iter(self) -> Self::IntoIter {
        self.graphs.iter()
    }
}
