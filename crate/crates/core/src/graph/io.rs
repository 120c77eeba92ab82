//! Line-delimited graph-set files.
//!
//! One JSON record per line, fields in this order:
//!
//! ```text
//! {"n":4,"edges":[[0,1],[1,2]],"node_feats":[0,2,1,1],"edge_feats":[[0,1,0],[1,2,1]],"node_classes":3,"edge_classes":2}
//! ```
//!
//! `node_feats`/`edge_feats` are omitted for unlabelled graphs. The class
//! counts accompany the labels so the schema survives a round trip even
//! when some category never occurs; when absent they default to
//! `max label + 1`. Blank lines are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphSet};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    node_feats: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_feats: Option<Vec<[usize; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    node_classes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_classes: Option<usize>,
}

impl Record {
    fn from_graph(g: &Graph) -> Record {
        let schema = g.schema();
        Record {
            n: g.num_nodes(),
            edges: g.edges().iter().map(|&(i, j)| [i, j]).collect(),
            node_feats: g.node_features().map(<[usize]>::to_vec),
            edge_feats: g.edge_features().map(|labels| {
                g.edges()
                    .iter()
                    .zip(labels)
                    .map(|(&(i, j), &c)| [i, j, c])
                    .collect()
            }),
            node_classes: schema.node_classes,
            edge_classes: schema.edge_classes,
        }
    }

    fn into_graph(self) -> Result<Graph> {
        let mut g = Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))?;
        if let Some(labels) = self.node_feats {
            let classes = self
                .node_classes
                .unwrap_or_else(|| labels.iter().max().map_or(0, |m| m + 1));
            g = g.with_node_features(labels, classes)?;
        } else if self.node_classes.is_some() {
            return Err(Error::InvalidGraph("node_classes without node_feats".into()));
        }
        if let Some(labels) = self.edge_feats {
            let classes = self
                .edge_classes
                .unwrap_or_else(|| labels.iter().map(|e| e[2]).max().map_or(0, |m| m + 1));
            g = g.with_edge_features(labels.iter().map(|e| (e[0], e[1], e[2])), classes)?;
        } else if self.edge_classes.is_some() {
            return Err(Error::InvalidGraph("edge_classes without edge_feats".into()));
        }
        Ok(g)
    }
}

pub fn write_graphset<W: Write>(set: &GraphSet, mut out: W) -> std::io::Result<()> {
    for g in set {
        serde_json::to_writer(&mut out, &Record::from_graph(g))?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Parses a graph set; `origin` labels error messages.
pub fn read_graphset<R: BufRead>(input: R, origin: &Path) -> Result<GraphSet> {
    let mut graphs = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: line_no,
            message,
        };
        let record: Record = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        let graph = record.into_graph().map_err(|e| parse_err(e.to_string()))?;
        if let Some(first) = graphs.first().map(Graph::schema) {
            if graph.schema() != first {
                return Err(Error::Schema(format!(
                    "{}:{line_no}: schema {:?} differs from first graph's {:?}",
                    origin.display(),
                    graph.schema(),
                    first
                )));
            }
        }
        graphs.push(graph);
    }
    GraphSet::new(graphs)
}

pub fn load_graphset(path: impl AsRef<Path>) -> Result<GraphSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_graphset(BufReader::new(file), path)
}

pub fn save_graphset(set: &GraphSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_graphset(set, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
