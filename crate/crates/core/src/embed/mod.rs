//! Graph embeddings from a GIN whose weights are drawn once and frozen.
//!
//! Each propagation round computes, per node `v`,
//!
//! ```text
//! h_v' = MLP( [h_v ; 0] + AGG{ [h_u ; onehot(label(u,v))] : u ∈ N(v) } )
//! ```
//!
//! where the one-hot block is present only when the graphs carry edge labels.
//! The graph vector concatenates a node readout after every round (or keeps
//! only the last one when `concat_layers` is off).

mod config;
mod matrix;
mod pca;

pub use config::{GinConfig, Pooling, WeightInit};
pub use matrix::EmbeddingMatrix;
pub use pca::{pca_project, Pca};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{node_inputs, FeatureSchema, Graph, GraphSet};
use crate::rng::seeded;

/// One affine map `x ↦ W x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    pub weight: DMatrix<f64>,
    pub bias: DVector<f64>,
}

/// Frozen random parameters for every propagation round.
#[derive(Debug, Clone, PartialEq)]
pub struct GinWeights {
    config: GinConfig,
    schema: FeatureSchema,
    rounds: Vec<Vec<Linear>>,
}

impl GinWeights {
    /// Draws all weights from `config.seed`. Biases start at zero.
    pub fn init(config: &GinConfig, schema: FeatureSchema) -> Result<GinWeights> {
        config.validate()?;
        let mut rng = seeded(config.seed);
        let edge_width = schema.edge_width();
        let mut node_width = schema.input_width();
        let mut rounds = Vec::with_capacity(config.layers);
        for _ in 0..config.layers {
            let mut mlp = Vec::with_capacity(config.mlp_layers);
            let mut fan_in = node_width + edge_width;
            for _ in 0..config.mlp_layers {
                let weight = match config.init {
                    WeightInit::Orthogonal => orthogonal(config.dim, fan_in, &mut rng),
                    WeightInit::Uniform => uniform(config.dim, fan_in, &mut rng),
                };
                mlp.push(Linear {
                    weight,
                    bias: DVector::zeros(config.dim),
                });
                fan_in = config.dim;
            }
            rounds.push(mlp);
            node_width = config.dim;
        }
        Ok(GinWeights {
            config: config.clone(),
            schema,
            rounds,
        })
    }

    pub fn config(&self) -> &GinConfig {
        &self.config
    }

    pub fn schema(&self) -> FeatureSchema {
        self.schema
    }

    /// MLPs per round, first map first.
    pub fn rounds(&self) -> &[Vec<Linear>] {
        &self.rounds
    }

    pub fn output_width(&self) -> usize {
        self.config.output_width()
    }
}

/// `rows × cols` matrix with orthonormal columns (tall) or rows (wide), from
/// the QR factorization of a Gaussian matrix with the sign of `diag(R)`
/// folded into `Q`.
fn orthogonal<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    let (tall_rows, tall_cols) = (rows.max(cols), rows.min(cols));
    let gaussian = DMatrix::from_fn(tall_rows, tall_cols, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = gaussian.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..tall_cols {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    if rows >= cols {
        q
    } else {
        q.transpose()
    }
}

fn uniform<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    let bound = 1.0 / (cols as f64).sqrt();
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-bound..bound))
}

fn pool_columns(h: &DMatrix<f64>, how: Pooling) -> Vec<f64> {
    let (rows, n) = h.shape();
    let data = h.as_slice();
    let mut out = vec![0.0; rows];
    if n == 0 {
        return out;
    }
    match how {
        Pooling::Sum | Pooling::Mean => {
            for col in data.chunks_exact(rows) {
                for (o, x) in out.iter_mut().zip(col) {
                    *o += x;
                }
            }
            if how == Pooling::Mean {
                out.iter_mut().for_each(|o| *o /= n as f64);
            }
        }
        Pooling::Max => {
            out.copy_from_slice(&data[..rows]);
            for col in data.chunks_exact(rows).skip(1) {
                for (o, x) in out.iter_mut().zip(col) {
                    *o = o.max(*x);
                }
            }
        }
    }
    out
}

/// Builds the MLP input for every node: self term plus aggregated messages.
fn combine(g: &Graph, h: &DMatrix<f64>, edge_width: usize, how: Pooling) -> DMatrix<f64> {
    let (width, n) = h.shape();
    let in_width = width + edge_width;
    let hs = h.as_slice();
    let labels = g.edge_features();
    let mut z = DMatrix::<f64>::zeros(in_width, n);
    let zs = z.as_mut_slice();
    for v in 0..n {
        let out = &mut zs[v * in_width..(v + 1) * in_width];
        let neigh = g.neighbors(v);
        if !neigh.is_empty() {
            match how {
                Pooling::Sum | Pooling::Mean => {
                    for (&u, &e) in neigh.iter().zip(g.incident_edges(v)) {
                        for (o, x) in out[..width].iter_mut().zip(&hs[u * width..(u + 1) * width]) {
                            *o += x;
                        }
                        if let (Some(l), true) = (labels, edge_width > 0) {
                            out[width + l[e]] += 1.0;
                        }
                    }
                    if how == Pooling::Mean {
                        let k = neigh.len() as f64;
                        out.iter_mut().for_each(|o| *o /= k);
                    }
                }
                Pooling::Max => {
                    out.fill(f64::NEG_INFINITY);
                    for (&u, &e) in neigh.iter().zip(g.incident_edges(v)) {
                        for (o, x) in out[..width].iter_mut().zip(&hs[u * width..(u + 1) * width]) {
                            *o = o.max(*x);
                        }
                        for c in 0..edge_width {
                            let hot = labels.is_some_and(|l| l[e] == c);
                            let x = if hot { 1.0 } else { 0.0 };
                            out[width + c] = out[width + c].max(x);
                        }
                    }
                }
            }
        }
        for (o, x) in out[..width].iter_mut().zip(&hs[v * width..(v + 1) * width]) {
            *o += x;
        }
    }
    z
}

fn apply_mlp(mlp: &[Linear], z: DMatrix<f64>) -> DMatrix<f64> {
    let mut x = z;
    for (k, layer) in mlp.iter().enumerate() {
        if k > 0 {
            x.apply(|v| *v = v.max(0.0));
        }
        let mut y = &layer.weight * &x;
        for mut col in y.column_iter_mut() {
            col += &layer.bias;
        }
        x = y;
    }
    x
}

/// Embeds one graph. The graph's schema must match the one the weights were
/// drawn for, and it needs at least one node.
pub fn forward(g: &Graph, weights: &GinWeights) -> Result<Vec<f64>> {
    if g.schema() != weights.schema {
        return Err(Error::Schema(format!(
            "graph schema {:?} does not match weights drawn for {:?}",
            g.schema(),
            weights.schema
        )));
    }
    if g.num_nodes() == 0 {
        return Err(Error::Precondition("cannot embed a graph without nodes".into()));
    }
    let cfg = &weights.config;
    let inputs = node_inputs(g);
    let width = weights.schema.input_width();
    let mut h = DMatrix::from_iterator(width, g.num_nodes(), inputs.into_iter().flatten());
    let mut out = Vec::with_capacity(cfg.output_width());
    for (l, mlp) in weights.rounds.iter().enumerate() {
        let z = combine(g, &h, weights.schema.edge_width(), cfg.aggregator);
        h = apply_mlp(mlp, z);
        if cfg.concat_layers || l + 1 == weights.rounds.len() {
            out.extend(pool_columns(&h, cfg.readout));
        }
    }
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGraph("embedding overflowed to a non-finite value".into()));
    }
    Ok(out)
}

/// Embeds every graph of `set`; row `i` is `forward(set[i])`.
pub fn embed_set(set: &GraphSet, weights: &GinWeights) -> Result<EmbeddingMatrix> {
    let rows = set
        .graphs()
        .par_iter()
        .enumerate()
        .map(|(i, g)| forward(g, weights).map_err(|e| Error::at_graph(i, e)))
        .collect::<Result<Vec<_>>>()?;
    EmbeddingMatrix::from_rows(rows, weights.output_width())
}
