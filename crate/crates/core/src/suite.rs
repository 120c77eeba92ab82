//! Scoring a set of metrics between two graph sets, with per-set descriptors
//! computed once so they can be reused across many comparisons.

use crate::classic::{classical_mmd, Statistic, Statistics};
use crate::embed::{embed_set, EmbeddingMatrix, GinConfig, GinWeights};
use crate::error::{Error, Result};
use crate::graph::{FeatureSchema, GraphSet};
use crate::metrics::{
    frechet_distance, kid, mmd_linear, mmd_rbf_with, prdc_from_distances, MetricId, MetricScore,
    PairwiseDistances,
};

pub const DEFAULT_K: usize = 5;

/// Per-set inputs to the metrics: GIN embeddings and/or graph statistics.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub embedding: Option<EmbeddingMatrix>,
    pub statistics: Statistics,
    len: usize,
}

impl Prepared {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Descriptors of the chosen graphs, in the given order.
    pub fn select(&self, indices: &[usize]) -> Prepared {
        Prepared {
            embedding: self.embedding.as_ref().map(|e| e.select_rows(indices)),
            statistics: self.statistics.select(indices),
            len: indices.len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evaluator {
    metrics: Vec<MetricId>,
    weights: Option<GinWeights>,
    statistics: Vec<Statistic>,
    k: usize,
}

impl Evaluator {
    /// The GIN is only initialised when some requested metric needs embeddings.
    pub fn new(metrics: &[MetricId], gin: &GinConfig, schema: FeatureSchema, k: usize) -> Result<Evaluator> {
        if metrics.is_empty() {
            return Err(Error::InvalidParameter("metric list is empty".into()));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let mut unique = Vec::new();
        for &m in metrics {
            if !unique.contains(&m) {
                unique.push(m);
            }
        }
        let weights = if unique.iter().any(|m| !m.is_classical()) {
            Some(GinWeights::init(gin, schema)?)
        } else {
            None
        };
        let statistics = unique.iter().filter_map(|&m| Statistic::from_metric(m)).collect();
        Ok(Evaluator {
            metrics: unique,
            weights,
            statistics,
            k,
        })
    }

    pub fn metrics(&self) -> &[MetricId] {
        &self.metrics
    }

    pub fn weights(&self) -> Option<&GinWeights> {
        self.weights.as_ref()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn embed(&self, set: &GraphSet) -> Result<Option<EmbeddingMatrix>> {
        self.weights.as_ref().map(|w| embed_set(set, w)).transpose()
    }

    pub fn prepare(&self, set: &GraphSet) -> Result<Prepared> {
        Ok(Prepared {
            embedding: self.embed(set)?,
            statistics: if self.statistics.is_empty() {
                Statistics::default()
            } else {
                Statistics::compute(set, &self.statistics)?
            },
            len: set.len(),
        })
    }

    /// Scores in the order of [`Evaluator::metrics`].
    pub fn score(&self, reference: &Prepared, generated: &Prepared) -> Result<Vec<MetricScore>> {
        let needs_distances = self
            .metrics
            .iter()
            .any(|m| *m == MetricId::MmdRbf || m.uses_knn());
        let embeddings = match (&reference.embedding, &generated.embedding) {
            (Some(r), Some(g)) => Some((r, g)),
            _ => None,
        };
        let distances = match embeddings {
            Some((r, g)) if needs_distances => Some(PairwiseDistances::new(r, g)?),
            _ => None,
        };
        let mut prdc = None;
        let mut out = Vec::with_capacity(self.metrics.len());
        for &m in &self.metrics {
            if let Some(stat) = Statistic::from_metric(m) {
                out.push(classical_mmd(&reference.statistics, &generated.statistics, stat)?);
                continue;
            }
            let (r, g) = embeddings.ok_or_else(|| {
                Error::Precondition(format!("{m} needs embeddings that were not prepared"))
            })?;
            let score = match m {
                MetricId::Fd => frechet_distance(r, g)?,
                MetricId::Kid => kid(r, g)?,
                MetricId::MmdLinear => mmd_linear(r, g)?,
                MetricId::MmdRbf => {
                    let (v, _) = mmd_rbf_with(distances.as_ref().unwrap(), true)?;
                    MetricScore::new(m, v)
                }
                _ => {
                    if prdc.is_none() {
                        prdc = Some(prdc_from_distances(distances.as_ref().unwrap(), self.k)?);
                    }
                    MetricScore::new(m, prdc.unwrap().get(m).unwrap())
                }
            };
            out.push(score);
        }
        Ok(out)
    }

    pub fn evaluate(&self, reference: &GraphSet, generated: &GraphSet) -> Result<Vec<MetricScore>> {
        self.score(&self.prepare(reference)?, &self.prepare(generated)?)
    }
}
