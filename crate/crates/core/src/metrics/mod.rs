//! Sample-based metrics between two embedding sets.

mod distances;
mod fd;
mod mmd;
mod prdc;

pub use distances::PairwiseDistances;
pub use fd::frechet_distance;
pub use mmd::{kid, mmd_biased, mmd_linear, mmd_rbf, mmd_rbf_with, sigma_grid, Kernel, SIGMA_BASE};
pub use prdc::{prdc, prdc_from_distances, Prdc};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every metric the crate can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    Fd,
    Kid,
    MmdLinear,
    MmdRbf,
    Precision,
    Recall,
    Density,
    Coverage,
    F1Pr,
    F1Dc,
    DegreeMmd,
    ClusteringMmd,
    OrbitMmd,
}

impl MetricId {
    pub const ALL: [MetricId; 13] = [
        MetricId::Fd,
        MetricId::Kid,
        MetricId::MmdLinear,
        MetricId::MmdRbf,
        MetricId::Precision,
        MetricId::Recall,
        MetricId::Density,
        MetricId::Coverage,
        MetricId::F1Pr,
        MetricId::F1Dc,
        MetricId::DegreeMmd,
        MetricId::ClusteringMmd,
        MetricId::OrbitMmd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetricId::Fd => "fd",
            MetricId::Kid => "kid",
            MetricId::MmdLinear => "mmd_linear",
            MetricId::MmdRbf => "mmd_rbf",
            MetricId::Precision => "precision",
            MetricId::Recall => "recall",
            MetricId::Density => "density",
            MetricId::Coverage => "coverage",
            MetricId::F1Pr => "f1_pr",
            MetricId::F1Dc => "f1_dc",
            MetricId::DegreeMmd => "degree_mmd",
            MetricId::ClusteringMmd => "clustering_mmd",
            MetricId::OrbitMmd => "orbit_mmd",
        }
    }

    /// Larger raw value means more similar sets.
    pub fn is_similarity(&self) -> bool {
        matches!(
            self,
            MetricId::Precision
                | MetricId::Recall
                | MetricId::Density
                | MetricId::Coverage
                | MetricId::F1Pr
                | MetricId::F1Dc
        )
    }

    /// Computed from graph statistics rather than GIN embeddings.
    pub fn is_classical(&self) -> bool {
        matches!(
            self,
            MetricId::DegreeMmd | MetricId::ClusteringMmd | MetricId::OrbitMmd
        )
    }

    /// Uses the k-nearest-neighbour balls.
    pub fn uses_knn(&self) -> bool {
        self.is_similarity()
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<MetricId> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        MetricId::ALL
            .iter()
            .copied()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown metric '{s}'")))
    }
}

/// A metric value with its dissimilarity form, which is about 0 for
/// identical distributions and grows as they separate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub metric: MetricId,
    pub raw: f64,
    pub dissimilarity: f64,
}

impl MetricScore {
    pub fn new(metric: MetricId, raw: f64) -> MetricScore {
        MetricScore {
            metric,
            raw,
            dissimilarity: to_dissimilarity(metric, raw),
        }
    }
}

/// Distances pass through; similarities `s` become `1 − s`.
pub fn to_dissimilarity(metric: MetricId, raw: f64) -> f64 {
    if metric.is_similarity() {
        1.0 - raw
    } else {
        raw
    }
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f1(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.0
    } else {
        2.0 * a * b / (a + b)
    }
}
