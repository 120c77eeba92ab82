use rayon::prelude::*;

use super::{f1, MetricId, MetricScore, PairwiseDistances};
use crate::embed::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Precision, recall, density and coverage of a generated set against a
/// reference set, using closed k-nearest-neighbour balls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prdc {
    pub precision: f64,
    pub recall: f64,
    pub density: f64,
    pub coverage: f64,
}

impl Prdc {
    pub fn f1_pr(&self) -> f64 {
        f1(self.precision, self.recall)
    }

    pub fn f1_dc(&self) -> f64 {
        f1(self.density, self.coverage)
    }

    pub fn get(&self, metric: MetricId) -> Option<f64> {
        Some(match metric {
            MetricId::Precision => self.precision,
            MetricId::Recall => self.recall,
            MetricId::Density => self.density,
            MetricId::Coverage => self.coverage,
            MetricId::F1Pr => self.f1_pr(),
            MetricId::F1Dc => self.f1_dc(),
            _ => return None,
        })
    }

    pub fn scores(&self) -> Vec<MetricScore> {
        [
            MetricId::Precision,
            MetricId::Recall,
            MetricId::Density,
            MetricId::Coverage,
            MetricId::F1Pr,
            MetricId::F1Dc,
        ]
        .into_iter()
        .map(|m| MetricScore::new(m, self.get(m).unwrap()))
        .collect()
    }
}

/// Squared distance from each point to its k-th nearest neighbour in its own
/// set, the point itself excluded.
fn knn_radii(matrix: &[f64], n: usize, k: usize) -> Vec<f64> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let row = &matrix[i * n..(i + 1) * n];
            let mut others: Vec<f64> = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &d)| d)
                .collect();
            let (_, kth, _) = others.select_nth_unstable_by(k - 1, f64::total_cmp);
            *kth
        })
        .collect()
}

pub fn prdc_from_distances(d: &PairwiseDistances, k: usize) -> Result<Prdc> {
    let (n_r, n_g) = (d.n_ref(), d.n_gen());
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n_r <= k || n_g <= k {
        return Err(Error::Precondition(format!(
            "k = {k} needs more than {k} samples per set (got {n_r} and {n_g})"
        )));
    }
    let rad_r = knn_radii(d.ref_ref(), n_r, k);
    let rad_g = knn_radii(d.gen_gen(), n_g, k);

    // counts[j] = number of reference balls containing generated point j
    let mut counts = vec![0usize; n_g];
    let mut covered = 0usize;
    let mut recalled = 0usize;
    for i in 0..n_r {
        let row = d.ref_gen_row(i);
        let mut any_inside = false;
        let mut reaches_gen_ball = false;
        for (j, &dist) in row.iter().enumerate() {
            if dist <= rad_r[i] {
                counts[j] += 1;
                any_inside = true;
            }
            if dist <= rad_g[j] {
                reaches_gen_ball = true;
            }
        }
        covered += any_inside as usize;
        recalled += reaches_gen_ball as usize;
    }
    let precise = counts.iter().filter(|&&c| c > 0).count();
    let total: usize = counts.iter().sum();
    Ok(Prdc {
        precision: precise as f64 / n_g as f64,
        recall: recalled as f64 / n_r as f64,
        density: total as f64 / (k * n_g) as f64,
        coverage: covered as f64 / n_r as f64,
    })
}

pub fn prdc(x_r: &EmbeddingMatrix, x_g: &EmbeddingMatrix, k: usize) -> Result<Prdc> {
    prdc_from_distances(&PairwiseDistances::new(x_r, x_g)?, k)
}
