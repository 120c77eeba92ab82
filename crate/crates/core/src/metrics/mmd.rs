use rayon::prelude::*;

use super::{MetricId, MetricScore, PairwiseDistances};
use crate::embed::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Multipliers of the mean pooled distance that form the RBF bandwidth grid.
pub const SIGMA_BASE: [f64; 10] = [0.01, 0.1, 0.25, 0.5, 0.75, 1.0, 2.5, 5.0, 7.5, 10.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `xᵀy`
    Linear,
    /// `(xᵀy / d + 1)³` with `d` the embedding width.
    Polynomial,
    /// `exp(−dist / 2σ²)`, where `dist` is the squared Euclidean distance, or
    /// the plain distance when `squared` is false.
    Rbf { sigma: f64, squared: bool },
}

impl Kernel {
    fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => dot(a, b),
            Kernel::Polynomial => {
                let t = dot(a, b) / a.len() as f64 + 1.0;
                t * t * t
            }
            Kernel::Rbf { sigma, squared } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                rbf(d2, sigma, squared)
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rbf(sq_dist: f64, sigma: f64, squared: bool) -> f64 {
    let d = if squared { sq_dist } else { sq_dist.sqrt() };
    (-d / (2.0 * sigma * sigma)).exp()
}

fn check_sets(x: &EmbeddingMatrix, y: &EmbeddingMatrix) -> Result<()> {
    if x.rows() == 0 || y.rows() == 0 {
        return Err(Error::Precondition("MMD needs two non-empty sets".into()));
    }
    if x.cols() != y.cols() {
        return Err(Error::InvalidParameter(format!(
            "embedding widths differ: {} vs {}",
            x.cols(),
            y.cols()
        )));
    }
    Ok(())
}

fn kernel_mean(x: &EmbeddingMatrix, y: &EmbeddingMatrix, kernel: Kernel) -> f64 {
    let total: f64 = match kernel {
        Kernel::Linear => dot(&column_sums(x), &column_sums(y)),
        Kernel::Polynomial => {
            let d = x.cols() as f64;
            let gram = x.to_dmatrix() * y.to_dmatrix().transpose();
            gram.iter()
                .map(|&g| {
                    let t = g / d + 1.0;
                    t * t * t
                })
                .sum()
        }
        Kernel::Rbf { .. } => (0..x.rows())
            .into_par_iter()
            .map(|i| {
                let a = x.row(i);
                y.iter_rows().map(|b| kernel.eval(a, b)).sum::<f64>()
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum(),
    };
    total / (x.rows() * y.rows()) as f64
}

fn column_sums(x: &EmbeddingMatrix) -> Vec<f64> {
    let mut s = vec![0.0; x.cols()];
    for row in x.iter_rows() {
        for (acc, v) in s.iter_mut().zip(row) {
            *acc += v;
        }
    }
    s
}

/// Biased squared MMD: `E k(r,r') + E k(g,g') − 2 E k(r,g)`, diagonal terms
/// included.
pub fn mmd_biased(x_r: &EmbeddingMatrix, x_g: &EmbeddingMatrix, kernel: Kernel) -> Result<f64> {
    check_sets(x_r, x_g)?;
    if kernel == Kernel::Linear {
        // The three linear-kernel means collapse to ‖mean_r − mean_g‖².
        let (mr, mg) = (column_sums(x_r), column_sums(x_g));
        let (nr, ng) = (x_r.rows() as f64, x_g.rows() as f64);
        return Ok(mr.iter().zip(&mg).map(|(a, b)| (a / nr - b / ng).powi(2)).sum());
    }
    Ok(kernel_mean(x_r, x_r, kernel) + kernel_mean(x_g, x_g, kernel)
        - 2.0 * kernel_mean(x_r, x_g, kernel))
}

/// Kernel Inception Distance: MMD with the cubic polynomial kernel.
pub fn kid(x_r: &EmbeddingMatrix, x_g: &EmbeddingMatrix) -> Result<MetricScore> {
    Ok(MetricScore::new(MetricId::Kid, mmd_biased(x_r, x_g, Kernel::Polynomial)?))
}

pub fn mmd_linear(x_r: &EmbeddingMatrix, x_g: &EmbeddingMatrix) -> Result<MetricScore> {
    Ok(MetricScore::new(MetricId::MmdLinear, mmd_biased(x_r, x_g, Kernel::Linear)?))
}

/// Bandwidths `β · mean pooled distance` for each `β` in [`SIGMA_BASE`].
/// A zero mean distance (all points coincide) falls back to a unit scale.
pub fn sigma_grid(d: &PairwiseDistances) -> Vec<f64> {
    let mut scale = d.mean_pooled_distance();
    if !(scale > 0.0) {
        scale = 1.0;
    }
    SIGMA_BASE.iter().map(|b| b * scale).collect()
}

fn matrix_mean(m: &[f64], cols: usize, f: impl Fn(f64) -> f64 + Sync) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let rows: Vec<f64> = m
        .par_chunks(cols)
        .map(|row| row.iter().map(|&v| f(v)).sum::<f64>())
        .collect();
    rows.iter().sum::<f64>() / m.len() as f64
}

/// Mean of `f` over a symmetric square matrix with a zero diagonal, reading
/// only the strict upper triangle.
fn symmetric_mean(m: &[f64], n: usize, f: impl Fn(f64) -> f64 + Sync) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let rows: Vec<f64> = m
        .par_chunks(n)
        .enumerate()
        .map(|(i, row)| row[i + 1..].iter().map(|&v| f(v)).sum::<f64>())
        .collect();
    let upper: f64 = rows.iter().sum();
    (2.0 * upper + n as f64 * f(0.0)) / (n * n) as f64
}

/// RBF MMD maximised over the bandwidth grid, from precomputed distances.
/// Returns the value and the bandwidth that attained it.
pub fn mmd_rbf_with(d: &PairwiseDistances, squared: bool) -> Result<(f64, f64)> {
    if d.n_ref() == 0 || d.n_gen() == 0 {
        return Err(Error::Precondition("MMD needs two non-empty sets".into()));
    }
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for sigma in sigma_grid(d) {
        let k = |v: f64| rbf(v, sigma, squared);
        let value = symmetric_mean(d.ref_ref(), d.n_ref(), k) + symmetric_mean(d.gen_gen(), d.n_gen(), k)
            - 2.0 * matrix_mean(d.ref_gen(), d.n_gen(), k);
        if value > best.0 {
            best = (value, sigma);
        }
    }
    Ok(best)
}

/// RBF MMD with squared Euclidean distances, maximised over the bandwidth grid.
pub fn mmd_rbf(x_r: &EmbeddingMatrix, x_g: &EmbeddingMatrix) -> Result<MetricScore> {
    check_sets(x_r, x_g)?;
    let d = PairwiseDistances::new(x_r, x_g)?;
    let (value, _) = mmd_rbf_with(&d, true)?;
    Ok(MetricScore::new(MetricId::MmdRbf, value))
}
