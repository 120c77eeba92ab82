use nalgebra::{DMatrix, SymmetricEigen};

use super::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Principal-component projection of an embedding matrix.
#[derive(Debug, Clone)]
pub struct Pca {
    /// Column means removed before projecting.
    pub mean: Vec<f64>,
    /// `k` unit loading vectors; zero for components beyond the data rank.
    pub components: Vec<Vec<f64>>,
    /// Variance along each component (unbiased covariance eigenvalues).
    pub variances: Vec<f64>,
    /// Fraction of the total variance per component.
    pub explained_ratio: Vec<f64>,
    /// `n × k` projected coordinates.
    pub coords: EmbeddingMatrix,
}

impl Pca {
    /// Maps projected coordinates back into the embedding space.
    pub fn reconstruct(&self) -> EmbeddingMatrix {
        let cols = self.mean.len();
        let rows = (0..self.coords.rows())
            .map(|i| {
                let mut x = self.mean.clone();
                for (c, comp) in self.coords.row(i).iter().zip(&self.components) {
                    for (xi, w) in x.iter_mut().zip(comp) {
                        *xi += c * w;
                    }
                }
                x
            })
            .collect();
        EmbeddingMatrix::from_rows(rows, cols).expect("finite reconstruction")
    }
}

/// Projects `x` onto its top-`k` principal axes. Each axis is signed so its
/// largest-magnitude loading is positive. Axes beyond the numerical rank are
/// returned as zeros with a warning.
pub fn pca_project(x: &EmbeddingMatrix, k: usize) -> Result<Pca> {
    let (n, d) = (x.rows(), x.cols());
    if n < 2 {
        return Err(Error::Precondition("PCA needs at least two rows".into()));
    }
    if k > d {
        return Err(Error::InvalidParameter(format!(
            "cannot take {k} components of {d}-dimensional data"
        )));
    }
    let m = x.to_dmatrix();
    let mean: Vec<f64> = m.column_iter().map(|c| c.mean()).collect();
    let centered = DMatrix::from_fn(n, d, |i, j| m[(i, j)] - mean[j]);
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let total: f64 = eig.eigenvalues.iter().map(|v| v.max(0.0)).sum();
    let top = eig.eigenvalues[order[0]].max(0.0);
    let tol = top * 1e-12 * d as f64;

    let mut components = Vec::with_capacity(k);
    let mut variances = Vec::with_capacity(k);
    let mut zero_filled = 0;
    for &idx in order.iter().take(k) {
        let value = eig.eigenvalues[idx];
        if value <= tol || top == 0.0 {
            components.push(vec![0.0; d]);
            variances.push(0.0);
            zero_filled += 1;
            continue;
        }
        let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        let pivot = v
            .iter()
            .enumerate()
            .fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
        if v[pivot] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        components.push(v);
        variances.push(value);
    }
    if zero_filled > 0 {
        log::warn!("PCA: {zero_filled} of {k} requested components exceed the data rank; zero-filled");
    }
    let explained_ratio = variances
        .iter()
        .map(|v| if total > 0.0 { v / total } else { 0.0 })
        .collect();
    let mut coords = Vec::with_capacity(n * k);
    for i in 0..n {
        for comp in &components {
            coords.push((0..d).map(|j| centered[(i, j)] * comp[j]).sum());
        }
    }
    Ok(Pca {
        mean,
        components,
        variances,
        explained_ratio,
        coords: EmbeddingMatrix::new(n, k, coords)?,
    })
}
