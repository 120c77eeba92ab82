use nalgebra::{DMatrix, DVector};

use super::{MetricId, MetricScore};
use crate::embed::EmbeddingMatrix;
use crate::error::{Error, Result};

const EIGEN_FLOOR: f64 = 1e-10;
const JITTER: f64 = 1e-6;

fn moments(x: &EmbeddingMatrix) -> (DVector<f64>, DMatrix<f64>) {
    let n = x.rows();
    let d = x.cols();
    let mut mean = DVector::zeros(d);
    for row in x.iter_rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean /= n as f64;
    let mut centered = DMatrix::zeros(d, n);
    for (j, row) in x.iter_rows().enumerate() {
        for k in 0..d {
            centered[(k, j)] = row[k] - mean[k];
        }
    }
    let cov = (&centered * centered.transpose()) / (n - 1) as f64;
    (mean, symmetrize(cov))
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Adds `1e-6 · tr(C)/dim · I` when `C` has an eigenvalue below `1e-10`.
fn regularize(cov: DMatrix<f64>) -> DMatrix<f64> {
    let dim = cov.nrows();
    let min_eig = cov
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig >= EIGEN_FLOOR {
        return cov;
    }
    let eps = JITTER * cov.trace() / dim as f64;
    if eps > 0.0 {
        cov + DMatrix::identity(dim, dim) * eps
    } else {
        cov
    }
}

/// Lower Cholesky factor of a regularized covariance; an all-zero covariance
/// (every sample equal) has the zero factor.
fn factor(cov: &DMatrix<f64>) -> DMatrix<f64> {
    if let Some(c) = cov.clone().cholesky() {
        return c.l();
    }
    let dim = cov.nrows();
    let eps = JITTER * cov.trace().max(0.0) / dim as f64;
    match (cov + DMatrix::identity(dim, dim) * eps).cholesky() {
        Some(c) if eps > 0.0 => c.l(),
        _ => DMatrix::zeros(dim, dim),
    }
}

/// Fréchet distance between Gaussians fitted to the two sets:
/// `‖μ_r − μ_g‖² + tr C_r + tr C_g − 2 tr √(C_r^½ C_g C_r^½)`.
pub fn frechet_distance(x_r: &EmbeddingMatrix, x_g: &EmbeddingMatrix) -> Result<MetricScore> {
    if x_r.cols() != x_g.cols() {
        return Err(Error::InvalidParameter(format!(
            "embedding widths differ: {} vs {}",
            x_r.cols(),
            x_g.cols()
        )));
    }
    if x_r.rows() < 2 || x_g.rows() < 2 {
        return Err(Error::Precondition(
            "Fréchet distance needs at least two samples per set".into(),
        ));
    }
    let (mu_r, cov_r) = moments(x_r);
    let (mu_g, cov_g) = moments(x_g);
    let cov_r = regularize(cov_r);
    let cov_g = regularize(cov_g);
    // With C = L Lᵀ, tr √(C_r^½ C_g C_r^½) is the nuclear norm of L_gᵀ L_r,
    // and tr C_r + tr C_g − 2‖L_gᵀ L_r‖_* = min over orthogonal Q of
    // ‖L_r − L_g Q‖_F², attained at Q = U Vᵀ from the SVD of L_gᵀ L_r. The
    // squared-residual form has no cancellation between large traces.
    let (l_r, l_g) = (factor(&cov_r), factor(&cov_g));
    let svd = (l_g.transpose() * &l_r).svd(true, true);
    let q = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => u * v_t,
        _ => return Err(Error::Precondition("SVD of the covariance factors failed".into())),
    };
    let value = (&mu_r - &mu_g).norm_squared() + (&l_r - &l_g * q).norm_squared();
    Ok(MetricScore::new(MetricId::Fd, value))
}
