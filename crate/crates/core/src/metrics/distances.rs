use rayon::prelude::*;

use crate::embed::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Squared Euclidean distances within and across a reference set `R` and a
/// generated set `G`, stored as full row-major matrices.
#[derive(Debug, Clone)]
pub struct PairwiseDistances {
    n_ref: usize,
    n_gen: usize,
    ref_ref: Vec<f64>,
    gen_gen: Vec<f64>,
    ref_gen: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn cross(a: &EmbeddingMatrix, b: &EmbeddingMatrix) -> Vec<f64> {
    let cols = b.rows();
    let mut out = vec![0.0; a.rows() * cols];
    if cols == 0 {
        return out;
    }
    out.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
        let x = a.row(i);
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = sq_dist(x, b.row(j));
        }
    });
    out
}

fn within(a: &EmbeddingMatrix) -> Vec<f64> {
    let n = a.rows();
    let mut out = vec![0.0; n * n];
    if n == 0 {
        return out;
    }
    out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let x = a.row(i);
        for (j, slot) in row.iter_mut().enumerate().skip(i + 1) {
            *slot = sq_dist(x, a.row(j));
        }
    });
    // Mirror so the matrix is exactly symmetric with a zero diagonal.
    for i in 0..n {
        for j in 0..i {
            out[i * n + j] = out[j * n + i];
        }
    }
    out
}

impl PairwiseDistances {
    pub fn new(reference: &EmbeddingMatrix, generated: &EmbeddingMatrix) -> Result<Self> {
        if reference.cols() != generated.cols() {
            return Err(Error::InvalidParameter(format!(
                "embedding widths differ: {} vs {}",
                reference.cols(),
                generated.cols()
            )));
        }
        Ok(PairwiseDistances {
            n_ref: reference.rows(),
            n_gen: generated.rows(),
            ref_ref: within(reference),
            gen_gen: within(generated),
            ref_gen: cross(reference, generated),
        })
    }

    pub fn n_ref(&self) -> usize {
        self.n_ref
    }

    pub fn n_gen(&self) -> usize {
        self.n_gen
    }

    /// Row `i` of the reference-reference matrix.
    pub fn ref_ref_row(&self, i: usize) -> &[f64] {
        &self.ref_ref[i * self.n_ref..(i + 1) * self.n_ref]
    }

    pub fn gen_gen_row(&self, i: usize) -> &[f64] {
        &self.gen_gen[i * self.n_gen..(i + 1) * self.n_gen]
    }

    /// Distances from reference point `i` to every generated point.
    pub fn ref_gen_row(&self, i: usize) -> &[f64] {
        &self.ref_gen[i * self.n_gen..(i + 1) * self.n_gen]
    }

    pub fn ref_ref(&self) -> &[f64] {
        &self.ref_ref
    }

    pub fn gen_gen(&self) -> &[f64] {
        &self.gen_gen
    }

    pub fn ref_gen(&self) -> &[f64] {
        &self.ref_gen
    }

    /// Mean Euclidean distance over all unordered pairs of distinct points in
    /// the pooled set `R ∪ G`; 0 when fewer than two points exist.
    pub fn mean_pooled_distance(&self) -> f64 {
        let pooled = self.n_ref + self.n_gen;
        if pooled < 2 {
            return 0.0;
        }
        let upper = |m: &[f64], n: usize| -> f64 {
            (0..n)
                .map(|i| m[i * n + i + 1..(i + 1) * n].iter().map(|d| d.sqrt()).sum::<f64>())
                .sum()
        };
        let total = upper(&self.ref_ref, self.n_ref)
            + upper(&self.gen_gen, self.n_gen)
            + self.ref_gen.iter().map(|d| d.sqrt()).sum::<f64>();
        total / (pooled * (pooled - 1) / 2) as f64
    }
}
