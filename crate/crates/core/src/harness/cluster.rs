//! Weisfeiler–Lehman subtree kernel and affinity-propagation clustering.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphSet};
use crate::rng::seeded;

pub const WL_ITERATIONS: usize = 3;

/// Sparse subtree-pattern counts, sorted by pattern id.
pub type WlFeatures = Vec<(u32, f64)>;

/// WL feature vectors for a collection of graphs sharing one pattern
/// dictionary. Every node starts with the same label; rounds `0..=h` are
/// all counted.
pub fn wl_features(graphs: &[&Graph], h: usize) -> Vec<WlFeatures> {
    let mut dictionary: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
    let mut labels: Vec<Vec<u32>> = graphs.iter().map(|g| vec![0; g.num_nodes()]).collect();
    let mut next = 1u32;
    let mut counts: Vec<HashMap<u32, f64>> = labels
        .iter()
        .map(|l| {
            let mut m = HashMap::new();
            if !l.is_empty() {
                m.insert(0, l.len() as f64);
            }
            m
        })
        .collect();
    for _ in 0..h {
        for (gi, g) in graphs.iter().enumerate() {
            let old = &labels[gi];
            let new: Vec<u32> = (0..g.num_nodes())
                .map(|v| {
                    let mut nb: Vec<u32> = g.neighbors(v).iter().map(|&u| old[u]).collect();
                    nb.sort_unstable();
                    *dictionary.entry((old[v], nb)).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect();
            for &l in &new {
                *counts[gi].entry(l).or_insert(0.0) += 1.0;
            }
            labels[gi] = new;
        }
    }
    counts
        .into_iter()
        .map(|m| {
            let mut v: Vec<(u32, f64)> = m.into_iter().collect();
            v.sort_unstable_by_key(|&(k, _)| k);
            v
        })
        .collect()
}

fn sparse_dot(a: &WlFeatures, b: &WlFeatures) -> f64 {
    let (mut i, mut j, mut s) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Unnormalised WL subtree kernel between two graphs.
pub fn wl_subtree_kernel(g1: &Graph, g2: &Graph, h: usize) -> f64 {
    let f = wl_features(&[g1, g2], h);
    sparse_dot(&f[0], &f[1])
}

/// `k(g1, g2) / √(k(g1, g1) k(g2, g2))`, 0 if either self-kernel is 0.
pub fn wl_subtree_kernel_normalized(g1: &Graph, g2: &Graph, h: usize) -> f64 {
    let f = wl_features(&[g1, g2], h);
    let denom = (sparse_dot(&f[0], &f[0]) * sparse_dot(&f[1], &f[1])).sqrt();
    if denom > 0.0 {
        sparse_dot(&f[0], &f[1]) / denom
    } else {
        0.0
    }
}

/// Normalised WL kernel matrix of a set, row-major `n × n`.
pub fn wl_similarity_matrix(set: &GraphSet, h: usize) -> Vec<f64> {
    let refs: Vec<&Graph> = set.iter().collect();
    let f = wl_features(&refs, h);
    let n = f.len();
    let diag: Vec<f64> = f.iter().map(|x| sparse_dot(x, x)).collect();
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let d = (diag[i] * diag[j]).sqrt();
            let v = if d > 0.0 { sparse_dot(&f[i], &f[j]) / d } else { 0.0 };
            s[i * n + j] = v;
            s[j * n + i] = v;
        }
    }
    s
}

/// A partition of a set into clusters with one exemplar each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    /// Cluster id of each item.
    pub assignment: Vec<usize>,
    /// Item index of each cluster's exemplar.
    pub exemplars: Vec<usize>,
    /// Set when message passing found no exemplar and everything was put in
    /// a single cluster.
    pub fallback: bool,
}

impl Clustering {
    pub fn num_clusters(&self) -> usize {
        self.exemplars.len()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == cluster)
            .collect()
    }

    fn single(n: usize, exemplar: usize, fallback: bool) -> Clustering {
        Clustering {
            assignment: vec![0; n],
            exemplars: vec![exemplar],
            fallback,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinityOptions {
    pub damping: f64,
    pub max_iter: usize,
    /// Stop once the exemplar set has not changed for this many rounds.
    pub convergence_iter: usize,
    /// Diagonal preference; the median off-diagonal similarity when `None`.
    pub preference: Option<f64>,
    /// Seed of the relative-size-ε Gaussian noise added to the similarities
    /// to break exact ties, which otherwise make the messages oscillate;
    /// `None` disables it.
    pub jitter_seed: Option<u64>,
}

impl Default for AffinityOptions {
    fn default() -> Self {
        AffinityOptions {
            damping: 0.5,
            max_iter: 200,
            convergence_iter: 15,
            preference: None,
            jitter_seed: Some(0),
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn argmax(row: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in row.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Affinity propagation on a row-major `n × n` similarity matrix.
///
/// Exemplars are the points with positive `r(i,i) + a(i,i)` once the
/// exemplar set is stable; each exemplar is then moved to the member that
/// maximises total within-cluster similarity and points are assigned to
/// their most similar exemplar. If every similarity and the preference are
/// equal the whole set forms one cluster around item 0.
pub fn affinity_propagation(similarity: &[f64], n: usize, opts: &AffinityOptions) -> Result<Clustering> {
    if similarity.len() != n * n {
        return Err(Error::InvalidParameter(format!(
            "similarity matrix has {} entries, expected {n}×{n}",
            similarity.len()
        )));
    }
    if !(0.5..1.0).contains(&opts.damping) {
        return Err(Error::InvalidParameter("damping must lie in [0.5, 1)".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("cannot cluster an empty set".into()));
    }
    if n == 1 {
        return Ok(Clustering::single(1, 0, false));
    }
    let off: Vec<f64> = (0..n * n).filter(|i| i / n != i % n).map(|i| similarity[i]).collect();
    let pref = opts.preference.unwrap_or_else(|| median(off.clone()));
    if off.iter().all(|&x| x == off[0]) && pref <= off[0] {
        return Ok(Clustering::single(n, 0, false));
    }

    let mut s = similarity.to_vec();
    for i in 0..n {
        s[i * n + i] = pref;
    }
    if let Some(seed) = opts.jitter_seed {
        let mut r = seeded(seed);
        for x in &mut s {
            let z: f64 = r.sample(StandardNormal);
            *x += (f64::EPSILON * *x + f64::MIN_POSITIVE * 100.0) * z;
        }
    }
    let lambda = opts.damping;
    let mut r = vec![0.0; n * n];
    let mut a = vec![0.0; n * n];
    let mut history: Vec<Vec<bool>> = Vec::new();
    let mut exemplar_flags = vec![false; n];
    for it in 0..opts.max_iter {
        // responsibilities
        for i in 0..n {
            let row = i * n;
            let (mut first, mut second, mut best_k) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0);
            for k in 0..n {
                let v = a[row + k] + s[row + k];
                if v > first {
                    second = first;
                    first = v;
                    best_k = k;
                } else if v > second {
                    second = v;
                }
            }
            for k in 0..n {
                let competitor = if k == best_k { second } else { first };
                let new = s[row + k] - competitor;
                r[row + k] = lambda * r[row + k] + (1.0 - lambda) * new;
            }
        }
        // availabilities
        for k in 0..n {
            let positive: f64 = (0..n).filter(|&i| i != k).map(|i| r[i * n + k].max(0.0)).sum();
            for i in 0..n {
                let new = if i == k {
                    positive
                } else {
                    (r[k * n + k] + positive - r[i * n + k].max(0.0)).min(0.0)
                };
                a[i * n + k] = lambda * a[i * n + k] + (1.0 - lambda) * new;
            }
        }
        exemplar_flags = (0..n).map(|i| r[i * n + i] + a[i * n + i] > 0.0).collect();
        history.push(exemplar_flags.clone());
        if history.len() > opts.convergence_iter {
            history.remove(0);
        }
        if it + 1 >= opts.convergence_iter
            && history.len() == opts.convergence_iter
            && history.iter().all(|h| *h == exemplar_flags)
            && exemplar_flags.iter().any(|&e| e)
        {
            break;
        }
    }

    let mut exemplars: Vec<usize> = (0..n).filter(|&i| exemplar_flags[i]).collect();
    if exemplars.is_empty() {
        let totals = (0..n).map(|j| (0..n).map(|i| similarity[i * n + j]).sum::<f64>());
        log::warn!("affinity propagation found no exemplar; using a single cluster");
        return Ok(Clustering::single(n, argmax(totals), true));
    }
    let assign = |exemplars: &[usize]| -> Vec<usize> {
        (0..n)
            .map(|i| match exemplars.iter().position(|&e| e == i) {
                Some(c) => c,
                None => argmax(exemplars.iter().map(|&e| similarity[i * n + e])),
            })
            .collect()
    };
    let first = assign(&exemplars);
    for (c, ex) in exemplars.iter_mut().enumerate() {
        let members: Vec<usize> = (0..n).filter(|&i| first[i] == c).collect();
        let best = argmax(
            members
                .iter()
                .map(|&j| members.iter().map(|&i| similarity[i * n + j]).sum::<f64>()),
        );
        *ex = members[best];
    }
    exemplars.sort_unstable();
    exemplars.dedup();
    let assignment = assign(&exemplars);
    Ok(Clustering {
        assignment,
        exemplars,
        fallback: false,
    })
}

/// Clusters a graph set by affinity propagation on the normalised WL kernel.
pub fn cluster_graphs(set: &GraphSet, h: usize, seed: u64) -> Result<Clustering> {
    let opts = AffinityOptions {
        jitter_seed: Some(seed),
        ..AffinityOptions::default()
    };
    affinity_propagation(&wl_similarity_matrix(set, h), set.len(), &opts)
}
