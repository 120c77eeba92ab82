//! Slow, obviously-correct reference implementations used to check the
//! library's fast paths.

#![allow(dead_code)]

pub mod checks;

use std::collections::{BTreeSet, HashMap};

use ggm_eval::embed::EmbeddingMatrix;
use ggm_eval::graph::Graph;
use ggm_eval::rng::seeded;
use rand::Rng;

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = seeded(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn random_matrix(rows: usize, cols: usize, scale: f64, seed: u64) -> EmbeddingMatrix {
    let mut r = seeded(seed);
    let data = (0..rows * cols).map(|_| scale * (r.random::<f64>() * 2.0 - 1.0)).collect();
    EmbeddingMatrix::new(rows, cols, data).unwrap()
}

// ---------------------------------------------------------------- orbits

fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.num_nodes();
    let mut a = vec![vec![false; n]; n];
    for &(i, j) in g.edges() {
        a[i][j] = true;
        a[j][i] = true;
    }
    a
}

fn connected(nodes: &[usize], a: &[Vec<bool>]) -> bool {
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..nodes.len() {
            if !seen[y] && a[nodes[x]][nodes[y]] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Orbit of each node of a connected induced subgraph on 2–4 nodes, from
/// its edge count and the node's degree inside the subgraph.
fn classify(nodes: &[usize], a: &[Vec<bool>]) -> Vec<usize> {
    let deg: Vec<usize> = nodes
        .iter()
        .map(|&u| nodes.iter().filter(|&&v| a[u][v]).count())
        .collect();
    let edges = deg.iter().sum::<usize>() / 2;
    let max = *deg.iter().max().unwrap();
    deg.iter()
        .map(|&d| match (nodes.len(), edges) {
            (2, 1) => 0,
            (3, 2) => if d == 1 { 1 } else { 2 },
            (3, 3) => 3,
            (4, 3) if max == 3 => if d == 1 { 6 } else { 7 },
            (4, 3) => if d == 1 { 4 } else { 5 },
            (4, 4) if max == 2 => 8,
            (4, 4) => match d {
                1 => 9,
                2 => 10,
                _ => 11,
            },
            (4, 5) => if d == 2 { 12 } else { 13 },
            (4, 6) => 14,
            other => unreachable!("not a connected graphlet: {other:?}"),
        })
        .collect()
}

/// Per-node counts of the 15 graphlet orbits on up to four nodes, by
/// enumerating every node subset and classifying its induced subgraph.
pub fn brute_force_orbits(g: &Graph) -> Vec<[u64; 15]> {
    let n = g.num_nodes();
    let a = adjacency(g);
    let mut out = vec![[0u64; 15]; n];
    let mut visit = |nodes: &[usize]| {
        if connected(nodes, &a) {
            for (&v, o) in nodes.iter().zip(classify(nodes, &a)) {
                out[v][o] += 1;
            }
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            visit(&[i, j]);
            for k in j + 1..n {
                visit(&[i, j, k]);
                for l in k + 1..n {
                    visit(&[i, j, k, l]);
                }
            }
        }
    }
    out
}

// ------------------------------------------------------------------- EMD

/// Earth mover's distance between two histograms of equal mass with ground
/// distance `|i − j| · bin_width`, solved as a min-cost flow by successive
/// shortest paths (Bellman–Ford on the residual network).
pub fn emd_min_cost_flow(a: &[f64], b: &[f64], bin_width: f64) -> f64 {
    let (m, k) = (a.len(), b.len());
    // nodes: 0 source, 1..=m supplies, m+1..=m+k demands, m+k+1 sink
    let n = m + k + 2;
    let (src, sink) = (0, n - 1);
    struct Arc {
        to: usize,
        cap: f64,
        cost: f64,
    }
    let mut arcs: Vec<Arc> = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut add = |from: usize, to: usize, cap: f64, cost: f64, arcs: &mut Vec<Arc>| {
        out[from].push(arcs.len());
        arcs.push(Arc { to, cap, cost });
        out[to].push(arcs.len());
        arcs.push(Arc { to: from, cap: 0.0, cost: -cost });
    };
    for (i, &x) in a.iter().enumerate() {
        add(src, 1 + i, x, 0.0, &mut arcs);
    }
    for (j, &y) in b.iter().enumerate() {
        add(1 + m + j, sink, y, 0.0, &mut arcs);
    }
    for i in 0..m {
        for j in 0..k {
            let cost = (i as f64 - j as f64).abs() * bin_width;
            add(1 + i, 1 + m + j, f64::INFINITY, cost, &mut arcs);
        }
    }
    let mut total = 0.0;
    loop {
        let mut dist = vec![f64::INFINITY; n];
        let mut via: Vec<Option<usize>> = vec![None; n];
        dist[src] = 0.0;
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                if dist[u].is_infinite() {
                    continue;
                }
                for &e in &out[u] {
                    let arc = &arcs[e];
                    if arc.cap > 1e-15 && dist[u] + arc.cost < dist[arc.to] - 1e-15 {
                        dist[arc.to] = dist[u] + arc.cost;
                        via[arc.to] = Some(e);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink].is_infinite() {
            return total;
        }
        let mut push = f64::INFINITY;
        let mut v = sink;
        while let Some(e) = via[v] {
            push = push.min(arcs[e].cap);
            v = arcs[e ^ 1].to;
        }
        let mut v = sink;
        while let Some(e) = via[v] {
            arcs[e].cap -= push;
            arcs[e ^ 1].cap += push;
            v = arcs[e ^ 1].to;
        }
        total += push * dist[sink];
    }
}

// ------------------------------------------------------------------- MMD

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Biased MMD² with an arbitrary kernel, by three plain double loops.
pub fn mmd_double_loop(x: &EmbeddingMatrix, y: &EmbeddingMatrix, k: impl Fn(&[f64], &[f64]) -> f64) -> f64 {
    let mean = |p: &EmbeddingMatrix, q: &EmbeddingMatrix| {
        let mut s = 0.0;
        for i in 0..p.rows() {
            for j in 0..q.rows() {
                s += k(p.row(i), q.row(j));
            }
        }
        s / (p.rows() * q.rows()) as f64
    };
    mean(x, x) + mean(y, y) - 2.0 * mean(x, y)
}

/// Mean Euclidean distance over unordered pairs of distinct points of the
/// union of both sets.
pub fn mean_pooled_distance(x: &EmbeddingMatrix, y: &EmbeddingMatrix) -> f64 {
    let pooled: Vec<&[f64]> = x.iter_rows().chain(y.iter_rows()).collect();
    let (mut s, mut c) = (0.0, 0usize);
    for i in 0..pooled.len() {
        for j in i + 1..pooled.len() {
            s += sq_dist(pooled[i], pooled[j]).sqrt();
            c += 1;
        }
    }
    s / c as f64
}

pub fn mmd_rbf_oracle(x: &EmbeddingMatrix, y: &EmbeddingMatrix) -> f64 {
    let scale = mean_pooled_distance(x, y);
    [0.01, 0.1, 0.25, 0.5, 0.75, 1.0, 2.5, 5.0, 7.5, 10.0]
        .iter()
        .map(|b| {
            let sigma = b * scale;
            mmd_double_loop(x, y, |p, q| (-sq_dist(p, q) / (2.0 * sigma * sigma)).exp())
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

// -------------------------------------------------------------------- FD

pub type Mat = Vec<Vec<f64>>;

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix by cyclic
/// Jacobi rotations.
pub fn jacobi_eigen(m: &Mat) -> (Vec<f64>, Mat) {
    let n = m.len();
    let mut a = m.clone();
    let mut v: Mat = (0..n).map(|i| (0..n).map(|j| f64::from(i == j)).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn psd_sqrt(m: &Mat) -> Mat {
    let (vals, vecs) = jacobi_eigen(m);
    let n = m.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| vecs[i][k] * vals[k].max(0.0).sqrt() * vecs[j][k]).sum())
                .collect()
        })
        .collect()
}

pub fn mean_cov(x: &EmbeddingMatrix) -> (Vec<f64>, Mat) {
    let (n, d) = (x.rows(), x.cols());
    let mu: Vec<f64> = (0..d).map(|j| x.iter_rows().map(|r| r[j]).sum::<f64>() / n as f64).collect();
    let cov = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| x.iter_rows().map(|r| (r[a] - mu[a]) * (r[b] - mu[b])).sum::<f64>() / (n - 1) as f64)
                .collect()
        })
        .collect();
    (mu, cov)
}

/// Fréchet distance between Gaussian fits, with the matrix square root
/// taken through Jacobi eigendecompositions.
pub fn frechet_oracle(x: &EmbeddingMatrix, y: &EmbeddingMatrix) -> f64 {
    let (mx, cx) = mean_cov(x);
    let (my, cy) = mean_cov(y);
    let root = psd_sqrt(&cx);
    let inner = matmul(&matmul(&root, &cy), &root);
    let (vals, _) = jacobi_eigen(&inner);
    let tr_sqrt: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
    let tr = |m: &Mat| (0..m.len()).map(|i| m[i][i]).sum::<f64>();
    (sq_dist(&mx, &my) + tr(&cx) + tr(&cy) - 2.0 * tr_sqrt).max(0.0)
}

/// `tr √M` for a 2×2 positive semi-definite matrix: `√(tr M + 2√det M)`.
pub fn trace_sqrt_2x2(m: &Mat) -> f64 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    (m[0][0] + m[1][1] + 2.0 * det.max(0.0).sqrt()).sqrt()
}

// -------------------------------------------------------------- Spearman

/// `1 − 6 Σ d² / (n(n² − 1))` for inputs without ties.
pub fn spearman_closed_form(x: &[f64], y: &[f64]) -> f64 {
    let rank = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let (rx, ry) = (rank(x), rank(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

// ------------------------------------------------------------------ PRDC

/// Precision, recall, density, coverage straight from their definitions.
pub fn prdc_oracle(real: &EmbeddingMatrix, fake: &EmbeddingMatrix, k: usize) -> [f64; 4] {
    let radius = |set: &EmbeddingMatrix, i: usize| {
        let mut d: Vec<f64> = (0..set.rows())
            .filter(|&j| j != i)
            .map(|j| sq_dist(set.row(i), set.row(j)))
            .collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        d[k - 1]
    };
    let rr: Vec<f64> = (0..real.rows()).map(|i| radius(real, i)).collect();
    let rf: Vec<f64> = (0..fake.rows()).map(|i| radius(fake, i)).collect();
    let inside = |p: &[f64], set: &EmbeddingMatrix, radii: &[f64]| {
        (0..set.rows()).filter(|&i| sq_dist(p, set.row(i)) <= radii[i]).count()
    };
    let (n, m) = (real.rows() as f64, fake.rows() as f64);
    let precision = fake.iter_rows().filter(|p| inside(p, real, &rr) > 0).count() as f64 / m;
    let recall = real.iter_rows().filter(|p| inside(p, fake, &rf) > 0).count() as f64 / n;
    let density = fake.iter_rows().map(|p| inside(p, real, &rr) as f64).sum::<f64>() / (k as f64 * m);
    let coverage = (0..real.rows())
        .filter(|&i| fake.iter_rows().any(|p| sq_dist(p, real.row(i)) <= rr[i]))
        .count() as f64
        / n;
    [precision, recall, density, coverage]
}

// --------------------------------------------------------------- rewiring

type EdgeSet = BTreeSet<(usize, usize)>;

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Exact expected fraction of original edges still present after rewiring
/// every edge of `edges` (in order) on `n` nodes: keep a uniformly chosen
/// endpoint, redraw the other uniformly over all nodes, retry up to
/// `tries` times on self-loops and duplicates, else keep the edge.
pub fn rewire_survival_exact(n: usize, edges: &[(usize, usize)], tries: i32) -> f64 {
    let original: EdgeSet = edges.iter().copied().collect();
    // distribution over (slot contents) states
    let mut states: HashMap<Vec<(usize, usize)>, f64> = HashMap::new();
    states.insert(edges.to_vec(), 1.0);
    for e in 0..edges.len() {
        let mut next: HashMap<Vec<(usize, usize)>, f64> = HashMap::new();
        for (slots, p) in &states {
            let (i, j) = slots[e];
            let present: EdgeSet = slots.iter().enumerate().filter(|&(s, _)| s != e).map(|(_, &x)| x).collect();
            for keep in [i, j] {
                let valid: Vec<usize> = (0..n).filter(|&w| w != keep && !present.contains(&key(keep, w))).collect();
                let r = (n - valid.len()) as f64 / n as f64;
                let exhausted = r.powi(tries);
                let per_valid = (1.0 - exhausted) / valid.len().max(1) as f64;
                let mut push = |edge: (usize, usize), q: f64| {
                    if q > 0.0 {
                        let mut s = slots.clone();
                        s[e] = edge;
                        *next.entry(s).or_insert(0.0) += p * 0.5 * q;
                    }
                };
                for &w in &valid {
                    push(key(keep, w), per_valid);
                }
                push((i, j), exhausted);
            }
        }
        states = next;
    }
    states
        .iter()
        .map(|(slots, p)| p * slots.iter().filter(|x| original.contains(x)).count() as f64 / edges.len() as f64)
        .sum()
}

// ---------------------------------------------------- affinity propagation

/// Textbook affinity propagation without noise: exemplars and the index of
/// each point's exemplar.
pub fn affinity_propagation_oracle(s_in: &Mat, preference: f64, damping: f64, iters: usize) -> (Vec<usize>, Vec<usize>) {
    let n = s_in.len();
    let mut s = s_in.clone();
    for (i, row) in s.iter_mut().enumerate() {
        row[i] = preference;
    }
    let mut r = vec![vec![0.0; n]; n];
    let mut a = vec![vec![0.0; n]; n];
    for _ in 0..iters {
        for i in 0..n {
            for k in 0..n {
                let competitor = (0..n)
                    .filter(|&kk| kk != k)
                    .map(|kk| a[i][kk] + s[i][kk])
                    .fold(f64::NEG_INFINITY, f64::max);
                r[i][k] = damping * r[i][k] + (1.0 - damping) * (s[i][k] - competitor);
            }
        }
        let mut new_a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                let others: f64 = (0..n).filter(|&ii| ii != i && ii != k).map(|ii| r[ii][k].max(0.0)).sum();
                new_a[i][k] = if i == k { others } else { (r[k][k] + others).min(0.0) };
            }
        }
        for i in 0..n {
            for k in 0..n {
                a[i][k] = damping * a[i][k] + (1.0 - damping) * new_a[i][k];
            }
        }
    }
    let exemplars: Vec<usize> = (0..n).filter(|&i| r[i][i] + a[i][i] > 0.0).collect();
    let assignment = (0..n)
        .map(|i| {
            if exemplars.contains(&i) {
                i
            } else {
                *exemplars
                    .iter()
                    .max_by(|&&x, &&y| s_in[i][x].partial_cmp(&s_in[i][y]).unwrap())
                    .unwrap()
            }
        })
        .collect();
    (exemplars, assignment)
}
