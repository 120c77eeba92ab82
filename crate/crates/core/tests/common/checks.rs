//! Seeded check loops shared by the oracle, property and acceptance tests.
//! Each returns a short summary on success and the first mismatch on failure.

use ggm_eval::classic::{emd_1d, orbit_counts};
use ggm_eval::embed::{forward, EmbeddingMatrix, GinConfig, GinWeights, Pooling};
use ggm_eval::graph::{generate_dataset, Dataset, FeatureSchema, Graph, GraphSet};
use ggm_eval::harness::{cluster_graphs, spearman, PerturbationKind, PerturbationStep};
use ggm_eval::metrics::{frechet_distance, mmd_biased, mmd_rbf, Kernel};
use ggm_eval::rng::{self, seeded};
use rand::Rng;

use super::*;

pub type Check = std::result::Result<String, String>;

pub fn orbits_vs_brute_force(graphs: usize) -> Check {
    for s in 0..graphs as u64 {
        let mut r = seeded(1000 + s);
        let n = 1 + rng::index(&mut r, 10);
        let p = r.random_range(0.1..0.9);
        let g = random_graph(n, p, s);
        let fast = orbit_counts(&g);
        let slow = brute_force_orbits(&g);
        if fast != slow {
            return Err(format!("graph {s} (n={n}, edges {:?}): {fast:?} vs {slow:?}", g.edges()));
        }
    }
    Ok(format!("{graphs} graphs exact"))
}

fn random_hist(bins: usize, r: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..bins).map(|_| r.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

pub fn emd_vs_min_cost_flow(pairs: usize, tol: f64) -> Check {
    let mut r = seeded(77);
    let mut worst: f64 = 0.0;
    for i in 0..pairs {
        let (a, b) = (random_hist(6, &mut r), random_hist(6, &mut r));
        let width = [1.0, 0.1, 0.25][i % 3];
        let fast = emd_1d(&a, &b, width);
        let slow = emd_min_cost_flow(&a, &b, width);
        worst = worst.max((fast - slow).abs());
        if (fast - slow).abs() > tol {
            return Err(format!("pair {i}: {fast} vs {slow}"));
        }
    }
    Ok(format!("{pairs} pairs, max |Δ| = {worst:.1e}"))
}

pub fn mmd_vs_double_loop(cases: usize, tol: f64) -> Check {
    let mut worst: f64 = 0.0;
    for c in 0..cases as u64 {
        let mut r = seeded(500 + c);
        let (n, m, d) = (1 + rng::index(&mut r, 6), 1 + rng::index(&mut r, 6), 1 + rng::index(&mut r, 4));
        let x = random_matrix(n, d, 1.0, 2 * c);
        let y = random_matrix(m, d, 1.0, 2 * c + 1);
        let sigma = r.random_range(0.2..3.0);
        let kernels: [(Kernel, Box<dyn Fn(&[f64], &[f64]) -> f64>); 4] = [
            (Kernel::Linear, Box::new(dot)),
            (Kernel::Polynomial, Box::new(move |a, b| (dot(a, b) / d as f64 + 1.0).powi(3))),
            (
                Kernel::Rbf { sigma, squared: true },
                Box::new(move |a, b| (-sq_dist(a, b) / (2.0 * sigma * sigma)).exp()),
            ),
            (
                Kernel::Rbf { sigma, squared: false },
                Box::new(move |a, b| (-sq_dist(a, b).sqrt() / (2.0 * sigma * sigma)).exp()),
            ),
        ];
        for (kernel, k) in &kernels {
            let fast = mmd_biased(&x, &y, *kernel).map_err(|e| e.to_string())?;
            let slow = mmd_double_loop(&x, &y, k);
            worst = worst.max((fast - slow).abs());
            if (fast - slow).abs() > tol {
                return Err(format!("case {c} {kernel:?}: {fast} vs {slow}"));
            }
        }
        // the σ-maximised RBF against an independent grid
        let fast = mmd_rbf(&x, &y).map_err(|e| e.to_string())?.raw;
        let slow = mmd_rbf_oracle(&x, &y);
        worst = worst.max((fast - slow).abs());
        if (fast - slow).abs() > tol {
            return Err(format!("case {c} rbf max: {fast} vs {slow}"));
        }
    }
    Ok(format!("{cases} set pairs × 5 kernels, max |Δ| = {worst:.1e}"))
}

fn gaussian_set(n: usize, mean: &[f64], mix: &[[f64; 2]; 2], seed: u64) -> EmbeddingMatrix {
    let mut r = seeded(seed);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let z: [f64; 2] = [r.sample(rand_distr::StandardNormal), r.sample(rand_distr::StandardNormal)];
        rows.push(vec![
            mean[0] + mix[0][0] * z[0] + mix[0][1] * z[1],
            mean[1] + mix[1][0] * z[0] + mix[1][1] * z[1],
        ]);
    }
    EmbeddingMatrix::from_rows(rows, 2).unwrap()
}

pub fn fd_vs_eigen_oracle(cases: usize, tol: f64) -> Check {
    let mut worst: f64 = 0.0;
    for c in 0..cases as u64 {
        let (x, y) = if c % 2 == 0 {
            (
                gaussian_set(500, &[0.0, 0.0], &[[1.0, 0.0], [0.5, 0.8]], 10 * c),
                gaussian_set(500, &[1.0, -0.5], &[[0.3, 1.2], [0.0, 0.7]], 10 * c + 1),
            )
        } else {
            let d = 2 + (c as usize % 5);
            (random_matrix(60, d, 1.0, 10 * c), random_matrix(80, d, 2.0, 10 * c + 1))
        };
        let fast = frechet_distance(&x, &y).map_err(|e| e.to_string())?.raw;
        let slow = frechet_oracle(&x, &y);
        let err = (fast - slow).abs() / slow.abs().max(1.0);
        worst = worst.max(err);
        if err > tol {
            return Err(format!("case {c}: {fast} vs {slow}"));
        }
        if x.cols() == 2 {
            // closed-form trace of the 2×2 square root
            let (_, cx) = mean_cov(&x);
            let (_, cy) = mean_cov(&y);
            let root = {
                let (vals, vecs) = jacobi_eigen(&cx);
                let f = |i: usize, j: usize| (0..2).map(|k| vecs[i][k] * vals[k].sqrt() * vecs[j][k]).sum::<f64>();
                vec![vec![f(0, 0), f(0, 1)], vec![f(1, 0), f(1, 1)]]
            };
            let prod = |a: &Mat, b: &Mat| -> Mat {
                (0..2).map(|i| (0..2).map(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]).collect()).collect()
            };
            let inner = prod(&prod(&root, &cy), &root);
            let (vals, _) = jacobi_eigen(&inner);
            let by_eigen: f64 = vals.iter().map(|v| v.sqrt()).sum();
            if (by_eigen - trace_sqrt_2x2(&inner)).abs() > 1e-9 {
                return Err(format!("case {c}: 2×2 trace root {by_eigen} vs {}", trace_sqrt_2x2(&inner)));
            }
        }
    }
    Ok(format!("{cases} set pairs, max relative error {worst:.1e}"))
}

pub fn spearman_vs_closed_form(cases: usize, tol: f64) -> Check {
    let mut worst: f64 = 0.0;
    for c in 0..cases as u64 {
        let mut r = seeded(900 + c);
        let n = 2 + rng::index(&mut r, 30);
        // distinct values by construction
        let mut x: Vec<f64> = (0..n).map(|i| i as f64 + r.random::<f64>() * 0.5).collect();
        let mut y: Vec<f64> = (0..n).map(|i| (i * 7 % 31) as f64 * 10.0 + r.random::<f64>()).collect();
        rng::shuffle(&mut r, &mut x);
        rng::shuffle(&mut r, &mut y);
        let fast = spearman(&x, &y).map_err(|e| e.to_string())?;
        let slow = spearman_closed_form(&x, &y);
        worst = worst.max((fast - slow).abs());
        if (fast - slow).abs() > tol {
            return Err(format!("case {c} (n={n}): {fast} vs {slow}"));
        }
    }
    Ok(format!("{cases} tie-free pairs, max |Δ| = {worst:.1e}"))
}

// ------------------------------------------------------------- properties

/// Small labelled and unlabelled graphs for embedding checks.
pub fn sample_graphs() -> Vec<Graph> {
    let mut out = generate_dataset(Dataset::LabeledCommunity, 2, 3).unwrap().into_graphs();
    out.extend(generate_dataset(Dataset::Lobster, 2, 3).unwrap().into_graphs());
    out.push(random_graph(12, 0.3, 5));
    out
}

pub fn embedding_permutation_invariance(perms: usize, tol: f64) -> Check {
    let mut worst: f64 = 0.0;
    for (gi, g) in sample_graphs().iter().enumerate() {
        for (ci, pool) in [Pooling::Sum, Pooling::Mean, Pooling::Max].into_iter().enumerate() {
            let config = GinConfig {
                aggregator: pool,
                readout: pool,
                seed: ci as u64,
                ..GinConfig::default()
            };
            let weights = GinWeights::init(&config, g.schema()).map_err(|e| e.to_string())?;
            let base = forward(g, &weights).map_err(|e| e.to_string())?;
            let norm = base.iter().map(|v| v * v).sum::<f64>().sqrt();
            for p in 0..perms as u64 {
                let mut perm: Vec<usize> = (0..g.num_nodes()).collect();
                rng::shuffle(&mut seeded(p), &mut perm);
                let moved = forward(&g.relabel(&perm).map_err(|e| e.to_string())?, &weights).map_err(|e| e.to_string())?;
                let diff = sq_dist(&base, &moved).sqrt();
                worst = worst.max(diff / norm.max(f64::MIN_POSITIVE));
                if diff > tol * norm {
                    return Err(format!("graph {gi}, {pool:?} pooling, permutation {p}: ‖Δ‖ = {diff}, ‖x‖ = {norm}"));
                }
            }
        }
    }
    Ok(format!("{perms} permutations per graph and pooling, max relative Δ {worst:.1e}"))
}

pub fn orthogonal_init(tol: f64) -> Check {
    for (layers, dim, classes) in [(3, 35, None), (2, 5, Some(4)), (4, 40, Some(3)), (1, 1, None)] {
        let schema = FeatureSchema {
            node_classes: classes,
            ..FeatureSchema::PLAIN
        };
        let config = GinConfig {
            layers,
            dim,
            ..GinConfig::default()
        };
        let weights = GinWeights::init(&config, schema).map_err(|e| e.to_string())?;
        for lin in weights.rounds().iter().flatten() {
            let w = &lin.weight;
            let gram = if w.nrows() >= w.ncols() { w.transpose() * w } else { w * w.transpose() };
            let eye = nalgebra::DMatrix::<f64>::identity(gram.nrows(), gram.ncols());
            let err = (gram - eye).abs().max();
            if err > tol {
                return Err(format!("L{layers} d{dim}: {}×{} weight off identity by {err}", w.nrows(), w.ncols()));
            }
        }
    }
    let square = GinWeights::init(
        &GinConfig {
            layers: 2,
            dim: 35,
            ..GinConfig::default()
        },
        FeatureSchema::PLAIN,
    )
    .map_err(|e| e.to_string())?;
    let w = &square.rounds()[1][0].weight;
    if (w.nrows(), w.ncols()) != (35, 35) {
        return Err("expected a square 35×35 weight".into());
    }
    Ok("all weights orthonormal".into())
}

pub fn zero_on_identical_sets(cases: usize) -> Check {
    for c in 0..cases as u64 {
        let x = random_matrix(10 + c as usize, 6, 3.0, c);
        let fd = frechet_distance(&x, &x).map_err(|e| e.to_string())?.raw;
        if fd.abs() > 1e-6 {
            return Err(format!("case {c}: fd = {fd}"));
        }
        let rbf = mmd_rbf(&x, &x).map_err(|e| e.to_string())?.raw;
        if rbf.abs() > 1e-9 {
            return Err(format!("case {c}: mmd_rbf = {rbf}"));
        }
        for kernel in [Kernel::Linear, Kernel::Polynomial] {
            let v = mmd_biased(&x, &x, kernel).map_err(|e| e.to_string())?;
            if v.abs() > 1e-9 * (1.0 + mmd_double_loop(&x, &x, |a, b| dot(a, b).abs()).abs()) {
                return Err(format!("case {c}: {kernel:?} mmd = {v}"));
            }
        }
    }
    Ok(format!("{cases} sets"))
}

pub fn mmd_nonnegative(cases: usize) -> Check {
    let mut lowest = f64::INFINITY;
    for c in 0..cases as u64 {
        let mut r = seeded(c);
        let d = 1 + rng::index(&mut r, 8);
        let x = random_matrix(1 + rng::index(&mut r, 30), d, 1.0, 2 * c);
        let y = random_matrix(1 + rng::index(&mut r, 30), d, 1.0, 2 * c + 1);
        let sigma = r.random_range(0.01..5.0);
        for kernel in [Kernel::Linear, Kernel::Polynomial, Kernel::Rbf { sigma, squared: true }] {
            let v = mmd_biased(&x, &y, kernel).map_err(|e| e.to_string())?;
            lowest = lowest.min(v);
            if v < -1e-9 {
                return Err(format!("case {c} {kernel:?}: {v}"));
            }
        }
    }
    Ok(format!("{cases} set pairs, min {lowest:.1e}"))
}

fn perturbation_sets() -> Vec<(PerturbationKind, GraphSet)> {
    let grid = generate_dataset(Dataset::Grid, 20, 1).unwrap();
    let labeled = generate_dataset(Dataset::LabeledCommunity, 8, 1).unwrap();
    vec![
        (PerturbationKind::Mix, grid.clone()),
        (PerturbationKind::Rewire, grid.clone()),
        (PerturbationKind::ModeCollapse, grid.clone()),
        (PerturbationKind::ModeDrop, grid),
        (PerturbationKind::NodeFeats, labeled.clone()),
        (PerturbationKind::EdgeFeats, labeled),
    ]
}

/// Identity at `t = 0`, `|S|` preserved at every `t` and, for rewiring,
/// `|E|` preserved per graph.
pub fn perturbation_contracts(seeds: usize) -> Check {
    for (kind, set) in perturbation_sets() {
        let clustering = if kind.needs_clustering() {
            Some(cluster_graphs(&set, 3, 0).map_err(|e| e.to_string())?)
        } else {
            None
        };
        for seed in 0..seeds as u64 {
            for t in [0.0, 0.3, 0.7, 1.0] {
                let out = PerturbationStep { kind, t, seed }
                    .apply(&set, clustering.as_ref())
                    .map_err(|e| e.to_string())?;
                if out.len() != set.len() {
                    return Err(format!("{kind} t={t} seed {seed}: |S| {} → {}", set.len(), out.len()));
                }
                if t == 0.0 && out != set {
                    return Err(format!("{kind} seed {seed}: not the identity at t = 0"));
                }
                if kind == PerturbationKind::Rewire {
                    for (a, b) in set.iter().zip(out.iter()) {
                        if a.num_edges() != b.num_edges() || a.num_nodes() != b.num_nodes() {
                            return Err(format!("rewire t={t} seed {seed}: |E| {} → {}", a.num_edges(), b.num_edges()));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("6 perturbations × {seeds} seeds × 4 strengths"))
}

pub const SMALL_BENCHMARK: &str = r#"
seed = 3
seeds = 2
graphs = 20
gin = ["2x10"]

[[experiment]]
name = "fidelity"
kind = "rank"
perturbations = ["mix", "rewire"]
datasets = ["grid"]
metrics = ["degree_mmd", "mmd_rbf", "fd", "f1_pr"]
t_grid = [0.0, 0.5, 1.0]

[[experiment]]
name = "efficiency"
kind = "sample_efficiency"
datasets = ["lobster"]
metrics = ["f1_pr", "mmd_rbf"]
"#;

fn read_dir_bytes(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

/// Runs the same benchmark file twice through the binary and compares every
/// output byte, the printed summary included.
pub fn benchmark_reproducible() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = tmp.path().join("bench.toml");
    std::fs::write(&spec, SMALL_BENCHMARK).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = tmp.path().join(format!("run{run}"));
        let run = std::process::Command::new(env!("CARGO_BIN_EXE_ggm-eval"))
            .arg("benchmark")
            .arg(&spec)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !run.status.success() {
            return Err(format!("benchmark exited with {}", run.status));
        }
        let mut files = read_dir_bytes(&out);
        files.push(("<stdout>".into(), run.stdout));
        outputs.push(files);
    }
    if outputs[0] != outputs[1] {
        return Err("benchmark outputs differ between runs".into());
    }
    let bytes: usize = outputs[0].iter().map(|(_, b)| b.len()).sum();
    Ok(format!("{} files, {bytes} bytes identical", outputs[0].len()))
}
