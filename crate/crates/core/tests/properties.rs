mod common;

use common::checks::*;
use common::*;

use ggm_eval::embed::{forward, EmbeddingMatrix, GinConfig, GinWeights, Pooling};
use ggm_eval::graph::{FeatureSchema, GraphSet};
use ggm_eval::harness::{perturb_rewire, spearman};
use ggm_eval::metrics::{frechet_distance, mmd_biased, mmd_rbf, prdc, Kernel};
use ggm_eval::rng::{self, seeded};
use proptest::prelude::*;

fn pooling() -> impl Strategy<Value = Pooling> {
    prop_oneof![Just(Pooling::Sum), Just(Pooling::Mean), Just(Pooling::Max)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_ignores_node_order(n in 1usize..25, p in 0.0f64..1.0, seed in any::<u64>(), pool in pooling(), concat in any::<bool>()) {
        let g = random_graph(n, p, seed);
        let config = GinConfig { aggregator: pool, readout: pool, concat_layers: concat, seed, ..GinConfig::default() };
        let weights = GinWeights::init(&config, g.schema()).unwrap();
        let base = forward(&g, &weights).unwrap();
        let norm = base.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut perm: Vec<usize> = (0..n).collect();
        rng::shuffle(&mut seeded(seed ^ 1), &mut perm);
        let moved = forward(&g.relabel(&perm).unwrap(), &weights).unwrap();
        prop_assert!(sq_dist(&base, &moved).sqrt() <= 1e-5 * norm.max(1e-300));
    }

    #[test]
    fn orthogonal_weights(layers in 1usize..5, dim in 1usize..45, classes in proptest::option::of(1usize..6), seed in any::<u64>()) {
        let schema = FeatureSchema { node_classes: classes, edge_classes: None };
        let weights = GinWeights::init(&GinConfig { layers, dim, seed, ..GinConfig::default() }, schema).unwrap();
        for lin in weights.rounds().iter().flatten() {
            let w = &lin.weight;
            let gram = if w.nrows() >= w.ncols() { w.transpose() * w } else { w * w.transpose() };
            let eye = nalgebra::DMatrix::<f64>::identity(gram.nrows(), gram.ncols());
            prop_assert!((gram - eye).abs().max() <= 1e-6);
        }
    }

    #[test]
    fn distances_vanish_on_identical_sets(rows in 2usize..30, cols in 1usize..8, scale in 0.01f64..100.0, seed in any::<u64>()) {
        let x = random_matrix(rows, cols, scale, seed);
        prop_assert!(frechet_distance(&x, &x).unwrap().raw.abs() <= 1e-6 * scale * scale);
        prop_assert!(mmd_rbf(&x, &x).unwrap().raw.abs() <= 1e-9);
    }

    #[test]
    fn mmd_is_nonnegative(n in 1usize..20, m in 1usize..20, d in 1usize..6, sigma in 0.01f64..10.0, seed in any::<u64>()) {
        let x = random_matrix(n, d, 1.0, seed);
        let y = random_matrix(m, d, 1.0, seed.wrapping_add(1));
        for kernel in [Kernel::Linear, Kernel::Polynomial, Kernel::Rbf { sigma, squared: true }, Kernel::Rbf { sigma, squared: false }] {
            prop_assert!(mmd_biased(&x, &y, kernel).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn mmd_rbf_scale_free(n in 2usize..15, m in 2usize..15, c in 0.01f64..100.0, seed in any::<u64>()) {
        let x = random_matrix(n, 3, 1.0, seed);
        let y = random_matrix(m, 3, 1.5, seed.wrapping_add(1));
        let a = mmd_rbf(&x, &y).unwrap().raw;
        let b = mmd_rbf(&x.scaled(c), &y.scaled(c)).unwrap().raw;
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn frechet_symmetric(n in 3usize..40, m in 3usize..40, d in 1usize..6, seed in any::<u64>()) {
        let x = random_matrix(n, d, 1.0, seed);
        let y = random_matrix(m, d, 2.0, seed.wrapping_add(1));
        let a = frechet_distance(&x, &y).unwrap().raw;
        let b = frechet_distance(&y, &x).unwrap().raw;
        prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
    }

    #[test]
    fn prdc_rigid_motion(theta in 0.0f64..std::f64::consts::TAU, dx in -5.0f64..5.0, dy in -5.0f64..5.0, seed in any::<u64>()) {
        let x = random_matrix(15, 2, 1.0, seed);
        let y = random_matrix(15, 2, 1.2, seed.wrapping_add(1));
        let (c, s) = (theta.cos(), theta.sin());
        let moved = |e: &EmbeddingMatrix| {
            EmbeddingMatrix::from_rows(e.iter_rows().map(|r| vec![c * r[0] - s * r[1] + dx, s * r[0] + c * r[1] + dy]).collect(), 2).unwrap()
        };
        let a = prdc(&x, &y, 5).unwrap();
        let b = prdc(&moved(&x), &moved(&y), 5).unwrap();
        // rounding can only move points sitting exactly on a radius
        prop_assert!((a.precision - b.precision).abs() <= 1.0 / 15.0 + 1e-12);
        prop_assert!((a.recall - b.recall).abs() <= 1.0 / 15.0 + 1e-12);
        prop_assert!((a.coverage - b.coverage).abs() <= 1.0 / 15.0 + 1e-12);
    }

    #[test]
    fn rewire_keeps_sizes(n in 2usize..20, p in 0.0f64..1.0, t in 0.0f64..=1.0, seed in any::<u64>()) {
        let set = GraphSet::new((0..5).map(|i| random_graph(n, p, seed.wrapping_add(i))).collect()).unwrap();
        let out = perturb_rewire(&set, t, seed).unwrap();
        prop_assert_eq!(out.len(), set.len());
        for (a, b) in set.iter().zip(out.iter()) {
            prop_assert_eq!(a.num_nodes(), b.num_nodes());
            prop_assert_eq!(a.num_edges(), b.num_edges());
        }
        if t == 0.0 {
            prop_assert_eq!(out, set);
        }
    }

    #[test]
    fn spearman_ignores_monotone_maps(xs in proptest::collection::vec(-100.0f64..100.0, 2..30), seed in any::<u64>()) {
        let mut r = seeded(seed);
        use rand::Rng;
        let ys: Vec<f64> = xs.iter().map(|_| r.random::<f64>()).collect();
        let base = spearman(&xs, &ys).unwrap();
        let cubed: Vec<f64> = xs.iter().map(|x| x * x * x + 3.0 * x).collect();
        let logged: Vec<f64> = ys.iter().map(|y| (y + 1.0).ln()).collect();
        prop_assert_eq!(spearman(&cubed, &logged).unwrap(), base);
    }
}

#[test]
fn embedding_permutation_invariance_100_permutations() {
    embedding_permutation_invariance(100, 1e-5).unwrap();
}

#[test]
fn orthogonal_init_on_fixed_shapes() {
    orthogonal_init(1e-6).unwrap();
}

#[test]
fn identical_sets_score_zero() {
    zero_on_identical_sets(20).unwrap();
}

#[test]
fn perturbations_identity_at_zero_and_keep_set_size() {
    perturbation_contracts(3).unwrap();
}

#[test]
fn benchmark_is_bit_reproducible() {
    benchmark_reproducible().unwrap();
}
