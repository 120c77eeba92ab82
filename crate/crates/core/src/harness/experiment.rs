//! Rank-correlation experiments and the sample-efficiency search.

use rayon::prelude::*;

use super::cluster::{cluster_graphs, WL_ITERATIONS};
use super::perturb::{PerturbationKind, PerturbationStep};
use super::stats::{mean_stderr, spearman};
use crate::embed::GinConfig;
use crate::error::{Error, Result};
use crate::graph::{er_twin, FeatureSchema, GraphSet, TwinDensity};
use crate::metrics::MetricId;
use crate::rng::{self, derive_seed, seeded};
use crate::suite::{Evaluator, Prepared, DEFAULT_K};

const STREAM_PERTURB: u64 = 10;
const STREAM_GIN: u64 = 11;
const STREAM_SPLIT: u64 = 12;
const STREAM_CLUSTER: u64 = 13;
const STREAM_TWINS: u64 = 14;

/// Something that turns two graph sets into one dissimilarity per named
/// metric, with a per-set preprocessing step that can be reused.
pub trait SetScorer: Sync {
    type Prepared: Send + Sync;

    fn names(&self) -> Vec<String>;

    fn prepare(&self, set: &GraphSet) -> Result<Self::Prepared>;

    /// The prepared form of `set.select(indices)`.
    fn select(&self, prepared: &Self::Prepared, indices: &[usize]) -> Self::Prepared;

    /// Dissimilarities in the order of [`SetScorer::names`].
    fn score(&self, reference: &Self::Prepared, generated: &Self::Prepared) -> Result<Vec<f64>>;
}

impl SetScorer for Evaluator {
    type Prepared = Prepared;

    fn names(&self) -> Vec<String> {
        self.metrics().iter().map(|m| m.name().to_string()).collect()
    }

    fn prepare(&self, set: &GraphSet) -> Result<Prepared> {
        Evaluator::prepare(self, set)
    }

    fn select(&self, prepared: &Prepared, indices: &[usize]) -> Prepared {
        prepared.select(indices)
    }

    fn score(&self, reference: &Prepared, generated: &Prepared) -> Result<Vec<f64>> {
        Ok(Evaluator::score(self, reference, generated)?
            .iter()
            .map(|s| s.dissimilarity)
            .collect())
    }
}

/// `{0.0, 0.1, …, 1.0}`
pub fn default_t_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Outcome of one seed of a rank experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// `values[m][i]`: dissimilarity of metric `m` at the `i`-th `t`.
    pub values: Vec<Vec<f64>>,
    /// Spearman correlation of each metric's values with `t`.
    pub rho: Vec<f64>,
    /// Number of clusters found, for mode perturbations.
    pub clusters: Option<usize>,
}

fn halves(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    rng::shuffle(&mut seeded(seed), &mut order);
    let second = order.split_off(n / 2);
    (order, second)
}

/// Runs one seed: builds the reference and starting generated sets, applies
/// the perturbation at every `t`, and scores each step.
///
/// Fidelity and feature perturbations start from a copy of `data`; mode
/// perturbations start from two disjoint random halves, the generated half
/// being clustered by affinity propagation on its WL kernel.
pub fn rank_trial<S: SetScorer>(
    scorer: &S,
    data: &GraphSet,
    kind: PerturbationKind,
    t_grid: &[f64],
    seed: u64,
) -> Result<TrialOutcome> {
    if t_grid.len() < 2 {
        return Err(Error::InvalidParameter("the t grid needs at least two values".into()));
    }
    if t_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("the t grid must be non-decreasing".into()));
    }
    let (reference, start, clustering) = if kind.needs_clustering() {
        let (a, b) = halves(data.len(), derive_seed(seed, STREAM_SPLIT, 0));
        let start = data.select(&b);
        let clustering = cluster_graphs(&start, WL_ITERATIONS, derive_seed(seed, STREAM_CLUSTER, 0))?;
        (data.select(&a), start, Some(clustering))
    } else {
        (data.clone(), data.clone(), None)
    };
    let prepared_ref = scorer.prepare(&reference)?;
    let names = scorer.names();
    let mut values = vec![Vec::with_capacity(t_grid.len()); names.len()];
    let perturb_seed = derive_seed(seed, STREAM_PERTURB, 0);
    for &t in t_grid {
        let step = PerturbationStep {
            kind,
            t,
            seed: perturb_seed,
        };
        let generated = step.apply(&start, clustering.as_ref())?;
        let scores = scorer.score(&prepared_ref, &scorer.prepare(&generated)?)?;
        for (v, s) in values.iter_mut().zip(scores) {
            v.push(s);
        }
    }
    let rho = values
        .iter()
        .map(|v| spearman(t_grid, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialOutcome {
        values,
        rho,
        clusters: clustering.map(|c| c.num_clusters()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankOptions {
    pub kind: PerturbationKind,
    pub metrics: Vec<MetricId>,
    pub gin: Vec<GinConfig>,
    pub seeds: Vec<u64>,
    pub t_grid: Vec<f64>,
    pub k: usize,
}

impl RankOptions {
    pub fn new(kind: PerturbationKind, metrics: Vec<MetricId>) -> RankOptions {
        RankOptions {
            kind,
            metrics,
            gin: vec![GinConfig::default()],
            seeds: (0..10).collect(),
            t_grid: default_t_grid(),
            k: DEFAULT_K,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTrial {
    pub config: String,
    pub seed: u64,
    pub outcome: TrialOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub kind: PerturbationKind,
    pub dataset: String,
    pub metrics: Vec<MetricId>,
    pub t_grid: Vec<f64>,
    pub trials: Vec<RankTrial>,
}

impl RankResult {
    fn metric_index(&self, metric: MetricId) -> Option<usize> {
        self.metrics.iter().position(|&m| m == metric)
    }

    /// Spearman ρ of `metric` for every trial.
    pub fn rhos(&self, metric: MetricId) -> Vec<f64> {
        match self.metric_index(metric) {
            Some(i) => self.trials.iter().map(|t| t.outcome.rho[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn mean_rho(&self, metric: MetricId) -> (f64, f64) {
        mean_stderr(&self.rhos(metric))
    }

    /// Mean dissimilarity of `metric` at each `t`, across trials.
    pub fn mean_curve(&self, metric: MetricId) -> Vec<f64> {
        let Some(i) = self.metric_index(metric) else {
            return Vec::new();
        };
        (0..self.t_grid.len())
            .map(|j| mean_stderr(&self.trials.iter().map(|t| t.outcome.values[i][j]).collect::<Vec<_>>()).0)
            .collect()
    }
}

fn schema_of(data: &GraphSet) -> FeatureSchema {
    data.schema().unwrap_or(FeatureSchema::PLAIN)
}

/// Every (GIN config, seed) trial of one perturbation experiment on one
/// dataset. Each seed drives the GIN initialisation and the perturbation.
pub fn run_rank_experiment(data: &GraphSet, dataset: &str, opts: &RankOptions) -> Result<RankResult> {
    if opts.metrics.is_empty() {
        return Err(Error::InvalidParameter("metric list is empty".into()));
    }
    if opts.gin.is_empty() || opts.seeds.is_empty() {
        return Err(Error::InvalidParameter("need at least one GIN config and one seed".into()));
    }
    let jobs: Vec<(&GinConfig, u64)> = opts
        .gin
        .iter()
        .flat_map(|g| opts.seeds.iter().map(move |&s| (g, s)))
        .collect();
    let trials = jobs
        .par_iter()
        .map(|&(gin, seed)| {
            let config = gin.with_seed(derive_seed(seed, STREAM_GIN, 0));
            let evaluator = Evaluator::new(&opts.metrics, &config, schema_of(data), opts.k)?;
            let outcome = rank_trial(&evaluator, data, opts.kind, &opts.t_grid, seed)?;
            Ok(RankTrial {
                config: gin.label(),
                seed,
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RankResult {
        kind: opts.kind,
        dataset: dataset.to_string(),
        metrics: evaluator_order(&opts.metrics),
        t_grid: opts.t_grid.clone(),
        trials,
    })
}

fn evaluator_order(metrics: &[MetricId]) -> Vec<MetricId> {
    let mut out = Vec::new();
    for &m in metrics {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// Sample sizes tried by the sample-efficiency search.
pub const SAMPLE_GRID: [usize; 20] = [
    7, 8, 9, 10, 12, 14, 17, 20, 25, 31, 42, 58, 89, 122, 170, 250, 350, 500, 700, 1000,
];

/// For each metric, the smallest tested `n` from which on
/// `d(S_r′, S_r″) < d(S_r′, S_g′)` holds at every larger tested `n`, or
/// `None` if it fails at the largest one.
///
/// `S_r′` and `S_r″` are the even and odd positions of a seeded permutation
/// of `data`, and `S_g′` holds Erdős–Rényi twins of `S_r″`; the sets at size
/// `n` are the first `n` members of each, so smaller sets nest in larger
/// ones. Grid values above `|data| / 2` are skipped.
pub fn sample_efficiency<S: SetScorer>(
    scorer: &S,
    data: &GraphSet,
    grid: &[usize],
    seed: u64,
) -> Result<(Vec<usize>, Vec<Option<usize>>)> {
    let usable: Vec<usize> = grid.iter().copied().filter(|&n| 2 * n <= data.len()).collect();
    if usable.is_empty() {
        return Err(Error::Precondition(format!(
            "a set of {} graphs is too small for the sample-size grid",
            data.len()
        )));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    rng::shuffle(&mut seeded(derive_seed(seed, STREAM_SPLIT, 0)), &mut order);
    let first: Vec<usize> = order.iter().step_by(2).copied().collect();
    let second: Vec<usize> = order.iter().skip(1).step_by(2).copied().collect();
    let twins = second
        .iter()
        .map(|&i| {
            let mut r = seeded(derive_seed(seed, STREAM_TWINS, i as u64));
            er_twin(&data[i], TwinDensity::default(), &mut r).map_err(|e| Error::at_graph(i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let real_a = scorer.prepare(&data.select(&first))?;
    let real_b = scorer.prepare(&data.select(&second))?;
    let fake = scorer.prepare(&GraphSet::new(twins)?)?;

    let metrics = scorer.names().len();
    let mut ok = vec![Vec::with_capacity(usable.len()); metrics];
    for &n in &usable {
        let prefix: Vec<usize> = (0..n).collect();
        let a = scorer.select(&real_a, &prefix);
        let same = scorer.score(&a, &scorer.select(&real_b, &prefix))?;
        let diff = scorer.score(&a, &scorer.select(&fake, &prefix))?;
        for m in 0..metrics {
            ok[m].push(same[m] < diff[m]);
        }
    }
    let n_star = ok
        .iter()
        .map(|flags| {
            let mut start = None;
            for (i, &f) in flags.iter().enumerate().rev() {
                if f {
                    start = Some(usable[i]);
                } else {
                    break;
                }
            }
            start
        })
        .collect();
    Ok((usable, n_star))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleEfficiencyTrial {
    pub config: String,
    pub seed: u64,
    pub n_star: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleEfficiencyResult {
    pub dataset: String,
    pub metrics: Vec<MetricId>,
    pub grid: Vec<usize>,
    pub trials: Vec<SampleEfficiencyTrial>,
}

impl SampleEfficiencyResult {
    pub fn n_stars(&self, metric: MetricId) -> Vec<Option<usize>> {
        match self.metrics.iter().position(|&m| m == metric) {
            Some(i) => self.trials.iter().map(|t| t.n_star[i]).collect(),
            None => Vec::new(),
        }
    }
}

pub fn run_sample_efficiency(
    data: &GraphSet,
    dataset: &str,
    metrics: &[MetricId],
    gin: &[GinConfig],
    seeds: &[u64],
    k: usize,
) -> Result<SampleEfficiencyResult> {
    if metrics.is_empty() {
        return Err(Error::InvalidParameter("metric list is empty".into()));
    }
    let jobs: Vec<(&GinConfig, u64)> = gin
        .iter()
        .flat_map(|g| seeds.iter().map(move |&s| (g, s)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(g, seed)| {
            let config = g.with_seed(derive_seed(seed, STREAM_GIN, 0));
            let evaluator = Evaluator::new(metrics, &config, schema_of(data), k)?;
            let (grid, n_star) = sample_efficiency(&evaluator, data, &SAMPLE_GRID, seed)?;
            Ok((
                grid,
                SampleEfficiencyTrial {
                    config: g.label(),
                    seed,
                    n_star,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = outcomes.first().map(|(g, _)| g.clone()).unwrap_or_default();
    Ok(SampleEfficiencyResult {
        dataset: dataset.to_string(),
        metrics: evaluator_order(metrics),
        grid,
        trials: outcomes.into_iter().map(|(_, t)| t).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_dataset, Dataset};

    /// Fraction of positions where the two sets differ.
    struct Changed;

    impl SetScorer for Changed {
        type Prepared = GraphSet;

        fn names(&self) -> Vec<String> {
            vec!["changed".into(), "constant".into()]
        }

        fn prepare(&self, set: &GraphSet) -> Result<GraphSet> {
            Ok(set.clone())
        }

        fn select(&self, p: &GraphSet, idx: &[usize]) -> GraphSet {
            p.select(idx)
        }

        fn score(&self, r: &GraphSet, g: &GraphSet) -> Result<Vec<f64>> {
            let diff = r.iter().zip(g).filter(|(a, b)| a != b).count();
            Ok(vec![diff as f64 / r.len() as f64, 1.0])
        }
    }

    #[test]
    fn oracle_metric_has_perfect_rank() {
        let data = generate_dataset(Dataset::Grid, 20, 0).unwrap();
        for seed in 0..3 {
            let out = rank_trial(&Changed, &data, PerturbationKind::Mix, &default_t_grid(), seed).unwrap();
            assert_eq!(out.rho, vec![1.0, 0.0]);
        }
    }

    /// Fraction of generated graphs that do not occur in the dataset.
    struct Foreign(GraphSet);

    impl SetScorer for Foreign {
        type Prepared = GraphSet;

        fn names(&self) -> Vec<String> {
            vec!["foreign".into(), "constant".into()]
        }

        fn prepare(&self, set: &GraphSet) -> Result<GraphSet> {
            Ok(set.clone())
        }

        fn select(&self, p: &GraphSet, idx: &[usize]) -> GraphSet {
            p.select(idx)
        }

        fn score(&self, _r: &GraphSet, g: &GraphSet) -> Result<Vec<f64>> {
            let foreign = g.iter().filter(|x| !self.0.iter().any(|y| y == *x)).count();
            Ok(vec![foreign as f64 / g.len() as f64, 1.0])
        }
    }

    #[test]
    fn exact_indicator_is_sample_efficient() {
        let data = generate_dataset(Dataset::Grid, 30, 0).unwrap();
        let (grid, n) = sample_efficiency(&Foreign(data.clone()), &data, &SAMPLE_GRID, 1).unwrap();
        assert_eq!(grid, vec![7, 8, 9, 10, 12, 14]);
        assert_eq!(n, vec![Some(7), None]);
    }

    #[test]
    fn rank_experiment_shapes() {
        let data = generate_dataset(Dataset::Lobster, 16, 0).unwrap();
        let mut opts = RankOptions::new(PerturbationKind::ModeDrop, vec![MetricId::MmdRbf, MetricId::DegreeMmd]);
        opts.seeds = vec![0, 1];
        opts.t_grid = vec![0.0, 0.5, 1.0];
        let res = run_rank_experiment(&data, "lobster", &opts).unwrap();
        assert_eq!(res.trials.len(), 2);
        assert_eq!(res.trials[0].outcome.values[0].len(), 3);
        for r in res.rhos(MetricId::MmdRbf) {
            assert!((-1.0..=1.0).contains(&r));
        }
        assert_eq!(run_rank_experiment(&data, "lobster", &opts).unwrap(), res);
    }
}
