//! Batch runs described by a TOML file, reported as long-format CSV plus a
//! summary table with one row per metric.
//!
//! ```toml
//! seed = 0
//! seeds = 10
//! graphs = 100
//! gin = ["3x35"]
//!
//! [[experiment]]
//! name = "fidelity"
//! kind = "rank"
//! perturbations = ["mix", "rewire"]
//! datasets = ["grid"]
//! metrics = ["degree_mmd", "mmd_rbf", "fd"]
//!
//! [[experiment]]
//! name = "sample-efficiency"
//! kind = "sample_efficiency"
//! datasets = ["grid", "lobster"]
//! metrics = ["f1_pr", "mmd_rbf"]
//!
//! [[experiment]]
//! name = "timing"
//! kind = "timing"
//! preset = "desk"
//! sweeps = ["samples"]
//! metrics = ["mmd_rbf", "orbit_mmd"]
//! ```
//!
//! A dataset entry is either a generator name (`grid`, `lobster`,
//! `community`, `labeled-community`, `er:<n>:<p>`) or the path of a graph-set
//! file.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use super::experiment::{run_rank_experiment, run_sample_efficiency, RankOptions, RankResult, SampleEfficiencyResult};
use super::perturb::PerturbationKind;
use super::stats::mean_stderr;
use super::timing::{timing_suite, Sweep, Timing, TimingSpec};
use crate::embed::GinConfig;
use crate::error::{Error, Result};
use crate::graph::{generate_dataset, load_graphset, Dataset, GraphSet};
use crate::metrics::MetricId;
use crate::rng::{self, seeded};
use crate::suite::DEFAULT_K;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Rank,
    SampleEfficiency,
    Timing,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: ExperimentKind,
    #[serde(default)]
    pub perturbations: Vec<String>,
    #[serde(default)]
    pub datasets: Vec<String>,
    pub metrics: Vec<MetricId>,
    pub t_grid: Option<Vec<f64>>,
    /// Overrides the file-level GIN list.
    pub gin: Option<Vec<String>>,
    /// Overrides the file-level trial count.
    pub seeds: Option<usize>,
    /// Timing grids: `desk` (default) or `full`.
    pub preset: Option<String>,
    pub sweeps: Option<Vec<Sweep>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSpec {
    #[serde(default)]
    pub seed: u64,
    /// Trials per experiment; trial `i` uses seed `seed + i`.
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    /// Graphs per generated dataset.
    #[serde(default = "default_graphs")]
    pub graphs: usize,
    /// Seed of the dataset generators (defaults to `seed`).
    pub dataset_seed: Option<u64>,
    #[serde(default = "default_k")]
    pub k: usize,
    /// GIN architectures as `LAYERSxDIM`.
    #[serde(default = "default_gin")]
    pub gin: Vec<String>,
    /// Replace `gin` with this many random architectures, `L ∈ [2, 7]`,
    /// `d ∈ {5, 10, …, 40}`.
    pub gin_sample: Option<usize>,
    #[serde(rename = "experiment")]
    pub experiments: Vec<ExperimentSpec>,
}

fn default_seeds() -> usize {
    10
}

fn default_graphs() -> usize {
    100
}

fn default_k() -> usize {
    DEFAULT_K
}

fn default_gin() -> Vec<String> {
    vec!["3x35".into()]
}

impl BenchmarkSpec {
    pub fn from_toml(text: &str) -> Result<BenchmarkSpec> {
        let spec: BenchmarkSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<BenchmarkSpec> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiments.is_empty() {
            return Err(Error::Config("no [[experiment]] entries".into()));
        }
        if self.seeds == 0 {
            return Err(Error::Config("seeds must be >= 1".into()));
        }
        let mut names = BTreeSet::new();
        for e in &self.experiments {
            if !names.insert(e.name.as_str()) {
                return Err(Error::Config(format!("duplicate experiment name '{}'", e.name)));
            }
            if e.name.is_empty() || e.name.contains(['/', '\\']) {
                return Err(Error::Config(format!("experiment name '{}' is not a file name", e.name)));
            }
            if e.metrics.is_empty() {
                return Err(Error::Config(format!("experiment '{}' has an empty metric list", e.name)));
            }
            if e.kind != ExperimentKind::Timing && e.datasets.is_empty() {
                return Err(Error::Config(format!("experiment '{}' lists no datasets", e.name)));
            }
            if e.kind == ExperimentKind::Rank {
                if e.perturbations.is_empty() {
                    return Err(Error::Config(format!("experiment '{}' lists no perturbations", e.name)));
                }
                for p in &e.perturbations {
                    p.parse::<PerturbationKind>()?;
                }
            }
            if let Some(p) = &e.preset {
                if p != "desk" && p != "full" {
                    return Err(Error::Config(format!("unknown timing preset '{p}'")));
                }
            }
            self.gin_configs(e)?;
        }
        Ok(())
    }

    /// Trial seeds of an experiment.
    pub fn trial_seeds(&self, experiment: &ExperimentSpec) -> Vec<u64> {
        let n = experiment.seeds.unwrap_or(self.seeds) as u64;
        (0..n).map(|i| self.seed.wrapping_add(i)).collect()
    }

    pub fn gin_configs(&self, experiment: &ExperimentSpec) -> Result<Vec<GinConfig>> {
        if let Some(n) = self.gin_sample {
            return Ok(random_architectures(n, self.seed));
        }
        let labels = experiment.gin.as_ref().unwrap_or(&self.gin);
        if labels.is_empty() {
            return Err(Error::Config(format!("experiment '{}' has no GIN configs", experiment.name)));
        }
        labels.iter().map(|l| l.parse()).collect()
    }

    fn dataset_seed(&self) -> u64 {
        self.dataset_seed.unwrap_or(self.seed)
    }

    /// The lines written at the top of every report.
    pub fn header(&self) -> Vec<String> {
        vec![
            format!(
                "global seed {}; trial i of an experiment uses seed {} + i",
                self.seed, self.seed
            ),
            "within a trial, sub-seeds are derive(trial, stream, index) = splitmix64(trial ^ stream*0x9E3779B97F4A7C15 ^ index*0xD1B54A32D192ED03)".into(),
            "streams: 10 perturbation, 11 GIN weights, 12 set split, 13 clustering, 14 E-R twins".into(),
            format!(
                "generated datasets: {} graphs each, generator seed {}",
                self.graphs,
                self.dataset_seed()
            ),
        ]
    }
}

/// `count` distinct architectures with `L ∈ [2, 7]` and `d ∈ {5, 10, …, 40}`,
/// drawn without replacement from the 48 combinations.
pub fn random_architectures(count: usize, seed: u64) -> Vec<GinConfig> {
    let mut all: Vec<(usize, usize)> = (2..=7).flat_map(|l| (1..=8).map(move |i| (l, 5 * i))).collect();
    rng::shuffle(&mut seeded(seed), &mut all);
    all.truncate(count.min(all.len()));
    all.sort_unstable();
    all.into_iter()
        .map(|(layers, dim)| GinConfig {
            layers,
            dim,
            ..GinConfig::default()
        })
        .collect()
}

/// Resolves a dataset entry to a graph set and a display name.
pub fn resolve_dataset(entry: &str, count: usize, seed: u64) -> Result<(String, GraphSet)> {
    match entry.parse::<Dataset>() {
        Ok(ds) => Ok((entry.trim().to_string(), generate_dataset(ds, count, seed)?)),
        Err(_) if Path::new(entry).exists() => {
            let name = Path::new(entry)
                .file_stem()
                .map_or_else(|| entry.to_string(), |s| s.to_string_lossy().into_owned());
            Ok((name, load_graphset(entry)?))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentOutput {
    Rank(Vec<RankResult>),
    SampleEfficiency(Vec<SampleEfficiencyResult>),
    Timing { gin: String, seed: u64, rows: Vec<Timing> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub metrics: Vec<MetricId>,
    pub output: ExperimentOutput,
}

/// One line of the long-format CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub dataset: String,
    pub metric: String,
    pub config: String,
    pub seed: u64,
    /// The perturbation strength, or `rho` / `n_star` for per-trial
    /// summaries, or the swept quantity for timings.
    pub t: String,
    pub value: String,
}

pub const CSV_COLUMNS: [&str; 7] = ["experiment", "dataset", "metric", "config", "seed", "t", "value"];

impl ExperimentReport {
    pub fn rows(&self) -> Vec<ReportRow> {
        let mut out = Vec::new();
        let row = |dataset: &str, metric: &str, config: &str, seed: u64, t: String, value: String| ReportRow {
            experiment: self.name.clone(),
            dataset: dataset.to_string(),
            metric: metric.to_string(),
            config: config.to_string(),
            seed,
            t,
            value,
        };
        match &self.output {
            ExperimentOutput::Rank(results) => {
                for r in results {
                    let dataset = format!("{}/{}", r.dataset, r.kind);
                    for trial in &r.trials {
                        for (mi, m) in r.metrics.iter().enumerate() {
                            for (t, v) in r.t_grid.iter().zip(&trial.outcome.values[mi]) {
                                out.push(row(&dataset, m.name(), &trial.config, trial.seed, format!("{t:?}"), format!("{v:?}")));
                            }
                            let rho = format!("{:?}", trial.outcome.rho[mi]);
                            out.push(row(&dataset, m.name(), &trial.config, trial.seed, "rho".into(), rho));
                        }
                    }
                }
            }
            ExperimentOutput::SampleEfficiency(results) => {
                for r in results {
                    for trial in &r.trials {
                        for (mi, m) in r.metrics.iter().enumerate() {
                            let v = trial.n_star[mi].map_or("none".to_string(), |n| n.to_string());
                            out.push(row(&r.dataset, m.name(), &trial.config, trial.seed, "n_star".into(), v));
                        }
                    }
                }
            }
            ExperimentOutput::Timing { gin, seed, rows } => {
                for t in rows {
                    let p = &t.point;
                    let dataset = format!("er-{}(graphs={},nodes={},p={})", p.sweep, p.graphs, p.nodes, p.p);
                    let v = t.seconds.map_or("skipped".to_string(), |s| format!("{s:?}"));
                    out.push(row(&dataset, t.stage.name(), gin, *seed, format!("{:?}", p.x()), v));
                }
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, header: &[String], mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Io {
            path: format!("<{} report>", self.name).into(),
            source: e,
        };
        for line in header {
            writeln!(out, "# {line}").map_err(io)?;
        }
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Config(format!("writing {} report: {e}", self.name));
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        for r in self.rows() {
            w.write_record([
                r.experiment.as_str(),
                &r.dataset,
                &r.metric,
                &r.config,
                &r.seed.to_string(),
                &r.t,
                &r.value,
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(io)?;
        Ok(())
    }

    /// Summary cell for `metric`, or `None` when the experiment did not run it.
    pub fn summary_cell(&self, metric: MetricId) -> Option<String> {
        if !self.metrics.contains(&metric) {
            return None;
        }
        match &self.output {
            ExperimentOutput::Rank(results) => {
                let rhos: Vec<f64> = results.iter().flat_map(|r| r.rhos(metric)).collect();
                let (m, se) = mean_stderr(&rhos);
                Some(format!("{m:.2} ± {se:.3}"))
            }
            ExperimentOutput::SampleEfficiency(results) => {
                let stars: Vec<Option<usize>> = results.iter().flat_map(|r| r.n_stars(metric)).collect();
                let reached: Vec<f64> = stars.iter().flatten().map(|&n| n as f64).collect();
                let missing = stars.len() - reached.len();
                if reached.is_empty() {
                    return Some("not reached".into());
                }
                let (m, se) = mean_stderr(&reached);
                let mut s = format!("{m:.0} ± {se:.0}");
                if missing > 0 {
                    let _ = write!(s, " ({missing}/{} not reached)", stars.len());
                }
                Some(s)
            }
            ExperimentOutput::Timing { rows, .. } => {
                // The largest point of the first sweep that timed this metric.
                let last = rows
                    .iter()
                    .filter(|r| r.stage.name() == metric.name() && r.seconds.is_some())
                    .filter(|r| Some(r.point.sweep) == rows.first().map(|f| f.point.sweep))
                    .next_back()?;
                Some(format!("{:.3} s @ {}", last.seconds?, last.point.x()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub header: Vec<String>,
    pub experiments: Vec<ExperimentReport>,
}

impl BenchmarkReport {
    /// One row per metric, one column per experiment: mean ρ ± standard
    /// error over every trial, mean n* ± standard error over the trials that
    /// reached it, or seconds at the largest timed point.
    pub fn summary_table(&self) -> String {
        let metrics: Vec<MetricId> = MetricId::ALL
            .into_iter()
            .filter(|m| self.experiments.iter().any(|e| e.metrics.contains(m)))
            .collect();
        let mut cols: Vec<Vec<String>> = Vec::new();
        let mut first = vec!["metric".to_string()];
        first.extend(metrics.iter().map(|m| m.name().to_string()));
        cols.push(first);
        for e in &self.experiments {
            let mut col = vec![e.name.clone()];
            col.extend(metrics.iter().map(|&m| e.summary_cell(m).unwrap_or_else(|| "-".into())));
            cols.push(col);
        }
        let widths: Vec<usize> = cols
            .iter()
            .map(|c| c.iter().map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in &self.header {
            let _ = writeln!(out, "# {line}");
        }
        for row in 0..=metrics.len() {
            let cells: Vec<String> = cols
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(ci, (c, &w))| {
                    let pad = w - c[row].chars().count();
                    if ci == 0 {
                        format!("{}{}", c[row], " ".repeat(pad))
                    } else {
                        format!("{}{}", " ".repeat(pad), c[row])
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
            if row == 0 {
                let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
                let _ = writeln!(out, "{}", "-".repeat(total));
            }
        }
        out
    }

    /// Writes `<dir>/<experiment>.csv` for each experiment and
    /// `<dir>/summary.txt`.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for e in &self.experiments {
            let path = dir.join(format!("{}.csv", e.name));
            let file = std::fs::File::create(&path).map_err(|err| Error::io(&path, err))?;
            e.write_csv(&self.header, std::io::BufWriter::new(file))?;
        }
        let path = dir.join("summary.txt");
        std::fs::write(&path, self.summary_table()).map_err(|e| Error::io(&path, e))
    }
}

pub fn run_experiment(spec: &BenchmarkSpec, e: &ExperimentSpec) -> Result<ExperimentReport> {
    let gin = spec.gin_configs(e)?;
    let seeds = spec.trial_seeds(e);
    let output = match e.kind {
        ExperimentKind::Rank => {
            let mut results = Vec::new();
            for entry in &e.datasets {
                let (name, data) = resolve_dataset(entry, spec.graphs, spec.dataset_seed())?;
                for p in &e.perturbations {
                    let mut opts = RankOptions::new(p.parse()?, e.metrics.clone());
                    opts.gin = gin.clone();
                    opts.seeds = seeds.clone();
                    opts.k = spec.k;
                    if let Some(t) = &e.t_grid {
                        opts.t_grid = t.clone();
                    }
                    results.push(run_rank_experiment(&data, &name, &opts)?);
                }
            }
            ExperimentOutput::Rank(results)
        }
        ExperimentKind::SampleEfficiency => {
            let mut results = Vec::new();
            for entry in &e.datasets {
                let (name, data) = resolve_dataset(entry, spec.graphs, spec.dataset_seed())?;
                results.push(run_sample_efficiency(&data, &name, &e.metrics, &gin, &seeds, spec.k)?);
            }
            ExperimentOutput::SampleEfficiency(results)
        }
        ExperimentKind::Timing => {
            let mut t = match e.preset.as_deref() {
                Some("full") => TimingSpec::full(),
                _ => TimingSpec::desk(),
            };
            if let Some(s) = &e.sweeps {
                t.sweeps = s.clone();
            }
            t.metrics = e.metrics.clone();
            t.k = spec.k;
            t.seed = spec.seed;
            if e.gin.is_some() || spec.gin_sample.is_some() {
                t.gin = gin[0].clone();
            }
            let rows = timing_suite(&t)?;
            ExperimentOutput::Timing {
                gin: t.gin.label(),
                seed: t.seed,
                rows,
            }
        }
    };
    Ok(ExperimentReport {
        name: e.name.clone(),
        metrics: e.metrics.clone(),
        output,
    })
}

pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkReport> {
    spec.validate()?;
    let experiments = spec
        .experiments
        .iter()
        .map(|e| run_experiment(spec, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkReport {
        header: spec.header(),
        experiments,
    })
}
