//! The `ggm-eval` command line: compare two graph-set files, run a benchmark
//! file, generate synthetic sets, export embeddings.
//!
//! Exit codes: 0 on success, 2 for usage or validation errors, 3 for data,
//! I/O and runtime errors. `GGM_EVAL_THREADS` caps the worker threads.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::embed::{pca_project, GinConfig, Pooling};
use crate::error::{Error, Result};
use crate::graph::{generate_dataset, load_graphset, save_graphset, Dataset, FeatureSchema, GraphSet};
use crate::harness::{mean_stderr, run_benchmark, random_architectures, BenchmarkSpec};
use crate::metrics::{MetricId, MetricScore};
use crate::rng::{self, derive_seed, seeded};
use crate::suite::{Evaluator, DEFAULT_K};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Below this many graphs per set MMD RBF cannot reliably tell a set from
/// random graphs, so `compare` defaults to F1 PR instead.
pub const MMD_RBF_MIN_SAMPLES: usize = 42;

#[derive(Debug, Parser)]
#[command(name = "ggm-eval", version, about = "Compare sets of graphs with random-GIN and classical metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a generated graph set against a reference set.
    Compare(CompareArgs),
    /// Run the experiments described in a TOML benchmark file.
    Benchmark(BenchmarkArgs),
    /// Write a synthetic graph set.
    Generate(GenerateArgs),
    /// Write the GIN embedding of a graph set as CSV.
    Embed(EmbedArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoolingArg {
    Sum,
    Mean,
    Max,
}

impl From<PoolingArg> for Pooling {
    fn from(p: PoolingArg) -> Pooling {
        match p {
            PoolingArg::Sum => Pooling::Sum,
            PoolingArg::Mean => Pooling::Mean,
            PoolingArg::Max => Pooling::Max,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GinArgs {
    #[arg(long, default_value_t = 3)]
    pub gin_layers: usize,
    #[arg(long, default_value_t = 35)]
    pub gin_dim: usize,
    #[arg(long, value_enum, default_value = "sum")]
    pub agg: PoolingArg,
    #[arg(long, value_enum, default_value = "sum")]
    pub readout: PoolingArg,
    /// Use only the last round's node states in the graph embedding.
    #[arg(long)]
    pub no_concat: bool,
}

impl GinArgs {
    pub fn config(&self, seed: u64) -> Result<GinConfig> {
        let cfg = GinConfig {
            layers: self.gin_layers,
            dim: self.gin_dim,
            aggregator: self.agg.into(),
            readout: self.readout.into(),
            concat_layers: !self.no_concat,
            seed,
            ..GinConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long = "ref", value_name = "FILE")]
    pub reference: PathBuf,
    #[arg(long = "gen", value_name = "FILE")]
    pub generated: PathBuf,
    /// Comma-separated metric names. Defaults to mmd_rbf when both sets have
    /// at least 42 graphs, f1_pr otherwise.
    #[arg(long, value_delimiter = ',')]
    pub metrics: Vec<MetricId>,
    #[command(flatten)]
    pub gin: GinArgs,
    /// Number of random GIN initialisations.
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    /// Base seed; initialisation i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Neighbours for precision/recall/density/coverage.
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    /// Also score two random halves of the reference set against each other.
    #[arg(long)]
    pub baseline: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    pub spec: PathBuf,
    /// Directory for `<experiment>.csv` files and `summary.txt`.
    #[arg(long, default_value = "report")]
    pub out: PathBuf,
    /// Sample 20 GIN architectures and use the full timing grids. Slow.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// grid, lobster, community, labeled-community or er:<nodes>:<p>
    pub family: String,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EmbedArgs {
    pub set: PathBuf,
    #[command(flatten)]
    pub gin: GinArgs,
    /// GIN weight seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the projection onto this many principal components.
    #[arg(long)]
    pub pca: Option<usize>,
    /// Where the projection goes (default: OUT with a `.pca.csv` suffix).
    #[arg(long)]
    pub pca_out: Option<PathBuf>,
}

/// Mean and standard error over GIN initialisations for one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub metric: MetricId,
    pub raw: (f64, f64),
    pub dissimilarity: (f64, f64),
    pub baseline: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub seeds: usize,
    pub n_ref: usize,
    pub n_gen: usize,
    pub rows: Vec<CompareRow>,
}

fn check_schemas(a: &GraphSet, b: &GraphSet) -> Result<FeatureSchema> {
    let (sa, sb) = (a.schema(), b.schema());
    match (sa, sb) {
        (Some(x), Some(y)) if x == y => Ok(x),
        (Some(x), Some(y)) => Err(Error::Schema(format!(
            "reference has {x:?} but generated has {y:?}"
        ))),
        _ => Err(Error::Precondition("graph sets must not be empty".into())),
    }
}

pub fn default_metrics(n_ref: usize, n_gen: usize) -> Vec<MetricId> {
    if n_ref.min(n_gen) >= MMD_RBF_MIN_SAMPLES {
        vec![MetricId::MmdRbf]
    } else {
        vec![MetricId::F1Pr]
    }
}

fn halves(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    rng::shuffle(&mut seeded(seed), &mut order);
    let second = order.split_off(n / 2);
    (order, second)
}

/// Scores `generated` against `reference` under `args.seeds` GIN
/// initialisations. Classical metrics do not depend on the GIN and are
/// computed once.
pub fn compare_sets(reference: &GraphSet, generated: &GraphSet, args: &CompareArgs) -> Result<CompareReport> {
    let schema = check_schemas(reference, generated)?;
    if args.seeds == 0 {
        return Err(Error::InvalidParameter("--seeds must be >= 1".into()));
    }
    let metrics = if args.metrics.is_empty() {
        default_metrics(reference.len(), generated.len())
    } else {
        let mut seen = std::collections::HashSet::new();
        args.metrics.iter().copied().filter(|m| seen.insert(*m)).collect()
    };
    let split = args
        .baseline
        .then(|| {
            if reference.len() < 2 {
                return Err(Error::Precondition("the baseline needs at least two reference graphs".into()));
            }
            let (a, b) = halves(reference.len(), derive_seed(args.seed, 12, 0));
            Ok((reference.select(&a), reference.select(&b)))
        })
        .transpose()?;

    let classical: Vec<MetricId> = metrics.iter().copied().filter(|m| m.is_classical()).collect();
    let neural: Vec<MetricId> = metrics.iter().copied().filter(|m| !m.is_classical()).collect();
    // scores[m] holds one (raw, dissimilarity, baseline) per initialisation.
    let mut scores: Vec<Vec<(f64, f64, Option<f64>)>> = vec![Vec::new(); metrics.len()];
    let mut record = |s: Vec<MetricScore>, base: Option<Vec<MetricScore>>| {
        for (i, score) in s.into_iter().enumerate() {
            let slot = metrics.iter().position(|&m| m == score.metric).expect("metric was requested");
            let b = base.as_ref().map(|b| b[i].dissimilarity);
            scores[slot].push((score.raw, score.dissimilarity, b));
        }
    };

    let gin = args.gin.config(0)?;
    if !classical.is_empty() {
        let ev = Evaluator::new(&classical, &gin, schema, args.k)?;
        let base = split.as_ref().map(|(a, b)| ev.evaluate(a, b)).transpose()?;
        record(ev.evaluate(reference, generated)?, base);
    }
    if !neural.is_empty() {
        for i in 0..args.seeds as u64 {
            let cfg = gin.with_seed(derive_seed(args.seed.wrapping_add(i), 11, 0));
            let ev = Evaluator::new(&neural, &cfg, schema, args.k)?;
            let base = split.as_ref().map(|(a, b)| ev.evaluate(a, b)).transpose()?;
            record(ev.evaluate(reference, generated)?, base);
        }
    }

    let rows = metrics
        .iter()
        .zip(&scores)
        .map(|(&metric, s)| {
            let col = |f: fn(&(f64, f64, Option<f64>)) -> f64| mean_stderr(&s.iter().map(f).collect::<Vec<_>>());
            CompareRow {
                metric,
                raw: col(|x| x.0),
                dissimilarity: col(|x| x.1),
                baseline: split.is_some().then(|| col(|x| x.2.unwrap_or(f64::NAN))),
            }
        })
        .collect();
    Ok(CompareReport {
        seeds: args.seeds,
        n_ref: reference.len(),
        n_gen: generated.len(),
        rows,
    })
}

impl CompareReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "metric,raw_mean,raw_stderr,dissimilarity_mean,dissimilarity_stderr,baseline_mean,baseline_stderr\n",
        );
        for r in &self.rows {
            let (bm, bs) = r
                .baseline
                .map_or((String::new(), String::new()), |(m, s)| (format!("{m:?}"), format!("{s:?}")));
            let _ = writeln!(
                out,
                "{},{:?},{:?},{:?},{:?},{bm},{bs}",
                r.metric, r.raw.0, r.raw.1, r.dissimilarity.0, r.dissimilarity.1
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} reference vs {} generated graphs, {} GIN initialisation(s)\n",
            self.n_ref, self.n_gen, self.seeds
        );
        let has_base = self.rows.iter().any(|r| r.baseline.is_some());
        let _ = write!(out, "{:<15} {:>24} {:>24}", "metric", "raw", "dissimilarity");
        if has_base {
            let _ = write!(out, " {:>24}", "50/50 baseline");
        }
        out.push('\n');
        for r in &self.rows {
            let pm = |(m, s): (f64, f64)| format!("{} ± {}", short(m), short(s));
            let _ = write!(out, "{:<15} {:>24} {:>24}", r.metric.name(), pm(r.raw), pm(r.dissimilarity));
            if let Some(b) = r.baseline {
                let _ = write!(out, " {:>24}", pm(b));
            }
            out.push('\n');
        }
        out
    }
}

/// Six decimals, or scientific notation outside `[1e-3, 1e5)`.
fn short(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-3..1e5).contains(&a) {
        format!("{x:.6}")
    } else {
        format!("{x:.4e}")
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn cmd_compare(args: &CompareArgs) -> Result<CompareReport> {
    let reference = load_graphset(&args.reference)?;
    let generated = load_graphset(&args.generated)?;
    let report = compare_sets(&reference, &generated, args)?;
    let text = match args.format {
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    write_output(args.out.as_deref(), &text)?;
    Ok(report)
}

pub fn cmd_benchmark(args: &BenchmarkArgs) -> Result<()> {
    let mut spec = BenchmarkSpec::load(&args.spec)?;
    if args.full {
        spec.gin_sample = Some(random_architectures(20, spec.seed).len());
        for e in &mut spec.experiments {
            e.preset = Some("full".into());
        }
    }
    let report = run_benchmark(&spec)?;
    report.write_dir(&args.out)?;
    print!("{}", report.summary_table());
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let family: Dataset = args.family.parse()?;
    let set = generate_dataset(family, args.count, args.seed)?;
    save_graphset(&set, &args.out)
}

pub fn cmd_embed(args: &EmbedArgs) -> Result<()> {
    let set = load_graphset(&args.set)?;
    let schema = set
        .schema()
        .ok_or_else(|| Error::Precondition("cannot embed an empty graph set".into()))?;
    let cfg = args.gin.config(args.seed)?;
    let ev = Evaluator::new(&[MetricId::MmdRbf], &cfg, schema, DEFAULT_K)?;
    let x = ev.embed(&set)?.expect("embedding metric requested");
    write_matrix(&args.out, &x)?;
    if let Some(k) = args.pca {
        let path = args
            .pca_out
            .clone()
            .unwrap_or_else(|| args.out.with_extension("pca.csv"));
        write_matrix(&path, &pca_project(&x, k)?.coords)?;
    }
    Ok(())
}

fn write_matrix(path: &Path, x: &crate::embed::EmbeddingMatrix) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    x.write_csv(std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// Applies `GGM_EVAL_THREADS` to the global thread pool, if set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("GGM_EVAL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("GGM_EVAL_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_usage() || matches!(e, Error::Schema(_)) {
        EXIT_USAGE
    } else {
        EXIT_RUNTIME
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    init_threads()?;
    match &cli.command {
        Command::Compare(a) => cmd_compare(a).map(drop),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Embed(a) => cmd_embed(a),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
