//! Mode collapse and mode dropping on Grid and Lobster graphs. The modes are
//! found by affinity propagation on the WL kernel.
//!
//! cargo run --release --example diversity_experiment -- [graphs] [seeds]

use std::time::Instant;

use ggm_eval::graph::{generate_dataset, Dataset};
use ggm_eval::harness::{run_rank_experiment, PerturbationKind, RankOptions};
use ggm_eval::metrics::MetricId;

fn main() -> ggm_eval::Result<()> {
    let mut args = std::env::args().skip(1);
    let graphs: usize = args.next().map_or(100, |a| a.parse().expect("graph count"));
    let seeds: u64 = args.next().map_or(10, |a| a.parse().expect("seed count"));

    let metrics = vec![
        MetricId::DegreeMmd,
        MetricId::ClusteringMmd,
        MetricId::OrbitMmd,
        MetricId::MmdRbf,
        MetricId::Fd,
        MetricId::Precision,
        MetricId::Recall,
        MetricId::F1Pr,
        MetricId::F1Dc,
    ];
    for dataset in [Dataset::Grid, Dataset::Lobster] {
        let data = generate_dataset(dataset, graphs, 2024)?;
        for kind in [PerturbationKind::ModeCollapse, PerturbationKind::ModeDrop] {
            let mut opts = RankOptions::new(kind, metrics.clone());
            opts.seeds = (0..seeds).collect();
            let start = Instant::now();
            let result = run_rank_experiment(&data, dataset.name(), &opts)?;
            let clusters: Vec<usize> = result.trials.iter().filter_map(|t| t.outcome.clusters).collect();
            println!(
                "{dataset} / {kind} ({:.1}s, clusters per seed {clusters:?})",
                start.elapsed().as_secs_f64()
            );
            for &m in &metrics {
                let (mean, err) = result.mean_rho(m);
                println!("  {:<16} rho = {mean:.3} ± {err:.3}", m.name());
            }
        }
    }
    Ok(())
}
