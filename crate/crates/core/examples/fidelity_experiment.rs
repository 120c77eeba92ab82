//! Mixing in random graphs and rewiring edges on Grid graphs, scored by how
//! well each metric's value rank-correlates with the perturbation strength.
//!
//! cargo run --release --example fidelity_experiment -- [graphs] [seeds]

use std::time::Instant;

use ggm_eval::graph::{generate_dataset, Dataset};
use ggm_eval::harness::{run_rank_experiment, PerturbationKind, RankOptions};
use ggm_eval::metrics::MetricId;

fn main() -> ggm_eval::Result<()> {
    let mut args = std::env::args().skip(1);
    let graphs: usize = args.next().map_or(100, |a| a.parse().expect("graph count"));
    let seeds: u64 = args.next().map_or(10, |a| a.parse().expect("seed count"));

    let data = generate_dataset(Dataset::Grid, graphs, 2024)?;
    let metrics = vec![
        MetricId::DegreeMmd,
        MetricId::ClusteringMmd,
        MetricId::OrbitMmd,
        MetricId::MmdRbf,
        MetricId::Fd,
        MetricId::Kid,
        MetricId::F1Pr,
        MetricId::F1Dc,
    ];
    for kind in [PerturbationKind::Mix, PerturbationKind::Rewire] {
        let mut opts = RankOptions::new(kind, metrics.clone());
        opts.seeds = (0..seeds).collect();
        let start = Instant::now();
        let result = run_rank_experiment(&data, "grid", &opts)?;
        println!("{kind} ({:.1}s)", start.elapsed().as_secs_f64());
        for &m in &metrics {
            let (mean, err) = result.mean_rho(m);
            println!("  {:<16} rho = {mean:.3} ± {err:.3}", m.name());
        }
    }
    Ok(())
}
