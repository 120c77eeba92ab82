//! How many graphs each metric needs before it reliably ranks a held-out
//! real set closer to the reference than a set of Erdős–Rényi look-alikes.
//!
//! cargo run --release --example sample_efficiency -- [graphs] [seeds]

use ggm_eval::embed::GinConfig;
use ggm_eval::graph::{generate_dataset, Dataset};
use ggm_eval::harness::{mean_stderr, run_sample_efficiency};
use ggm_eval::metrics::MetricId;
use ggm_eval::suite::DEFAULT_K;

fn main() -> ggm_eval::Result<()> {
    let mut args = std::env::args().skip(1);
    let graphs: usize = args.next().map_or(100, |a| a.parse().expect("graph count"));
    let seeds: u64 = args.next().map_or(10, |a| a.parse().expect("seed count"));
    let seeds: Vec<u64> = (0..seeds).collect();

    let metrics = [
        MetricId::Precision,
        MetricId::Recall,
        MetricId::Density,
        MetricId::Coverage,
        MetricId::F1Pr,
        MetricId::F1Dc,
        MetricId::MmdRbf,
        MetricId::Fd,
        MetricId::Kid,
        MetricId::DegreeMmd,
        MetricId::ClusteringMmd,
        MetricId::OrbitMmd,
    ];
    for dataset in [Dataset::Grid, Dataset::Lobster] {
        let data = generate_dataset(dataset, graphs, 2024)?;
        let result = run_sample_efficiency(&data, dataset.name(), &metrics, &[GinConfig::default()], &seeds, DEFAULT_K)?;
        println!("{dataset} (grid {:?})", result.grid);
        for m in metrics {
            let stars = result.n_stars(m);
            let reached: Vec<f64> = stars.iter().flatten().map(|&n| n as f64).collect();
            let (mean, err) = mean_stderr(&reached);
            println!(
                "  {:<16} n* = {mean:.1} ± {err:.1}  (not reached in {} of {})",
                m.name(),
                stars.len() - reached.len(),
                stars.len()
            );
        }
    }
    Ok(())
}
