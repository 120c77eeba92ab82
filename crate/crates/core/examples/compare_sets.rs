//! Scores a "generated" set against a reference set with every metric, next
//! to the value two halves of the reference give each other. Here the
//! generated set is Erdős–Rényi graphs matched in size and density to the
//! reference Lobster graphs.
//!
//! cargo run --release --example compare_sets

use ggm_eval::cli::{compare_sets, CompareArgs, Format, GinArgs, PoolingArg};
use ggm_eval::graph::{er_twin, generate_dataset, Dataset, GraphSet, TwinDensity};
use ggm_eval::metrics::MetricId;
use ggm_eval::rng::seeded;

fn main() -> ggm_eval::Result<()> {
    let reference = generate_dataset(Dataset::Lobster, 100, 0)?;
    let mut rng = seeded(1);
    let twins = reference
        .iter()
        .map(|g| er_twin(g, TwinDensity::default(), &mut rng))
        .collect::<ggm_eval::Result<Vec<_>>>()?;
    let generated = GraphSet::new(twins)?;

    let args = CompareArgs {
        reference: "lobster".into(),
        generated: "twins".into(),
        metrics: MetricId::ALL.to_vec(),
        gin: GinArgs {
            gin_layers: 3,
            gin_dim: 35,
            agg: PoolingArg::Sum,
            readout: PoolingArg::Sum,
            no_concat: false,
        },
        seeds: 5,
        seed: 0,
        k: 5,
        baseline: true,
        out: None,
        format: Format::Text,
    };
    let report = compare_sets(&reference, &generated, &args)?;
    print!("{}", report.to_text());
    Ok(())
}
