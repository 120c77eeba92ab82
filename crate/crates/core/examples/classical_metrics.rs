//! Degree, clustering and orbit statistics of small graphs, and the
//! classical MMDs between Grid graphs and their rewired copies.
//!
//! cargo run --release --example classical_metrics

use ggm_eval::classic::{classical_mmd_sets, clustering_hist, degree_hist, orbit_counts, Statistic};
use ggm_eval::graph::{generate_dataset, Dataset, Graph};
use ggm_eval::harness::perturb_rewire;

fn main() -> ggm_eval::Result<()> {
    // a triangle with a pendant node: one node of each paw orbit
    let paw = Graph::new(4, [(0, 1), (1, 2), (0, 2), (0, 3)])?;
    println!("paw degree histogram   {:?}", degree_hist(&paw));
    println!("paw clustering (10 bins) {:?}", clustering_hist(&paw, 10));
    for (v, counts) in orbit_counts(&paw).iter().enumerate() {
        println!("  node {v} orbits {counts:?}");
    }

    let grid = generate_dataset(Dataset::Grid, 40, 0)?;
    println!("\nGrid vs rewired Grid");
    println!("{:>5} {:>12} {:>12} {:>12}", "t", "degree", "clustering", "orbit");
    for t in [0.0, 0.05, 0.1, 0.2, 0.5, 1.0] {
        let rewired = perturb_rewire(&grid, t, 3)?;
        let cells: Vec<String> = Statistic::ALL
            .iter()
            .map(|&s| classical_mmd_sets(&grid, &rewired, s).map(|m| format!("{:>12.5}", m.raw)))
            .collect::<ggm_eval::Result<_>>()?;
        println!("{t:>5.2} {}", cells.join(" "));
    }
    Ok(())
}
