//! Writes each synthetic dataset family to a graph-set file and prints a
//! short size summary of what was generated.
//!
//! cargo run --release --example generate_datasets -- [out_dir] [count]

use std::path::PathBuf;

use ggm_eval::graph::{generate_dataset, load_graphset, save_graphset, Dataset};

fn main() -> ggm_eval::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "datasets".into()));
    let count: usize = args.next().map_or(100, |a| a.parse().expect("graph count"));
    std::fs::create_dir_all(&dir).map_err(|source| ggm_eval::Error::Io { path: dir.clone(), source })?;

    let families = [
        Dataset::Grid,
        Dataset::Lobster,
        Dataset::Community,
        Dataset::LabeledCommunity,
        Dataset::ErdosRenyi { nodes: 50, p: 0.1 },
    ];
    println!("{:<20} {:>6} {:>14} {:>14}", "family", "graphs", "nodes min-max", "mean edges");
    for family in families {
        let set = generate_dataset(family, count, 0)?;
        let path = dir.join(format!("{}.graphs", family.name()));
        save_graphset(&set, &path)?;
        // round trip through the file format
        let set = load_graphset(&path)?;
        let nodes: Vec<usize> = set.iter().map(|g| g.num_nodes()).collect();
        let edges = set.iter().map(|g| g.num_edges()).sum::<usize>() as f64 / set.len() as f64;
        println!(
            "{:<20} {:>6} {:>14} {:>14.1}",
            family.to_string(),
            set.len(),
            format!("{}-{}", nodes.iter().min().unwrap(), nodes.iter().max().unwrap()),
            edges
        );
    }
    println!("written to {}", dir.display());
    Ok(())
}
