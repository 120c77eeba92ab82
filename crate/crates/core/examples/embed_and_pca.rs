//! Embeds Grid, Lobster and Erdős–Rényi graphs with one random GIN and
//! projects them onto two principal components. The three families separate
//! even though the network was never trained.
//!
//! cargo run --release --example embed_and_pca

use ggm_eval::embed::{embed_set, pca_project, EmbeddingMatrix, GinConfig, GinWeights};
use ggm_eval::graph::{generate_dataset, Dataset, FeatureSchema};

fn main() -> ggm_eval::Result<()> {
    let weights = GinWeights::init(&GinConfig::default(), FeatureSchema::PLAIN)?;
    let families = [
        Dataset::Grid,
        Dataset::Lobster,
        Dataset::ErdosRenyi { nodes: 60, p: 0.05 },
    ];
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for family in families {
        let x = embed_set(&generate_dataset(family, 40, 1)?, &weights)?;
        rows.extend(x.iter_rows().map(|r| r.to_vec()));
        labels.extend(std::iter::repeat_n(family.name(), x.rows()));
    }
    let all = EmbeddingMatrix::from_rows(rows, weights.output_width())?;
    let pca = pca_project(&all, 2)?;
    println!(
        "{} graphs, {}-dim embeddings; explained variance {:.3} + {:.3}",
        all.rows(),
        all.cols(),
        pca.explained_ratio[0],
        pca.explained_ratio[1]
    );
    for family in families {
        let pts: Vec<&[f64]> = (0..all.rows())
            .filter(|&i| labels[i] == family.name())
            .map(|i| pca.coords.row(i))
            .collect();
        let n = pts.len() as f64;
        let (cx, cy) = (pts.iter().map(|p| p[0]).sum::<f64>() / n, pts.iter().map(|p| p[1]).sum::<f64>() / n);
        let spread = pts.iter().map(|p| ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt()).sum::<f64>() / n;
        println!("  {:<8} centre ({cx:>10.2}, {cy:>10.2})  mean radius {spread:.2}", family.name());
    }
    Ok(())
}
