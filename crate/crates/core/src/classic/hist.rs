use crate::graph::Graph;

pub const CLUSTERING_BINS: usize = 100;

/// Fraction of nodes with each degree `0..=max_degree`.
pub fn degree_hist(g: &Graph) -> Vec<f64> {
    let n = g.num_nodes();
    if n == 0 {
        return Vec::new();
    }
    let mut h = vec![0.0; g.max_degree() + 1];
    for v in 0..n {
        h[g.degree(v)] += 1.0;
    }
    for x in &mut h {
        *x /= n as f64;
    }
    h
}

/// Local clustering coefficient of each node; 0 for degree below 2.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    let n = g.num_nodes();
    let mut mark = vec![false; n];
    (0..n)
        .map(|v| {
            let nv = g.neighbors(v);
            let d = nv.len();
            if d < 2 {
                return 0.0;
            }
            for &a in nv {
                mark[a] = true;
            }
            let mut links = 0usize;
            for &a in nv {
                links += g.neighbors(a).iter().filter(|&&b| b > a && mark[b]).count();
            }
            for &a in nv {
                mark[a] = false;
            }
            links as f64 / (d * (d - 1) / 2) as f64
        })
        .collect()
}

/// Normalised histogram of local clustering over `bins` equal bins of
/// `[0, 1]`; a coefficient of exactly 1 falls in the last bin.
pub fn clustering_hist(g: &Graph, bins: usize) -> Vec<f64> {
    let coeffs = local_clustering(g);
    let mut h = vec![0.0; bins];
    if coeffs.is_empty() || bins == 0 {
        return h;
    }
    for c in &coeffs {
        let b = ((c * bins as f64) as usize).min(bins - 1);
        h[b] += 1.0;
    }
    for x in &mut h {
        *x /= coeffs.len() as f64;
    }
    h
}

/// Earth mover's distance between two 1-D histograms on bins `0, 1, 2, …`
/// (the shorter one zero-padded) with ground distance `bin_width · |i − j|`.
/// Both histograms should carry the same total mass.
pub fn emd_1d(a: &[f64], b: &[f64], bin_width: f64) -> f64 {
    let len = a.len().max(b.len());
    let (mut ca, mut cb, mut total) = (0.0, 0.0, 0.0);
    for i in 0..len {
        ca += a.get(i).copied().unwrap_or(0.0);
        cb += b.get(i).copied().unwrap_or(0.0);
        total += (ca - cb).abs();
    }
    // The last cumulative gap is the mass imbalance, not transport.
    total -= (ca - cb).abs();
    total * bin_width
}
