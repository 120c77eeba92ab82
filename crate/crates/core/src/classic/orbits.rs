//! Per-node counts of the 15 automorphism orbits of connected graphlets on
//! 2 to 4 nodes.
//!
//! Orbit numbering: 0 edge endpoint (degree); 1 end and 2 middle of a 3-path;
//! 3 triangle; 4 end and 5 interior of a 4-path; 6 leaf and 7 centre of a
//! 3-star; 8 4-cycle; 9 tail, 10 degree-2 triangle node and 11 hub of a paw;
//! 12 degree-2 and 13 degree-3 node of a diamond; 14 4-clique.
//!
//! Counts refer to induced graphlets. They are obtained by counting each
//! pattern as a (not necessarily induced) subgraph with neighbourhood
//! combinatorics, then removing the contributions of denser induced
//! graphlets that contain the pattern.

use rayon::prelude::*;

use crate::graph::Graph;

pub const ORBITS: usize = 15;

pub type OrbitCounts = [u64; ORBITS];

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

fn choose3(x: u64) -> u64 {
    if x < 3 {
        0
    } else {
        x * (x - 1) * (x - 2) / 6
    }
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Common-neighbour count of every edge, indexed like `g.edges()`.
fn edge_codegrees(g: &Graph) -> Vec<u64> {
    g.edges()
        .par_iter()
        .map(|&(u, w)| sorted_intersection_len(g.neighbors(u), g.neighbors(w)) as u64)
        .collect()
}

struct Scratch {
    common: Vec<u64>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl Scratch {
    fn new(n: usize) -> Scratch {
        Scratch {
            common: vec![0; n],
            touched: Vec::new(),
            mark: vec![false; n],
        }
    }
}

fn node_orbits(g: &Graph, v: usize, tri: &[u64], codeg_e: &[u64], s: &mut Scratch) -> OrbitCounts {
    let nv = g.neighbors(v);
    let deg = |x: usize| g.degree(x) as u64;
    let dv = nv.len() as u64;

    for &a in nv {
        s.mark[a] = true;
        for &u in g.neighbors(a) {
            if u != v {
                if s.common[u] == 0 {
                    s.touched.push(u);
                }
                s.common[u] += 1;
            }
        }
    }

    let tri_v = tri[v];
    let mut n4 = 0u64;
    let mut n8 = 0u64;
    for &u in &s.touched {
        let c = s.common[u];
        n4 += c * (deg(u) - 1);
        n8 += choose2(c);
    }
    n4 -= 2 * tri_v;

    let (mut n5, mut n6, mut n9, mut n10, mut n13) = (0u64, 0u64, 0u64, 0u64, 0u64);
    let mut p3_end = 0u64;
    for &a in nv {
        let c = s.common[a];
        let da = deg(a);
        p3_end += da - 1;
        n5 += (dv - 1) * (da - 1) - c;
        n6 += choose2(da - 1);
        n9 += tri[a] - c;
        if c > 0 {
            n10 += c * (da - 2);
        }
        n13 += choose2(c);
    }
    let n7 = choose3(dv);
    let n11 = if dv >= 2 { tri_v * (dv - 2) } else { 0 };

    // Triangles (v, a, b) with a < b.
    let mut n12 = 0u64;
    let mut k4_thrice = 0u64;
    for &a in nv {
        let na = g.neighbors(a);
        for (&b, &e) in na.iter().zip(g.incident_edges(a)) {
            if b <= a || !s.mark[b] {
                continue;
            }
            n12 += codeg_e[e] - 1;
            let nb = g.neighbors(b);
            let (mut i, mut j) = (0, 0);
            while i < na.len() && j < nb.len() {
                match na[i].cmp(&nb[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if s.mark[na[i]] {
                            k4_thrice += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    let n14 = k4_thrice / 3;

    for &u in &s.touched {
        s.common[u] = 0;
    }
    s.touched.clear();
    for &a in nv {
        s.mark[a] = false;
    }

    let i14 = n14;
    let i13 = n13 - 3 * i14;
    let i12 = n12 - 3 * i14;
    let i11 = n11 - 2 * i13 - 3 * i14;
    let i10 = n10 - 2 * i12 - 2 * i13 - 6 * i14;
    let i9 = n9 - 2 * i12 - 3 * i14;
    let i8 = n8 - i12 - i13 - 3 * i14;
    let i7 = n7 - i11 - i13 - i14;
    let i6 = n6 - i9 - i10 - 2 * i12 - i13 - 3 * i14;
    let i5 = n5 - 2 * i8 - i10 - 2 * i11 - 2 * i12 - 4 * i13 - 6 * i14;
    let i4 = n4 - 2 * i8 - 2 * i9 - i10 - 4 * i12 - 2 * i13 - 6 * i14;

    [
        dv,
        p3_end - 2 * tri_v,
        choose2(dv) - tri_v,
        tri_v,
        i4,
        i5,
        i6,
        i7,
        i8,
        i9,
        i10,
        i11,
        i12,
        i13,
        i14,
    ]
}

/// Orbit counts for every node of `g`.
pub fn orbit_counts(g: &Graph) -> Vec<OrbitCounts> {
    let n = g.num_nodes();
    let codeg_e = edge_codegrees(g);
    let mut tri = vec![0u64; n];
    for (&(u, w), &c) in g.edges().iter().zip(&codeg_e) {
        tri[u] += c;
        tri[w] += c;
    }
    for t in &mut tri {
        *t /= 2;
    }
    (0..n)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |s, v| node_orbits(g, v, &tri, &codeg_e, s),
        )
        .collect()
}

/// Orbit counts averaged over the nodes; zeros for a graph without nodes.
pub fn mean_orbit_counts(g: &Graph) -> [f64; ORBITS] {
    let mut out = [0.0; ORBITS];
    let counts = orbit_counts(g);
    if counts.is_empty() {
        return out;
    }
    for c in &counts {
        for (o, &x) in out.iter_mut().zip(c) {
            *o += x as f64;
        }
    }
    for o in &mut out {
        *o /= counts.len() as f64;
    }
    out
}
