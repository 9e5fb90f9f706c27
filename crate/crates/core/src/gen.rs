//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::{Edge, Graph, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph: each pair independently with probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    Ok(gnp_with(n, p, &mut rng(seed)))
}

pub fn gnp_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Disjoint cliques of the given sizes plus `q` random edges between them.
/// Deleting the noise edges is a solution, so `q` bounds the optimum.
#[derive(Clone, Debug, Serialize)]
pub struct Planted {
    #[serde(skip)]
    pub graph: Graph,
    pub cluster_sizes: Vec<usize>,
    pub q: usize,
    pub seed: u64,
    pub noise_edges: Vec<Edge>,
}

pub fn planted(cluster_sizes: &[usize], q: usize, seed: u64) -> Result<Planted> {
    if cluster_sizes.is_empty() || cluster_sizes.contains(&0) {
        return Err(CoreError::InvalidParameter("cluster sizes must be positive".into()));
    }
    let n: usize = cluster_sizes.iter().sum();
    let mut cluster = Vec::with_capacity(n);
    for (i, &s) in cluster_sizes.iter().enumerate() {
        cluster.extend(std::iter::repeat_n(i, s));
    }
    let mut cross: Vec<Edge> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if cluster[a] != cluster[b] {
                cross.push(Edge::new(a, b));
            }
        }
    }
    if q > cross.len() {
        return Err(CoreError::InvalidParameter(format!("q = {q} exceeds the {} possible noise edges", cross.len())));
    }
    let mut r = rng(seed);
    let mut noise: Vec<Edge> = cross.choose_multiple(&mut r, q).copied().collect();
    noise.sort_unstable();
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if cluster[a] == cluster[b] {
                g.add_edge(a, b);
            }
        }
    }
    for e in &noise {
        g.add_edge(e.a, e.b);
    }
    Ok(Planted { graph: g, cluster_sizes: cluster_sizes.to_vec(), q, seed, noise_edges: noise })
}

/// Vertex names of [`layered_counterexample`] in id order.
pub const COUNTEREXAMPLE_LABELS: [&str; 17] = [
    "u", "v", "w", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "c4", "d1", "d2", "d3", "d4", "d5", "d6",
];

pub const COUNTEREXAMPLE_NOTE: &str = "Layered counterexample: all 8 edges between B and B_1 can be deleted \
one at a time in the frontier stage. The neighborhood of b4 is listed as {w,b3,c4,c4} in the source; it is \
read as {w,b3,c3,c4}, the only reading consistent with N(c3) and N(c4).";

/// The P3 `u, v, w` with `B = {b1..b4}`, `B_1 = {c1..c4}`, `B_2 = {d1..d6}`.
/// Ids follow [`COUNTEREXAMPLE_LABELS`].
pub fn layered_counterexample() -> Graph {
    let id = |name: &str| -> VertexId { COUNTEREXAMPLE_LABELS.iter().position(|&l| l == name).unwrap() };
    let adjacency: [(&str, &[&str]); 11] = [
        ("u", &["v"]),
        ("v", &["w"]),
        ("b1", &["u", "b2", "c1", "c2"]),
        ("b2", &["u", "b1", "c1", "c2"]),
        ("b3", &["w", "b4", "c3", "c4"]),
        ("b4", &["w", "b3", "c3", "c4"]),
        ("c1", &["b1", "b2", "c2", "d1", "d2"]),
        ("c2", &["b1", "b2", "c1", "d3"]),
        ("c3", &["b3", "b4", "c4", "d4", "d5"]),
        ("c4", &["b3", "b4", "c3", "d6"]),
        ("d1", &["c1"]),
    ];
    let mut g = Graph::new(COUNTEREXAMPLE_LABELS.len());
    for (x, nbrs) in adjacency {
        for y in nbrs {
            g.add_edge(id(x), id(y));
        }
    }
    g
}
