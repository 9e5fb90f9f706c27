//! Brute-force ground truth for minimum cluster deletion on small graphs.
//!
//! The optimum is `|E|` minus the largest number of edges that a partition of
//! the vertices into cliques can keep. `best(S)` is computed over vertex
//! subsets `S` by peeling off the clique that contains the least vertex of `S`.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::{Edge, EdgeSet, Graph};

pub const ORACLE_MAX_VERTICES: usize = 18;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub optimum: usize,
    pub witness: EdgeSet,
}

struct Dp<'a> {
    adj: &'a [u32],
    best: Vec<i32>,
    choice: Vec<u32>,
}

impl Dp<'_> {
    fn solve(&mut self, set: u32) -> i32 {
        if set == 0 {
            return 0;
        }
        if self.best[set as usize] >= 0 {
            return self.best[set as usize];
        }
        let low = set.trailing_zeros() as usize;
        let rest = set & !(1 << low);
        let cand = rest & self.adj[low];
        let mut best = -1;
        let mut arg = 0;
        self.cliques(1 << low, cand, rest, 0, &mut best, &mut arg);
        self.best[set as usize] = best;
        self.choice[set as usize] = arg;
        best
    }

    /// Enumerates cliques `clique ∪ T`, `T ⊆ cand`, scoring each by its edge
    /// count plus the optimum of what remains.
    fn cliques(&mut self, clique: u32, cand: u32, rest: u32, edges: i32, best: &mut i32, arg: &mut u32) {
        let value = edges + self.solve(rest);
        if value > *best {
            *best = value;
            *arg = clique;
        }
        let mut c = cand;
        while c != 0 {
            let x = c.trailing_zeros() as usize;
            c &= c - 1;
            // only extend with vertices above x to visit each clique once
            let gain = (clique.count_ones()) as i32;
            self.cliques(clique | 1 << x, c & self.adj[x], rest & !(1 << x), edges + gain, best, arg);
        }
    }
}

/// Minimum number of edge deletions turning `g` into a cluster graph, with a
/// witness. Refuses graphs above [`ORACLE_MAX_VERTICES`].
pub fn exact_min_deletion(g: &Graph) -> Result<OracleResult> {
    let n = g.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(CoreError::GraphTooLarge { n, cap: ORACLE_MAX_VERTICES });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0u32, |m, y| m | 1 << y)).collect();
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut dp = Dp { adj: &adj, best: vec![-1; 1 << n], choice: vec![0; 1 << n] };
    let kept = dp.solve(full) as usize;

    let mut cluster_of = vec![usize::MAX; n];
    let mut set = full;
    let mut id = 0;
    while set != 0 {
        let clique = dp.choice[set as usize];
        for (x, slot) in cluster_of.iter_mut().enumerate() {
            if clique >> x & 1 == 1 {
                *slot = id;
            }
        }
        id += 1;
        set &= !clique;
    }
    let witness: EdgeSet = g.edges().filter(|e: &Edge| cluster_of[e.a] != cluster_of[e.b]).collect();
    debug_assert_eq!(witness.len(), g.edge_count() - kept);
    Ok(OracleResult { optimum: g.edge_count() - kept, witness })
}

/// Is there a solution with at most `k` deletions?
pub fn exact_decision(g: &Graph, k: usize) -> Result<bool> {
    Ok(exact_min_deletion(g)?.optimum <= k)
}

/// Enumerates edge subsets by increasing size. Exponential in `|E|`; only for
/// cross-checking on tiny graphs.
pub fn min_deletion_by_edge_subsets(g: &Graph) -> usize {
    let edges: Vec<Edge> = g.edges().collect();
    let m = edges.len();
    assert!(m <= 24, "edge-subset enumeration limited to 24 edges");
    let mut best = m;
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut h = g.clone();
        for (i, e) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                h.remove_edge(e.a, e.b);
            }
        }
        if h.is_cluster_graph() {
            best = size;
        }
    }
    best
}
