//! Exact minimum cluster deletion on a component that is a clique plus a few
//! extra vertices.
//!
//! A component splits into a removable part `X` and a clique `Q`. Two engines
//! compute an optimal deletion set:
//!
//! * [`solve_by_subsets`] runs a dynamic program over all vertex subsets of the
//!   component and ignores the split entirely. It is exponential in the
//!   component size.
//! * [`solve_by_partition`] enumerates the partitions of `X` into cliques and
//!   then places every `Q` vertex either into a compatible group or into a
//!   single leftover `Q`-cluster. It is exponential only in `|X|`.
//!
//! Some optimal clustering has at most one cluster inside `Q`: two such
//! clusters can always be merged since `Q` is complete.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostCliqueDecomposition {
    pub x_set: Vec<VertexId>,
    pub q_set: Vec<VertexId>,
}

impl AlmostCliqueDecomposition {
    pub fn new(mut x_set: Vec<VertexId>, mut q_set: Vec<VertexId>) -> Self {
        x_set.sort_unstable();
        q_set.sort_unstable();
        AlmostCliqueDecomposition { x_set, q_set }
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        let mut all: Vec<VertexId> = self.x_set.iter().chain(&self.q_set).copied().collect();
        all.sort_unstable();
        all
    }

    /// `Q` complete, `X ∩ Q = ∅`, and no edge leaves `X ∪ Q`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let all = self.vertices();
        if let Some(&x) = all.iter().find(|&&x| x >= g.n()) {
            return Err(CoreError::VertexOutOfRange { vertex: x, n: g.n() });
        }
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(CoreError::InvalidDecomposition("X and Q overlap or repeat a vertex".into()));
        }
        if !g.is_clique(&self.q_set) {
            return Err(CoreError::InvalidDecomposition("Q is not a clique".into()));
        }
        let mut inside = vec![false; g.n()];
        for &x in &all {
            inside[x] = true;
        }
        for &x in &all {
            if let Some(y) = g.neighbors(x).find(|&y| !inside[y]) {
                return Err(CoreError::InvalidDecomposition(format!("edge {x}-{y} leaves the component")));
            }
        }
        Ok(())
    }
}

/// Some `X` with `|X| <= alpha` whose removal leaves a clique, chosen by
/// branching on the least non-adjacent pair (a vertex cover of the complement).
/// Considers every vertex of `g`.
pub fn decompose(g: &Graph, alpha: usize) -> Option<AlmostCliqueDecomposition> {
    fn go(g: &Graph, removed: &mut Vec<bool>, budget: usize) -> bool {
        let live: Vec<VertexId> = (0..g.n()).filter(|&x| !removed[x]).collect();
        let pair = live.iter().enumerate().find_map(|(i, &x)| {
            live[i + 1..].iter().find(|&&y| !g.has_edge(x, y)).map(|&y| (x, y))
        });
        let Some((x, y)) = pair else { return true };
        if budget == 0 {
            return false;
        }
        for z in [x, y] {
            removed[z] = true;
            if go(g, removed, budget - 1) {
                return true;
            }
            removed[z] = false;
        }
        false
    }
    let mut removed = vec![false; g.n()];
    if !go(g, &mut removed, alpha) {
        return None;
    }
    let (x_set, q_set) = (0..g.n()).partition(|&x| removed[x]);
    Some(AlmostCliqueDecomposition { x_set, q_set })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Subsets,
    Partition,
    /// Subsets for small components with a large `X`, partition otherwise.
    Auto,
}

pub const SUBSET_ENGINE_MAX: usize = 18;

/// Minimum deletion set inside the component `X ∪ Q`.
pub fn solve_component(g: &Graph, decomp: &AlmostCliqueDecomposition) -> Result<EdgeSet> {
    solve_component_with(g, decomp, Engine::Auto)
}

pub fn solve_component_with(g: &Graph, decomp: &AlmostCliqueDecomposition, engine: Engine) -> Result<EdgeSet> {
    decomp.validate(g)?;
    let n = decomp.x_set.len() + decomp.q_set.len();
    let engine = match engine {
        Engine::Auto if decomp.x_set.len() > 8 && n <= 16 => Engine::Subsets,
        Engine::Auto => Engine::Partition,
        e => e,
    };
    match engine {
        Engine::Subsets => solve_by_subsets(g, &decomp.vertices()),
        _ => Ok(solve_by_partition(g, decomp)),
    }
}

/// Bottom-up dynamic program over subsets of `vs`. `vs` must be closed under
/// adjacency (a union of components).
pub fn solve_by_subsets(g: &Graph, vs: &[VertexId]) -> Result<EdgeSet> {
    let n = vs.len();
    if n > SUBSET_ENGINE_MAX {
        return Err(CoreError::GraphTooLarge { n, cap: SUBSET_ENGINE_MAX });
    }
    let adj: Vec<u32> = (0..n)
        .map(|i| (0..n).filter(|&j| g.has_edge(vs[i], vs[j])).fold(0u32, |m, j| m | 1 << j))
        .collect();
    let size = 1usize << n;
    let mut edges = vec![0u16; size];
    let mut clique = vec![false; size];
    clique[0] = true;
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        edges[mask] = edges[rest] + (adj[low] & rest as u32).count_ones() as u16;
        clique[mask] = clique[rest] && adj[low] & rest as u32 == rest as u32;
    }
    let mut best = vec![0u16; size];
    let mut pick = vec![0u32; size];
    for mask in 1..size {
        let low = mask.trailing_zeros();
        let free = (mask & !(1 << low)) as u32 & adj[low as usize];
        // all submasks of `free`, each joined with the low vertex
        let mut sub = free;
        loop {
            let t = sub | 1 << low;
            if clique[t as usize] {
                let value = edges[t as usize] + best[mask & !(t as usize)];
                if value >= best[mask] {
                    best[mask] = value;
                    pick[mask] = t;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    let mut cluster = vec![usize::MAX; n];
    let mut mask = size - 1;
    let mut id = 0;
    while mask != 0 {
        let t = pick[mask];
        for (i, c) in cluster.iter_mut().enumerate() {
            if t >> i & 1 == 1 {
                *c = id;
            }
        }
        id += 1;
        mask &= !(t as usize);
    }
    Ok(cut_edges(g, vs, &cluster))
}

/// Edges between `vs[i]` and `vs[j]` with `cluster[i] != cluster[j]`.
fn cut_edges(g: &Graph, vs: &[VertexId], cluster: &[usize]) -> EdgeSet {
    let mut out = EdgeSet::new();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if cluster[i] != cluster[j] && g.has_edge(vs[i], vs[j]) {
                out.insert(Edge::new(vs[i], vs[j]));
            }
        }
    }
    out
}

struct PartitionSearch<'a> {
    g: &'a Graph,
    xs: &'a [VertexId],
    qs: &'a [VertexId],
    groups: Vec<Vec<VertexId>>,
    best_kept: i64,
    /// group index per X vertex, group index (or `usize::MAX` for the leftover
    /// cluster) per Q vertex
    best_assignment: Option<(Vec<Vec<VertexId>>, Vec<usize>)>,
}

impl PartitionSearch<'_> {
    fn partitions(&mut self, i: usize) {
        if i == self.xs.len() {
            self.place_q();
            return;
        }
        let x = self.xs[i];
        for gi in 0..self.groups.len() {
            if self.groups[gi].iter().all(|&y| self.g.has_edge(x, y)) {
                self.groups[gi].push(x);
                self.partitions(i + 1);
                self.groups[gi].pop();
            }
        }
        self.groups.push(vec![x]);
        self.partitions(i + 1);
        self.groups.pop();
    }

    fn place_q(&mut self) {
        let x_kept: i64 = self.groups.iter().map(|gr| pairs(gr.len())).sum();
        let compat: Vec<Vec<usize>> = self
            .qs
            .iter()
            .map(|&q| {
                (0..self.groups.len()).filter(|&gi| self.groups[gi].iter().all(|&y| self.g.has_edge(q, y))).collect()
            })
            .collect();
        let mut caps = vec![0usize; self.groups.len()];
        for c in &compat {
            for &gi in c {
                caps[gi] += 1;
            }
        }
        let active: Vec<usize> = (0..self.groups.len()).filter(|&gi| caps[gi] > 0).collect();
        let mut sizes = vec![0usize; self.groups.len()];
        self.size_vectors(&active, 0, &caps, &compat, &mut sizes, x_kept);
    }

    fn size_vectors(
        &mut self,
        active: &[usize],
        pos: usize,
        caps: &[usize],
        compat: &[Vec<usize>],
        sizes: &mut Vec<usize>,
        x_kept: i64,
    ) {
        let used: usize = sizes.iter().sum();
        if pos == active.len() {
            let leftover = self.qs.len() - used;
            let kept = x_kept
                + active.iter().map(|&gi| (sizes[gi] * self.groups[gi].len()) as i64 + pairs(sizes[gi])).sum::<i64>()
                + pairs(leftover);
            if kept <= self.best_kept {
                return;
            }
            if let Some(assign) = match_sizes(compat, sizes) {
                self.best_kept = kept;
                self.best_assignment = Some((self.groups.clone(), assign));
            }
            return;
        }
        let gi = active[pos];
        for s in 0..=caps[gi].min(self.qs.len() - used) {
            sizes[gi] = s;
            self.size_vectors(active, pos + 1, caps, compat, sizes, x_kept);
        }
        sizes[gi] = 0;
    }
}

fn pairs(k: usize) -> i64 {
    (k * k.saturating_sub(1) / 2) as i64
}

/// Assigns Q vertices so that group `gi` receives exactly `sizes[gi]` of them,
/// each to a compatible group; the rest go to the leftover cluster.
fn match_sizes(compat: &[Vec<usize>], sizes: &[usize]) -> Option<Vec<usize>> {
    let slots: Vec<usize> = sizes.iter().enumerate().flat_map(|(gi, &s)| std::iter::repeat_n(gi, s)).collect();
    let mut slot_owner = vec![usize::MAX; slots.len()];

    fn augment(q: usize, compat: &[Vec<usize>], slots: &[usize], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for (si, &gi) in slots.iter().enumerate() {
            if seen[si] || !compat[q].contains(&gi) {
                continue;
            }
            seen[si] = true;
            if owner[si] == usize::MAX || augment(owner[si], compat, slots, owner, seen) {
                owner[si] = q;
                return true;
            }
        }
        false
    }

    let mut matched = 0;
    for q in 0..compat.len() {
        let mut seen = vec![false; slots.len()];
        if augment(q, compat, &slots, &mut slot_owner, &mut seen) {
            matched += 1;
            if matched == slots.len() {
                break;
            }
        }
    }
    if matched < slots.len() {
        return None;
    }
    let mut assign = vec![usize::MAX; compat.len()];
    for (si, &q) in slot_owner.iter().enumerate() {
        assign[q] = slots[si];
    }
    Some(assign)
}

/// Partition engine: exponential in `|X|`, polynomial in `|Q|` for a fixed
/// grouping of `X`.
pub fn solve_by_partition(g: &Graph, decomp: &AlmostCliqueDecomposition) -> EdgeSet {
    let mut search = PartitionSearch {
        g,
        xs: &decomp.x_set,
        qs: &decomp.q_set,
        groups: Vec::new(),
        best_kept: -1,
        best_assignment: None,
    };
    search.partitions(0);
    let (groups, assign) = search.best_assignment.expect("the all-singletons grouping is always feasible");
    let vs = decomp.vertices();
    let mut cluster = vec![usize::MAX; vs.len()];
    let index = |v: VertexId| vs.binary_search(&v).unwrap();
    for (gi, gr) in groups.iter().enumerate() {
        for &x in gr {
            cluster[index(x)] = gi;
        }
    }
    for (qi, &q) in decomp.q_set.iter().enumerate() {
        cluster[index(q)] = if assign[qi] == usize::MAX { groups.len() } else { assign[qi] };
    }
    cut_edges(g, &vs, &cluster)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_solution;

    #[test]
    fn decompose_examples() {
        let k5 = Graph::complete(5);
        assert_eq!(decompose(&k5, 0).unwrap().x_set, Vec::<usize>::new());
        let p3 = Graph::path(3);
        let d = decompose(&p3, 1).unwrap();
        assert_eq!(d.x_set.len(), 1);
        assert_ne!(d.x_set[0], 1);
        assert!(decompose(&Graph::cycle(5), 1).is_none());
        assert!(decompose(&Graph::cycle(5), 2).is_none());
        assert_eq!(decompose(&Graph::cycle(5), 3).unwrap().x_set.len(), 3);
    }

    #[test]
    fn solve_examples() {
        let k5 = Graph::complete(5);
        let d = AlmostCliqueDecomposition::new(vec![], (0..5).collect());
        assert!(solve_component(&k5, &d).unwrap().is_empty());

        let p3 = Graph::path(3);
        let d = AlmostCliqueDecomposition::new(vec![0], vec![1, 2]);
        for engine in [Engine::Subsets, Engine::Partition] {
            assert_eq!(solve_component_with(&p3, &d, engine).unwrap().len(), 1);
        }

        // K4 minus edge {0,1}: vertex 0 has degree 2
        let mut k4e = Graph::complete(4);
        k4e.remove_edge(0, 1);
        let d = AlmostCliqueDecomposition::new(vec![0], vec![1, 2, 3]);
        for engine in [Engine::Subsets, Engine::Partition] {
            let s = solve_component_with(&k4e, &d, engine).unwrap();
            assert_eq!(s.len(), 2);
            assert!(validate_solution(&k4e, &s, 2));
        }
    }

    #[test]
    fn invalid_decompositions_are_rejected() {
        let p3 = Graph::path(3);
        let not_clique = AlmostCliqueDecomposition::new(vec![1], vec![0, 2]);
        assert!(matches!(solve_component(&p3, &not_clique), Err(CoreError::InvalidDecomposition(_))));
        let leaking = AlmostCliqueDecomposition::new(vec![], vec![0, 1]);
        assert!(solve_component(&p3, &leaking).is_err());
        let overlap = AlmostCliqueDecomposition::new(vec![0, 1], vec![1, 2]);
        assert!(solve_component(&p3, &overlap).is_err());
    }

    #[test]
    fn leftover_q_cluster_is_used() {
        // Q = {0,1,2,3} clique, X = {4} adjacent to 0 and 1 only.
        // Best: keep the whole Q clique (6 edges), cut 4 off (2 deletions).
        let mut g = Graph::complete(5);
        g.remove_edge(4, 2);
        g.remove_edge(4, 3);
        let d = AlmostCliqueDecomposition::new(vec![4], vec![0, 1, 2, 3]);
        assert_eq!(solve_by_partition(&g, &d).len(), 2);
        assert_eq!(solve_by_subsets(&g, &d.vertices()).unwrap().len(), 2);
    }
}
