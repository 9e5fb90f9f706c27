//! Simple undirected graphs stored as fixed-width bit rows, plus detectors for
//! the obstructions every branching rule looks for (induced P3, induced C4,
//! long induced paths) and the `F_e` edge set.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub type VertexId = usize;

/// An unordered vertex pair, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
}

impl Edge {
    /// Panics on a self-loop.
    pub fn new(x: VertexId, y: VertexId) -> Self {
        assert_ne!(x, y, "self-loop {x}-{x}");
        if x < y {
            Edge { a: x, b: y }
        } else {
            Edge { a: y, b: x }
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.a == v {
            self.b
        } else {
            debug_assert_eq!(self.b, v);
            self.a
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(BTreeSet<Edge>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: &Edge) -> bool {
        self.0.remove(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.0.iter()
    }

    pub fn extend<I: IntoIterator<Item = Edge>>(&mut self, iter: I) {
        self.0.extend(iter)
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl IntoIterator for EdgeSet {
    type Item = Edge;
    type IntoIter = std::collections::btree_set::IntoIter<Edge>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a Edge;
    type IntoIter = std::collections::btree_set::Iter<'a, Edge>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Undirected simple graph on vertices `0..n`.
///
/// Each row is `words` 64-bit words; bit `j` of row `i` is set iff `{i,j}` is an
/// edge. Cloning copies one contiguous buffer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}-{}", e.a, e.b)?;
        }
        write!(f, "])")
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words], m: 0 }
    }

    /// Builds a graph from an edge list. Self-loops are rejected; duplicates are
    /// collapsed.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(CoreError::VertexOutOfRange { vertex: x.max(y), n });
            }
            if x == y {
                return Err(CoreError::SelfLoop(x));
            }
            g.add_edge(x, y);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for x in 0..n {
            for y in x + 1..n {
                g.add_edge(x, y);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for x in 1..n {
            g.add_edge(x - 1, x);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    fn row(&self, v: VertexId) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        self.bits[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    #[inline]
    pub fn has(&self, e: Edge) -> bool {
        self.has_edge(e.a, e.b)
    }

    /// Returns `true` if the edge was new.
    pub fn add_edge(&mut self, x: VertexId, y: VertexId) -> bool {
        assert_ne!(x, y);
        if self.has_edge(x, y) {
            return false;
        }
        self.bits[x * self.words + y / 64] |= 1 << (y % 64);
        self.bits[y * self.words + x / 64] |= 1 << (x % 64);
        self.m += 1;
        true
    }

    /// Returns `true` if the edge was present.
    pub fn remove_edge(&mut self, x: VertexId, y: VertexId) -> bool {
        if !self.has_edge(x, y) {
            return false;
        }
        self.bits[x * self.words + y / 64] &= !(1 << (y % 64));
        self.bits[y * self.words + x / 64] &= !(1 << (x % 64));
        self.m -= 1;
        true
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: VertexId) -> Neighbors<'_> {
        Neighbors::new(self.row(v))
    }

    /// Vertices adjacent to `x` but neither adjacent nor equal to `y`, in
    /// increasing order.
    pub fn private_neighbors(&self, x: VertexId, y: VertexId) -> Vec<VertexId> {
        let (rx, ry) = (self.row(x), self.row(y));
        let mut out = Vec::new();
        for (i, (&wx, &wy)) in rx.iter().zip(ry).enumerate() {
            let mut w = wx & !wy;
            if i == y / 64 {
                w &= !(1 << (y % 64));
            }
            while w != 0 {
                let t = w.trailing_zeros() as usize;
                out.push(i * 64 + t);
                w &= w - 1;
            }
        }
        out
    }

    pub fn common_neighbor_count(&self, x: VertexId, y: VertexId) -> usize {
        self.row(x).iter().zip(self.row(y)).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |x| self.neighbors(x).filter(move |&y| y > x).map(move |y| Edge { a: x, b: y }))
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().collect()
    }

    /// `G - F`. Every edge of `f` must be present.
    pub fn delete_edges(&self, f: &EdgeSet) -> Result<Graph> {
        let mut g = self.clone();
        for e in f {
            if e.b >= self.n || !g.remove_edge(e.a, e.b) {
                return Err(CoreError::MissingEdge(*e));
            }
        }
        Ok(g)
    }

    /// Removes every edge incident to a vertex of `vs`. Vertex ids are kept.
    pub fn isolate(&mut self, vs: &[VertexId]) {
        for &v in vs {
            let nbrs: Vec<_> = self.neighbors(v).collect();
            for u in nbrs {
                self.remove_edge(u, v);
            }
        }
    }

    /// The subgraph induced by `vs`, relabelled to `0..vs.len()` in the given order.
    pub fn induced(&self, vs: &[VertexId]) -> Graph {
        let mut g = Graph::new(vs.len());
        for (i, &x) in vs.iter().enumerate() {
            for (j, &y) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(x, y) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, vs: &[VertexId]) -> bool {
        vs.iter().enumerate().all(|(i, &x)| vs[i + 1..].iter().all(|&y| self.has_edge(x, y)))
    }

    /// Connected components; each block sorted, blocks ordered by least vertex.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                for y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn component_of(&self, v: VertexId) -> Vec<VertexId> {
        let mut seen = vec![false; self.n];
        seen[v] = true;
        let mut comp = vec![v];
        let mut head = 0;
        while head < comp.len() {
            let x = comp[head];
            head += 1;
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        comp
    }

    pub fn is_cluster_graph(&self) -> bool {
        self.connected_components().iter().all(|c| self.is_clique(c))
    }

    /// `F_e`: edges sharing exactly one endpoint with `e` whose two other
    /// endpoints are non-adjacent.
    pub fn f_set(&self, e: Edge) -> Result<EdgeSet> {
        if e.b >= self.n || !self.has(e) {
            return Err(CoreError::MissingEdge(e));
        }
        Ok(self.f_set_unchecked(e))
    }

    pub(crate) fn f_set_unchecked(&self, e: Edge) -> EdgeSet {
        let mut out = EdgeSet::new();
        for z in self.private_neighbors(e.a, e.b) {
            out.insert(Edge::new(e.a, z));
        }
        for z in self.private_neighbors(e.b, e.a) {
            out.insert(Edge::new(e.b, z));
        }
        out
    }

    /// `|F_e|` without materializing the set.
    pub fn f_size(&self, e: Edge) -> usize {
        let (ra, rb) = (self.row(e.a), self.row(e.b));
        let mut count = 0usize;
        for (&wa, &wb) in ra.iter().zip(rb) {
            count += (wa & !wb).count_ones() as usize + (wb & !wa).count_ones() as usize;
        }
        // a ∈ N(b) and b ∈ N(a) were each counted once above
        count - 2
    }

    /// Least induced P3 `(u, v, w)` with center `v` and `u < w`, ordered by
    /// `(v, u, w)`.
    pub fn find_induced_p3(&self) -> Option<(VertexId, VertexId, VertexId)> {
        for v in 0..self.n {
            let nb: Vec<_> = self.neighbors(v).collect();
            for (i, &u) in nb.iter().enumerate() {
                for &w in &nb[i + 1..] {
                    if !self.has_edge(u, w) {
                        return Some((u, v, w));
                    }
                }
            }
        }
        None
    }

    /// Least induced C4 `(v1, v2, v3, v4)` in lexicographic order of the
    /// sequence, with `v1` the smallest vertex of the cycle and `v2 < v4`.
    pub fn find_induced_c4(&self) -> Option<[VertexId; 4]> {
        for v1 in 0..self.n {
            let nb: Vec<_> = self.neighbors(v1).filter(|&x| x > v1).collect();
            for &v2 in &nb {
                for v3 in self.neighbors(v2) {
                    if v3 <= v1 || self.has_edge(v1, v3) {
                        continue;
                    }
                    for &v4 in &nb {
                        if v4 > v2 && self.has_edge(v3, v4) && !self.has_edge(v2, v4) {
                            return Some([v1, v2, v3, v4]);
                        }
                    }
                }
            }
        }
        None
    }

    /// First induced path on exactly `min_len` vertices in lexicographic DFS
    /// order.
    pub fn find_induced_long_path(&self, min_len: usize) -> Option<Vec<VertexId>> {
        self.find_induced_path_where(min_len, |_| true)
    }

    /// As [`Graph::find_induced_long_path`], but every interior vertex of the
    /// returned path must satisfy `interior_ok`.
    pub fn find_induced_path_where<F>(&self, len: usize, interior_ok: F) -> Option<Vec<VertexId>>
    where
        F: Fn(VertexId) -> bool,
    {
        assert!(len >= 2, "path length must be at least 2");
        let mut path = Vec::with_capacity(len);
        for s in 0..self.n {
            path.push(s);
            if self.extend_induced(&mut path, len, &interior_ok) {
                return Some(path);
            }
            path.pop();
        }
        None
    }

    fn extend_induced<F>(&self, path: &mut Vec<VertexId>, len: usize, interior_ok: &F) -> bool
    where
        F: Fn(VertexId) -> bool,
    {
        if path.len() == len {
            return true;
        }
        let last = *path.last().unwrap();
        if path.len() > 1 && !interior_ok(last) {
            return false;
        }
        let prefix = &path[..path.len() - 1];
        let candidates: Vec<_> = self
            .neighbors(last)
            .filter(|&y| !path.contains(&y) && prefix.iter().all(|&p| !self.has_edge(p, y)))
            .collect();
        for y in candidates {
            path.push(y);
            if self.extend_induced(path, len, interior_ok) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// Is `p` an induced path (consecutive vertices adjacent, no other
    /// adjacencies, no repeats)?
    pub fn is_induced_path(&self, p: &[VertexId]) -> bool {
        for (i, &x) in p.iter().enumerate() {
            if x >= self.n || p[..i].contains(&x) {
                return false;
            }
            for (j, &y) in p.iter().enumerate().skip(i + 1) {
                if self.has_edge(x, y) != (j == i + 1) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_induced_p3(&self, u: VertexId, v: VertexId, w: VertexId) -> bool {
        u < self.n && v < self.n && w < self.n && u != w && self.is_induced_path(&[u, v, w])
    }

    pub fn is_induced_c4(&self, c: [VertexId; 4]) -> bool {
        let [a, b, x, d] = c;
        if c.iter().any(|&v| v >= self.n) {
            return false;
        }
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| c[i] != c[j]));
        distinct
            && self.has_edge(a, b)
            && self.has_edge(b, x)
            && self.has_edge(x, d)
            && self.has_edge(d, a)
            && !self.has_edge(a, x)
            && !self.has_edge(b, d)
    }
}

/// Iterator over set bits of a row.
pub struct Neighbors<'a> {
    row: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Neighbors<'a> {
    fn new(row: &'a [u64]) -> Self {
        Neighbors { row, idx: 0, cur: row.first().copied().unwrap_or(0) }
    }
}

impl Iterator for Neighbors<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + t);
            }
            self.idx += 1;
            if self.idx >= self.row.len() {
                return None;
            }
            self.cur = self.row[self.idx];
        }
    }
}

/// True iff `s ⊆ E(g)`, `|s| ≤ k` and `g - s` is a cluster graph.
pub fn validate_solution(g: &Graph, s: &EdgeSet, k: usize) -> bool {
    if s.len() > k {
        return false;
    }
    match g.delete_edges(s) {
        Ok(h) => h.is_cluster_graph(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    fn es(edges: &[(usize, usize)]) -> EdgeSet {
        edges.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    #[test]
    fn delete_edges_examples() {
        let tri = Graph::complete(3);
        let h = tri.delete_edges(&es(&[(1, 2)])).unwrap();
        assert_eq!(h.edge_set(), es(&[(0, 1), (0, 2)]));
        assert_eq!(h.find_induced_p3(), Some((1, 0, 2)));

        assert_eq!(tri.delete_edges(&EdgeSet::new()).unwrap(), tri);

        let p3 = Graph::path(3);
        let empty = p3.delete_edges(&es(&[(0, 1), (1, 2)])).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(empty.n(), 3);
    }

    #[test]
    fn delete_missing_edge_is_an_error() {
        let p3 = Graph::path(3);
        assert!(matches!(p3.delete_edges(&es(&[(0, 2)])), Err(CoreError::MissingEdge(_))));
    }

    #[test]
    fn cluster_graph_examples() {
        assert!(g(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]).is_cluster_graph());
        assert!(!Graph::path(3).is_cluster_graph());
        assert!(!Graph::cycle(4).is_cluster_graph());
    }

    #[test]
    fn f_set_examples() {
        let p3 = Graph::path(3);
        assert_eq!(p3.f_set(Edge::new(0, 1)).unwrap(), es(&[(1, 2)]));
        // star with center 1, leaves 0, 2, 3
        let star = g(4, &[(1, 0), (1, 2), (1, 3)]);
        assert_eq!(star.f_set(Edge::new(0, 1)).unwrap(), es(&[(1, 2), (1, 3)]));
        let tri = Graph::complete(3);
        for e in tri.edges() {
            assert!(tri.f_set(e).unwrap().is_empty());
            assert_eq!(tri.f_size(e), 0);
        }
        assert!(p3.f_set(Edge::new(0, 2)).is_err());
    }

    #[test]
    fn p3_examples() {
        assert_eq!(Graph::path(3).find_induced_p3(), Some((0, 1, 2)));
        assert_eq!(Graph::complete(4).find_induced_p3(), None);
        // paw: triangle 0-1-2 with pendant 3 on 2
        let paw = g(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(paw.find_induced_p3(), Some((0, 2, 3)));
    }

    #[test]
    fn c4_examples() {
        assert_eq!(Graph::cycle(4).find_induced_c4(), Some([0, 1, 2, 3]));
        assert_eq!(Graph::complete(4).find_induced_c4(), None);
        assert_eq!(Graph::cycle(5).find_induced_c4(), None);
    }

    #[test]
    fn long_path_examples() {
        assert_eq!(Graph::path(7).find_induced_long_path(7), Some((0..7).collect()));
        assert_eq!(Graph::path(6).find_induced_long_path(7), None);
        assert_eq!(Graph::cycle(7).find_induced_long_path(7), None);
        assert_eq!(Graph::cycle(8).find_induced_long_path(7), Some((0..7).collect()));
    }

    #[test]
    fn guarded_path_search_respects_interior_predicate() {
        // P7 with an extra vertex hanging off vertex 3
        let mut h = Graph::path(7);
        let mut big = Graph::new(8);
        for e in h.edges() {
            big.add_edge(e.a, e.b);
        }
        big.add_edge(3, 7);
        assert!(big.find_induced_long_path(7).is_some());
        assert_eq!(big.find_induced_path_where(7, |v| big.degree(v) == 2), None);
        h.add_edge(0, 6);
        assert!(h.find_induced_long_path(7).is_none());
    }

    #[test]
    fn components_examples() {
        let k3k2 = g(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]);
        assert_eq!(k3k2.connected_components(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(Graph::new(3).connected_components(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(Graph::path(5).connected_components().len(), 1);
    }

    #[test]
    fn validate_examples() {
        let p3 = Graph::path(3);
        assert!(validate_solution(&p3, &es(&[(0, 1)]), 1));
        assert!(!validate_solution(&p3, &EdgeSet::new(), 5));
        let c4 = Graph::cycle(4);
        for e in c4.edges() {
            assert!(!validate_solution(&c4, &es(&[(e.a, e.b)]), 1));
        }
        assert!(validate_solution(&c4, &es(&[(0, 1), (2, 3)]), 2));
        assert!(!validate_solution(&c4, &es(&[(0, 1), (2, 3)]), 1));
    }

    #[test]
    fn wide_graphs_use_multiple_words() {
        let mut h = Graph::new(150);
        h.add_edge(3, 140);
        h.add_edge(140, 70);
        assert_eq!(h.neighbors(140).collect::<Vec<_>>(), vec![3, 70]);
        assert_eq!(h.find_induced_p3(), Some((3, 140, 70)));
        assert_eq!(h.f_size(Edge::new(3, 140)), 1);
        assert_eq!(h.private_neighbors(140, 3), vec![70]);
    }
}
