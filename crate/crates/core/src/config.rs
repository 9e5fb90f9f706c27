//! Mechanical case analysis of rule B4's frontier stage.
//!
//! A configuration graph `J` is a labelled template for `G[A ∪ B ∪ B_1 ∪ B_2]`
//! around the P3 `u', v', w'`: every `B` vertex sees one or two of `A`, every
//! `B_1` vertex sees some of `B` and none of `A`, and every `B_2` vertex is a
//! pendant stub on a `B_1` vertex. Every edge touching `A ∪ B` has
//! `|F_e| <= 3`.
//!
//! Enumeration runs in four stages (the `B` part with its internal edges, the
//! `B`-neighborhoods of the `B_1` vertices, the edges inside `B_1`, the stub
//! counts), pruning on `|F_e| <= 3` at each stage. Children are deduplicated
//! by canonical form within their parent. Two children of non-isomorphic
//! parents are never isomorphic, because an isomorphism of children restricts
//! to one of parents, so the output is free of duplicates overall.
//!
//! Vertex layout of an emitted graph: `0, 1, 2 = u', v', w'`, then `B`, then
//! `B_1`, then the stubs grouped by owner.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bnmath::{branching_number, compose_chain_vector, BranchingVector, ChainLeaf};
use crate::error::Result;
use crate::graph::{Edge, EdgeSet, Graph, VertexId};
use crate::structure::P3Context;

const U: u32 = 0b001;
const V: u32 = 0b010;
const W: u32 = 0b100;
/// A-neighborhoods a `B` vertex may have, in enumeration order.
const PATTERNS: [u32; 6] = [U, V, W, U | V, V | W, U | W];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationLimits {
    /// Cap on `|B_u|` and on `|B_w|`.
    pub max_side: usize,
    pub max_b1: usize,
    pub max_stubs: usize,
    /// Cap on `|F_e|` for edges touching `A ∪ B`.
    pub f_cap: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_side: 2, max_b1: 8, max_stubs: 2, f_cap: 3 }
    }
}

/// Adjacency over `A ∪ B ∪ B_1` as bitmasks, plus stub counts on `B_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Core {
    nb: usize,
    nb1: usize,
    adj: Vec<u32>,
    stubs: Vec<u8>,
}

impl Core {
    fn bare() -> Self {
        let mut c = Core { nb: 0, nb1: 0, adj: vec![0; 3], stubs: Vec::new() };
        c.link(0, 1);
        c.link(1, 2);
        c
    }

    fn n(&self) -> usize {
        3 + self.nb + self.nb1
    }

    fn link(&mut self, x: usize, y: usize) {
        self.adj[x] |= 1 << y;
        self.adj[y] |= 1 << x;
    }

    fn b_range(&self) -> std::ops::Range<usize> {
        3..3 + self.nb
    }

    fn b1_range(&self) -> std::ops::Range<usize> {
        3 + self.nb..self.n()
    }

    fn stub_count(&self, x: usize) -> u32 {
        if x >= 3 + self.nb {
            self.stubs.get(x - 3 - self.nb).copied().unwrap_or(0) as u32
        } else {
            0
        }
    }

    /// `|F_(x,y)|` with stubs included.
    fn f(&self, x: usize, y: usize) -> u32 {
        let (nx, ny) = (self.adj[x], self.adj[y]);
        (nx & !ny & !(1 << y)).count_ones()
            + (ny & !nx & !(1 << x)).count_ones()
            + self.stub_count(x)
            + self.stub_count(y)
    }

    /// Largest `|F_e|` over edges with both endpoints among the first `upto` vertices.
    fn max_f_within(&self, upto: usize) -> u32 {
        let mut best = 0;
        for x in 0..upto {
            let mut nb = self.adj[x] & ((1 << upto) - 1) & !((1 << (x + 1)) - 1);
            while nb != 0 {
                let y = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                best = best.max(self.f(x, y));
            }
        }
        best
    }

    /// Vertex colors for canonical labelling: `u'`, `v'`, `w'` individually,
    /// `B`, and `B_1` split by stub count.
    fn colors(&self) -> Vec<u8> {
        (0..self.n())
            .map(|x| match x {
                0..=2 => x as u8,
                _ if x < 3 + self.nb => 3,
                _ => 4 + self.stub_count(x) as u8,
            })
            .collect()
    }

    fn relabel(&self, order: &[usize]) -> Core {
        let mut pos = vec![0; order.len()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        let adj = order
            .iter()
            .map(|&x| {
                let mut m = 0u32;
                for y in 0..order.len() {
                    if self.adj[x] >> y & 1 == 1 {
                        m |= 1 << pos[y];
                    }
                }
                m
            })
            .collect();
        let stubs = order[3 + self.nb..].iter().map(|&x| self.stub_count(x) as u8).collect();
        Core { nb: self.nb, nb1: self.nb1, adj, stubs }
    }

    /// Canonical representative under isomorphisms that fix `v'`, map `{u', w'}`
    /// to itself, and preserve the `B`/`B_1` split and stub counts.
    fn canonical(&self) -> Core {
        let colors = self.colors();
        let (code, order) = canonical_order(&self.adj, &colors);
        let mut swap: Vec<usize> = (0..self.n()).collect();
        swap.swap(0, 2);
        let swapped = self.relabel(&swap);
        let (code2, order2) = canonical_order(&swapped.adj, &colors);
        if code2 < code {
            swapped.relabel(&order2)
        } else {
            self.relabel(&order)
        }
    }

    fn to_graph(&self) -> Graph {
        let total: usize = self.stubs.iter().map(|&s| s as usize).sum();
        let mut g = Graph::new(self.n() + total);
        for x in 0..self.n() {
            for y in x + 1..self.n() {
                if self.adj[x] >> y & 1 == 1 {
                    g.add_edge(x, y);
                }
            }
        }
        let mut next = self.n();
        for (i, &s) in self.stubs.iter().enumerate() {
            for _ in 0..s {
                g.add_edge(3 + self.nb + i, next);
                next += 1;
            }
        }
        g
    }
}

/// Refines an ordered partition until every cell is equitable with respect to
/// every other. Cells split in order of the neighbor-count signature, which is
/// invariant under relabelling.
fn refine(adj: &[u32], cells: &mut Vec<Vec<usize>>) {
    loop {
        let masks: Vec<u32> = cells.iter().map(|c| c.iter().fold(0u32, |m, &x| m | 1 << x)).collect();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> =
                cell.iter().map(|&x| (masks.iter().map(|m| (adj[x] & m).count_ones()).collect(), x)).collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, x)| *x).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return;
        }
        *cells = next;
    }
}

fn code_of(adj: &[u32], order: &[usize]) -> Vec<u32> {
    let mut pos = vec![0; order.len()];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    order.iter().map(|&x| (0..order.len()).filter(|&y| adj[x] >> y & 1 == 1).fold(0u32, |m, y| m | 1 << pos[y])).collect()
}

/// Individualization-refinement: the least adjacency code over all leaves of
/// the search tree, with the ordering that produced it.
fn canonical_order(adj: &[u32], colors: &[u8]) -> (Vec<u32>, Vec<usize>) {
    fn search(adj: &[u32], cells: Vec<Vec<usize>>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            let code = code_of(adj, &order);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, order));
            }
            return;
        };
        for &x in &cells[target] {
            let mut split = cells.clone();
            let rest: Vec<usize> = split[target].iter().copied().filter(|&y| y != x).collect();
            split[target] = vec![x];
            split.insert(target + 1, rest);
            refine(adj, &mut split);
            search(adj, split, best);
        }
    }
    let max = colors.iter().copied().max().unwrap_or(0);
    let mut cells: Vec<Vec<usize>> = (0..=max)
        .map(|c| (0..colors.len()).filter(|&x| colors[x] == c).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .collect();
    refine(adj, &mut cells);
    let mut best = None;
    search(adj, cells, &mut best);
    best.expect("at least one leaf")
}

/// An emitted configuration graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigurationGraph {
    #[serde(skip)]
    pub graph: Graph,
    pub b: Vec<VertexId>,
    pub b1: Vec<VertexId>,
    /// Stub count per `B_1` vertex, in `b1` order.
    pub stubs: Vec<usize>,
    /// Deterministic textual form of the canonical labelling.
    pub encoding: String,
}

impl ConfigurationGraph {
    fn from_core(core: &Core) -> Self {
        let graph = core.to_graph();
        let edges: Vec<String> = graph.edges().filter(|e| e.b < core.n()).map(|e| format!("{}-{}", e.a, e.b)).collect();
        let stubs: Vec<usize> = core.stubs.iter().map(|&s| s as usize).collect();
        let encoding = format!("b={};b1={};stubs={:?};edges={}", core.nb, core.nb1, stubs, edges.join(","));
        ConfigurationGraph { graph, b: core.b_range().collect(), b1: core.b1_range().collect(), stubs, encoding }
    }

    pub fn p3(&self) -> (VertexId, VertexId, VertexId) {
        (0, 1, 2)
    }

    /// Every invariant, recomputed through [`P3Context`] on the graph alone.
    pub fn validate(&self, limits: &EnumerationLimits) -> std::result::Result<(), String> {
        let g = &self.graph;
        let ctx = P3Context::build(g, self.p3(), &EdgeSet::new()).map_err(|e| e.to_string())?;
        if !ctx.c.is_empty() || !ctx.d.is_empty() {
            return Err("a vertex sees all of A".into());
        }
        if ctx.layer(0) != self.b.as_slice() || ctx.layer(1) != self.b1.as_slice() {
            return Err("B or B_1 differs from the recomputed layers".into());
        }
        let stub_ids: Vec<VertexId> = (3 + self.b.len() + self.b1.len()..g.n()).collect();
        if ctx.layer(2) != stub_ids.as_slice() || ctx.layers.len() > 3 {
            return Err("stubs are not exactly the third layer".into());
        }
        if stub_ids.iter().any(|&s| g.degree(s) != 1) {
            return Err("a stub has degree other than 1".into());
        }
        if ctx.b_u.len() > limits.max_side || ctx.b_w.len() > limits.max_side {
            return Err("a side of B is too large".into());
        }
        if self.b1.len() > limits.max_b1 || self.stubs.iter().any(|&s| s > limits.max_stubs) {
            return Err("B_1 or a stub count exceeds its cap".into());
        }
        let touching = 3 + self.b.len();
        if let Some(e) = g.edges().find(|e| e.a < touching && g.f_size(*e) > limits.f_cap) {
            return Err(format!("|F_e| = {} for {e}", g.f_size(e)));
        }
        Ok(())
    }
}

/// Stage one: `B` patterns with `|B_u|, |B_w| <= max_side` and the edges inside
/// `B`, kept when no edge of `A ∪ B` already exceeds the cap.
fn b_parts(limits: &EnumerationLimits) -> Vec<Core> {
    fn sides(pats: &[u32]) -> (usize, usize) {
        let on = |p: u32, m: u32| p & m != 0;
        let bu = pats.iter().filter(|&&p| on(p, U) != on(p, V)).count();
        let bw = pats.iter().filter(|&&p| on(p, W) != on(p, V)).count();
        (bu, bw)
    }
    fn multisets(from: usize, cur: &mut Vec<u32>, limits: &EnumerationLimits, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for i in from..PATTERNS.len() {
            cur.push(PATTERNS[i]);
            let (bu, bw) = sides(cur);
            if bu <= limits.max_side && bw <= limits.max_side {
                multisets(i, cur, limits, out);
            }
            cur.pop();
        }
    }
    let mut pattern_sets = Vec::new();
    multisets(0, &mut Vec::new(), limits, &mut pattern_sets);

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for pats in pattern_sets {
        let nb = pats.len();
        let mut base = Core::bare();
        base.nb = nb;
        base.adj.resize(3 + nb, 0);
        for (i, &p) in pats.iter().enumerate() {
            for a in 0..3 {
                if p >> a & 1 == 1 {
                    base.link(a, 3 + i);
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|i| (i + 1..nb).map(move |j| (3 + i, 3 + j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let mut c = base.clone();
            for (t, &(x, y)) in pairs.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    c.link(x, y);
                }
            }
            if c.max_f_within(c.n()) as usize > limits.f_cap {
                continue;
            }
            let canon = c.canonical();
            if seen.insert(canon.clone()) {
                out.push(canon);
            }
        }
    }
    out
}

/// Stage two: the `B`-neighborhoods of the `B_1` vertices, as a multiset of
/// non-empty subsets of `B`. Adding a `B_1` vertex never lowers `|F_e|` for an
/// edge inside `A ∪ B`, so the cap prunes every extension. Edges between `B`
/// and `B_1` are left to stage three, where edges inside `B_1` can still
/// lower their `|F_e|`.
fn attach_b1(parent: &Core, limits: &EnumerationLimits) -> Vec<Core> {
    fn go(cur: &Core, from: u32, limits: &EnumerationLimits, seen: &mut BTreeSet<Core>, out: &mut Vec<Core>) {
        let canon = cur.canonical();
        if seen.insert(canon.clone()) {
            out.push(canon);
        }
        if cur.nb1 == limits.max_b1 {
            return;
        }
        let touching = 3 + cur.nb;
        for subset in from..1u32 << cur.nb {
            let mut next = cur.clone();
            let x = next.n();
            next.adj.push(0);
            next.nb1 += 1;
            for i in 0..cur.nb {
                if subset >> i & 1 == 1 {
                    next.link(3 + i, x);
                }
            }
            if next.max_f_within(touching) as usize <= limits.f_cap {
                go(&next, subset, limits, seen, out);
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    go(parent, 1, limits, &mut seen, &mut out);
    out
}

/// Stage three: edges inside `B_1`. Only `B`–`B_1` edges can change `|F_e|`
/// here; a partial assignment is cut when even the most favourable completion
/// exceeds the cap.
fn b1_edges(parent: &Core, limits: &EnumerationLimits) -> Vec<Core> {
    let b1: Vec<usize> = parent.b1_range().collect();
    let pairs: Vec<(usize, usize)> = (0..b1.len()).flat_map(|i| (i + 1..b1.len()).map(move |j| (i, j))).collect();
    let bb1: Vec<(usize, usize)> = parent
        .b_range()
        .flat_map(|b| parent.b1_range().filter(move |&c| parent.adj[b] >> c & 1 == 1).map(move |c| (b, c)))
        .collect();

    // `open[x]`: B_1 vertices whose pair with x is still undecided.
    fn lower_bound_ok(core: &Core, open: &[u32], bb1: &[(usize, usize)], cap: u32) -> bool {
        bb1.iter().all(|&(b, c)| {
            let (nb, nc) = (core.adj[b], core.adj[c]);
            // b side: undecided pairs (c, y) are assumed present
            let b_side = (nb & !nc & !open[c] & !(1 << c)).count_ones();
            // c side: undecided pairs are absent already
            let c_side = (nc & !nb & !(1 << b)).count_ones();
            b_side + c_side <= cap
        })
    }
    fn go(
        core: &mut Core,
        open: &mut Vec<u32>,
        t: usize,
        pairs: &[(usize, usize)],
        b1: &[usize],
        bb1: &[(usize, usize)],
        cap: u32,
        seen: &mut BTreeSet<Core>,
        out: &mut Vec<Core>,
    ) {
        if t == pairs.len() {
            let canon = core.canonical();
            if seen.insert(canon.clone()) {
                out.push(canon);
            }
            return;
        }
        let (x, y) = (b1[pairs[t].0], b1[pairs[t].1]);
        open[x] &= !(1 << y);
        open[y] &= !(1 << x);
        for present in [false, true] {
            let saved = (core.adj[x], core.adj[y]);
            if present {
                core.link(x, y);
            }
            if lower_bound_ok(core, open, bb1, cap) {
                go(core, open, t + 1, pairs, b1, bb1, cap, seen, out);
            }
            core.adj[x] = saved.0;
            core.adj[y] = saved.1;
        }
        open[x] |= 1 << y;
        open[y] |= 1 << x;
    }

    let mut open = vec![0u32; parent.n()];
    for &(i, j) in &pairs {
        open[b1[i]] |= 1 << b1[j];
        open[b1[j]] |= 1 << b1[i];
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut core = parent.clone();
    if lower_bound_ok(&core, &open, &bb1, limits.f_cap as u32) {
        go(&mut core, &mut open, 0, &pairs, &b1, &bb1, limits.f_cap as u32, &mut seen, &mut out);
    }
    out
}

/// Stage four: pendant stubs. A stub on `c` adds one to `|F_(b,c)|` for every
/// `B` neighbor `b`, so `c` takes at most `cap - max_b |F_(b,c)|` of them.
fn attach_stubs(parent: &Core, limits: &EnumerationLimits) -> Vec<Core> {
    let caps: Vec<u8> = parent
        .b1_range()
        .map(|c| {
            let worst = parent.b_range().filter(|&b| parent.adj[b] >> c & 1 == 1).map(|b| parent.f(b, c)).max().unwrap_or(0);
            (limits.f_cap as u32).saturating_sub(worst).min(limits.max_stubs as u32) as u8
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stubs = vec![0u8; parent.nb1];
    loop {
        let mut c = parent.clone();
        c.stubs = stubs.clone();
        let canon = c.canonical();
        if seen.insert(canon.clone()) {
            out.push(canon);
        }
        // odometer over 0..=caps[i]
        let mut i = 0;
        while i < stubs.len() && stubs[i] == caps[i] {
            stubs[i] = 0;
            i += 1;
        }
        if i == stubs.len() {
            break;
        }
        stubs[i] += 1;
    }
    out
}

/// The stage-two parents in deterministic order, grouped by their stage-one
/// stratum index.
fn strata(limits: &EnumerationLimits) -> (Vec<Core>, Vec<(usize, Core)>) {
    let parts = b_parts(limits);
    let with_b1: Vec<Vec<Core>> = parts.par_iter().map(|p| attach_b1(p, limits)).collect();
    let parents = with_b1.into_iter().enumerate().flat_map(|(i, cs)| cs.into_iter().map(move |c| (i, c))).collect();
    (parts, parents)
}

fn expand(parent: &Core, limits: &EnumerationLimits) -> Vec<Core> {
    b1_edges(parent, limits).iter().flat_map(|c| attach_stubs(c, limits)).collect()
}

/// Every configuration graph within `limits`, in deterministic order.
pub fn enumerate_configurations(limits: &EnumerationLimits) -> Vec<ConfigurationGraph> {
    let (_, parents) = strata(limits);
    let chunks: Vec<Vec<ConfigurationGraph>> = parents
        .par_iter()
        .map(|(_, p)| expand(p, limits).iter().map(ConfigurationGraph::from_core).collect())
        .collect();
    chunks.into_iter().flatten().collect()
}

/// A first-stage outcome: the graph after the frontier splits at level 0, and
/// what those splits cost.
#[derive(Clone, Debug)]
pub struct ClosureLeaf {
    pub graph: Graph,
    pub cost: u32,
    pub chain: Vec<bool>,
}

/// Splits on the least `E_0` edge with `|F_e| >= 3` into delete-`{e}` (cost 1)
/// and delete-`F_e` (cost `|F_e|`) until `j > 0`, rebuilding the layers after
/// every deletion. `chain` records `true` for single deletions.
pub fn first_stage_closure(g: &Graph, p3: (VertexId, VertexId, VertexId)) -> Result<Vec<ClosureLeaf>> {
    let mut out = Vec::new();
    let mut stack = vec![ClosureLeaf { graph: g.clone(), cost: 0, chain: Vec::new() }];
    while let Some(cur) = stack.pop() {
        let ctx = P3Context::build(&cur.graph, p3, &EdgeSet::new())?;
        if ctx.j != Some(0) {
            out.push(cur);
            continue;
        }
        let e = ctx.branching_edge(&cur.graph).expect("j = 0 has a branching edge");
        let f = cur.graph.f_set(e)?;
        let mut single = EdgeSet::new();
        single.insert(e);
        let family = ClosureLeaf {
            graph: cur.graph.delete_edges(&f)?,
            cost: cur.cost + f.len() as u32,
            chain: [cur.chain.as_slice(), &[false]].concat(),
        };
        let one = ClosureLeaf {
            graph: cur.graph.delete_edges(&single)?,
            cost: cur.cost + 1,
            chain: [cur.chain.as_slice(), &[true]].concat(),
        };
        stack.push(family);
        stack.push(one);
    }
    Ok(out)
}

/// Largest set of edge-disjoint induced P3s whose two edges each have an
/// endpoint in `A = {0, 1, 2}`; at least 1 since `0, 1, 2` itself qualifies.
/// Later stages of the rule never delete such edges, so each packed P3 costs
/// the exact stage at least one deletion.
pub fn s_lower_bound(g: &Graph) -> u32 {
    let in_a = |x: VertexId| x < 3;
    let mut p3s: Vec<(Edge, Edge)> = Vec::new();
    for center in 0..g.n() {
        let nbrs: Vec<VertexId> = g.neighbors(center).filter(|&y| in_a(center) || in_a(y)).collect();
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                if !g.has_edge(x, y) {
                    p3s.push((Edge::new(x, center), Edge::new(center, y)));
                }
            }
        }
    }
    fn pack(p3s: &[(Edge, Edge)], used: &mut Vec<Edge>) -> u32 {
        let Some((&(e1, e2), rest)) = p3s.split_first() else { return 0 };
        let skip = pack(rest, used);
        if used.contains(&e1) || used.contains(&e2) {
            return skip;
        }
        used.push(e1);
        used.push(e2);
        let take = 1 + pack(rest, used);
        used.truncate(used.len() - 2);
        skip.max(take)
    }
    pack(&p3s, &mut Vec::new()).max(1)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigAnalysis {
    pub leaves: Vec<ChainLeaf>,
    pub vector: BranchingVector,
    pub branching_number: f64,
}

/// Closure, per-leaf `(cost, |E_1|, s)` and the composed vector for one graph
/// around the P3 `0, 1, 2`.
pub fn analyze_graph(g: &Graph) -> Result<ConfigAnalysis> {
    let p3 = (0, 1, 2);
    let mut leaves = Vec::new();
    for leaf in first_stage_closure(g, p3)? {
        let ctx = P3Context::build(&leaf.graph, p3, &EdgeSet::new())?;
        debug_assert_ne!(ctx.j, Some(0));
        leaves.push(ChainLeaf {
            cost: leaf.cost,
            frontier: ctx.frontier(1).len() as u32,
            s_bound: s_lower_bound(&leaf.graph),
        });
    }
    let vector = compose_chain_vector(&leaves);
    let bn = branching_number(&vector);
    Ok(ConfigAnalysis { leaves, vector, branching_number: bn })
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub encoding: String,
    pub vector: String,
    pub branching_number: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Coverage {
    pub complete: bool,
    pub strata_total: usize,
    pub strata_covered: usize,
    /// Canonical encodings of the `B` parts whose expansion did not finish.
    pub uncovered_strata: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub threshold: f64,
    pub limits: EnumerationLimits,
    pub configs_checked: u64,
    pub max_branching_number: f64,
    pub argmax_config: String,
    pub argmax_vector: String,
    pub violations: Vec<Violation>,
    pub coverage: Coverage,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Default)]
struct Partial {
    checked: u64,
    best: Option<(f64, String, String)>,
    violations: Vec<Violation>,
}

impl Partial {
    fn merge(mut self, o: Partial) -> Partial {
        self.checked += o.checked;
        if let Some(b) = o.best {
            if self.best.as_ref().is_none_or(|a| b.0 > a.0) {
                self.best = Some(b);
            }
        }
        self.violations.extend(o.violations);
        self
    }
}

/// Runs the closure analysis on every configuration and reports the largest
/// branching number. Stage-two parents are processed in parallel; once
/// `time_cap` passes, the remaining ones are skipped and their strata are
/// named in the coverage report.
pub fn analyze_all(threshold: f64, limits: &EnumerationLimits, time_cap: Option<Duration>) -> Result<AnalysisReport> {
    let start = Instant::now();
    let deadline = time_cap.map(|t| start + t);
    let (parts, parents) = strata(limits);
    let results: Vec<Option<Result<Partial>>> = parents
        .par_iter()
        .map(|(_, parent)| {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return None;
            }
            let run = || -> Result<Partial> {
                let mut p = Partial::default();
                for core in expand(parent, limits) {
                    let cfg = ConfigurationGraph::from_core(&core);
                    let a = analyze_graph(&cfg.graph)?;
                    p.checked += 1;
                    let x = a.branching_number;
                    if x >= threshold {
                        p.violations.push(Violation {
                            encoding: cfg.encoding.clone(),
                            vector: a.vector.to_string(),
                            branching_number: x,
                        });
                    }
                    if p.best.as_ref().is_none_or(|b| x > b.0) {
                        p.best = Some((x, cfg.encoding, a.vector.to_string()));
                    }
                }
                Ok(p)
            };
            Some(run())
        })
        .collect();

    let mut total = Partial::default();
    let mut skipped = BTreeSet::new();
    for ((stratum, _), r) in parents.iter().zip(results) {
        match r {
            Some(r) => total = total.merge(r?),
            None => {
                skipped.insert(*stratum);
            }
        }
    }
    let (max, argmax, argvec) = total.best.unwrap_or((0.0, String::new(), String::new()));
    Ok(AnalysisReport {
        threshold,
        limits: *limits,
        configs_checked: total.checked,
        max_branching_number: max,
        argmax_config: argmax,
        argmax_vector: argvec,
        violations: total.violations,
        coverage: Coverage {
            complete: skipped.is_empty(),
            strata_total: parts.len(),
            strata_covered: parts.len() - skipped.len(),
            uncovered_strata: skipped.iter().map(|&i| ConfigurationGraph::from_core(&parts[i]).encoding).collect(),
        },
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_p3_is_one_config_with_vector_one() {
        let bare = ConfigurationGraph::from_core(&Core::bare());
        let a = analyze_graph(&bare.graph).unwrap();
        assert_eq!(a.vector.entries(), vec![1]);
        assert_eq!(a.branching_number, 1.0);
    }

    #[test]
    fn canonical_form_respects_the_swap() {
        // b on u' versus b on w'
        let mut x = Core::bare();
        x.nb = 1;
        x.adj.push(0);
        x.link(0, 3);
        let mut y = Core::bare();
        y.nb = 1;
        y.adj.push(0);
        y.link(2, 3);
        assert_eq!(x.canonical(), y.canonical());
        // b on u' versus b on v' differ
        let mut z = Core::bare();
        z.nb = 1;
        z.adj.push(0);
        z.link(1, 3);
        assert_ne!(x.canonical(), z.canonical());
    }

    #[test]
    fn s_bound_examples() {
        let bare = Graph::path(3);
        assert_eq!(s_lower_bound(&bare), 1);
        // b1 on u only, b2 on w only
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (2, 4)]).unwrap();
        assert_eq!(s_lower_bound(&g), 2);
    }

    #[test]
    fn closure_of_bare_p3_is_a_single_free_leaf() {
        let leaves = first_stage_closure(&Graph::path(3), (0, 1, 2)).unwrap();
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].cost, 0);
    }
}
