//! The layered decomposition around an induced P3 `u, v, w`.
//!
//! `A` is the path itself, `B` the vertices with one or two neighbors in `A`,
//! `C` those adjacent to all of `A`, `D` the outside neighbors of `C`, and
//! `B_1, B_2, ...` the breadth-first layers grown from `B` through the
//! remaining vertices. `E_i` holds the edges between layer `i` and `i + 1`
//! (layer 0 is `B`), and `j` is the first level whose frontier has an edge
//! with `|F_e| >= 3`.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Outside,
    A,
    C,
    D,
    /// `B` is level 0.
    Level(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct P3Context {
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
    pub b: Vec<VertexId>,
    pub b_u: Vec<VertexId>,
    pub b_w: Vec<VertexId>,
    pub c: Vec<VertexId>,
    pub d: Vec<VertexId>,
    /// `layers[0]` is `B`, `layers[i]` is `B_i`; the last layer is non-empty.
    pub layers: Vec<Vec<VertexId>>,
    /// `frontiers[i]` is `E_i`, sorted. `E_1` never contains a marked edge.
    pub frontiers: Vec<Vec<Edge>>,
    /// `None` encodes `j = ∞`.
    pub j: Option<usize>,
    pub marks: EdgeSet,
    #[serde(skip)]
    role: Vec<Role>,
}

impl P3Context {
    /// Computes the decomposition of `g` around `(u, v, w)`; `marks` are
    /// excluded from `E_1`.
    pub fn build(g: &Graph, (u, v, w): (VertexId, VertexId, VertexId), marks: &EdgeSet) -> Result<Self> {
        if !g.is_induced_p3(u, v, w) {
            return Err(CoreError::NotInducedP3(u, v, w));
        }
        if let Some(e) = marks.iter().find(|e| e.b >= g.n() || !g.has(**e)) {
            return Err(CoreError::MissingEdge(*e));
        }
        let n = g.n();
        let mut role = vec![Role::Outside; n];
        for x in [u, v, w] {
            role[x] = Role::A;
        }
        let (mut b, mut b_u, mut b_w, mut c) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for x in 0..n {
            if role[x] == Role::A {
                continue;
            }
            let (hu, hv, hw) = (g.has_edge(x, u), g.has_edge(x, v), g.has_edge(x, w));
            match hu as usize + hv as usize + hw as usize {
                0 => {}
                3 => {
                    role[x] = Role::C;
                    c.push(x);
                }
                _ => {
                    role[x] = Role::Level(0);
                    b.push(x);
                    if hu != hv {
                        b_u.push(x);
                    }
                    if hw != hv {
                        b_w.push(x);
                    }
                }
            }
        }
        let mut d = Vec::new();
        for x in 0..n {
            if role[x] == Role::Outside && g.neighbors(x).any(|y| role[y] == Role::C) {
                d.push(x);
            }
        }
        for &x in &d {
            role[x] = Role::D;
        }

        let mut layers = vec![b.clone()];
        loop {
            let level = layers.len();
            let mut next = Vec::new();
            for &x in layers.last().unwrap() {
                for y in g.neighbors(x) {
                    if role[y] == Role::Outside {
                        role[y] = Role::Level(level);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_unstable();
            layers.push(next);
        }

        let mut frontiers = Vec::with_capacity(layers.len());
        for (i, layer) in layers.iter().enumerate() {
            let mut f = Vec::new();
            for &x in layer {
                for y in g.neighbors(x) {
                    if role[y] == Role::Level(i + 1) {
                        let e = Edge::new(x, y);
                        if i != 1 || !marks.contains(&e) {
                            f.push(e);
                        }
                    }
                }
            }
            f.sort_unstable();
            frontiers.push(f);
        }
        // the last layer has no successor
        if frontiers.last().is_some_and(|f| f.is_empty()) {
            frontiers.pop();
        }
        if layers.len() == 1 && layers[0].is_empty() {
            layers.clear();
        }

        let j = frontiers.iter().position(|f| f.iter().any(|&e| g.f_size(e) >= 3));

        Ok(P3Context {
            u,
            v,
            w,
            b,
            b_u,
            b_w,
            c,
            d,
            layers,
            frontiers,
            j,
            marks: marks.clone(),
            role,
        })
    }

    pub fn a(&self) -> [VertexId; 3] {
        [self.u, self.v, self.w]
    }

    /// `B_i` (with `B_0 = B`); empty beyond the last layer.
    pub fn layer(&self, i: usize) -> &[VertexId] {
        self.layers.get(i).map_or(&[], |l| l.as_slice())
    }

    /// `E_i`; empty beyond the last frontier.
    pub fn frontier(&self, i: usize) -> &[Edge] {
        self.frontiers.get(i).map_or(&[], |f| f.as_slice())
    }

    /// Layer index of `x` if `x ∈ B_i` for some `i ≥ 0`.
    pub fn level(&self, x: VertexId) -> Option<usize> {
        match self.role.get(x) {
            Some(Role::Level(i)) => Some(*i),
            _ => None,
        }
    }

    pub fn in_a(&self, x: VertexId) -> bool {
        self.role.get(x) == Some(&Role::A)
    }

    pub fn in_c(&self, x: VertexId) -> bool {
        self.role.get(x) == Some(&Role::C)
    }

    pub fn in_d(&self, x: VertexId) -> bool {
        self.role.get(x) == Some(&Role::D)
    }

    pub fn j_at_least(&self, bound: usize) -> bool {
        self.j.is_none_or(|j| j >= bound)
    }

    /// Neighbors of `x ∈ B_i` lying in `B_{i+1}`.
    pub fn next_neighbors(&self, g: &Graph, x: VertexId) -> Vec<VertexId> {
        match self.level(x) {
            Some(i) => g.neighbors(x).filter(|&y| self.level(y) == Some(i + 1)).collect(),
            None => Vec::new(),
        }
    }

    /// Neighbors of `x ∈ B_i` lying in `B_i`.
    pub fn same_neighbors(&self, g: &Graph, x: VertexId) -> Vec<VertexId> {
        match self.level(x) {
            Some(i) => g.neighbors(x).filter(|&y| self.level(y) == Some(i)).collect(),
            None => Vec::new(),
        }
    }

    /// Neighbors of `x ∈ B_i` lying in `B_{i-1}`, where `B_{-1} = A`.
    pub fn prev_neighbors(&self, g: &Graph, x: VertexId) -> Vec<VertexId> {
        match self.level(x) {
            Some(0) => g.neighbors(x).filter(|&y| self.in_a(y)).collect(),
            Some(i) => g.neighbors(x).filter(|&y| self.level(y) == Some(i - 1)).collect(),
            None => Vec::new(),
        }
    }

    /// Least edge of `E_j` with `|F_e| >= 3`, if `j` is finite.
    pub fn branching_edge(&self, g: &Graph) -> Option<Edge> {
        let j = self.j?;
        self.frontier(j).iter().copied().find(|&e| g.f_size(e) >= 3)
    }

    /// `A ∪ B ∪ C ∪ D ∪ B_1 ∪ B_2 ∪ ...`, sorted.
    pub fn closure(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = (0..self.role.len()).filter(|&x| self.role[x] != Role::Outside).collect();
        out.sort_unstable();
        out
    }
}

/// `A ∪ B ∪ C ∪ D ∪ ⋃ B_i`. When no edge of `g` has `|F_e| >= 4` and `C` is a
/// clique this is exactly the connected component of `v`, which is checked in
/// debug builds.
pub fn component_closure(ctx: &P3Context, g: &Graph) -> Vec<VertexId> {
    let closure = ctx.closure();
    if cfg!(debug_assertions) && g.is_clique(&ctx.c) && !g.edges().any(|e| g.f_size(e) >= 4) {
        debug_assert_eq!(closure, g.component_of(ctx.v), "closure differs from the component of v");
    }
    closure
}

/// Which standing assumptions hold for the graph being audited. Each check in
/// [`lemma_audit`] runs only when its hypotheses are set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditHypotheses {
    /// No edge has `|F_e| >= 4`.
    pub b2_inapplicable: bool,
    pub no_induced_c4: bool,
    pub c_is_clique: bool,
    /// No induced path on 7 vertices.
    pub no_long_induced_path: bool,
}

impl AuditHypotheses {
    /// Evaluates every flag directly on `g` and `ctx`.
    pub fn evaluate(g: &Graph, ctx: &P3Context) -> Self {
        AuditHypotheses {
            b2_inapplicable: !g.edges().any(|e| g.f_size(e) >= 4),
            no_induced_c4: g.find_induced_c4().is_none(),
            c_is_clique: g.is_clique(&ctx.c),
            no_long_induced_path: g.find_induced_long_path(7).is_none(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuralClaim {
    /// `|B_u| <= 2` and `|B_w| <= 2`.
    BSidesAtMostTwo,
    /// `C` is a clique.
    CIsClique,
    /// `|D| <= 3` and `C ⊆ N(x) ⊆ B ∪ C ∪ D` for `x ∈ D`.
    DBounded,
    /// `|N→(x)| <= 2` on every layer, hence `|B_1| <= 2|B|` and `|E_0| <= 2|B|`.
    NextAtMostTwo,
    /// `|N→(x)| <= 1` on `B_1..B_j`.
    NextAtMostOne,
    /// `|N=(x)| <= 1` on `B_2..B_j`, and a same-layer neighbor excludes a next one.
    SameAtMostOne,
    /// `|N←(x)| <= 2` on `B_3..B_j`, and two previous neighbors exclude the rest.
    PrevAtMostTwo,
    /// For `x ∈ B_2` with a next neighbor `x'`: `|N←(x)| <= 2` and `N(x') = {x}`.
    SecondLayerPendant,
    /// `|E_j| <= |E_{j-1}| <= ... <= |E_0|`.
    FrontiersShrink,
    /// `G[B_2 ∪ ... ∪ B_j]` is a disjoint union of at most `|E_1|` paths.
    DeepLayersArePaths,
}

impl StructuralClaim {
    pub const ALL: [StructuralClaim; 10] = [
        StructuralClaim::BSidesAtMostTwo,
        StructuralClaim::CIsClique,
        StructuralClaim::DBounded,
        StructuralClaim::NextAtMostTwo,
        StructuralClaim::NextAtMostOne,
        StructuralClaim::SameAtMostOne,
        StructuralClaim::PrevAtMostTwo,
        StructuralClaim::SecondLayerPendant,
        StructuralClaim::FrontiersShrink,
        StructuralClaim::DeepLayersArePaths,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// Hypotheses did not hold; nothing was checked.
    Skipped,
    Fail { witness: Vec<VertexId>, detail: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimVerdict {
    pub claim: StructuralClaim,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LemmaAuditReport {
    pub verdicts: Vec<ClaimVerdict>,
    /// Number of paths found in `G[B_2 ∪ ... ∪ B_j]` when that claim was checked.
    pub deep_path_count: Option<usize>,
}

impl LemmaAuditReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| !matches!(v.verdict, Verdict::Fail { .. }))
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimVerdict> {
        self.verdicts.iter().filter(|v| matches!(v.verdict, Verdict::Fail { .. }))
    }

    pub fn verdict(&self, claim: StructuralClaim) -> &Verdict {
        &self.verdicts.iter().find(|v| v.claim == claim).expect("every claim has a verdict").verdict
    }
}

fn fail(witness: Vec<VertexId>, detail: impl Into<String>) -> Verdict {
    Verdict::Fail { witness, detail: detail.into() }
}

/// Checks the structural claims about the decomposition whose hypotheses hold.
/// Failures are reported with a concrete witness, never raised.
pub fn lemma_audit(ctx: &P3Context, g: &Graph, hyp: AuditHypotheses) -> LemmaAuditReport {
    let mut report = LemmaAuditReport::default();
    // B_from ..= B_j, clamped to the layers that exist
    let last_layer = match ctx.j {
        Some(j) => j.min(ctx.layers.len().saturating_sub(1)),
        None => ctx.layers.len().saturating_sub(1),
    };
    let layer_range = |from: usize| from..last_layer.max(from.saturating_sub(1)) + 1;

    for claim in StructuralClaim::ALL {
        let verdict = match claim {
            StructuralClaim::BSidesAtMostTwo => {
                if !hyp.b2_inapplicable {
                    Verdict::Skipped
                } else if ctx.b_u.len() > 2 {
                    fail(ctx.b_u.clone(), "|B_u| > 2")
                } else if ctx.b_w.len() > 2 {
                    fail(ctx.b_w.clone(), "|B_w| > 2")
                } else {
                    Verdict::Pass
                }
            }
            StructuralClaim::CIsClique => {
                if !hyp.no_induced_c4 {
                    Verdict::Skipped
                } else {
                    non_adjacent_pair(g, &ctx.c)
                        .map_or(Verdict::Pass, |(x, y)| fail(vec![x, y], "non-adjacent pair in C"))
                }
            }
            StructuralClaim::DBounded => {
                if !(hyp.b2_inapplicable && hyp.c_is_clique) {
                    Verdict::Skipped
                } else if ctx.d.len() > 3 {
                    fail(ctx.d.clone(), "|D| > 3")
                } else {
                    let mut verdict = Verdict::Pass;
                    for &x in &ctx.d {
                        if let Some(&c) = ctx.c.iter().find(|&&c| !g.has_edge(x, c)) {
                            verdict = fail(vec![x, c], "D vertex misses a C vertex");
                            break;
                        }
                        if let Some(y) =
                            g.neighbors(x).find(|&y| !(ctx.level(y) == Some(0) || ctx.in_c(y) || ctx.in_d(y)))
                        {
                            verdict = fail(vec![x, y], "D vertex has a neighbor outside B ∪ C ∪ D");
                            break;
                        }
                    }
                    verdict
                }
            }
            StructuralClaim::NextAtMostTwo => {
                if !hyp.b2_inapplicable {
                    Verdict::Skipped
                } else {
                    let mut verdict = Verdict::Pass;
                    'outer: for layer in &ctx.layers {
                        for &x in layer {
                            let next = ctx.next_neighbors(g, x);
                            if next.len() > 2 {
                                let mut wit = vec![x];
                                wit.extend(next);
                                verdict = fail(wit, "more than two next-layer neighbors");
                                break 'outer;
                            }
                        }
                    }
                    if verdict == Verdict::Pass {
                        if ctx.layer(1).len() > 2 * ctx.b.len() {
                            verdict = fail(ctx.layer(1).to_vec(), "|B_1| > 2|B|");
                        } else if ctx.frontier(0).len() > 2 * ctx.b.len() {
                            verdict = fail(ctx.b.clone(), "|E_0| > 2|B|");
                        }
                    }
                    verdict
                }
            }
            StructuralClaim::NextAtMostOne => {
                if !ctx.j_at_least(1) {
                    Verdict::Skipped
                } else {
                    let mut verdict = Verdict::Pass;
                    'outer: for i in layer_range(1) {
                        for &x in ctx.layer(i) {
                            let next = ctx.next_neighbors(g, x);
                            if next.len() > 1 {
                                let mut wit = vec![x];
                                wit.extend(next);
                                verdict = fail(wit, format!("vertex of B_{i} has several next neighbors"));
                                break 'outer;
                            }
                        }
                    }
                    verdict
                }
            }
            StructuralClaim::SameAtMostOne => {
                if !ctx.j_at_least(2) {
                    Verdict::Skipped
                } else {
                    let mut verdict = Verdict::Pass;
                    'outer: for i in layer_range(2) {
                        for &x in ctx.layer(i) {
                            let same = ctx.same_neighbors(g, x);
                            let next = ctx.next_neighbors(g, x);
                            if same.len() > 1 || (same.len() == 1 && !next.is_empty()) {
                                let mut wit = vec![x];
                                wit.extend(same);
                                wit.extend(next);
                                verdict = fail(wit, format!("same-layer bound broken in B_{i}"));
                                break 'outer;
                            }
                        }
                    }
                    verdict
                }
            }
            StructuralClaim::PrevAtMostTwo => {
                if !ctx.j_at_least(3) {
                    Verdict::Skipped
                } else {
                    let mut verdict = Verdict::Pass;
                    'outer: for i in layer_range(3) {
                        for &x in ctx.layer(i) {
                            let prev = ctx.prev_neighbors(g, x);
                            let crowded = prev.len() == 2
                                && !(ctx.next_neighbors(g, x).is_empty() && ctx.same_neighbors(g, x).is_empty());
                            if prev.len() > 2 || crowded {
                                let mut wit = vec![x];
                                wit.extend(prev);
                                verdict = fail(wit, format!("previous-layer bound broken in B_{i}"));
                                break 'outer;
                            }
                        }
                    }
                    verdict
                }
            }
            StructuralClaim::SecondLayerPendant => {
                if !ctx.j_at_least(2) || !hyp.no_long_induced_path {
                    Verdict::Skipped
                } else {
                    let mut verdict = Verdict::Pass;
                    for &x in ctx.layer(2) {
                        let next = ctx.next_neighbors(g, x);
                        if next.is_empty() {
                            continue;
                        }
                        let prev = ctx.prev_neighbors(g, x);
                        if prev.len() > 2 {
                            let mut wit = vec![x];
                            wit.extend(prev);
                            verdict = fail(wit, "B_2 vertex with a next neighbor has > 2 previous neighbors");
                            break;
                        }
                        if next.len() != 1 {
                            let mut wit = vec![x];
                            wit.extend(next);
                            verdict = fail(wit, "B_2 vertex has several next neighbors");
                            break;
                        }
                        let tail = next[0];
                        if g.degree(tail) != 1 {
                            let mut wit = vec![x, tail];
                            wit.extend(g.neighbors(tail).filter(|&y| y != x));
                            verdict = fail(wit, "next neighbor of a B_2 vertex is not a pendant");
                            break;
                        }
                    }
                    verdict
                }
            }
            StructuralClaim::FrontiersShrink => {
                let last = match ctx.j {
                    Some(j) => j,
                    None => ctx.frontiers.len().saturating_sub(1),
                };
                let mut verdict = Verdict::Pass;
                for i in 1..=last {
                    if ctx.frontier(i).len() > ctx.frontier(i - 1).len() {
                        verdict = fail(
                            ctx.frontier(i).iter().flat_map(|e| [e.a, e.b]).collect(),
                            format!("|E_{i}| = {} > |E_{}| = {}", ctx.frontier(i).len(), i - 1, ctx.frontier(i - 1).len()),
                        );
                        break;
                    }
                }
                verdict
            }
            StructuralClaim::DeepLayersArePaths => {
                if !ctx.j_at_least(2) {
                    Verdict::Skipped
                } else {
                    let deep: Vec<VertexId> = layer_range(2).flat_map(|i| ctx.layer(i).iter().copied()).collect();
                    match path_components(g, &deep) {
                        Err(witness) => fail(witness, "component of the deep layers is not a path"),
                        Ok(count) => {
                            report.deep_path_count = Some(count);
                            if count > ctx.frontier(1).len() {
                                fail(deep, format!("{count} paths but |E_1| = {}", ctx.frontier(1).len()))
                            } else {
                                Verdict::Pass
                            }
                        }
                    }
                }
            }
        };
        report.verdicts.push(ClaimVerdict { claim, verdict });
    }
    report
}

pub(crate) fn non_adjacent_pair(g: &Graph, vs: &[VertexId]) -> Option<(VertexId, VertexId)> {
    for (i, &x) in vs.iter().enumerate() {
        for &y in &vs[i + 1..] {
            if !g.has_edge(x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Counts the components of `g[vs]` if each is a path; otherwise returns a
/// witness component.
fn path_components(g: &Graph, vs: &[VertexId]) -> Result<usize, Vec<VertexId>> {
    let sub = g.induced(vs);
    let mut count = 0;
    for comp in sub.connected_components() {
        let edges: usize = comp.iter().map(|&x| sub.degree(x)).sum::<usize>() / 2;
        let max_deg = comp.iter().map(|&x| sub.degree(x)).max().unwrap_or(0);
        if edges + 1 != comp.len() || max_deg > 2 {
            return Err(comp.iter().map(|&i| vs[i]).collect());
        }
        count += 1;
    }
    Ok(count)
}

/// The induced paths that make up `g[vs]`, each listed from its smaller
/// endpoint. Components that are not paths are skipped.
pub fn induced_path_components(g: &Graph, vs: &[VertexId]) -> Vec<Vec<VertexId>> {
    let sub = g.induced(vs);
    let mut out = Vec::new();
    for comp in sub.connected_components() {
        let edges: usize = comp.iter().map(|&x| sub.degree(x)).sum::<usize>() / 2;
        if edges + 1 != comp.len() || comp.iter().any(|&x| sub.degree(x) > 2) {
            continue;
        }
        let start = *comp.iter().filter(|&&x| sub.degree(x) <= 1).min_by_key(|&&x| vs[x]).unwrap();
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(next) = sub.neighbors(cur).find(|&y| y != prev) {
            prev = cur;
            cur = next;
            path.push(cur);
        }
        let mut p: Vec<VertexId> = path.into_iter().map(|i| vs[i]).collect();
        if p.len() > 1 && p[0] > *p.last().unwrap() {
            p.reverse();
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_p3_has_empty_structure() {
        let g = Graph::path(3);
        let ctx = P3Context::build(&g, (0, 1, 2), &EdgeSet::new()).unwrap();
        assert!(ctx.b.is_empty() && ctx.c.is_empty() && ctx.d.is_empty());
        assert!(ctx.layers.is_empty());
        assert_eq!(ctx.j, None);
        assert_eq!(component_closure(&ctx, &g), vec![0, 1, 2]);
        let report = lemma_audit(
            &ctx,
            &g,
            AuditHypotheses { b2_inapplicable: true, no_induced_c4: true, c_is_clique: true, no_long_induced_path: true },
        );
        assert!(report.all_passed());
    }

    #[test]
    fn not_a_p3_is_rejected() {
        let g = Graph::complete(3);
        assert!(matches!(P3Context::build(&g, (0, 1, 2), &EdgeSet::new()), Err(CoreError::NotInducedP3(..))));
    }

    #[test]
    fn c_and_d_vertices_join_the_closure() {
        // P3 0-1-2, vertex 3 adjacent to all three, pendant 4 on 3
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 0), (3, 1), (3, 2), (3, 4)]).unwrap();
        let ctx = P3Context::build(&g, (0, 1, 2), &EdgeSet::new()).unwrap();
        assert_eq!(ctx.c, vec![3]);
        assert_eq!(ctx.d, vec![4]);
        assert_eq!(component_closure(&ctx, &g), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn b_sides_split_by_center() {
        // 3 ~ u only, 4 ~ v only, 5 ~ u,w, 6 ~ u,v
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (3, 0), (4, 1), (5, 0), (5, 2), (6, 0), (6, 1)]).unwrap();
        let ctx = P3Context::build(&g, (0, 1, 2), &EdgeSet::new()).unwrap();
        assert_eq!(ctx.b, vec![3, 4, 5, 6]);
        assert_eq!(ctx.b_u, vec![3, 4, 5]);
        assert_eq!(ctx.b_w, vec![4, 5, 6]);
    }

    #[test]
    fn hypothesis_gating_skips_claims() {
        // star K_{1,5}: center 0, leaves 1..=5; P3 1-0-2
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let ctx = P3Context::build(&g, (1, 0, 2), &EdgeSet::new()).unwrap();
        let hyp = AuditHypotheses::evaluate(&g, &ctx);
        assert!(!hyp.b2_inapplicable);
        let report = lemma_audit(&ctx, &g, hyp);
        assert_eq!(report.verdict(StructuralClaim::BSidesAtMostTwo), &Verdict::Skipped);
        assert_eq!(report.verdict(StructuralClaim::NextAtMostTwo), &Verdict::Skipped);
    }

    #[test]
    fn marks_only_touch_the_second_frontier() {
        // u=0 v=1 w=2; b=3 on u; c1=4 on b; d=5 on c1
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 3), (3, 4), (4, 5)]).unwrap();
        let plain = P3Context::build(&g, (0, 1, 2), &EdgeSet::new()).unwrap();
        assert_eq!(plain.frontier(0), &[Edge::new(3, 4)]);
        assert_eq!(plain.frontier(1), &[Edge::new(4, 5)]);
        let marks: EdgeSet = [Edge::new(4, 5)].into_iter().collect();
        let marked = P3Context::build(&g, (0, 1, 2), &marks).unwrap();
        assert!(marked.frontier(1).is_empty());
        assert_eq!(marked.layer(2), &[5]);
    }

    #[test]
    fn path_components_are_listed_from_smaller_end() {
        let g = Graph::from_edges(6, &[(5, 3), (3, 4), (0, 1)]).unwrap();
        let paths = induced_path_components(&g, &[0, 1, 3, 4, 5]);
        assert_eq!(paths, vec![vec![0, 1], vec![4, 3, 5]]);
    }

    #[test]
    fn pendant_claim_needs_the_long_path_hypothesis() {
        // u=0 v=1 w=2, z=3 on u, then the chain z-y-x-x'-x'' with two leaves on x''
        let g = Graph::from_edges(10, &[(0, 1), (1, 2), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (7, 9)]).unwrap();
        let ctx = P3Context::build(&g, (0, 1, 2), &EdgeSet::new()).unwrap();
        assert_eq!(ctx.j, Some(3));
        let hyp = AuditHypotheses::evaluate(&g, &ctx);
        assert!(hyp.b2_inapplicable && !hyp.no_long_induced_path);
        let gated = lemma_audit(&ctx, &g, hyp);
        assert!(gated.all_passed());
        assert_eq!(gated.verdict(StructuralClaim::SecondLayerPendant), &Verdict::Skipped);
        let forced = lemma_audit(&ctx, &g, AuditHypotheses { no_long_induced_path: true, ..hyp });
        assert!(matches!(forced.verdict(StructuralClaim::SecondLayerPendant), Verdict::Fail { .. }));
    }
}
