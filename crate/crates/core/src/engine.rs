//! The search driver and the branching rules.
//!
//! Every rule maps an [`Instance`] to a list of [`Child`] instances, each
//! carrying the exact set of edges it deleted, so a child's budget is always
//! the parent's budget minus `|deleted|`. A witness is the union of the
//! deletions along the accepting root-to-leaf path.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::almost_clique::{solve_component, AlmostCliqueDecomposition};
use crate::error::{CoreError, Result};
use crate::graph::{validate_solution, Edge, EdgeSet, Graph, VertexId};
use crate::oracle::OracleResult;
use crate::structure::{induced_path_components, lemma_audit, non_adjacent_pair, AuditHypotheses, P3Context};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    /// Branch on the two edges of the least induced P3.
    #[serde(rename = "baseline2k")]
    Baseline2k,
    /// B1, then B2, then B3, then B4.
    #[serde(rename = "bd2011")]
    Bd2011,
    /// B1, then B2, then B5 if an induced C4 exists and B4 otherwise.
    #[serde(rename = "new1404")]
    New1404,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Baseline2k, Strategy::Bd2011, Strategy::New1404];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Baseline2k => "baseline2k",
            Strategy::Bd2011 => "bd2011",
            Strategy::New1404 => "new1404",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| CoreError::InvalidParameter(format!("unknown strategy '{s}'")))
    }
}

/// Which induced paths the long-path rule may branch on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathRule {
    /// Only paths whose interior vertices have degree exactly 2. Safe on every
    /// graph.
    #[default]
    Guarded,
    /// Any induced path. Not safe in general: a path with attached triangles
    /// can lose the optimum in both branches.
    Literal,
}

impl FromStr for PathRule {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "guarded" => Ok(PathRule::Guarded),
            "literal" => Ok(PathRule::Literal),
            _ => Err(CoreError::InvalidParameter(format!("unknown path rule '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub strategy: Strategy,
    pub path_rule: PathRule,
    pub timeout: Option<Duration>,
    /// Run the structural audit at every B4 entry and fail on a violation.
    pub audit_lemmas: bool,
}

impl SolverConfig {
    pub fn new(strategy: Strategy) -> Self {
        SolverConfig { strategy, path_rule: PathRule::default(), timeout: None, audit_lemmas: cfg!(debug_assertions) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: i64,
    /// Edges excluded from `E_1`; only meaningful inside one B4 application.
    pub marks: EdgeSet,
}

impl Instance {
    pub fn new(graph: Graph, k: i64) -> Self {
        Instance { graph, k, marks: EdgeSet::new() }
    }

    /// Deletes `deleted`, charging one unit of budget per edge. Marks on
    /// deleted edges disappear; the others survive only if `keep_marks`.
    fn child(&self, deleted: EdgeSet, keep_marks: bool) -> Result<Child> {
        let graph = self.graph.delete_edges(&deleted)?;
        let marks = if keep_marks {
            self.marks.iter().filter(|e| !deleted.contains(e)).copied().collect()
        } else {
            EdgeSet::new()
        };
        let k = self.k - deleted.len() as i64;
        Ok(Child { instance: Instance { graph, k, marks }, deleted })
    }
}

#[derive(Clone, Debug)]
pub struct Child {
    pub instance: Instance,
    pub deleted: EdgeSet,
}

impl Child {
    /// `self` followed by `next`, which must have been derived from `self.instance`.
    fn then(&self, next: Child) -> Child {
        let mut deleted = self.deleted.clone();
        deleted.extend(next.deleted);
        Child { instance: next.instance, deleted }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RuleCounts {
    pub b1: u64,
    pub b2: u64,
    pub b3: u64,
    pub b4: u64,
    pub b5: u64,
    pub reduce: u64,
    pub naive: u64,
    /// Binary splits made inside B4's frontier stage.
    pub b4_stage1_splits: u64,
    /// Binary splits made inside B4's long-path stage.
    pub b4_stage2_splits: u64,
}

impl RuleCounts {
    pub fn merge(&mut self, o: &RuleCounts) {
        self.b1 += o.b1;
        self.b2 += o.b2;
        self.b3 += o.b3;
        self.b4 += o.b4;
        self.b5 += o.b5;
        self.reduce += o.reduce;
        self.naive += o.naive;
        self.b4_stage1_splits += o.b4_stage1_splits;
        self.b4_stage2_splits += o.b4_stage2_splits;
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub rule_counts: RuleCounts,
    pub max_depth: usize,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

impl SearchStats {
    pub fn merge(&mut self, o: &SearchStats) {
        self.nodes_expanded += o.nodes_expanded;
        self.rule_counts.merge(&o.rule_counts);
        self.max_depth = self.max_depth.max(o.max_depth);
        self.elapsed += o.elapsed;
    }

    /// Equality of everything except wall-clock time.
    pub fn same_counters(&self, o: &SearchStats) -> bool {
        self.nodes_expanded == o.nodes_expanded && self.rule_counts == o.rule_counts && self.max_depth == o.max_depth
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduced {
    Yes,
    No,
    Open(Instance),
}

/// Deletes the edges of every clique component. Returns how many non-trivial
/// components were discarded.
fn discard_clique_components(g: &mut Graph) -> usize {
    let mut discarded = 0;
    for comp in g.connected_components() {
        if comp.len() > 1 && g.is_clique(&comp) {
            g.isolate(&comp);
            discarded += 1;
        }
    }
    discarded
}

/// Drops clique components and settles trivial budgets.
pub fn reduce(inst: Instance) -> Reduced {
    reduce_counted(inst).0
}

fn reduce_counted(mut inst: Instance) -> (Reduced, usize) {
    if inst.k < 0 {
        return (Reduced::No, 0);
    }
    let discarded = discard_clique_components(&mut inst.graph);
    if inst.graph.edge_count() == 0 {
        return (Reduced::Yes, discarded);
    }
    if inst.k == 0 {
        return (Reduced::No, discarded);
    }
    if discarded > 0 {
        let g = &inst.graph;
        inst.marks = inst.marks.iter().filter(|e| g.has(**e)).copied().collect();
    }
    (Reduced::Open(inst), discarded)
}

fn set_of(edges: impl IntoIterator<Item = Edge>) -> EdgeSet {
    edges.into_iter().collect()
}

/// Alternating edges of `path`: `(p0,p1), (p2,p3), ...` when `odd`, else
/// `(p1,p2), (p3,p4), ...`.
fn alternating_edges(path: &[VertexId], odd: bool) -> EdgeSet {
    let start = if odd { 0 } else { 1 };
    set_of((start..path.len() - 1).step_by(2).map(|i| Edge::new(path[i], path[i + 1])))
}

/// Deletes the odd-position edges in one child and the even-position edges in
/// the other. Budget drops by the size of each set (3 and 3 on seven vertices).
pub fn rule_b1(inst: &Instance, path: &[VertexId]) -> Result<[Child; 2]> {
    if path.len() < 7 || !inst.graph.is_induced_path(path) {
        return Err(CoreError::NotInducedPath(path.to_vec()));
    }
    Ok([inst.child(alternating_edges(path, true), false)?, inst.child(alternating_edges(path, false), false)?])
}

/// Branches on `{e}` versus `F_e` for an edge with `|F_e| >= 4`.
pub fn rule_b2(inst: &Instance, e: Edge) -> Result<[Child; 2]> {
    let f = inst.graph.f_set(e)?;
    if f.len() < 4 {
        return Err(CoreError::Precondition(format!("|F_e| = {} < 4 for {e}", f.len())));
    }
    Ok([inst.child(set_of([e]), false)?, inst.child(f, false)?])
}

/// Deletes one pair of opposite edges of an induced C4 in each child.
pub fn rule_b3(inst: &Instance, c: [VertexId; 4]) -> Result<[Child; 2]> {
    if !inst.graph.is_induced_c4(c) {
        return Err(CoreError::NotInducedC4(c));
    }
    let [v1, v2, v3, v4] = c;
    Ok([
        inst.child(set_of([Edge::new(v1, v2), Edge::new(v3, v4)]), false)?,
        inst.child(set_of([Edge::new(v2, v3), Edge::new(v4, v1)]), false)?,
    ])
}

/// The plain rule behind the exponential baseline: one child per edge of an
/// induced P3.
pub fn rule_naive(inst: &Instance, (u, v, w): (VertexId, VertexId, VertexId)) -> Result<[Child; 2]> {
    if !inst.graph.is_induced_p3(u, v, w) {
        return Err(CoreError::NotInducedP3(u, v, w));
    }
    Ok([inst.child(set_of([Edge::new(u, v)]), false)?, inst.child(set_of([Edge::new(v, w)]), false)?])
}

/// Least edge with `|F_e| >= 4`.
pub fn find_b2_edge(g: &Graph) -> Option<Edge> {
    g.edges().find(|&e| g.f_size(e) >= 4)
}

/// Seven-vertex induced path admissible under `rule`.
pub fn find_b1_path(g: &Graph, rule: PathRule) -> Option<Vec<VertexId>> {
    match rule {
        PathRule::Guarded => g.find_induced_path_where(7, |x| g.degree(x) == 2),
        PathRule::Literal => g.find_induced_long_path(7),
    }
}

/// One step of a frontier chain inside B4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStep {
    /// The edge itself was deleted (budget 1).
    Single(Edge),
    /// `F_e` was deleted (budget `|F_e|`).
    Family { edge: Edge, deleted: usize },
}

#[derive(Clone, Debug)]
pub struct FirstStageInstance {
    pub child: Child,
    pub chain: Vec<StageStep>,
    /// Level `j` at each step of the chain.
    pub levels: Vec<usize>,
}

fn b4_preconditions(g: &Graph, ctx: &P3Context) -> Result<()> {
    if let Some(e) = find_b2_edge(g) {
        return Err(CoreError::Precondition(format!("rule B2 applies to {e}")));
    }
    if !g.is_clique(&ctx.c) {
        return Err(CoreError::Precondition("C is not a clique".into()));
    }
    Ok(())
}

/// B4's frontier stage: while `j` is finite, split on the least edge of `E_j`
/// with `|F_e| >= 3`. Descendants whose budget goes negative are dropped.
pub fn b4_first_stage(
    inst: &Instance,
    p3: (VertexId, VertexId, VertexId),
    counts: &mut RuleCounts,
) -> Result<Vec<FirstStageInstance>> {
    let root = FirstStageInstance {
        child: Child { instance: inst.clone(), deleted: EdgeSet::new() },
        chain: Vec::new(),
        levels: Vec::new(),
    };
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(cur) = stack.pop() {
        if cur.child.instance.k < 0 {
            continue;
        }
        let g = &cur.child.instance.graph;
        let ctx = P3Context::build(g, p3, &cur.child.instance.marks)?;
        let Some(e) = ctx.branching_edge(g) else {
            out.push(cur);
            continue;
        };
        let j = ctx.j.expect("a branching edge implies finite j");
        counts.b4_stage1_splits += 1;
        let (x, y) = if ctx.level(e.a) == Some(j) { (e.a, e.b) } else { (e.b, e.a) };

        let f = g.f_set(e)?;
        let f_len = f.len();
        let mut family = cur.child.instance.child(f, true)?;
        if j == 1 {
            let prev_y = ctx.prev_neighbors(g, y);
            for x2 in ctx.same_neighbors(g, x).into_iter().filter(|z| prev_y.contains(z)) {
                family.instance.marks.insert(Edge::new(x2, x));
                family.instance.marks.insert(Edge::new(x2, y));
            }
        }
        let single = cur.child.instance.child(set_of([e]), true)?;

        let extend = |next: Child, step: StageStep| {
            let mut chain = cur.chain.clone();
            chain.push(step);
            let mut levels = cur.levels.clone();
            levels.push(j);
            FirstStageInstance { child: cur.child.then(next), chain, levels }
        };
        // pushed in reverse so that the single-deletion child is explored first
        stack.push(extend(family, StageStep::Family { edge: e, deleted: f_len }));
        stack.push(extend(single, StageStep::Single(e)));
    }
    Ok(out)
}

/// B4's long-path stage on one first-stage instance: every path component of
/// `G[B_2 ∪ B_3 ∪ ...]` with at least seven vertices is split by [`rule_b1`].
pub fn b4_second_stage(
    first: &Child,
    p3: (VertexId, VertexId, VertexId),
    path_rule: PathRule,
    counts: &mut RuleCounts,
) -> Result<Vec<Child>> {
    let g = &first.instance.graph;
    let ctx = P3Context::build(g, p3, &first.instance.marks)?;
    let deep: Vec<VertexId> = ctx.layers.iter().skip(2).flatten().copied().collect();
    let paths: Vec<Vec<VertexId>> = induced_path_components(g, &deep)
        .into_iter()
        .filter(|p| p.len() >= 7)
        .filter(|p| path_rule == PathRule::Literal || p[1..p.len() - 1].iter().all(|&x| g.degree(x) == 2))
        .collect();
    let mut level = vec![first.clone()];
    for path in &paths {
        let mut next = Vec::with_capacity(level.len() * 2);
        for c in &level {
            if c.instance.k < 0 {
                continue;
            }
            counts.b4_stage2_splits += 1;
            let [odd, even] = rule_b1(&c.instance, path)?;
            next.push(c.then(odd));
            next.push(c.then(even));
        }
        level = next;
    }
    level.retain(|c| c.instance.k >= 0);
    Ok(level)
}

/// B4's exact stage: solve the component of `v` optimally, with the common
/// neighbors of the P3 as the clique part. Clears all marks.
pub fn b4_third_stage(second: &Child, p3: (VertexId, VertexId, VertexId)) -> Result<Child> {
    let inst = &second.instance;
    let ctx = P3Context::build(&inst.graph, p3, &EdgeSet::new())?;
    let h = inst.graph.component_of(p3.1);
    let x_set: Vec<VertexId> = h.iter().copied().filter(|x| !ctx.in_c(*x)).collect();
    let decomp = AlmostCliqueDecomposition::new(x_set, ctx.c.clone());
    let s = solve_component(&inst.graph, &decomp)?;
    debug_assert!(!s.is_empty(), "the component of v contains the P3");
    Ok(second.then(inst.child(s, false)?))
}

/// Checks the structural claims whose hypotheses hold at a B4 entry.
fn audit_entry(g: &Graph, ctx: &P3Context) -> Result<()> {
    let hyp = AuditHypotheses::evaluate(g, ctx);
    let report = lemma_audit(ctx, g, hyp);
    if report.all_passed() {
        return Ok(());
    }
    let detail: Vec<String> = report.failures().map(|f| format!("{:?}: {:?}", f.claim, f.verdict)).collect();
    Err(CoreError::AuditFailure(format!("P3 {:?} in {:?}: {}", ctx.a(), g, detail.join("; "))))
}

/// All three stages of B4 for the induced P3 `p3`, producing the third-stage
/// instances.
pub fn rule_b4(
    inst: &Instance,
    p3: (VertexId, VertexId, VertexId),
    cfg: &SolverConfig,
    counts: &mut RuleCounts,
) -> Result<Vec<Child>> {
    let ctx = P3Context::build(&inst.graph, p3, &inst.marks)?;
    b4_preconditions(&inst.graph, &ctx)?;
    if cfg.audit_lemmas {
        audit_entry(&inst.graph, &ctx)?;
    }
    counts.b4 += 1;
    let mut out = Vec::new();
    for first in b4_first_stage(inst, p3, counts)? {
        for second in b4_second_stage(&first.child, p3, cfg.path_rule, counts)? {
            let third = b4_third_stage(&second, p3)?;
            if third.instance.k >= 0 {
                out.push(third);
            }
        }
    }
    Ok(out)
}

/// B5 on the induced C4 `u, v, w, u'`.
pub fn rule_b5(inst: &Instance, cycle: [VertexId; 4], cfg: &SolverConfig, counts: &mut RuleCounts) -> Result<Vec<Child>> {
    if !inst.graph.is_induced_c4(cycle) {
        return Err(CoreError::NotInducedC4(cycle));
    }
    let [u, v, w, _] = cycle;
    let p3 = (u, v, w);
    let ctx = P3Context::build(&inst.graph, p3, &inst.marks)?;
    let Some((x, y)) = non_adjacent_pair(&inst.graph, &ctx.c) else {
        return rule_b4(inst, p3, cfg, counts);
    };
    counts.b5 += 1;
    counts.b3 += 1;
    let mut out = Vec::new();
    for ci in rule_b3(inst, [u, x, w, y])? {
        if ci.instance.k < 0 {
            continue;
        }
        let gi = &ci.instance.graph;
        if let Some(e) = find_b2_edge(gi) {
            counts.b2 += 1;
            out.extend(rule_b2(&ci.instance, e)?.into_iter().map(|gc| ci.then(gc)));
            continue;
        }
        let ctx_i = P3Context::build(gi, p3, &ci.instance.marks)?;
        match non_adjacent_pair(gi, &ctx_i.c) {
            Some((xi, yi)) => {
                counts.b3 += 1;
                for gc in rule_b3(&ci.instance, [u, xi, w, yi])? {
                    let gc = ci.then(gc);
                    match find_b2_edge(&gc.instance.graph) {
                        Some(e) if gc.instance.k >= 0 => {
                            counts.b2 += 1;
                            out.extend(rule_b2(&gc.instance, e)?.into_iter().map(|ggc| gc.then(ggc)));
                        }
                        _ => out.push(gc),
                    }
                }
            }
            None => out.extend(rule_b4(&ci.instance, p3, cfg, counts)?.into_iter().map(|gc| ci.then(gc))),
        }
    }
    out.retain(|c| c.instance.k >= 0);
    Ok(out)
}

struct Search<'a> {
    cfg: &'a SolverConfig,
    stats: SearchStats,
    deadline: Option<Instant>,
}

impl Search<'_> {
    fn branch(&mut self, inst: &Instance) -> Result<Vec<Child>> {
        let g = &inst.graph;
        let counts = &mut self.stats.rule_counts;
        if self.cfg.strategy == Strategy::Baseline2k {
            let p3 = g.find_induced_p3().expect("reduced instances contain an induced P3");
            counts.naive += 1;
            return Ok(rule_naive(inst, p3)?.to_vec());
        }
        if let Some(path) = find_b1_path(g, self.cfg.path_rule) {
            counts.b1 += 1;
            return Ok(rule_b1(inst, &path)?.to_vec());
        }
        if let Some(e) = find_b2_edge(g) {
            counts.b2 += 1;
            return Ok(rule_b2(inst, e)?.to_vec());
        }
        let c4 = g.find_induced_c4();
        match (self.cfg.strategy, c4) {
            (Strategy::Bd2011, Some(c)) => {
                counts.b3 += 1;
                Ok(rule_b3(inst, c)?.to_vec())
            }
            (Strategy::New1404, Some(c)) => rule_b5(inst, c, self.cfg, counts),
            _ => {
                let p3 = g.find_induced_p3().expect("reduced instances contain an induced P3");
                rule_b4(inst, p3, self.cfg, counts)
            }
        }
    }

    fn node(&mut self, inst: Instance, depth: usize) -> Result<Option<EdgeSet>> {
        self.stats.nodes_expanded += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(CoreError::Timeout);
        }
        let (verdict, discarded) = reduce_counted(inst);
        if discarded > 0 {
            self.stats.rule_counts.reduce += 1;
        }
        let inst = match verdict {
            Reduced::Yes => return Ok(Some(EdgeSet::new())),
            Reduced::No => return Ok(None),
            Reduced::Open(inst) => inst,
        };
        for child in self.branch(&inst)? {
            debug_assert_eq!(child.instance.k, inst.k - child.deleted.len() as i64);
            if child.instance.k < 0 {
                continue;
            }
            if let Some(mut s) = self.node(child.instance, depth + 1)? {
                s.extend(child.deleted);
                debug_assert!(validate_solution(&inst.graph, &s, inst.k as usize));
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub witness: Option<EdgeSet>,
    pub stats: SearchStats,
}

/// Decides whether at most `k` deletions suffice, returning a witness if so.
pub fn solve_decision_with(g: &Graph, k: usize, cfg: &SolverConfig) -> Result<Outcome> {
    let start = Instant::now();
    let mut search = Search { cfg, stats: SearchStats::default(), deadline: cfg.timeout.map(|t| start + t) };
    let witness = search.node(Instance::new(g.clone(), k as i64), 0)?;
    if let Some(s) = &witness {
        assert!(validate_solution(g, s, k), "search returned an invalid witness");
    }
    search.stats.elapsed = start.elapsed();
    Ok(Outcome { witness, stats: search.stats })
}

pub fn solve_decision(g: &Graph, k: usize, strategy: Strategy) -> Result<Option<EdgeSet>> {
    Ok(solve_decision_with(g, k, &SolverConfig::new(strategy))?.witness)
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimumOutcome {
    pub optimum: usize,
    pub witness: EdgeSet,
    /// Summed over every budget tried.
    pub stats: SearchStats,
}

/// Tries `k = 0, 1, 2, ...` until the decision succeeds. The timeout, if any,
/// bounds the whole sequence.
pub fn solve_minimum_with(g: &Graph, cfg: &SolverConfig) -> Result<MinimumOutcome> {
    let start = Instant::now();
    let mut stats = SearchStats::default();
    for k in 0..=g.edge_count() {
        let mut per_k = cfg.clone();
        if let Some(t) = cfg.timeout {
            per_k.timeout = Some(t.checked_sub(start.elapsed()).ok_or(CoreError::Timeout)?);
        }
        let out = solve_decision_with(g, k, &per_k)?;
        stats.merge(&out.stats);
        if let Some(witness) = out.witness {
            stats.elapsed = start.elapsed();
            return Ok(MinimumOutcome { optimum: k, witness, stats });
        }
    }
    unreachable!("deleting every edge always yields a cluster graph")
}

pub fn solve_minimum(g: &Graph, strategy: Strategy) -> Result<OracleResult> {
    let out = solve_minimum_with(g, &SolverConfig::new(strategy))?;
    Ok(OracleResult { optimum: out.optimum, witness: out.witness })
}
