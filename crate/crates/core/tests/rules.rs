use std::time::Duration;

use cdel_core::bnmath::{branching_number, BranchingVector};
use cdel_core::engine::{
    b4_second_stage, find_b1_path, find_b2_edge, reduce, rule_b2, rule_b3, rule_b4, rule_b5, solve_decision_with,
    solve_minimum_with, Child, Instance, PathRule, Reduced, RuleCounts, SolverConfig, Strategy,
};
use cdel_core::gen::{gnp_with, rng};
use cdel_core::oracle::exact_min_deletion;
use cdel_core::{CoreError, EdgeSet, Graph};
use rand::Rng;

fn opt(g: &Graph) -> usize {
    exact_min_deletion(g).unwrap().optimum
}

/// A branching rule is safe when some child keeps an optimal solution.
fn assert_safe(g: &Graph, children: &[Child], rule: &str) {
    assert!(!children.is_empty(), "{rule} produced no children on {g:?}");
    let best = children.iter().map(|c| c.deleted.len() + opt(&c.instance.graph)).min().unwrap();
    assert_eq!(best, opt(g), "{rule} loses the optimum on {g:?}");
    assert!(children.iter().all(|c| !c.deleted.is_empty()), "{rule} has a free child");
}

/// Removes every B2 opportunity by deleting `e` or `F_e` at random.
fn without_b2<R: Rng>(mut g: Graph, r: &mut R) -> Graph {
    while let Some(e) = find_b2_edge(&g) {
        if r.gen_bool(0.5) {
            g.remove_edge(e.a, e.b);
        } else {
            g = g.delete_edges(&g.f_set(e).unwrap()).unwrap();
        }
    }
    g
}

fn config(strategy: Strategy) -> SolverConfig {
    let mut cfg = SolverConfig::new(strategy);
    cfg.audit_lemmas = true;
    cfg
}

#[test]
fn long_paths_trigger_the_path_rule() {
    let out = solve_minimum_with(&Graph::path(12), &config(Strategy::Bd2011)).unwrap();
    assert_eq!(out.optimum, 5);
    assert!(out.stats.rule_counts.b1 > 0);
}

/// `2-1-0-3-4-5-...-11` has no edge with `|F_e| >= 3`, so B4 goes straight to
/// the long-path stage on `5..=11`.
#[test]
fn b4_splits_a_deep_path() {
    let g = Graph::from_edges(12, &[(2, 1), (1, 0), (0, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 10), (10, 11)]).unwrap();
    let mut counts = RuleCounts::default();
    let inst = Instance::new(g.clone(), 20);
    let children = rule_b4(&inst, (0, 1, 2), &config(Strategy::Bd2011), &mut counts).unwrap();
    assert_eq!(counts.b4_stage1_splits, 0);
    assert_eq!(counts.b4_stage2_splits, 1);
    assert_eq!(children.len(), 2);
    assert_safe(&g, &children, "B4");
    for c in &children {
        assert!(!c.instance.graph.component_of(1).iter().any(|&x| c.instance.graph.find_induced_p3().is_some_and(|p| p.1 == x)));
    }

    let first = Child { instance: inst.clone(), deleted: EdgeSet::new() };
    let mut counts = RuleCounts::default();
    assert_eq!(b4_second_stage(&first, (0, 1, 2), PathRule::Guarded, &mut counts).unwrap().len(), 2);
}

#[test]
fn guarded_path_rule_skips_paths_with_heavy_interiors() {
    let mut g = Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
    g.add_edge(3, 7);
    assert!(find_b1_path(&g, PathRule::Guarded).is_none());
    assert_eq!(find_b1_path(&g, PathRule::Literal).map(|p| p.len()), Some(7));
}

#[test]
fn rules_are_safe_on_random_graphs() {
    let mut r = rng(77);
    let cfg = config(Strategy::New1404);
    let (mut b2, mut b3, mut b4, mut b5) = (0, 0, 0, 0);
    for i in 0..1500 {
        let n = r.gen_range(4..=10);
        let g = gnp_with(n, r.gen_range(0.2..0.8), &mut r);
        let g = if i % 2 == 0 { g } else { without_b2(g, &mut r) };
        let Reduced::Open(inst) = reduce(Instance::new(g, 60)) else { continue };
        let g = inst.graph.clone();
        let mut counts = RuleCounts::default();
        if let Some(e) = find_b2_edge(&g) {
            assert_safe(&g, &rule_b2(&inst, e).unwrap(), "B2");
            b2 += 1;
            continue;
        }
        if let Some(c) = g.find_induced_c4() {
            assert_safe(&g, &rule_b3(&inst, c).unwrap(), "B3");
            let children = rule_b5(&inst, c, &cfg, &mut counts).unwrap();
            assert_safe(&g, &children, "B5");
            b3 += 1;
            if counts.b5 > 0 {
                b5 += 1;
            }
        } else if let Some(p3) = g.find_induced_p3() {
            assert_safe(&g, &rule_b4(&inst, p3, &cfg, &mut counts).unwrap(), "B4");
            b4 += 1;
        }
    }
    assert!(b2 > 50 && b3 > 50 && b4 > 50 && b5 > 4, "coverage b2={b2} b3={b3} b4={b4} b5={b5}");
}

/// When `C` is not a clique the realised B5 branching, read off the child
/// sizes, is no worse than its worst quoted vector.
#[test]
fn b5_child_sizes_stay_under_the_quoted_bound() {
    let mut r = rng(9);
    let cfg = config(Strategy::New1404);
    let mut seen = 0;
    for _ in 0..15000 {
        let n = r.gen_range(6..=11);
        let g = without_b2(gnp_with(n, r.gen_range(0.4..0.8), &mut r), &mut r);
        let Reduced::Open(inst) = reduce(Instance::new(g, 60)) else { continue };
        if find_b1_path(&inst.graph, PathRule::Guarded).is_some() || find_b2_edge(&inst.graph).is_some() {
            continue;
        }
        let Some(c) = inst.graph.find_induced_c4() else { continue };
        let mut counts = RuleCounts::default();
        let children = rule_b5(&inst, c, &cfg, &mut counts).unwrap();
        if counts.b5 == 0 {
            continue;
        }
        seen += 1;
        let sizes: Vec<u32> = children.iter().map(|c| c.deleted.len() as u32).collect();
        assert!(sizes.iter().all(|&d| d >= 3), "B5 drop below 3: {sizes:?}");
        let bn = branching_number(&BranchingVector::new(&sizes));
        assert!(bn < 1.404, "B5 children {sizes:?} give {bn} on {:?}", inst.graph);
    }
    assert!(seen >= 50, "only {seen} B5 applications");
}

/// The C4 `0-1-2-3` plus `4, 5` adjacent to all of it but not to each other.
#[test]
fn b5_branches_on_a_non_clique_common_neighborhood() {
    let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3), (5, 0), (5, 1), (5, 2), (5, 3)]).unwrap();
    assert!(find_b2_edge(&g).is_none());
    let mut counts = RuleCounts::default();
    let children = rule_b5(&Instance::new(g.clone(), 10), [0, 1, 2, 3], &config(Strategy::New1404), &mut counts).unwrap();
    assert_eq!(counts.b5, 1);
    assert_safe(&g, &children, "B5");
    let sizes: Vec<usize> = children.iter().map(|c| c.deleted.len()).collect();
    assert!(sizes.iter().all(|&d| d >= 3));
}

#[test]
fn zero_timeout_is_reported() {
    let mut cfg = SolverConfig::new(Strategy::New1404);
    cfg.timeout = Some(Duration::ZERO);
    assert!(matches!(solve_decision_with(&Graph::cycle(5), 3, &cfg), Err(CoreError::Timeout)));
    assert!(matches!(solve_minimum_with(&Graph::cycle(5), &cfg), Err(CoreError::Timeout)));
    cfg.timeout = Some(Duration::from_secs(60));
    assert_eq!(solve_minimum_with(&Graph::cycle(5), &cfg).unwrap().optimum, 3);
}

#[test]
fn stats_count_rules_per_strategy() {
    let g = Graph::cycle(4);
    let base = solve_decision_with(&g, 2, &config(Strategy::Baseline2k)).unwrap();
    assert!(base.stats.rule_counts.naive > 0 && base.stats.rule_counts.b3 == 0);
    let bd = solve_decision_with(&g, 2, &config(Strategy::Bd2011)).unwrap();
    assert_eq!(bd.stats.rule_counts.b3, 1);
    // C is empty, hence a clique, so B5 hands over to B4
    let new = solve_decision_with(&g, 2, &config(Strategy::New1404)).unwrap();
    assert_eq!((new.stats.rule_counts.b5, new.stats.rule_counts.b4), (0, 1));
    assert!(new.witness.is_some());
}

fn b5_sizes(g: &Graph) -> Vec<usize> {
    let c = g.find_induced_c4().unwrap();
    let mut counts = RuleCounts::default();
    let children = rule_b5(&Instance::new(g.clone(), 60), c, &config(Strategy::New1404), &mut counts).unwrap();
    assert_eq!(counts.b5, 1);
    assert_safe(g, &children, "B5");
    let mut sizes: Vec<usize> = children.iter().map(|c| c.deleted.len()).collect();
    sizes.sort_unstable();
    sizes
}

/// Both grandchildren of both B3 children take B2, giving the widest B5 tree.
#[test]
fn b5_worst_shape_has_eight_leaves() {
    let g = Graph::from_edges(
        8,
        &[
            (0, 1), (0, 2), (0, 3), (0, 5), (0, 6), (0, 7), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3),
            (2, 4), (2, 6), (2, 7), (3, 4), (3, 5), (3, 7), (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7),
        ],
    )
    .unwrap();
    assert!(find_b2_edge(&g).is_none());
    assert_eq!(b5_sizes(&g), vec![5, 5, 5, 5, 8, 8, 8, 8]);
}

#[test]
fn b5_with_b2_on_both_children() {
    let g = Graph::from_edges(6, &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (4, 5)]).unwrap();
    assert!(find_b2_edge(&g).is_none());
    assert_eq!(b5_sizes(&g), vec![3, 3, 6, 6]);
}
