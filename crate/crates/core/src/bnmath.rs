//! Branching vectors and their branching numbers.
//!
//! A branching vector `(a_1, ..., a_p)` lists the budget decrements of the
//! children of one branching step. Its branching number is the unique root
//! `x > 1` of `sum_i x^(-a_i) = 1`; a search tree whose every step has
//! branching number at most `x` has `O(x^k)` leaves.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

/// Multiset of positive decrements, stored as `value -> multiplicity` so that
/// vectors with millions of entries stay small.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchingVector {
    counts: BTreeMap<u32, u64>,
}

impl BranchingVector {
    /// Panics on an entry of zero.
    pub fn new(entries: &[u32]) -> Self {
        let mut v = BranchingVector::default();
        for &a in entries {
            v.push(a, 1);
        }
        v
    }

    pub fn push(&mut self, value: u32, multiplicity: u64) {
        assert!(value >= 1, "branching vector entries must be positive");
        if multiplicity > 0 {
            *self.counts.entry(value).or_default() += multiplicity;
        }
    }

    pub fn extend(&mut self, other: &BranchingVector) {
        for (&a, &m) in &other.counts {
            self.push(a, m);
        }
    }

    /// Total number of entries, counting multiplicity.
    pub fn len(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn min_entry(&self) -> Option<u32> {
        self.counts.keys().next().copied()
    }

    /// `(value, multiplicity)` pairs in increasing value order.
    pub fn counts(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&a, &m)| (a, m))
    }

    /// Entries in non-decreasing order. Only sensible for short vectors.
    pub fn entries(&self) -> Vec<u32> {
        self.counts.iter().flat_map(|(&a, &m)| std::iter::repeat_n(a, m as usize)).collect()
    }

    /// `sum_i x^(-a_i)`.
    pub fn characteristic(&self, x: f64) -> f64 {
        self.counts.iter().map(|(&a, &m)| m as f64 * x.powi(-(a as i32))).sum()
    }

    pub fn branching_number(&self) -> f64 {
        branching_number(self)
    }
}

impl fmt::Display for BranchingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (a, m) in self.counts() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if m <= 4 {
                let parts: Vec<String> = (0..m).map(|_| a.to_string()).collect();
                write!(f, "{}", parts.join(","))?;
            } else {
                write!(f, "{a}^{m}")?;
            }
        }
        write!(f, ")")
    }
}

impl Serialize for BranchingVector {
    /// Short vectors serialize as a flat list, long ones as `[value, multiplicity]` pairs.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.len() <= 64 {
            self.entries().serialize(s)
        } else {
            self.counts().collect::<Vec<_>>().serialize(s)
        }
    }
}

const TOLERANCE: f64 = 1e-12;

/// The root `x > 1` of `sum_i x^(-a_i) = 1`, by bisection on `[1, |v|]`. A
/// single-entry vector has branching number 1.
pub fn branching_number(v: &BranchingVector) -> f64 {
    let len = v.len();
    assert!(len >= 1, "empty branching vector");
    if len == 1 {
        return 1.0;
    }
    // sum_i |v|^(-a_i) <= |v| * |v|^(-1) = 1, so the root lies in (1, |v|].
    let (mut lo, mut hi) = (1.0f64, len as f64);
    while hi - lo > TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if v.characteristic(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Binomial coefficient as `u64`; exact for the small arguments used here.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The vector of `2^p` entries in which `p + 1 + 2i` occurs `C(p, i)` times:
/// `p` binary splits costing 1 or at least 3 followed by an exact solve
/// costing at least 1.
pub fn r_vector(p: u32) -> BranchingVector {
    compose_chain_vector(&[ChainLeaf { cost: 0, frontier: p, s_bound: 1 }])
}

/// One first-stage outcome: accumulated `cost`, the frontier size `p` still to
/// be branched on, and a lower bound `s_bound` on the exact-solve cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLeaf {
    pub cost: u32,
    pub frontier: u32,
    pub s_bound: u32,
}

/// Concatenates, for every leaf, the entries `c + p + s + 2i` with
/// multiplicity `C(p, i)`.
pub fn compose_chain_vector(leaves: &[ChainLeaf]) -> BranchingVector {
    let mut v = BranchingVector::default();
    for leaf in leaves {
        assert!(leaf.s_bound >= 1, "exact solve costs at least one deletion");
        let base = leaf.cost + leaf.frontier + leaf.s_bound;
        for i in 0..=leaf.frontier {
            v.push(base + 2 * i, binomial(leaf.frontier as u64, i as u64));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bn(entries: &[u32]) -> f64 {
        BranchingVector::new(entries).branching_number()
    }

    #[test]
    fn closed_form_cases() {
        assert!((bn(&[2, 2]) - 2f64.sqrt()).abs() < 1e-9);
        assert!((bn(&[3, 3]) - 2f64.powf(1.0 / 3.0)).abs() < 1e-9);
        assert!((bn(&[1, 1]) - 2.0).abs() < 1e-9);
        assert_eq!(bn(&[5]), 1.0);
        // golden ratio for (1, 2)
        assert!((bn(&[1, 2]) - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn quoted_rule_bounds() {
        assert!(bn(&[3, 3]) < 1.26);
        let b14 = bn(&[1, 4]);
        assert!((b14 - 1.380278).abs() < 1e-6 && b14 < 1.381);
        assert!(bn(&[2, 2]) < 1.415);
        assert!(bn(&[5, 8, 5, 8, 5, 8, 5, 8]) < 1.404);
        assert!(bn(&[5, 8, 5, 8, 3, 6]) < 1.402);
        assert!(bn(&[3, 6, 3, 6]) < 1.398);
    }

    #[test]
    fn r_vector_shapes() {
        assert_eq!(r_vector(2).entries(), vec![3, 5, 5, 7]);
        assert_eq!(r_vector(0).entries(), vec![1]);
        assert_eq!(r_vector(5).len(), 32);
        let r5 = r_vector(5).branching_number();
        assert!((r5 * 1000.0).round() / 1000.0 == 1.406, "R(5) gives {r5}");
    }

    #[test]
    fn chain_composition() {
        let leaf = |c, p, s| ChainLeaf { cost: c, frontier: p, s_bound: s };
        assert_eq!(compose_chain_vector(&[leaf(0, 2, 1)]).entries(), vec![3, 5, 5, 7]);
        assert_eq!(compose_chain_vector(&[leaf(0, 0, 1)]).entries(), vec![1]);
        assert_eq!(compose_chain_vector(&[leaf(0, 2, 2)]).entries(), vec![4, 6, 6, 8]);
        assert_eq!(compose_chain_vector(&[leaf(1, 0, 1), leaf(3, 1, 1)]).entries(), vec![2, 5, 7]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!((0..=20).map(|i| binomial(20, i)).sum::<u64>(), 1 << 20);
    }

    #[test]
    fn display_compacts_long_runs() {
        assert_eq!(BranchingVector::new(&[3, 5, 5, 7]).to_string(), "(3,5,5,7)");
        assert_eq!(r_vector(6).to_string(), "(7,9^6,11^15,13^20,15^15,17^6,19)");
    }

    proptest! {
        #[test]
        fn root_satisfies_equation(v in prop::collection::vec(1u32..12, 2..10)) {
            let bv = BranchingVector::new(&v);
            let x = bv.branching_number();
            prop_assert!((bv.characteristic(x) - 1.0).abs() <= 1e-8);
        }

        #[test]
        fn permutation_invariant(mut v in prop::collection::vec(1u32..12, 2..10)) {
            let a = bn(&v);
            v.reverse();
            prop_assert_eq!(a, bn(&v));
        }

        #[test]
        fn appending_increases(v in prop::collection::vec(1u32..10, 2..8), extra in 1u32..10) {
            let mut w = v.clone();
            w.push(extra);
            prop_assert!(bn(&w) > bn(&v));
        }

        #[test]
        fn raising_an_entry_decreases(v in prop::collection::vec(1u32..10, 2..8), idx in 0usize..8) {
            let idx = idx % v.len();
            let mut w = v.clone();
            w[idx] += 1;
            prop_assert!(bn(&w) < bn(&v));
        }

        #[test]
        fn r_vector_has_power_of_two_entries(p in 0u32..20) {
            prop_assert_eq!(r_vector(p).len(), 1u64 << p);
        }
    }
}
