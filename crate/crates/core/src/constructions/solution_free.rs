//! Subsets of `[1, N]` with no nontrivial solution to
//! `b_1 + … + b_{2k} = 2k·b_0`, by the sphere construction.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionFreeSet {
    pub range: usize,
    pub k: usize,
    pub elements: Vec<usize>,
}

impl SolutionFreeSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Exact check via ordered-sum counts: a nontrivial solution exists iff
    /// some `2k·b` has more than one ordered representation.
    pub fn is_solution_free(&self) -> bool {
        if self.elements.iter().any(|&b| b == 0 || b > self.range) {
            return false;
        }
        is_solution_free(&self.elements, self.k)
    }
}

pub(crate) fn is_solution_free(set: &[usize], k: usize) -> bool {
    let Some(&max) = set.iter().max() else {
        return true;
    };
    let terms = 2 * k;
    let mut ways = vec![0u128; 1];
    ways[0] = 1;
    for _ in 0..terms {
        let mut next = vec![0u128; ways.len() + max];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for &b in set {
                next[s + b] = next[s + b].saturating_add(w);
            }
        }
        ways = next;
    }
    set.iter().all(|&b| ways[terms * b] == 1)
}

/// Largest sphere among base-`d` vectors with digits below `cap`, over
/// values in `0..range`, shifted into `1..=range`. With `cap = 2` the whole
/// cube works, since digitwise sums cannot carry.
fn sphere_candidate(range: usize, d: usize, cap: usize) -> Vec<usize> {
    let mut by_norm: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut cube = Vec::new();
    'values: for v in 0..range {
        let mut x = v;
        let mut norm = 0;
        while x > 0 {
            let digit = x % d;
            if digit >= cap {
                continue 'values;
            }
            norm += digit * digit;
            x /= d;
        }
        cube.push(v + 1);
        by_norm.entry(norm).or_default().push(v + 1);
    }
    if cap == 2 {
        return cube;
    }
    by_norm
        .into_values()
        .fold(Vec::new(), |best, s| if s.len() > best.len() { s } else { best })
}

/// Base sizes tried by the sphere search.
const MAX_BASE: usize = 64;

/// Best sphere construction over bases `d` and digit caps `cap` with
/// `2k(cap-1) < d`, so that sums of `2k` digits never carry.
pub fn solution_free_set(range: usize, k: usize) -> SolutionFreeSet {
    assert!(k >= 1, "k must be positive");
    let mut best: Vec<usize> = if range >= 1 { vec![1] } else { Vec::new() };
    for d in 2..=MAX_BASE.min(range.max(2) + 2 * k) {
        for cap in 2..=d {
            if 2 * k * (cap - 1) >= d {
                break;
            }
            let cand = sphere_candidate(range, d, cap);
            if cand.len() > best.len() {
                best = cand;
            }
        }
    }
    SolutionFreeSet {
        range,
        k,
        elements: best,
    }
}

/// 3-AP-free subset of `[1, N]`.
pub fn behrend_set(range: usize) -> SolutionFreeSet {
    solution_free_set(range, 1)
}
