//! Exact structural invariants of small graphs.

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::budget::{Budget, Meter, Ticker};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Largest graph accepted by the exact coloring routines.
pub const MAX_COLORING_VERTICES: usize = 64;

/// Shortest odd cycle. `value == None` means the graph is bipartite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddGirth {
    pub value: Option<usize>,
    pub witness: Option<Vec<usize>>,
}

impl OddGirth {
    pub fn is_infinite(&self) -> bool {
        self.value.is_none()
    }

    /// True when every odd cycle has length at least `len`.
    pub fn at_least(&self, len: usize) -> bool {
        self.value.is_none_or(|g| g >= len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalEdgeSet {
    pub chi: usize,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bipartition {
    /// `side[v]` is `false` for left, `true` for right.
    pub fn sides(&self, n: usize) -> Vec<bool> {
        let mut side = vec![false; n];
        for &v in &self.right {
            side[v] = true;
        }
        side
    }
}

fn masks(g: &Graph) -> Result<Vec<u64>> {
    if g.n() > MAX_COLORING_VERTICES {
        return Err(Error::SizeLimit {
            what: "exact coloring",
            size: g.n(),
            limit: MAX_COLORING_VERTICES,
        });
    }
    Ok((0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, u| m | 1 << u))
        .collect())
}

fn max_clique(adj: &[u64], ticker: &mut Ticker<'_>) -> Result<usize> {
    fn grow(adj: &[u64], size: usize, cand: u64, best: &mut usize, ticker: &mut Ticker<'_>) -> Result<()> {
        ticker.tick()?;
        if cand == 0 {
            *best = (*best).max(size);
            return Ok(());
        }
        let mut rest = cand;
        while rest != 0 {
            if size + rest.count_ones() as usize <= *best {
                return Ok(());
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grow(adj, size + 1, rest & adj[v], best, ticker)?;
        }
        Ok(())
    }
    let n = adj.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    grow(adj, 0, all, &mut best, ticker)?;
    Ok(best)
}

/// DSATUR greedy coloring; returns the number of colors used.
fn dsatur(adj: &[u64]) -> usize {
    let n = adj.len();
    let mut color = vec![usize::MAX; n];
    let mut classes: Vec<u64> = Vec::new();
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| {
                let sat = classes.iter().filter(|&&c| c & adj[v] != 0).count();
                (sat, adj[v].count_ones(), std::cmp::Reverse(v))
            })
            .expect("uncolored vertex");
        let c = (0..classes.len())
            .find(|&c| classes[c] & adj[v] == 0)
            .unwrap_or_else(|| {
                classes.push(0);
                classes.len() - 1
            });
        classes[c] |= 1 << v;
        color[v] = c;
    }
    classes.len()
}

fn try_color(adj: &[u64], k: usize, ticker: &mut Ticker<'_>) -> Result<Option<Vec<usize>>> {
    fn rec(
        adj: &[u64],
        k: usize,
        uncolored: u64,
        classes: &mut Vec<u64>,
        ticker: &mut Ticker<'_>,
    ) -> Result<bool> {
        ticker.tick()?;
        if uncolored == 0 {
            return Ok(true);
        }
        // Most constrained vertex first.
        let mut pick = usize::MAX;
        let mut pick_key = (0usize, 0usize);
        let mut rest = uncolored;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let sat = classes.iter().filter(|&&c| c & adj[v] != 0).count();
            let key = (sat + 1, (adj[v] & uncolored).count_ones() as usize);
            if key > pick_key {
                pick_key = key;
                pick = v;
            }
        }
        let v = pick;
        if pick_key.0 - 1 == k {
            return Ok(false);
        }
        for c in 0..classes.len() {
            if classes[c] & adj[v] == 0 {
                classes[c] |= 1 << v;
                if rec(adj, k, uncolored & !(1 << v), classes, ticker)? {
                    return Ok(true);
                }
                classes[c] &= !(1 << v);
            }
        }
        if classes.len() < k {
            classes.push(1 << v);
            if rec(adj, k, uncolored & !(1 << v), classes, ticker)? {
                return Ok(true);
            }
            classes.pop();
        }
        Ok(false)
    }
    let n = adj.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut classes = Vec::new();
    if !rec(adj, k, all, &mut classes, ticker)? {
        return Ok(None);
    }
    let mut color = vec![0; n];
    for (c, &class) in classes.iter().enumerate() {
        for (v, slot) in color.iter_mut().enumerate() {
            if class >> v & 1 == 1 {
                *slot = c;
            }
        }
    }
    Ok(Some(color))
}

/// A proper coloring with at most `k` colors, if one exists.
pub fn k_coloring(g: &Graph, k: usize, budget: Budget) -> Result<Option<Vec<usize>>> {
    let adj = masks(g)?;
    if g.n() == 0 {
        return Ok(Some(Vec::new()));
    }
    if k == 0 {
        return Ok(None);
    }
    let meter = Meter::new(budget, "k-coloring");
    let mut ticker = Ticker::new(&meter);
    let r = try_color(&adj, k, &mut ticker)?;
    ticker.flush()?;
    Ok(r)
}

pub fn chromatic_number_with(g: &Graph, budget: Budget) -> Result<usize> {
    let adj = masks(g)?;
    if g.n() == 0 {
        return Ok(0);
    }
    let meter = Meter::new(budget, "chromatic number");
    let mut ticker = Ticker::new(&meter);
    let lower = max_clique(&adj, &mut ticker)?;
    let upper = dsatur(&adj);
    for k in lower..upper {
        if try_color(&adj, k, &mut ticker)?.is_some() {
            ticker.flush()?;
            return Ok(k);
        }
    }
    ticker.flush()?;
    Ok(upper)
}

/// Size of a largest clique, for graphs on at most 64 vertices.
pub fn clique_number_with(g: &Graph, budget: Budget) -> Result<usize> {
    let adj = masks(g)?;
    let meter = Meter::new(budget, "clique number");
    let mut ticker = Ticker::new(&meter);
    let best = max_clique(&adj, &mut ticker)?;
    ticker.flush()?;
    Ok(best)
}

/// Exact chromatic number for graphs on at most 64 vertices.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    chromatic_number_with(g, Budget::default())
}

/// Edges whose deletion lowers the chromatic number.
pub fn critical_edges(h: &Graph) -> Result<CriticalEdgeSet> {
    let chi = chromatic_number(h)?;
    let edges = h
        .edges()
        .into_par_iter()
        .map(|e| -> Result<Option<Edge>> {
            let reduced = h.without_edges([&e]);
            Ok((chromatic_number(&reduced)? < chi).then_some(e))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(CriticalEdgeSet { chi, edges })
}

/// Shortest odd closed walk through `root` no longer than `bound`, as
/// (length, vertices starting at root), over adjacency rows. The walk is a
/// simple cycle whenever no shorter odd cycle exists anywhere in the graph.
pub(crate) fn shortest_odd_walk(rows: &[BitSet], root: usize, bound: usize) -> Option<(usize, Vec<usize>)> {
    let n = rows.len();
    let mut parent = vec![usize::MAX; n];
    let mut visited = BitSet::new(n);
    let mut frontier = BitSet::new(n);
    let mut next = BitSet::new(n);
    visited.insert(root);
    frontier.insert(root);
    let mut depth = 0;
    loop {
        for u in frontier.iter() {
            if rows[u].intersection_count(&frontier) > 0 {
                let mut hit = rows[u].clone();
                hit.intersect_with(&frontier);
                hit.retain_above(u);
                let Some(v) = hit.first() else { continue };
                let up = |mut x: usize| {
                    let mut path = vec![x];
                    while x != root {
                        x = parent[x];
                        path.push(x);
                    }
                    path
                };
                let mut cycle: Vec<usize> = up(u).into_iter().rev().collect();
                let back = up(v);
                cycle.extend(&back[..back.len() - 1]);
                return Some((2 * depth + 1, cycle));
            }
        }
        if 2 * (depth + 1) + 1 > bound {
            return None;
        }
        next.clear();
        for u in frontier.iter() {
            let mut fresh = rows[u].clone();
            fresh.difference_with(&visited);
            for w in fresh.iter() {
                parent[w] = u;
                visited.insert(w);
                next.insert(w);
            }
        }
        if next.is_empty() {
            return None;
        }
        std::mem::swap(&mut frontier, &mut next);
        depth += 1;
    }
}

/// Shortest odd cycle by BFS layer parity from every root. Among shortest
/// cycles the witness comes from the lowest root, closing at the
/// lexicographically first same-layer edge, with BFS parents taken from the
/// lowest-id neighbor in the previous layer.
pub fn odd_girth(g: &Graph) -> OddGirth {
    use std::sync::atomic::{AtomicUsize, Ordering};
    let best = AtomicUsize::new(usize::MAX);
    let found = (0..g.n())
        .into_par_iter()
        .filter_map(|r| {
            let bound = best.load(Ordering::Relaxed);
            let hit = shortest_odd_walk(g.rows(), r, bound)?;
            best.fetch_min(hit.0, Ordering::Relaxed);
            Some((hit.0, r, hit.1))
        })
        .min_by_key(|(len, r, _)| (*len, *r));
    match found {
        Some((len, _, cycle)) => OddGirth {
            value: Some(len),
            witness: Some(cycle),
        },
        None => OddGirth {
            value: None,
            witness: None,
        },
    }
}

/// Two-coloring by BFS; each component's lowest vertex goes left.
pub fn is_bipartite(g: &Graph) -> Option<Bipartition> {
    let n = g.n();
    let mut side: Vec<Option<bool>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let su = side[u].expect("queued vertices are colored");
            for w in g.neighbors(u).iter() {
                match side[w] {
                    None => {
                        side[w] = Some(!su);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (v, s) in side.into_iter().enumerate() {
        if s == Some(true) {
            right.push(v);
        } else {
            left.push(v);
        }
    }
    Some(Bipartition { left, right })
}

/// Whether `cycle` is a simple cycle of `g` of the given length.
pub fn is_cycle_in(g: &Graph, cycle: &[usize], len: usize) -> bool {
    if cycle.len() != len || len < 3 || cycle.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut seen = BitSet::new(g.n());
    for &v in cycle {
        if seen.contains(v) {
            return false;
        }
        seen.insert(v);
    }
    (0..len).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % len]))
}

/// Degree and odd-girth hypotheses that force bipartiteness when `k >= 2`.
/// For `k = 1` the implication is false (`K_4`), so nothing is claimed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartitenessCheck {
    pub k: usize,
    pub n: usize,
    pub min_degree: usize,
    /// `δ(G) > 2n/(2k+1)`.
    pub degree_holds: bool,
    pub odd_girth: Option<usize>,
    /// Odd girth at least `2k+1`.
    pub girth_holds: bool,
    pub bipartite: bool,
    /// `k >= 2` and both hypotheses hold, so the graph must be bipartite.
    pub applies: bool,
    /// Hypotheses hold but the graph is not bipartite. Never expected.
    pub counterexample: bool,
}

pub fn check_aes_hypothesis(g: &Graph, k: usize) -> BipartitenessCheck {
    let n = g.n();
    let min_degree = g.min_degree();
    let degree_holds = min_degree * (2 * k + 1) > 2 * n;
    let og = odd_girth(g);
    let girth_holds = og.at_least(2 * k + 1);
    let bipartite = og.is_infinite();
    let applies = k >= 2 && degree_holds && girth_holds;
    BipartitenessCheck {
        k,
        n,
        min_degree,
        degree_holds,
        odd_girth: og.value,
        girth_holds,
        bipartite,
        applies,
        counterexample: applies && !bipartite,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub min_degree: usize,
    pub chi: Option<usize>,
    pub odd_girth: Option<usize>,
    pub odd_girth_witness: Option<Vec<usize>>,
    pub critical_edges: Option<usize>,
    pub bipartite: bool,
}

/// Cheap invariants always, exact coloring ones when the graph is small
/// enough and they finish within `budget`.
pub fn summarize(g: &Graph, budget: Budget) -> GraphSummary {
    let og = odd_girth(g);
    let chi = chromatic_number_with(g, budget).ok();
    let critical_edges = chi.and_then(|chi| {
        let mut count = 0;
        for e in g.edges() {
            let reduced = g.without_edges([&e]);
            match chromatic_number_with(&reduced, budget) {
                Ok(c) if c < chi => count += 1,
                Ok(_) => {}
                Err(_) => return None,
            }
        }
        Some(count)
    });
    GraphSummary {
        n: g.n(),
        m: g.m(),
        min_degree: g.min_degree(),
        chi,
        bipartite: og.is_infinite(),
        odd_girth: og.value,
        odd_girth_witness: og.witness,
        critical_edges,
    }
}
