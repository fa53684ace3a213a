//! Decompositions of 3-chromatic patterns around a critical edge, and the
//! cleanup and refinement steps that turn a dense host into a near-bipartite
//! or near-`C_7`-like skeleton.

mod cleanup;
mod pipeline;
mod refine;

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::invariants::{is_bipartite, odd_girth};
use crate::partition::VertexPartition;

pub use cleanup::{cleanup_short_cycles, CleanupReport, CleanupResult};
pub use pipeline::{find_h_copies_pipeline, AnchorTally, PipelineCase, PipelineOptions, PipelineResult, PipelineTrace};
pub use refine::{classify_removed_edges, refine_bipartite, refine_c7, ClaimCheck, RefinedKind, RefinedPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chi3Mode {
    /// Parts `A_1 = {x}, A_2 = {y}, A_3, B` with edges inside the triangle
    /// `A_1 A_2 A_3` or between `A_3` and `B`.
    Triangle,
    /// Parts `A_1 = {x}, A_2 = {y}, …, A_{2k+1}` with edges only between
    /// cyclically consecutive parts. Needs odd girth at least `2k+1`, `k >= 2`.
    Cycle { k: usize },
}

#[derive(Clone, Debug)]
pub struct Chi3Decomposition {
    pub mode: Chi3Mode,
    pub edge: Edge,
    /// Oriented critical edge: `x` sits alone in the first part, `y` in the
    /// second.
    pub x: usize,
    pub y: usize,
    pub parts: VertexPartition,
}

impl Chi3Decomposition {
    /// Part index of every vertex. In cycle mode this is a homomorphism onto
    /// `C_{2k+1}` with vertices `0..2k+1` in cyclic order.
    pub fn part_map(&self) -> &[usize] {
        self.parts.assignment()
    }

    pub fn part_members(&self, p: usize) -> Vec<usize> {
        self.parts.members(p)
    }
}

/// Odd-cycle length usable in cycle mode: `(g - 1) / 2` for odd girth `g`.
pub fn max_cycle_k(h: &Graph) -> Option<usize> {
    odd_girth(h).value.map(|g| (g - 1) / 2)
}

fn bfs_distances(g: &Graph, root: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for w in g.neighbors(u).iter() {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn named(parts: Vec<Vec<usize>>, names: impl Fn(usize) -> String) -> Vec<(String, Vec<usize>)> {
    parts.into_iter().enumerate().map(|(i, p)| (names(i), p)).collect()
}

/// Decomposes `h` around the critical edge `x y`. Fails when `h - xy` is not
/// bipartite or `h` is, i.e. unless `χ(h) = 3` with `xy` critical.
pub fn chi3_decompose(h: &Graph, (x, y): (usize, usize), mode: Chi3Mode) -> Result<Chi3Decomposition> {
    h.check_vertex(x)?;
    h.check_vertex(y)?;
    if !h.has_edge(x, y) {
        return Err(Error::AnchorNotEdge(format!("{x}-{y} is not an edge of the pattern")));
    }
    let edge = Edge::ordered(x, y);
    let reduced = h.without_edges([&edge]);
    let Some(bip) = is_bipartite(&reduced) else {
        return Err(Error::Precondition(format!("{x}-{y} is not critical: the rest is not bipartite")));
    };
    if is_bipartite(h).is_some() {
        return Err(Error::Precondition("pattern is bipartite".into()));
    }
    let side = bip.sides(h.n());
    if side[x] != side[y] {
        return Err(Error::Verification(format!("{x} and {y} on opposite sides of a bipartition")));
    }
    let n = h.n();
    let same = |v: usize| side[v] == side[x];

    let parts = match mode {
        Chi3Mode::Triangle => {
            let a3: Vec<usize> = (0..n).filter(|&v| !same(v)).collect();
            let b: Vec<usize> = (0..n).filter(|&v| same(v) && v != x && v != y).collect();
            let mut p = VertexPartition::from_parts(
                n,
                &named(vec![vec![x], vec![y], a3, b], |i| ["A_1", "A_2", "A_3", "B"][i].to_string()),
            )?;
            p.allow(0, 1);
            p.allow(1, 2);
            p.allow(0, 2);
            p.allow(2, 3);
            p
        }
        Chi3Mode::Cycle { k } => {
            if k < 2 {
                return Err(Error::InvalidInput(format!("cycle mode needs k >= 2, got {k}")));
            }
            if !odd_girth(h).at_least(2 * k + 1) {
                return Err(Error::Precondition(format!("odd girth is below {}", 2 * k + 1)));
            }
            cycle_parts(&reduced, x, y, k, &same)?
        }
    };
    if let Some(e) = parts.violations(h).first() {
        return Err(Error::Verification(format!("edge {e} leaves the allowed part pairs")));
    }
    Ok(Chi3Decomposition {
        mode,
        edge,
        x,
        y,
        parts,
    })
}

fn cycle_parts(reduced: &Graph, x: usize, y: usize, k: usize, same: &dyn Fn(usize) -> bool) -> Result<VertexPartition> {
    let n = reduced.n();
    let dx = bfs_distances(reduced, x);
    let dy = bfs_distances(reduced, y);
    for v in 0..n {
        if dx[v] < k && dy[v] < k {
            return Err(Error::Verification(format!(
                "vertex {v} lies in X_{} and Y_{}, closing a short odd walk",
                dx[v] + 1,
                dy[v] + 1
            )));
        }
    }
    let layer = |d: &[usize], i: usize| -> Vec<usize> { (0..n).filter(|&v| d[v] == i - 1).collect() };
    let covered = |v: usize| dx[v] < k || dy[v] < k;
    let left_rest: Vec<usize> = (0..n).filter(|&v| !covered(v) && same(v)).collect();
    let right_rest: Vec<usize> = (0..n).filter(|&v| !covered(v) && !same(v)).collect();
    // Y_k lies on x's side exactly when k is odd, and absorbs the leftover
    // of its own side.
    let (with_yk, alone) = if k % 2 == 0 {
        (right_rest, left_rest)
    } else {
        (left_rest, right_rest)
    };

    let mut parts = vec![layer(&dx, 1)];
    for i in 1..k {
        parts.push(layer(&dy, i));
    }
    let mut last_y = layer(&dy, k);
    last_y.extend(with_yk);
    last_y.sort_unstable();
    parts.push(last_y);
    parts.push(alone);
    for i in (2..=k).rev() {
        parts.push(layer(&dx, i));
    }
    let len = 2 * k + 1;
    debug_assert_eq!(parts.len(), len);
    let mut p = VertexPartition::from_parts(n, &named(parts, |i| format!("A_{}", i + 1)))?;
    for i in 0..len {
        p.allow(i, (i + 1) % len);
    }
    Ok(p)
}
