//! Immutable simple undirected graphs with bitset adjacency rows.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Default cap on the number of vertices accepted from user input.
pub const MAX_VERTICES: usize = 4096;

/// An undirected edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(Self::ordered(a, b))
    }

    /// Normalizes the endpoint order. Callers guarantee `a != b`.
    #[inline]
    pub(crate) fn ordered(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            Self { u: a, v: b }
        } else {
            Self { u: b, v: a }
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<BitSet>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|_| BitSet::new(n)).collect(),
            m: 0,
        }
    }

    /// Strict constructor: rejects out-of-range endpoints, loops and duplicates.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                cap: MAX_VERTICES,
            });
        }
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !b.add_edge(u, v) {
                let e = Edge::ordered(u, v);
                return Err(Error::DuplicateEdge(e.u, e.v));
            }
        }
        Ok(b.build())
    }

    /// Builds from adjacency rows, checking symmetry and loop-freeness.
    pub fn from_rows(rows: Vec<BitSet>) -> Result<Self> {
        let n = rows.len();
        let mut total = 0;
        for (v, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {v} has length {} but graph has {n} vertices",
                    row.len()
                )));
            }
            if row.contains(v) {
                return Err(Error::SelfLoop(v));
            }
            for u in row.iter() {
                if !rows[u].contains(v) {
                    return Err(Error::InvalidInput(format!("asymmetric adjacency {v}->{u}")));
                }
            }
            total += row.count();
        }
        Ok(Self {
            n,
            rows,
            m: total / 2,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    #[inline]
    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.rows[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Minimum degree; 0 for the graph on no vertices.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `|N(u) ∩ N(v)|` for distinct `u`, `v`.
    pub fn codegree(&self, u: usize, v: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Precondition("codegree needs distinct vertices".into()));
        }
        Ok(self.rows[u].intersection_count(&self.rows[v]))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Edges in lexicographic `(u, v)` order with `u < v`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for v in self.rows[u].iter() {
                if v > u {
                    out.push(Edge { u, v });
                }
            }
        }
        out
    }

    /// Induced subgraph on `vertices` (deduplicated, ascending). Returns the
    /// graph and the map from new ids to old ids.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &v in &keep {
            self.check_vertex(v)?;
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut b = GraphBuilder::new(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for w in self.rows[v].iter() {
                let j = index[w];
                if j != usize::MAX && j > i {
                    b.add_edge(i, j);
                }
            }
        }
        Ok((b.build(), keep))
    }

    /// Same vertex set, with the listed edges deleted (absent ones ignored).
    pub fn without_edges<'a, I: IntoIterator<Item = &'a Edge>>(&self, edges: I) -> Graph {
        let mut rows = self.rows.clone();
        let mut m = self.m;
        for e in edges {
            if rows[e.u].contains(e.v) {
                rows[e.u].remove(e.v);
                rows[e.v].remove(e.u);
                m -= 1;
            }
        }
        Graph { n: self.n, rows, m }
    }

    /// Same vertex set, with every edge touching `vertices` deleted.
    pub fn isolate_vertices(&self, vertices: &BitSet) -> Graph {
        let mut rows = self.rows.clone();
        for v in vertices.iter() {
            rows[v].clear();
        }
        for (v, row) in rows.iter_mut().enumerate() {
            if !vertices.contains(v) {
                row.difference_with(vertices);
            }
        }
        let m = rows.iter().map(BitSet::count).sum::<usize>() / 2;
        Graph { n: self.n, rows, m }
    }

    pub fn is_edge_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset(b))
    }

    /// Applies a vertex relabeling `perm[old] = new`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut b = GraphBuilder::new(self.n);
        for e in self.edges() {
            b.add_edge(perm[e.u], perm[e.v]);
        }
        b.build()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, e) in self.edges().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "])")
    }
}

/// Lenient mutable builder used by generators; duplicate insertions are no-ops.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    rows: Vec<BitSet>,
    m: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            rows: (0..n).map(|_| BitSet::new(n)).collect(),
            m: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Returns whether the edge was new. Panics on loops or out-of-range ids.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self-loop at {u}");
        if self.rows[u].contains(v) {
            return false;
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        self.m += 1;
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.rows[u].contains(v) {
            return false;
        }
        self.rows[u].remove(v);
        self.rows[v].remove(u);
        self.m -= 1;
        true
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Complete bipartite wiring between two vertex lists.
    pub fn join(&mut self, left: &[usize], right: &[usize]) {
        for &a in left {
            for &b in right {
                self.add_edge(a, b);
            }
        }
    }

    pub fn build(self) -> Graph {
        Graph {
            n: self.rows.len(),
            rows: self.rows,
            m: self.m,
        }
    }
}

impl From<&Graph> for GraphBuilder {
    fn from(g: &Graph) -> Self {
        Self {
            rows: g.rows.clone(),
            m: g.m,
        }
    }
}

/// Strict graph construction from a list of edges.
pub fn build_graph(n: usize, edges: &[Edge]) -> Result<Graph> {
    let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.u, e.v)).collect();
    Graph::from_edges(n, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, petersen};

    #[test]
    fn build_small_graphs() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.m(), 3);
        let e4 = Graph::from_edges(4, &[]).unwrap();
        assert_eq!(e4.m(), 0);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert!(c5.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(Graph::from_edges(3, &[(2, 2)]), Err(Error::SelfLoop(2))));
        assert!(matches!(
            Graph::from_edges(MAX_VERTICES + 1, &[]),
            Err(Error::TooManyVertices { .. })
        ));
        assert!(Edge::new(1, 1).is_err());
        assert_eq!(Edge::new(4, 2).unwrap(), Edge { u: 2, v: 4 });
    }

    #[test]
    fn induced_subgraphs() {
        let k4 = complete(4);
        let (k3, map) = k4.induced_subgraph(&[3, 1, 0]).unwrap();
        assert_eq!(k3, complete(3));
        assert_eq!(map, vec![0, 1, 3]);

        let c5 = cycle(5);
        let (e, _) = c5.induced_subgraph(&[2, 3]).unwrap();
        assert_eq!(e.m(), 1);

        // The outer ring 0..5 of the Petersen graph is a 5-cycle.
        let p = petersen();
        let (ring, _) = p.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(ring, cycle(5));
        assert!(p.induced_subgraph(&[10]).is_err());
    }

    #[test]
    fn degrees_and_codegrees() {
        assert_eq!(cycle(5).min_degree(), 2);
        let k4 = complete(4);
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert_eq!(k4.codegree(u, v).unwrap(), 2);
                }
            }
        }
        assert!(k4.codegree(1, 1).is_err());
        assert!(k4.codegree(0, 9).is_err());
    }

    #[test]
    fn from_rows_rejects_asymmetry() {
        let mut rows = vec![BitSet::new(2), BitSet::new(2)];
        rows[0].insert(1);
        assert!(Graph::from_rows(rows.clone()).is_err());
        rows[1].insert(0);
        assert_eq!(Graph::from_rows(rows).unwrap().m(), 1);
    }
}
