//! Named graphs and seeded random gadgets.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::rng::{self, Rng};

pub fn complete(n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            b.add_edge(u, v);
        }
    }
    b.build()
}

/// `C_n` on `0..n` with edges `i, i+1 (mod n)`. Needs `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    let mut b = GraphBuilder::new(n);
    for i in 0..n {
        b.add_edge(i, (i + 1) % n);
    }
    b.build()
}

pub fn path(n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for i in 1..n {
        b.add_edge(i - 1, i);
    }
    b.build()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    complete_multipartite(&[a, b])
}

/// Parts are consecutive id ranges in the order given.
pub fn complete_multipartite(sizes: &[usize]) -> Graph {
    let n = sizes.iter().sum();
    let mut part = Vec::with_capacity(n);
    for (p, &s) in sizes.iter().enumerate() {
        part.extend(std::iter::repeat_n(p, s));
    }
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if part[u] != part[v] {
                b.add_edge(u, v);
            }
        }
    }
    b.build()
}

/// Outer 5-cycle `0..5`, spokes `i ~ i+5`, inner pentagram on `5..10`.
pub fn petersen() -> Graph {
    let mut b = GraphBuilder::new(10);
    for i in 0..5 {
        b.add_edge(i, (i + 1) % 5);
        b.add_edge(i, i + 5);
        b.add_edge(i + 5, (i + 2) % 5 + 5);
    }
    b.build()
}

/// Blow-up `H[s_1, …, s_h]`: vertex `i` becomes an independent class of size
/// `sizes[i]`, edges become complete bipartite graphs. Returns the graph and
/// the class of every new vertex.
pub fn blowup(h: &Graph, sizes: &[usize]) -> Result<(Graph, Vec<usize>)> {
    if sizes.len() != h.n() {
        return Err(Error::InvalidInput(format!(
            "blow-up needs {} multiplicities, got {}",
            h.n(),
            sizes.len()
        )));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidInput("blow-up multiplicities must be positive".into()));
    }
    let class: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
        .collect();
    let n = class.len();
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if h.has_edge(class[u], class[v]) {
                b.add_edge(u, v);
            }
        }
    }
    Ok((b.build(), class))
}

pub fn disjoint_union(graphs: &[&Graph]) -> Graph {
    let n = graphs.iter().map(|g| g.n()).sum();
    let mut b = GraphBuilder::new(n);
    let mut off = 0;
    for g in graphs {
        for e in g.edges() {
            b.add_edge(off + e.u, off + e.v);
        }
        off += g.n();
    }
    b.build()
}

/// Two copies of `K_r` sharing vertex `0`: cliques on `0, 1..r` and on
/// `0, r..2r-1`. For `r = 3` this is the bowtie.
pub fn clique_pair(r: usize) -> Graph {
    let n = (2 * r).saturating_sub(1).max(1);
    let mut b = GraphBuilder::new(n);
    for side in [1..r, r..n] {
        let members: Vec<usize> = std::iter::once(0).chain(side).collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                b.add_edge(u, v);
            }
        }
    }
    b.build()
}

/// Appends a path of `len` new vertices hanging off `at`.
pub fn with_pendant_path(g: &Graph, at: usize, len: usize) -> Graph {
    let mut b = GraphBuilder::new(g.n() + len);
    for e in g.edges() {
        b.add_edge(e.u, e.v);
    }
    let mut prev = at;
    for i in 0..len {
        let v = g.n() + i;
        b.add_edge(prev, v);
        prev = v;
    }
    b.build()
}

/// Erdős–Rényi `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng::stream(seed, "gnp", n as u64);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                b.add_edge(u, v);
            }
        }
    }
    b.build()
}

/// Random bipartite graph between `0..a` and `a..a+b` with edge probability `p`.
pub fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng::stream(seed, "random-bipartite", (a * 4096 + b) as u64);
    let mut gb = GraphBuilder::new(a + b);
    for u in 0..a {
        for v in a..a + b {
            if rng.gen_bool(p) {
                gb.add_edge(u, v);
            }
        }
    }
    gb.build()
}

fn switch_rounds(edges: usize) -> usize {
    10 * edges
}

/// Edges `(left, right)` of a `d`-regular bipartite graph with both sides of
/// size `a`: a random circulant `i ~ i + s (mod a)` over a random `d`-subset of
/// shifts, relabeled on both sides and mixed by double-edge switches.
pub fn regular_bipartite_edges(a: usize, d: usize, rng: &mut Rng) -> Result<Vec<(usize, usize)>> {
    if d > a {
        return Err(Error::InfeasibleDegree(format!(
            "degree {d} exceeds side size {a}"
        )));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut shifts: Vec<usize> = (0..a).collect();
    shifts.shuffle(rng);
    shifts.truncate(d);
    let mut left: Vec<usize> = (0..a).collect();
    let mut right: Vec<usize> = (0..a).collect();
    left.shuffle(rng);
    right.shuffle(rng);

    let mut edges = Vec::with_capacity(a * d);
    let mut adj: Vec<BitSet> = (0..a).map(|_| BitSet::new(a)).collect();
    for i in 0..a {
        for &s in &shifts {
            let (l, r) = (left[i], right[(i + s) % a]);
            edges.push((l, r));
            adj[l].insert(r);
        }
    }
    if d < a {
        for _ in 0..switch_rounds(edges.len()) {
            let i = rng.gen_range(0..edges.len());
            let j = rng.gen_range(0..edges.len());
            let (l1, r1) = edges[i];
            let (l2, r2) = edges[j];
            if l1 == l2 || r1 == r2 || adj[l1].contains(r2) || adj[l2].contains(r1) {
                continue;
            }
            adj[l1].remove(r1);
            adj[l2].remove(r2);
            adj[l1].insert(r2);
            adj[l2].insert(r1);
            edges[i] = (l1, r2);
            edges[j] = (l2, r1);
        }
    }
    edges.sort_unstable();
    Ok(edges)
}

/// `d`-regular bipartite graph between two sides of equal size.
/// Left side is `0..a`, right side `a..a+b`.
pub fn random_regular_bipartite(a: usize, b: usize, d: usize, seed: u64) -> Result<Graph> {
    if a != b {
        return Err(Error::InfeasibleDegree(format!(
            "regular bipartite gadgets need equal sides, got {a} and {b}"
        )));
    }
    let mut rng = rng::stream(seed, "regular-bipartite", (a * 4096 + d) as u64);
    let edges = regular_bipartite_edges(a, d, &mut rng)?;
    let mut gb = GraphBuilder::new(a + b);
    for (l, r) in edges {
        gb.add_edge(l, a + r);
    }
    Ok(gb.build())
}

/// Edges `(u, v)`, `u < v`, of a `d`-regular simple graph on `0..m`: a random
/// symmetric circulant, relabeled and mixed by double-edge switches.
pub fn regular_graph_edges(m: usize, d: usize, rng: &mut Rng) -> Result<Vec<(usize, usize)>> {
    if d == 0 {
        return Ok(Vec::new());
    }
    if d >= m {
        return Err(Error::InfeasibleDegree(format!(
            "degree {d} needs more than {m} vertices"
        )));
    }
    if (m * d) % 2 == 1 {
        return Err(Error::InfeasibleDegree(format!(
            "no {d}-regular graph on {m} vertices (odd degree sum)"
        )));
    }
    let mut shifts: Vec<usize> = (1..m.div_ceil(2)).collect();
    shifts.shuffle(rng);
    shifts.truncate(d / 2);
    if d % 2 == 1 {
        shifts.push(m / 2);
    }
    let mut label: Vec<usize> = (0..m).collect();
    label.shuffle(rng);

    let mut adj: Vec<BitSet> = (0..m).map(|_| BitSet::new(m)).collect();
    let mut edges = Vec::with_capacity(m * d / 2);
    for i in 0..m {
        for &s in &shifts {
            let j = (i + s) % m;
            let (u, v) = (label[i], label[j]);
            if !adj[u].contains(v) {
                adj[u].insert(v);
                adj[v].insert(u);
                edges.push((u, v));
            }
        }
    }
    debug_assert_eq!(edges.len(), m * d / 2);
    for _ in 0..switch_rounds(edges.len()) {
        let i = rng.gen_range(0..edges.len());
        let j = rng.gen_range(0..edges.len());
        let (a, b) = edges[i];
        let (mut c, mut e) = edges[j];
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut c, &mut e);
        }
        // (a,b),(c,e) -> (a,c),(b,e)
        if a == c || a == e || b == c || b == e || adj[a].contains(c) || adj[b].contains(e) {
            continue;
        }
        adj[a].remove(b);
        adj[b].remove(a);
        adj[c].remove(e);
        adj[e].remove(c);
        adj[a].insert(c);
        adj[c].insert(a);
        adj[b].insert(e);
        adj[e].insert(b);
        edges[i] = (a.min(c), a.max(c));
        edges[j] = (b.min(e), b.max(e));
    }
    let mut out: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    out.sort_unstable();
    Ok(out)
}

pub fn random_regular_graph(m: usize, d: usize, seed: u64) -> Result<Graph> {
    let mut rng = rng::stream(seed, "regular-graph", (m * 4096 + d) as u64);
    let edges = regular_graph_edges(m, d, &mut rng)?;
    Graph::from_edges(m, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn petersen_shape() {
        let p = petersen();
        assert_eq!(p.m(), 15);
        assert!(p.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn regular_bipartite_examples() {
        assert_eq!(random_regular_bipartite(5, 5, 5, 1).unwrap(), complete_bipartite(5, 5));
        let g = random_regular_bipartite(6, 6, 1, 2).unwrap();
        assert_eq!(g.m(), 6);
        assert!(g.degrees().iter().all(|&d| d == 1));
        let g = random_regular_bipartite(8, 8, 3, 3).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 3));
        for e in g.edges() {
            assert!(e.u < 8 && e.v >= 8);
        }
        assert!(random_regular_bipartite(4, 5, 1, 0).is_err());
        assert!(random_regular_bipartite(4, 4, 5, 0).is_err());
    }

    #[test]
    fn regular_bipartite_is_seed_deterministic() {
        let a = random_regular_bipartite(20, 20, 7, 11).unwrap();
        let b = random_regular_bipartite(20, 20, 7, 11).unwrap();
        let c = random_regular_bipartite(20, 20, 7, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn regular_graph_rejects_infeasible() {
        assert!(random_regular_graph(5, 3, 0).is_err());
        assert!(random_regular_graph(4, 4, 0).is_err());
        assert_eq!(random_regular_graph(6, 0, 0).unwrap().m(), 0);
    }

    #[test]
    fn blowup_of_edge() {
        let (g, class) = blowup(&complete(2), &[2, 3]).unwrap();
        assert_eq!(g, complete_bipartite(2, 3));
        assert_eq!(class, vec![0, 0, 1, 1, 1]);
        assert!(blowup(&complete(2), &[0, 1]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn regular_bipartite_is_regular(a in 1usize..=64, frac in 0.0f64..=1.0, seed in any::<u64>()) {
            let d = ((a as f64) * frac).round() as usize;
            let g = random_regular_bipartite(a, a, d, seed).unwrap();
            prop_assert!(g.degrees().iter().all(|&x| x == d));
            for e in g.edges() {
                prop_assert!(e.u < a && e.v >= a);
            }
        }

        #[test]
        fn regular_graph_is_regular(m in 2usize..=64, frac in 0.0f64..1.0, seed in any::<u64>()) {
            let mut d = ((m as f64 - 1.0) * frac).floor() as usize;
            if (m * d) % 2 == 1 { d -= 1; }
            let g = random_regular_graph(m, d, seed).unwrap();
            prop_assert!(g.degrees().iter().all(|&x| x == d));
        }
    }
}
