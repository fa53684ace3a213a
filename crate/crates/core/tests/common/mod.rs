//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the search code under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use removal_lab::graph::Graph;

/// Calls `f` with every injective map `0..h -> 0..n`.
pub fn injective_maps(n: usize, h: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, h: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
        if map.len() == h {
            f(map);
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                map.push(v);
                go(n, h, map, used, f);
                map.pop();
                used[v] = false;
            }
        }
    }
    go(n, h, &mut Vec::with_capacity(h), &mut vec![false; n], f);
}

pub fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Injective maps `h -> g` that preserve edges and pass `accept`.
pub fn naive_copies(h: &Graph, g: &Graph, accept: &dyn Fn(&[usize]) -> bool) -> u128 {
    let edges = edge_list(h);
    let mut count = 0u128;
    injective_maps(g.n(), h.n(), &mut |m| {
        if edges.iter().all(|&(a, b)| g.has_edge(m[a], m[b])) && accept(m) {
            count += 1;
        }
    });
    count
}

/// Blow-up built from scratch: class `i` has `sizes[i]` vertices.
pub fn naive_blowup(h: &Graph, sizes: &[usize]) -> (Graph, Vec<usize>) {
    let class: Vec<usize> = sizes.iter().enumerate().flat_map(|(i, &s)| vec![i; s]).collect();
    let mut edges = Vec::new();
    for u in 0..class.len() {
        for v in u + 1..class.len() {
            if h.has_edge(class[u], class[v]) {
                edges.push((u, v));
            }
        }
    }
    (Graph::from_edges(class.len(), &edges).unwrap(), class)
}

/// Backtracking homomorphism search in plain vertex order.
pub fn find_hom(h: &Graph, f: &Graph) -> Option<Vec<usize>> {
    fn go(h: &Graph, f: &Graph, map: &mut Vec<usize>) -> bool {
        let v = map.len();
        if v == h.n() {
            return true;
        }
        for t in 0..f.n() {
            if (0..v).all(|u| !h.has_edge(u, v) || f.has_edge(map[u], t)) {
                map.push(t);
                if go(h, f, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    let mut map = Vec::with_capacity(h.n());
    go(h, f, &mut map).then_some(map)
}

pub fn maps_edges(h: &Graph, f: &Graph, map: &[usize]) -> bool {
    map.len() == h.n() && edge_list(h).iter().all(|&(a, b)| f.has_edge(map[a], map[b]))
}

/// Rotation and reflection normal form, starting at the minimum and going
/// toward the smaller of its two cycle neighbours.
pub fn normalize_cycle(c: &[usize]) -> Vec<usize> {
    let len = c.len();
    let (i, _) = c.iter().enumerate().min_by_key(|p| p.1).unwrap();
    let fwd: Vec<usize> = (0..len).map(|j| c[(i + j) % len]).collect();
    let bwd: Vec<usize> = (0..len).map(|j| c[(i + len - j) % len]).collect();
    fwd.min(bwd)
}

/// Every simple cycle of the given length, normalized.
pub fn all_cycles(g: &Graph, len: usize) -> BTreeSet<Vec<usize>> {
    fn go(g: &Graph, len: usize, path: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let last = *path.last().unwrap();
        if path.len() == len {
            if g.has_edge(last, path[0]) {
                out.insert(normalize_cycle(path));
            }
            return;
        }
        for w in 0..g.n() {
            if w > path[0] && g.has_edge(last, w) && !path.contains(&w) {
                path.push(w);
                go(g, len, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        go(g, len, &mut vec![s], &mut out);
    }
    out
}

/// Triangles `a < b < c` by triple scan.
pub fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Two-coloring by DFS; `None` if an odd cycle exists.
pub fn two_color(g: &Graph) -> Option<Vec<u8>> {
    let mut color = vec![u8::MAX; g.n()];
    for s in 0..g.n() {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for w in 0..g.n() {
                if g.has_edge(u, w) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        stack.push(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
    }
    Some(color)
}

/// Shortest odd cycle length by BFS from every vertex over the doubled
/// (vertex, parity) graph.
pub fn naive_odd_girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    for s in 0..n {
        // Shortest odd closed walk through s bounds the odd girth and is
        // attained at some s.
        let mut dist = vec![[usize::MAX; 2]; n];
        dist[s][0] = 0;
        let mut queue = std::collections::VecDeque::from([(s, 0usize)]);
        while let Some((u, p)) = queue.pop_front() {
            for w in 0..n {
                if g.has_edge(u, w) && dist[w][1 - p] == usize::MAX {
                    dist[w][1 - p] = dist[u][p] + 1;
                    queue.push_back((w, 1 - p));
                }
            }
        }
        if dist[s][1] != usize::MAX {
            best = Some(best.map_or(dist[s][1], |b| b.min(dist[s][1])));
        }
    }
    best
}

/// Bowtie: triangles `0 1 2` and `0 3 4` sharing vertex 0.
pub fn bowtie() -> Graph {
    Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
}

/// Labeled bowtie copies from neighbourhood statistics: with `E` edges in
/// `G[N(c)]` and degrees `D_u` there, a center `c` carries
/// `4E^2 + 4E - 4 sum D_u^2` copies.
pub fn bowtie_formula(g: &Graph) -> u128 {
    let mut total = 0i128;
    for c in 0..g.n() {
        let nb: Vec<usize> = (0..g.n()).filter(|&u| g.has_edge(c, u)).collect();
        let mut e = 0i128;
        let mut sq = 0i128;
        for &u in &nb {
            let d = nb.iter().filter(|&&w| g.has_edge(u, w)).count() as i128;
            e += d;
            sq += d * d;
        }
        e /= 2;
        total += 4 * e * e + 4 * e - 4 * sq;
    }
    total as u128
}
