//! Edge-disjoint packings, load cleaning and cycle boosting.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::counting::{is_valid_copy, CopySearch};
use crate::error::{Error, Result};
use crate::generators;
use crate::graph::{Edge, Graph};
use crate::invariants::shortest_odd_walk;
use crate::rng;

/// Edge-disjoint labeled copies of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pattern: Graph,
    copies: Vec<Vec<usize>>,
}

impl Packing {
    pub fn new(pattern: Graph) -> Self {
        Self {
            pattern,
            copies: Vec::new(),
        }
    }

    pub fn from_copies(pattern: Graph, copies: Vec<Vec<usize>>) -> Self {
        Self { pattern, copies }
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn copies(&self) -> &[Vec<usize>] {
        &self.copies
    }

    pub fn into_copies(self) -> Vec<Vec<usize>> {
        self.copies
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn push(&mut self, copy: Vec<usize>) {
        self.copies.push(copy);
    }

    /// Host edges covered by one copy.
    pub fn copy_edges(&self, copy: &[usize]) -> Vec<Edge> {
        self.pattern
            .edges()
            .iter()
            .map(|e| Edge::ordered(copy[e.u], copy[e.v]))
            .collect()
    }

    /// Union of the edges of all copies, sorted.
    pub fn used_edges(&self) -> Vec<Edge> {
        let mut all: Vec<Edge> = self.copies.iter().flat_map(|c| self.copy_edges(c)).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Number of copies through each vertex.
    pub fn vertex_loads(&self, n: usize) -> Vec<usize> {
        let mut load = vec![0; n];
        for c in &self.copies {
            for &v in c {
                load[v] += 1;
            }
        }
        load
    }

    /// Checks that every copy is a labeled copy in `g` and that no edge is
    /// used twice.
    pub fn audit(&self, g: &Graph) -> Result<()> {
        let mut seen = HashSet::new();
        for (i, c) in self.copies.iter().enumerate() {
            if !is_valid_copy(&self.pattern, g, c) {
                return Err(Error::InvalidPacking(format!("copy {i} is not a copy of the pattern")));
            }
            for e in self.copy_edges(c) {
                if !seen.insert(e) {
                    return Err(Error::InvalidPacking(format!("edge {e} used twice (copy {i})")));
                }
            }
        }
        Ok(())
    }

    /// `g` minus the used edges.
    pub fn residual(&self, g: &Graph) -> Graph {
        g.without_edges(self.used_edges().iter())
    }
}

fn remove_edges(rows: &mut [BitSet], edges: &[Edge]) {
    for e in edges {
        rows[e.u].remove(e.v);
        rows[e.v].remove(e.u);
    }
}

/// Greedily packs copies into the residual `rows`, removing their edges.
/// Roots are visited once, in order; a root is retried after each success,
/// which is sound because the residual only shrinks.
pub(crate) fn pack_residual(
    h: &Graph,
    rows: &mut [BitSet],
    roots: &[usize],
    budget: Budget,
) -> Result<Vec<Vec<usize>>> {
    let mut copies = Vec::new();
    let mut cursor = 0;
    let edges = h.edges();
    while cursor < roots.len() {
        let search = CopySearch::new(h, rows, None)?;
        let Some((idx, copy)) = search.find_first_with_roots(&roots[cursor..], budget)? else {
            break;
        };
        cursor += idx;
        let used: Vec<Edge> = edges.iter().map(|e| Edge::ordered(copy[e.u], copy[e.v])).collect();
        remove_edges(rows, &used);
        copies.push(copy);
    }
    Ok(copies)
}

/// Greedy `C_len` packing by BFS, for residuals with no odd cycle shorter
/// than `len`. Roots are visited in the given order. Copies are labeled along
/// the cycle pattern `0-1-…-(len-1)-0`.
pub(crate) fn pack_odd_cycles_residual(len: usize, rows: &mut [BitSet], roots: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut copies = Vec::new();
    for &root in roots {
        while let Some((found, cycle)) = shortest_odd_walk(rows, root, len) {
            if found != len {
                return Err(Error::Precondition(format!(
                    "residual has an odd cycle of length {found} < {len}"
                )));
            }
            let used: Vec<Edge> = (0..len).map(|i| Edge::ordered(cycle[i], cycle[(i + 1) % len])).collect();
            remove_edges(rows, &used);
            copies.push(cycle);
        }
    }
    Ok(copies)
}

/// Maximal edge-disjoint packing of `h` in `g`. Roots are scanned in
/// increasing id order, or shuffled when `shuffle` carries a seed.
pub fn greedy_packing(h: &Graph, g: &Graph, shuffle: Option<u64>, budget: Budget) -> Result<Packing> {
    let mut roots: Vec<usize> = (0..g.n()).collect();
    if let Some(seed) = shuffle {
        roots.shuffle(&mut rng::stream(seed, "packing-roots", g.n() as u64));
    }
    if h.m() == 0 || h.n() > g.n() {
        return Ok(Packing::new(h.clone()));
    }
    let mut rows = g.rows().to_vec();
    let copies = pack_residual(h, &mut rows, &roots, budget)?;
    Ok(Packing::from_copies(h.clone(), copies))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanReport {
    pub surviving: Packing,
    /// Vertices lying in at least `threshold` surviving copies.
    pub core_vertices: Vec<usize>,
    pub threshold: usize,
    pub rounds: usize,
    pub deleted: usize,
}

/// Repeatedly drops every copy through the lowest vertex whose load is in
/// `1..threshold`, until every vertex has load 0 or at least `threshold`.
pub fn clean_packing(g: &Graph, p: &Packing, threshold: usize) -> Result<CleanReport> {
    if threshold == 0 {
        return Err(Error::InvalidInput("cleaning threshold must be at least 1".into()));
    }
    let n = g.n();
    let mut alive = vec![true; p.len()];
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in p.copies().iter().enumerate() {
        for &v in c {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            through[v].push(i);
        }
    }
    let mut load: Vec<usize> = through.iter().map(Vec::len).collect();
    let mut rounds = 0;
    let mut deleted = 0;
    while let Some(v) = (0..n).find(|&v| load[v] > 0 && load[v] < threshold) {
        rounds += 1;
        for &i in &through[v] {
            if alive[i] {
                alive[i] = false;
                deleted += 1;
                for &u in &p.copies()[i] {
                    load[u] -= 1;
                }
            }
        }
    }
    let copies = p
        .copies()
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(c, _)| c.clone())
        .collect();
    Ok(CleanReport {
        surviving: Packing::from_copies(p.pattern().clone(), copies),
        core_vertices: (0..n).filter(|&v| load[v] >= threshold && load[v] > 0).collect(),
        threshold,
        rounds,
        deleted,
    })
}

/// `max(1, ceil(copies / (2 n)))`: half the average load density.
pub fn half_density_threshold(copies: usize, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    copies.div_ceil(2 * n).max(1)
}

/// Vertex order around the cycle pattern, starting at 0, or `None` when the
/// pattern is not a single cycle.
fn cycle_order(pattern: &Graph) -> Option<Vec<usize>> {
    let len = pattern.n();
    if len < 3 || pattern.m() != len || (0..len).any(|v| pattern.degree(v) != 2) {
        return None;
    }
    let mut order = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = pattern.neighbors(cur).iter().find(|&w| w != prev)?;
        if next == 0 {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    (order.len() == len).then_some(order)
}

/// Rotation and reflection normal form: start at the smallest vertex and
/// walk toward its smaller neighbor.
pub fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let len = cycle.len();
    let start = (0..len).min_by_key(|&i| cycle[i]).expect("nonempty cycle");
    let fwd = cycle[(start + 1) % len];
    let back = cycle[(start + len - 1) % len];
    if fwd <= back {
        (0..len).map(|i| cycle[(start + i) % len]).collect()
    } else {
        (0..len).map(|i| cycle[(start + len - i) % len]).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BoostOptions {
    /// Independent partition draws per root; the best is kept.
    pub draws: usize,
    /// Cap on extensions enumerated per root.
    pub max_per_root: usize,
    pub budget: Budget,
}

impl Default for BoostOptions {
    fn default() -> Self {
        Self {
            draws: 8,
            max_per_root: 20_000,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoostReport {
    pub short_len: usize,
    pub long_len: usize,
    pub input_copies: usize,
    pub clean_threshold: usize,
    pub cleaned_copies: usize,
    pub core_size: usize,
    pub roots_with_good_cycles: usize,
    pub good_cycles_total: usize,
    pub distinct_cycles: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct BoostResult {
    /// Distinct cycles in rotation/reflection normal form.
    pub cycles: Vec<Vec<usize>>,
    pub report: BoostReport,
}

struct RootOutcome {
    good: usize,
    cycles: Vec<Vec<usize>>,
    truncated: bool,
}

/// Turns a packing of `C_{2l+1}` into many `C_{2k+1}` copies by the layered
/// extension argument: clean to a core, and for each root `v0` keep the
/// cycles near `v0` that are well placed in a random layering, clean again,
/// then extend paths from the top layer down to `N(v0)`.
pub fn boost_cycles(g: &Graph, p: &Packing, k: usize, seed: u64, opts: BoostOptions) -> Result<BoostResult> {
    let order = cycle_order(p.pattern())
        .filter(|o| o.len() % 2 == 1)
        .ok_or_else(|| Error::InvalidInput("boosting needs a packing of odd cycles".into()))?;
    let short_len = order.len();
    let ell = short_len / 2;
    if !(1 <= ell && ell < k) {
        return Err(Error::Precondition(format!(
            "need 1 <= l < k, got l = {ell}, k = {k}"
        )));
    }
    p.audit(g)?;
    let long_len = 2 * k + 1;
    let mut report = BoostReport {
        short_len,
        long_len,
        input_copies: p.len(),
        ..BoostReport::default()
    };
    if p.is_empty() {
        return Ok(BoostResult {
            cycles: Vec::new(),
            report,
        });
    }

    let n = g.n();
    let t = half_density_threshold(p.len(), n);
    let clean = clean_packing(g, p, t)?;
    report.clean_threshold = t;
    report.cleaned_copies = clean.surviving.len();
    report.core_size = clean.core_vertices.len();
    let core = BitSet::from_iter_with_len(n, clean.core_vertices.iter().copied());
    let core_n = clean.core_vertices.len().max(1);
    let cycles: Vec<Vec<usize>> = clean
        .surviving
        .copies()
        .iter()
        .map(|c| order.iter().map(|&i| c[i]).collect())
        .collect();
    let path_pattern = generators::path(2 * k);

    let outcomes = clean
        .core_vertices
        .par_iter()
        .map(|&v0| -> Result<RootOutcome> {
            let mut near = g.neighbors(v0).clone();
            near.intersect_with(&core);
            let candidates: Vec<&Vec<usize>> = cycles
                .iter()
                .filter(|c| !c.contains(&v0) && c.iter().any(|&x| near.contains(x)))
                .collect();

            let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
            for draw in 0..opts.draws {
                let mut rng = rng::stream(seed, "boost-layers", (v0 * opts.draws + draw) as u64);
                let part: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=ell)).collect();
                let good: Vec<usize> = candidates
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| is_good(c, &part, &near, ell))
                    .map(|(i, _)| i)
                    .collect();
                if best.as_ref().is_none_or(|(_, b)| good.len() > b.len()) {
                    best = Some((part, good));
                }
            }
            let Some((part, good)) = best else {
                return Ok(RootOutcome { good: 0, cycles: Vec::new(), truncated: false });
            };
            if good.is_empty() {
                return Ok(RootOutcome { good: 0, cycles: Vec::new(), truncated: false });
            }
            let good_packing = Packing::from_copies(
                generators::cycle(short_len),
                good.iter().map(|&i| candidates[i].clone()).collect(),
            );
            let t2 = half_density_threshold(good_packing.len(), core_n);
            let reclean = clean_packing(g, &good_packing, t2)?;
            let w = BitSet::from_iter_with_len(n, reclean.core_vertices.iter().copied());

            let mut layers: Vec<BitSet> = (0..=ell).map(|_| BitSet::new(n)).collect();
            for x in w.iter() {
                if x != v0 {
                    layers[part[x]].insert(x);
                }
            }
            // y_1..y_2k: ends in layer 0 (inside N(v0)), middle run in layer l.
            let domains: Vec<BitSet> = (1..=2 * k)
                .map(|j| {
                    let layer = if j <= ell {
                        j - 1
                    } else if j > 2 * k - ell {
                        2 * k - j
                    } else {
                        ell
                    };
                    let mut d = layers[layer].clone();
                    if layer == 0 {
                        d.intersect_with(g.neighbors(v0));
                    }
                    d
                })
                .collect();
            let search = CopySearch::for_graph(&path_pattern, g, Some(&domains))?;
            let mut found = BTreeSet::new();
            let mut emitted = 0;
            let flow = search.for_each(opts.budget, |y| {
                let mut cyc = Vec::with_capacity(long_len);
                cyc.push(v0);
                cyc.extend_from_slice(y);
                found.insert(canonical_cycle(&cyc));
                emitted += 1;
                if emitted >= opts.max_per_root {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            Ok(RootOutcome {
                good: good.len(),
                cycles: found.into_iter().collect(),
                truncated: flow.is_break(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut all = BTreeSet::new();
    for o in outcomes {
        if o.good > 0 {
            report.roots_with_good_cycles += 1;
        }
        report.good_cycles_total += o.good;
        report.truncated |= o.truncated;
        all.extend(o.cycles);
    }
    let cycles: Vec<Vec<usize>> = all.into_iter().collect();
    for c in &cycles {
        let closes = g.has_edge(c[0], c[1]) && g.has_edge(c[0], c[long_len - 1]);
        if !crate::invariants::is_cycle_in(g, c, long_len) || !closes {
            return Err(Error::Verification(format!("boosted cycle {c:?} is not a cycle of G")));
        }
    }
    report.distinct_cycles = cycles.len();
    Ok(BoostResult { cycles, report })
}

/// Some labeling `x_1..x_{2l+1}` of the cycle has `x_{l+1}` in layer 0 and in
/// `near`, and `x_{l+1-i}`, `x_{l+1+i}` in layer `i`.
fn is_good(cycle: &[usize], part: &[usize], near: &BitSet, ell: usize) -> bool {
    let len = cycle.len();
    (0..len).any(|mid| {
        let x = cycle[mid];
        near.contains(x)
            && part[x] == 0
            && (1..=ell).all(|i| part[cycle[(mid + i) % len]] == i && part[cycle[(mid + len - i) % len]] == i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::CopySearch;
    use crate::generators::{complete, cycle, random_graph};

    fn b() -> Budget {
        Budget::unlimited()
    }

    fn is_maximal(h: &Graph, g: &Graph, p: &Packing) -> bool {
        let rest = p.residual(g);
        CopySearch::for_graph(h, &rest, None).unwrap().find_first(b()).unwrap().is_none()
    }

    #[test]
    fn greedy_examples() {
        let p = greedy_packing(&complete(3), &complete(4), None, b()).unwrap();
        assert_eq!(p.len(), 1);
        let g = random_graph(12, 0.5, 3);
        let p = greedy_packing(&complete(2), &g, None, b()).unwrap();
        assert_eq!(p.len(), g.m());
        let k7 = complete(7);
        let p = greedy_packing(&complete(3), &k7, None, b()).unwrap();
        p.audit(&k7).unwrap();
        assert!(p.len() >= 3);
        assert!(is_maximal(&complete(3), &k7, &p));
    }

    #[test]
    fn greedy_is_maximal_on_random_graphs() {
        for seed in 0..10 {
            let g = random_graph(16, 0.5, seed);
            for h in [complete(3), cycle(5), cycle(4)] {
                for shuffle in [None, Some(seed)] {
                    let p = greedy_packing(&h, &g, shuffle, b()).unwrap();
                    p.audit(&g).unwrap();
                    assert!(is_maximal(&h, &g, &p));
                }
            }
        }
    }

    #[test]
    fn bfs_cycle_packing_is_maximal() {
        for seed in 0..10 {
            let g = random_graph(18, 0.3, seed);
            let mut rows = g.rows().to_vec();
            let all: Vec<usize> = (0..g.n()).collect();
            let tri = pack_odd_cycles_residual(3, &mut rows, &all).unwrap();
            let five = pack_odd_cycles_residual(5, &mut rows, &all).unwrap();
            let p3 = Packing::from_copies(cycle(3), tri);
            let p5 = Packing::from_copies(cycle(5), five);
            p3.audit(&g).unwrap();
            p5.audit(&g).unwrap();
            let rest = Graph::from_rows(rows).unwrap();
            assert!(crate::invariants::odd_girth(&rest).at_least(7));
        }
    }

    #[test]
    fn cleaning() {
        let g = complete(6);
        let p = greedy_packing(&complete(3), &g, None, b()).unwrap();
        let same = clean_packing(&g, &p, 1).unwrap();
        assert_eq!(same.surviving, p);
        let one = Packing::from_copies(complete(3), vec![vec![0, 1, 2]]);
        let r = clean_packing(&g, &one, 2).unwrap();
        assert!(r.surviving.is_empty() && r.core_vertices.is_empty());
        for seed in 0..8 {
            let g = random_graph(20, 0.6, seed);
            let p = greedy_packing(&complete(3), &g, None, b()).unwrap();
            for t in 1..5 {
                let r = clean_packing(&g, &p, t).unwrap();
                let load = r.surviving.vertex_loads(g.n());
                assert!(load.iter().all(|&l| l == 0 || l >= t));
                assert!(r.surviving.len() + g.n() * (t - 1) >= p.len());
            }
        }
    }

    #[test]
    fn canonical_cycles() {
        assert_eq!(canonical_cycle(&[3, 1, 4, 0, 2]), vec![0, 2, 3, 1, 4]);
        assert_eq!(canonical_cycle(&[0, 4, 1, 3, 2]), canonical_cycle(&[2, 3, 1, 4, 0]));
    }

    #[test]
    fn boost_triangles_to_pentagons() {
        let g = complete(9);
        let p = greedy_packing(&complete(3), &g, None, b()).unwrap();
        let tri = Packing::from_copies(cycle(3), p.into_copies());
        let r = boost_cycles(&g, &tri, 2, 7, BoostOptions::default()).unwrap();
        assert!(!r.cycles.is_empty());
        for c in &r.cycles {
            assert!(crate::invariants::is_cycle_in(&g, c, 5));
        }
        let empty = Packing::new(cycle(3));
        assert!(boost_cycles(&g, &empty, 2, 7, BoostOptions::default()).unwrap().cycles.is_empty());
        assert!(boost_cycles(&g, &tri, 1, 7, BoostOptions::default()).is_err());
    }
}
