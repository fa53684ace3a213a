//! Exact labeled-copy counting.
//!
//! A labeled copy of `H` in `G` is an injective map `V(H) -> V(G)` sending
//! edges to edges. All counts here are of such maps, optionally with the image
//! of each pattern vertex restricted to a host vertex set.
//!
//! The engine backtracks over a connected, degeneracy-style ordering of the
//! pattern, computing each position's candidates as one chain of row
//! intersections. At the last position it adds the candidate popcount
//! instead of branching.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bitset::BitSet;
use crate::budget::{Budget, Meter, Ticker};
use crate::error::{Error, Result};
use crate::generators;
use crate::graph::Graph;

/// Largest pattern accepted by the counting operations.
pub const MAX_PATTERN: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyCount {
    pub value: BigUint,
    /// Host order `n`, for normalization.
    pub n: usize,
    /// Pattern order `h`.
    pub h: usize,
}

impl CopyCount {
    pub fn new(value: impl Into<BigUint>, n: usize, h: usize) -> Self {
        Self {
            value: value.into(),
            n,
            h,
        }
    }

    /// `value / n^h`.
    pub fn normalized(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let v = self.value.to_f64().unwrap_or(f64::INFINITY);
        v / (self.n as f64).powi(self.h as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.value.to_u128()
    }
}

impl Serialize for CopyCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CopyCount", 4)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("normalized", &self.normalized())?;
        st.end()
    }
}

/// Multiplicities `s_1, …, s_h` of a blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSpec(Vec<usize>);

impl BlowupSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::InvalidInput(
                "blow-up multiplicities must be positive".into(),
            ));
        }
        Ok(Self(sizes))
    }

    pub fn ones(h: usize) -> Self {
        Self(vec![1; h])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Search order over the pattern plus per-position constraints.
#[derive(Clone, Debug)]
struct Plan {
    /// Pattern vertex placed at each position.
    order: Vec<usize>,
    /// Earlier positions adjacent to each position.
    back: Vec<Vec<usize>>,
    /// Allowed host vertices per position (degree filter folded in).
    domains: Vec<BitSet>,
}

fn plan(pattern: &Graph, host_degrees: &[usize], domains: Option<&[BitSet]>) -> Plan {
    let h = pattern.n();
    let n = host_degrees.len();
    let pdeg = pattern.degrees();
    let mut dom: Vec<BitSet> = (0..h)
        .map(|v| {
            let mut d = match domains {
                Some(ds) => ds[v].clone(),
                None => BitSet::full(n),
            };
            for x in 0..n {
                if host_degrees[x] < pdeg[v] && d.contains(x) {
                    d.remove(x);
                }
            }
            d
        })
        .collect();

    let mut placed = vec![false; h];
    let mut order = Vec::with_capacity(h);
    for _ in 0..h {
        // Most already-placed neighbors first (connectivity), then the
        // tightest domain, then the highest pattern degree, then lowest id.
        let next = (0..h)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let back = order.iter().filter(|&&u| pattern.has_edge(u, v)).count();
                (
                    std::cmp::Reverse(back),
                    dom[v].count().min(2),
                    std::cmp::Reverse(pdeg[v]),
                    dom[v].count(),
                    v,
                )
            })
            .expect("an unplaced vertex remains");
        placed[next] = true;
        order.push(next);
    }
    let back = (0..h)
        .map(|i| {
            (0..i)
                .filter(|&j| pattern.has_edge(order[i], order[j]))
                .collect()
        })
        .collect();
    let domains = order.iter().map(|&v| std::mem::replace(&mut dom[v], BitSet::new(0))).collect();
    Plan {
        order,
        back,
        domains,
    }
}

/// Backtracking embedder of a fixed pattern into a fixed host.
///
/// The host is given as adjacency rows, so callers can search in residual
/// graphs without rebuilding a [`Graph`].
pub struct CopySearch<'a> {
    rows: &'a [BitSet],
    h: usize,
    plan: Plan,
}

impl<'a> CopySearch<'a> {
    pub fn new(pattern: &Graph, rows: &'a [BitSet], domains: Option<&[BitSet]>) -> Result<Self> {
        let n = rows.len();
        if let Some(ds) = domains {
            if ds.len() != pattern.n() {
                return Err(Error::InvalidInput(format!(
                    "{} vertex constraints for a pattern on {} vertices",
                    ds.len(),
                    pattern.n()
                )));
            }
            if let Some(d) = ds.iter().find(|d| d.len() != n) {
                return Err(Error::InvalidInput(format!(
                    "constraint set over {} vertices for a host on {n}",
                    d.len()
                )));
            }
        }
        let degrees: Vec<usize> = rows.iter().map(BitSet::count).collect();
        Ok(Self {
            rows,
            h: pattern.n(),
            plan: plan(pattern, &degrees, domains),
        })
    }

    pub fn for_graph(pattern: &Graph, host: &'a Graph, domains: Option<&[BitSet]>) -> Result<Self> {
        Self::new(pattern, host.rows(), domains)
    }

    fn n(&self) -> usize {
        self.rows.len()
    }

    fn candidates(&self, pos: usize, image: &[usize], used: &BitSet, out: &mut BitSet) {
        out.copy_from(&self.plan.domains[pos]);
        for &j in &self.plan.back[pos] {
            out.intersect_with(&self.rows[image[j]]);
        }
        out.difference_with(used);
    }

    fn count_from(
        &self,
        pos: usize,
        image: &mut [usize],
        used: &mut BitSet,
        bufs: &mut [BitSet],
        ticker: &mut Ticker<'_>,
    ) -> Result<u128> {
        ticker.tick()?;
        let (cur, rest) = bufs.split_first_mut().expect("one buffer per position");
        self.candidates(pos, image, used, cur);
        if pos + 1 == self.h {
            return Ok(cur.count() as u128);
        }
        let mut total = 0u128;
        for v in cur.iter() {
            image[pos] = v;
            used.insert(v);
            total += self.count_from(pos + 1, image, used, rest, ticker)?;
            used.remove(v);
        }
        Ok(total)
    }

    /// Number of labeled copies, parallel over the first position.
    pub fn count(&self, budget: Budget) -> Result<u128> {
        if self.h == 0 {
            return Ok(1);
        }
        let meter = Meter::new(budget, "copy counting");
        let n = self.n();
        let roots: Vec<usize> = self.plan.domains[0].iter().collect();
        if self.h == 1 {
            return Ok(roots.len() as u128);
        }
        let h = self.h;
        let total = roots
            .par_iter()
            .map_init(
                || {
                    (
                        vec![0usize; h],
                        BitSet::new(n),
                        (1..h).map(|_| BitSet::new(n)).collect::<Vec<_>>(),
                    )
                },
                |(image, used, bufs), &root| -> Result<u128> {
                    let mut ticker = Ticker::new(&meter);
                    image[0] = root;
                    used.insert(root);
                    let r = self.count_from(1, image, used, bufs, &mut ticker);
                    used.remove(root);
                    ticker.flush()?;
                    r
                },
            )
            .try_reduce(|| 0u128, |a, b| Ok(a + b))?;
        Ok(total)
    }

    fn visit_from<F>(
        &self,
        pos: usize,
        image: &mut [usize],
        used: &mut BitSet,
        bufs: &mut [BitSet],
        ticker: &mut Ticker<'_>,
        f: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if pos == self.h {
            let mut map = vec![0; self.h];
            for (i, &v) in self.plan.order.iter().enumerate() {
                map[v] = image[i];
            }
            return Ok(f(&map));
        }
        ticker.tick()?;
        let (cur, rest) = bufs.split_first_mut().expect("one buffer per position");
        self.candidates(pos, image, used, cur);
        for v in cur.iter() {
            image[pos] = v;
            used.insert(v);
            let flow = self.visit_from(pos + 1, image, used, rest, ticker, f)?;
            used.remove(v);
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Visits copies in deterministic order (ascending host ids position by
    /// position). Maps are indexed by pattern vertex. Returns `Break` if the
    /// visitor stopped early.
    pub fn for_each<F>(&self, budget: Budget, mut f: F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let meter = Meter::new(budget, "copy search");
        let mut ticker = Ticker::new(&meter);
        let n = self.n();
        let mut image = vec![0; self.h];
        let mut used = BitSet::new(n);
        let mut bufs: Vec<BitSet> = (0..self.h).map(|_| BitSet::new(n)).collect();
        let r = self.visit_from(0, &mut image, &mut used, &mut bufs, &mut ticker, &mut f)?;
        ticker.flush()?;
        Ok(r)
    }

    /// First copy in the deterministic visiting order.
    pub fn find_first(&self, budget: Budget) -> Result<Option<Vec<usize>>> {
        let mut found = None;
        let _ = self.for_each(budget, |m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    /// First copy whose first-position image lies in `roots`, scanning roots in
    /// the given order.
    pub fn find_first_with_roots(
        &self,
        roots: &[usize],
        budget: Budget,
    ) -> Result<Option<(usize, Vec<usize>)>> {
        if self.h == 0 {
            return Ok(None);
        }
        let meter = Meter::new(budget, "copy search");
        let mut ticker = Ticker::new(&meter);
        let n = self.n();
        let mut image = vec![0; self.h];
        let mut used = BitSet::new(n);
        let mut bufs: Vec<BitSet> = (1..self.h).map(|_| BitSet::new(n)).collect();
        for (idx, &root) in roots.iter().enumerate() {
            if !self.plan.domains[0].contains(root) {
                continue;
            }
            image[0] = root;
            used.insert(root);
            let mut found = None;
            let flow = self.visit_from(1, &mut image, &mut used, &mut bufs, &mut ticker, &mut |m| {
                found = Some(m.to_vec());
                ControlFlow::Break(())
            })?;
            used.remove(root);
            if flow.is_break() {
                ticker.flush()?;
                return Ok(found.map(|m| (idx, m)));
            }
        }
        ticker.flush()?;
        Ok(None)
    }

    /// Pattern vertex searched first.
    pub fn root_vertex(&self) -> Option<usize> {
        self.plan.order.first().copied()
    }
}

fn check_pattern(h: usize) -> Result<()> {
    if h > MAX_PATTERN {
        return Err(Error::SizeLimit {
            what: "pattern order",
            size: h,
            limit: MAX_PATTERN,
        });
    }
    Ok(())
}

/// Number of injective homomorphisms `H -> G`.
pub fn count_labeled_copies(h: &Graph, g: &Graph, budget: Budget) -> Result<CopyCount> {
    check_pattern(h.n())?;
    let value = CopySearch::for_graph(h, g, None)?.count(budget)?;
    Ok(CopyCount::new(value, g.n(), h.n()))
}

/// Labeled copies with pattern vertex `i` mapped into `parts[i]`. Parts may overlap.
pub fn count_constrained_copies(h: &Graph, g: &Graph, parts: &[BitSet], budget: Budget) -> Result<CopyCount> {
    check_pattern(h.n())?;
    let value = CopySearch::for_graph(h, g, Some(parts))?.count(budget)?;
    Ok(CopyCount::new(value, g.n(), h.n()))
}

/// Labeled copies of `H[s_1, …, s_h]` with every vertex of class `S_i`
/// mapped into `parts[i]`.
pub fn count_blowup_copies(
    h: &Graph,
    spec: &BlowupSpec,
    g: &Graph,
    parts: &[BitSet],
    budget: Budget,
) -> Result<CopyCount> {
    if parts.len() != h.n() {
        return Err(Error::InvalidInput(format!(
            "{} parts for a pattern on {} vertices",
            parts.len(),
            h.n()
        )));
    }
    check_pattern(spec.total())?;
    let (blown, class) = generators::blowup(h, spec.sizes())?;
    let domains: Vec<BitSet> = class.iter().map(|&c| parts[c].clone()).collect();
    count_constrained_copies(&blown, g, &domains, budget)
}

/// Labeled copies mapping `x -> a` and `y -> b` (one orientation).
pub fn count_anchored_copies(
    h: &Graph,
    xy: (usize, usize),
    g: &Graph,
    ab: (usize, usize),
    budget: Budget,
) -> Result<CopyCount> {
    let (x, y) = xy;
    let (a, b) = ab;
    h.check_vertex(x)?;
    h.check_vertex(y)?;
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if !h.has_edge(x, y) {
        return Err(Error::AnchorNotEdge(format!("{x}-{y} is not a pattern edge")));
    }
    if !g.has_edge(a, b) {
        return Err(Error::AnchorNotEdge(format!("{a}-{b} is not a host edge")));
    }
    let mut parts: Vec<BitSet> = (0..h.n()).map(|_| BitSet::full(g.n())).collect();
    parts[x] = BitSet::from_iter_with_len(g.n(), [a]);
    parts[y] = BitSet::from_iter_with_len(g.n(), [b]);
    count_constrained_copies(h, g, &parts, budget)
}

fn factorial(r: usize) -> u128 {
    (1..=r as u128).product()
}

/// Labeled copies of `K_r`: `r!` times the number of `r`-cliques, enumerated
/// as increasing vertex chains.
pub fn count_cliques(r: usize, g: &Graph, budget: Budget) -> Result<CopyCount> {
    check_pattern(r)?;
    if r == 0 {
        return Ok(CopyCount::new(1u32, g.n(), 0));
    }
    let n = g.n();
    let meter = Meter::new(budget, "clique counting");

    fn extend(
        g: &Graph,
        depth: usize,
        r: usize,
        cand: &BitSet,
        bufs: &mut [BitSet],
        ticker: &mut Ticker<'_>,
    ) -> Result<u128> {
        ticker.tick()?;
        if depth + 1 == r {
            return Ok(cand.count() as u128);
        }
        let (next, rest) = bufs.split_first_mut().expect("buffer per depth");
        let mut total = 0;
        for w in cand.iter() {
            next.copy_from(cand);
            next.intersect_with(g.neighbors(w));
            next.retain_above(w);
            if next.is_empty() {
                continue;
            }
            total += extend(g, depth + 1, r, next, rest, ticker)?;
        }
        Ok(total)
    }

    let cliques = (0..n)
        .into_par_iter()
        .map(|v| -> Result<u128> {
            let mut ticker = Ticker::new(&meter);
            if r == 1 {
                return Ok(1);
            }
            let mut cand = g.neighbors(v).clone();
            cand.retain_above(v);
            let mut bufs: Vec<BitSet> = (0..r).map(|_| BitSet::new(n)).collect();
            let c = extend(g, 1, r, &cand, &mut bufs, &mut ticker)?;
            ticker.flush()?;
            Ok(c)
        })
        .try_reduce(|| 0u128, |a, b| Ok(a + b))?;
    Ok(CopyCount::new(cliques * factorial(r), n, r))
}

/// Labeled copies of `C_len` (any `len >= 3`): for each start `s`, paths
/// through vertices above `s` that close back at `s`. Each cycle is seen once
/// per direction, so labeled copies are `len` times the directed count.
pub(crate) fn count_cycles(len: usize, g: &Graph, budget: Budget) -> Result<CopyCount> {
    if len < 3 {
        return Err(Error::InvalidInput(format!("cycle length {len} < 3")));
    }
    check_pattern(len)?;
    let n = g.n();
    let meter = Meter::new(budget, "cycle counting");

    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &Graph,
        s: usize,
        last: usize,
        depth: usize,
        len: usize,
        above: &BitSet,
        used: &mut BitSet,
        bufs: &mut [BitSet],
        ticker: &mut Ticker<'_>,
    ) -> Result<u128> {
        ticker.tick()?;
        let (cur, rest) = bufs.split_first_mut().expect("buffer per depth");
        cur.copy_from(g.neighbors(last));
        cur.intersect_with(above);
        cur.difference_with(used);
        if depth + 1 == len {
            cur.intersect_with(g.neighbors(s));
            return Ok(cur.count() as u128);
        }
        let mut total = 0;
        for v in cur.iter() {
            used.insert(v);
            total += walk(g, s, v, depth + 1, len, above, used, rest, ticker)?;
            used.remove(v);
        }
        Ok(total)
    }

    let directed = (0..n)
        .into_par_iter()
        .map(|s| -> Result<u128> {
            let mut ticker = Ticker::new(&meter);
            let mut above = BitSet::full(n);
            above.retain_above(s);
            let mut used = BitSet::new(n);
            let mut bufs: Vec<BitSet> = (0..len).map(|_| BitSet::new(n)).collect();
            let c = walk(g, s, s, 1, len, &above, &mut used, &mut bufs, &mut ticker)?;
            ticker.flush()?;
            Ok(c)
        })
        .try_reduce(|| 0u128, |a, b| Ok(a + b))?;
    Ok(CopyCount::new(directed * len as u128, n, len))
}

/// Labeled copies of the odd cycle `C_len`.
pub fn count_odd_cycles(len: usize, g: &Graph, budget: Budget) -> Result<CopyCount> {
    if len % 2 == 0 {
        return Err(Error::InvalidInput(format!("{len} is not an odd cycle length")));
    }
    count_cycles(len, g, budget)
}

/// First labeled copy of `H` in `G` (subgraph, not necessarily induced).
pub fn find_copy(h: &Graph, g: &Graph, budget: Budget) -> Result<Option<Vec<usize>>> {
    if h.n() > g.n() {
        return Ok(None);
    }
    CopySearch::for_graph(h, g, None)?.find_first(budget)
}

/// Checks that `map` is an injective edge-preserving map `H -> G`.
pub fn is_valid_copy(h: &Graph, g: &Graph, map: &[usize]) -> bool {
    if map.len() != h.n() || map.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut seen = BitSet::new(g.n());
    for &v in map {
        if seen.contains(v) {
            return false;
        }
        seen.insert(v);
    }
    h.edges().iter().all(|e| g.has_edge(map[e.u], map[e.v]))
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Brute force over all injective maps, independent of the engine.
    use super::*;

    pub fn injective_maps(n: usize, h: usize, f: &mut dyn FnMut(&[usize])) {
        fn rec(n: usize, h: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if cur.len() == h {
                f(cur);
                return;
            }
            for v in 0..n {
                if !cur.contains(&v) {
                    cur.push(v);
                    rec(n, h, cur, f);
                    cur.pop();
                }
            }
        }
        rec(n, h, &mut Vec::new(), f);
    }

    pub fn count(h: &Graph, g: &Graph, accept: &dyn Fn(&[usize]) -> bool) -> u128 {
        let edges = h.edges();
        let mut total = 0;
        injective_maps(g.n(), h.n(), &mut |m| {
            if edges.iter().all(|e| g.has_edge(m[e.u], m[e.v])) && accept(m) {
                total += 1;
            }
        });
        total
    }
}
