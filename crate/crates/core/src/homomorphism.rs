//! Homomorphism search, cores, canonical labeling and minimal images.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::budget::{Budget, Meter, Ticker};
use crate::counting::CopySearch;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

/// Largest graph accepted by [`core_of`].
pub const MAX_CORE_VERTICES: usize = 12;
/// Largest pattern accepted by [`minimal_images`].
pub const MAX_IMAGE_VERTICES: usize = 10;

/// Outcome of a budgeted homomorphism search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HomSearch {
    Found(Vec<usize>),
    NotFound,
    BudgetExhausted,
}

impl HomSearch {
    pub fn map(&self) -> Option<&[usize]> {
        match self {
            HomSearch::Found(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, HomSearch::Found(_))
    }

    /// Converts exhaustion into an error, for callers that need a definite answer.
    pub fn definite(self) -> Result<Option<Vec<usize>>> {
        match self {
            HomSearch::Found(m) => Ok(Some(m)),
            HomSearch::NotFound => Ok(None),
            HomSearch::BudgetExhausted => Err(Error::BudgetExceeded {
                what: "homomorphism search",
                limit: 0,
            }),
        }
    }
}

/// Whether `map` sends every edge of `h` to an edge of `f`.
pub fn is_homomorphism(h: &Graph, f: &Graph, map: &[usize]) -> bool {
    map.len() == h.n()
        && map.iter().all(|&v| v < f.n())
        && h.edges().iter().all(|e| f.has_edge(map[e.u], map[e.v]))
}

struct HomSolver<'a> {
    h: &'a Graph,
    f: &'a Graph,
}

impl HomSolver<'_> {
    fn solve(
        &self,
        domains: &mut Vec<BitSet>,
        assigned: &mut [Option<usize>],
        left: usize,
        ticker: &mut Ticker<'_>,
    ) -> Result<bool> {
        if left == 0 {
            return Ok(true);
        }
        ticker.tick()?;
        // Smallest domain, then most assigned neighbors, then lowest id.
        let v = (0..self.h.n())
            .filter(|&v| assigned[v].is_none())
            .min_by_key(|&v| {
                let placed = self
                    .h
                    .neighbors(v)
                    .iter()
                    .filter(|&u| assigned[u].is_some())
                    .count();
                (domains[v].count(), std::cmp::Reverse(placed), v)
            })
            .expect("an unassigned vertex remains");
        let values: Vec<usize> = domains[v].iter().collect();
        let free: Vec<usize> = self
            .h
            .neighbors(v)
            .iter()
            .filter(|&u| assigned[u].is_none())
            .collect();
        for c in values {
            let saved: Vec<BitSet> = free.iter().map(|&u| domains[u].clone()).collect();
            let mut ok = true;
            for &u in &free {
                domains[u].intersect_with(self.f.neighbors(c));
                if domains[u].is_empty() {
                    ok = false;
                    break;
                }
            }
            if ok {
                assigned[v] = Some(c);
                if self.solve(domains, assigned, left - 1, ticker)? {
                    return Ok(true);
                }
                assigned[v] = None;
            }
            for (&u, d) in free.iter().zip(saved) {
                domains[u] = d;
            }
        }
        Ok(false)
    }
}

/// Backtracking search with smallest-domain-first ordering and forward
/// checking. The search is deterministic: values are tried in ascending order.
pub fn find_homomorphism_with(h: &Graph, f: &Graph, budget: Budget) -> HomSearch {
    if h.n() == 0 {
        return HomSearch::Found(Vec::new());
    }
    if f.n() == 0 {
        return HomSearch::NotFound;
    }
    let mut has_edge_target = BitSet::new(f.n());
    for v in 0..f.n() {
        if f.degree(v) > 0 {
            has_edge_target.insert(v);
        }
    }
    let mut domains: Vec<BitSet> = (0..h.n())
        .map(|v| {
            if h.degree(v) > 0 {
                has_edge_target.clone()
            } else {
                BitSet::full(f.n())
            }
        })
        .collect();
    if domains.iter().any(BitSet::is_empty) {
        return HomSearch::NotFound;
    }
    let meter = Meter::new(budget, "homomorphism search");
    let mut ticker = Ticker::new(&meter);
    let mut assigned = vec![None; h.n()];
    let solver = HomSolver { h, f };
    let outcome = solver.solve(&mut domains, &mut assigned, h.n(), &mut ticker);
    match outcome.and_then(|r| ticker.flush().map(|_| r)) {
        Ok(true) => HomSearch::Found(assigned.into_iter().map(|c| c.expect("complete")).collect()),
        Ok(false) => HomSearch::NotFound,
        Err(_) => HomSearch::BudgetExhausted,
    }
}

pub fn find_homomorphism(h: &Graph, f: &Graph) -> HomSearch {
    find_homomorphism_with(h, f, Budget::default())
}

/// Minimal retract, by deleting vertices while the graph still maps into
/// what remains. Returns the core and its vertices in `g`.
pub fn core_of_with(g: &Graph, budget: Budget) -> Result<(Graph, Vec<usize>)> {
    if g.n() > MAX_CORE_VERTICES {
        return Err(Error::SizeLimit {
            what: "core computation",
            size: g.n(),
            limit: MAX_CORE_VERTICES,
        });
    }
    let mut keep: Vec<usize> = (0..g.n()).collect();
    let mut current = g.clone();
    'outer: loop {
        for drop in (0..keep.len()).rev() {
            let rest: Vec<usize> = (0..keep.len()).filter(|&i| i != drop).collect();
            let (smaller, _) = current.induced_subgraph(&rest)?;
            if find_homomorphism_with(&current, &smaller, budget)
                .definite()
                .map_err(|_| Error::BudgetExceeded {
                    what: "core computation",
                    limit: budget.max_nodes,
                })?
                .is_some()
            {
                keep.remove(drop);
                current = smaller;
                continue 'outer;
            }
        }
        return Ok((current, keep));
    }
}

pub fn core_of(g: &Graph) -> Result<Graph> {
    core_of_with(g, Budget::default()).map(|(c, _)| c)
}

/// Isomorphism-invariant code of a graph: the vertex count plus the
/// lexicographically largest upper-triangle adjacency string (column order)
/// over orderings that list vertices by non-increasing degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: Vec<bool>,
}

/// Canonical code and the ordering achieving it (`order[i]` is the vertex
/// placed at position `i`).
pub fn canonical_form(g: &Graph) -> (CanonicalForm, Vec<usize>) {
    let n = g.n();
    let degrees = g.degrees();
    let mut target: Vec<usize> = degrees.clone();
    target.sort_unstable_by(|a, b| b.cmp(a));

    struct Search<'a> {
        g: &'a Graph,
        degrees: Vec<usize>,
        target: Vec<usize>,
        best: Option<(Vec<bool>, Vec<usize>)>,
    }

    impl Search<'_> {
        fn rec(&mut self, order: &mut Vec<usize>, used: &mut [bool], bits: &mut Vec<bool>) {
            let i = order.len();
            if i == self.g.n() {
                if self.best.as_ref().is_none_or(|(best, _)| *bits > *best) {
                    self.best = Some((bits.clone(), order.clone()));
                }
                return;
            }
            for v in 0..self.g.n() {
                if used[v] || self.degrees[v] != self.target[i] {
                    continue;
                }
                let start = bits.len();
                for &u in order.iter() {
                    bits.push(self.g.has_edge(u, v));
                }
                let worse = self
                    .best
                    .as_ref()
                    .is_some_and(|(best, _)| bits[..] < best[..bits.len()]);
                if !worse {
                    used[v] = true;
                    order.push(v);
                    self.rec(order, used, bits);
                    order.pop();
                    used[v] = false;
                }
                bits.truncate(start);
            }
        }
    }

    let mut s = Search {
        g,
        degrees,
        target,
        best: None,
    };
    s.rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut Vec::new());
    let (bits, order) = s.best.expect("at least one ordering exists");
    (CanonicalForm { n, bits }, order)
}

/// The graph relabeled into canonical order.
pub fn canonical_graph(g: &Graph) -> Graph {
    let (_, order) = canonical_form(g);
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    g.permuted(&pos)
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.m() == b.m() && canonical_form(a).0 == canonical_form(b).0
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageMember {
    /// Canonically labeled member.
    #[serde(serialize_with = "serialize_edges")]
    pub graph: Graph,
    /// A homomorphism from the pattern onto `graph`.
    pub witness: Vec<usize>,
}

fn serialize_edges<S: serde::Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Graph", 2)?;
    st.serialize_field("n", &g.n())?;
    st.serialize_field("edges", &g.edges())?;
    st.end()
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalImageFamily {
    pub members: Vec<ImageMember>,
}

impl MinimalImageFamily {
    pub fn graphs(&self) -> Vec<Graph> {
        self.members.iter().map(|m| m.graph.clone()).collect()
    }
}

/// Calls `f` with every partition of `0..n` into independent sets of `h`,
/// as a restricted growth string.
fn independent_partitions(h: &Graph, f: &mut dyn FnMut(&[usize], usize)) {
    fn rec(h: &Graph, v: usize, class: &mut Vec<usize>, members: &mut Vec<BitSet>, f: &mut dyn FnMut(&[usize], usize)) {
        if v == h.n() {
            f(class, members.len());
            return;
        }
        for c in 0..members.len() {
            if h.neighbors(v).is_disjoint(&members[c]) {
                members[c].insert(v);
                class.push(c);
                rec(h, v + 1, class, members, f);
                class.pop();
                members[c].remove(v);
            }
        }
        let mut fresh = BitSet::new(h.n());
        fresh.insert(v);
        members.push(fresh);
        class.push(members.len() - 1);
        rec(h, v + 1, class, members, f);
        class.pop();
        members.pop();
    }
    rec(h, 0, &mut Vec::new(), &mut Vec::new(), f);
}

fn quotient(h: &Graph, class: &[usize], parts: usize) -> Graph {
    let mut b = GraphBuilder::new(parts);
    for e in h.edges() {
        b.add_edge(class[e.u], class[e.v]);
    }
    b.build()
}

/// Whether `small` is isomorphic to a subgraph (not necessarily induced) of `big`.
pub fn contains_subgraph(big: &Graph, small: &Graph, budget: Budget) -> Result<bool> {
    if small.n() > big.n() || small.m() > big.m() {
        return Ok(false);
    }
    Ok(CopySearch::for_graph(small, big, None)?.find_first(budget)?.is_some())
}

/// Inclusion-minimal homomorphic images of `h`, up to isomorphism.
///
/// Every image is a quotient by a partition into independent classes, so the
/// enumeration is complete. Quotients are reduced to cores, deduplicated by
/// canonical form, then filtered to those containing no other candidate as a
/// proper subgraph.
pub fn minimal_images_with(h: &Graph, budget: Budget) -> Result<MinimalImageFamily> {
    if h.n() > MAX_IMAGE_VERTICES {
        return Err(Error::SizeLimit {
            what: "minimal image enumeration",
            size: h.n(),
            limit: MAX_IMAGE_VERTICES,
        });
    }
    let mut quotients: BTreeMap<CanonicalForm, Graph> = BTreeMap::new();
    independent_partitions(h, &mut |class, parts| {
        let q = quotient(h, class, parts);
        let (code, _) = canonical_form(&q);
        quotients.entry(code).or_insert(q);
    });
    let mut cores: BTreeMap<CanonicalForm, Graph> = BTreeMap::new();
    for q in quotients.values() {
        let (c, _) = core_of_with(q, budget)?;
        let c = canonical_graph(&c);
        cores.entry(canonical_form(&c).0).or_insert(c);
    }
    let candidates: Vec<Graph> = cores.into_values().collect();
    let mut members = Vec::new();
    for (i, m) in candidates.iter().enumerate() {
        let mut minimal = true;
        for (j, other) in candidates.iter().enumerate() {
            if i != j && contains_subgraph(m, other, budget)? {
                minimal = false;
                break;
            }
        }
        if minimal {
            let witness = find_homomorphism_with(h, m, budget)
                .definite()?
                .ok_or_else(|| Error::Verification("image member without a homomorphism".into()))?;
            members.push(ImageMember {
                graph: m.clone(),
                witness,
            });
        }
    }
    members.sort_by_key(|m| (m.graph.n(), m.graph.m()));
    Ok(MinimalImageFamily { members })
}

pub fn minimal_images(h: &Graph) -> Result<MinimalImageFamily> {
    minimal_images_with(h, Budget::default())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub free: bool,
    /// Member index and a labeled copy of it in the host.
    pub witness: Option<(usize, Vec<usize>)>,
}

/// Whether `g` contains no subgraph copy of any member.
pub fn is_family_free(g: &Graph, family: &[Graph], budget: Budget) -> Result<FamilyCheck> {
    for (i, member) in family.iter().enumerate() {
        if member.n() > g.n() {
            continue;
        }
        if let Some(copy) = CopySearch::for_graph(member, g, None)?.find_first(budget)? {
            return Ok(FamilyCheck {
                free: false,
                witness: Some((i, copy)),
            });
        }
    }
    Ok(FamilyCheck {
        free: true,
        witness: None,
    })
}
