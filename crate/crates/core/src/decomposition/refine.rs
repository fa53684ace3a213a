use serde::Serialize;

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::generators::cycle;
use crate::graph::{Edge, Graph};
use crate::homomorphism::{find_homomorphism_with, HomSearch};
use crate::invariants::is_bipartite;
use crate::partition::VertexPartition;

use super::cleanup::CleanupResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefinedKind {
    /// Parts `L, R, S`; the skeleton keeps the `L–R` edges.
    Bipartite,
    /// Parts `V_1..V_7, S`; the skeleton keeps edges between consecutive
    /// parts modulo 7.
    C7,
}

/// One inequality checked on a refinement. `guaranteed` is set when the
/// instance meets the hypotheses under which it must hold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub name: String,
    pub holds: bool,
    pub guaranteed: bool,
    pub detail: String,
}

impl ClaimCheck {
    fn new(name: &str, holds: bool, guaranteed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            holds,
            guaranteed,
            detail,
        }
    }

    /// Failing although guaranteed.
    pub fn violated(&self) -> bool {
        self.guaranteed && !self.holds
    }
}

#[derive(Clone, Debug)]
pub struct RefinedPartition {
    pub kind: RefinedKind,
    /// Skeleton parts first, the leftover part `S` last.
    pub parts: VertexPartition,
    /// The skeleton graph on all `n` vertices.
    pub skeleton: Graph,
    pub checks: Vec<ClaimCheck>,
}

impl RefinedPartition {
    pub fn leftover_index(&self) -> usize {
        self.parts.num_parts() - 1
    }

    pub fn is_leftover(&self, v: usize) -> bool {
        self.parts.part_of(v) == self.leftover_index()
    }

    pub fn part_set(&self, p: usize) -> BitSet {
        BitSet::from_iter_with_len(self.parts.n(), self.parts.members(p))
    }

    pub fn violations(&self) -> Vec<&ClaimCheck> {
        self.checks.iter().filter(|c| c.violated()).collect()
    }
}

fn skeleton_from(g: &Graph, parts: &VertexPartition) -> Graph {
    let n = g.n();
    let sets: Vec<BitSet> = (0..parts.num_parts())
        .map(|p| BitSet::from_iter_with_len(n, parts.members(p)))
        .collect();
    let rows = (0..n)
        .map(|v| {
            let mut allowed = BitSet::new(n);
            let pv = parts.part_of(v);
            for (q, set) in sets.iter().enumerate() {
                if parts.is_allowed(pv, q) {
                    allowed.union_with(set);
                }
            }
            allowed.intersect_with(g.neighbors(v));
            allowed
        })
        .collect();
    Graph::from_rows(rows).expect("restriction of a simple graph is simple")
}

fn min_degree_over(g: &Graph, vertices: impl Iterator<Item = usize>) -> usize {
    vertices.map(|v| g.degree(v)).min().unwrap_or(0)
}

/// Splits the removed vertices between the sides of the bipartite residual:
/// a removed vertex with at most `alpha n / 5` neighbours in `L'` joins `L`,
/// one with at most that many in `R'` joins `R` (`L` wins ties), and the
/// rest stay in `S`.
pub fn refine_bipartite(g: &Graph, clean: &CleanupResult, alpha: f64) -> Result<RefinedPartition> {
    let Some(bip) = is_bipartite(&clean.residual) else {
        return Err(Error::Precondition("residual is not bipartite".into()));
    };
    let n = g.n();
    let nf = n as f64;
    let side = bip.sides(n);
    let mut left = BitSet::new(n);
    let mut right = BitSet::new(n);
    for v in clean.kept.iter() {
        if side[v] {
            right.insert(v);
        } else {
            left.insert(v);
        }
    }
    let limit = alpha * nf / 5.0;
    let mut part_of = vec![0usize; n];
    for v in 0..n {
        part_of[v] = usize::from(right.contains(v));
    }
    for &v in &clean.removed {
        let nl = g.neighbors(v).intersection_count(&left) as f64;
        let nr = g.neighbors(v).intersection_count(&right) as f64;
        part_of[v] = if nl <= limit {
            0
        } else if nr <= limit {
            1
        } else {
            2
        };
    }
    let mut parts = VertexPartition::new(part_of, vec!["L".into(), "R".into(), "S".into()])?;
    parts.allow(0, 1);
    let skeleton = skeleton_from(g, &parts);

    let guaranteed = clean.report.hypotheses_hold();
    let core = (0..n).filter(|&v| parts.part_of(v) < 2);
    let delta = min_degree_over(&skeleton, core);
    let bound = (0.25 + alpha / 2.0) * nf;
    let checks = vec![
        ClaimCheck::new(
            "residual inside skeleton",
            clean.residual.is_edge_subgraph_of(&skeleton),
            true,
            String::new(),
        ),
        ClaimCheck::new(
            "skeleton min degree >= (1/4 + α/2)n",
            delta as f64 >= bound,
            guaranteed,
            format!("{delta} vs {bound:.3}"),
        ),
    ];
    Ok(RefinedPartition {
        kind: RefinedKind::Bipartite,
        parts,
        skeleton,
        checks,
    })
}

/// Maps the non-bipartite residual onto `C_7` and distributes the removed
/// vertices: one with at most `2 alpha n / 5` neighbours outside
/// `V'_{i-1} ∪ V'_{i+1}` joins `V_i` (lowest such `i`).
pub fn refine_c7(g: &Graph, clean: &CleanupResult, alpha: f64, budget: Budget) -> Result<RefinedPartition> {
    if is_bipartite(&clean.residual).is_some() {
        return Err(Error::Precondition("residual is bipartite; use the bipartite refinement".into()));
    }
    let n = g.n();
    let nf = n as f64;
    let kept = clean.kept_vertices();
    let (sub, old) = clean.residual.induced_subgraph(&kept)?;
    let map = match find_homomorphism_with(&sub, &cycle(7), budget) {
        HomSearch::Found(map) => map,
        HomSearch::NotFound => return Err(Error::NoHomomorphism("residual does not map to C_7".into())),
        HomSearch::BudgetExhausted => {
            return Err(Error::BudgetExceeded {
                what: "C_7 homomorphism search",
                limit: budget.max_nodes,
            })
        }
    };
    let mut base: Vec<BitSet> = (0..7).map(|_| BitSet::new(n)).collect();
    for (i, &c) in map.iter().enumerate() {
        base[c].insert(old[i]);
    }
    let mut part_of = vec![7usize; n];
    for (c, set) in base.iter().enumerate() {
        for v in set.iter() {
            part_of[v] = c;
        }
    }
    let limit = 2.0 * alpha * nf / 5.0;
    for &v in &clean.removed {
        for i in 0..7 {
            let mut outside = clean.kept.clone();
            outside.difference_with(&base[(i + 6) % 7]);
            outside.difference_with(&base[(i + 1) % 7]);
            if g.neighbors(v).intersection_count(&outside) as f64 <= limit {
                part_of[v] = i;
                break;
            }
        }
    }
    let mut names: Vec<String> = (1..=7).map(|i| format!("V_{i}")).collect();
    names.push("S".into());
    let mut parts = VertexPartition::new(part_of, names)?;
    for i in 0..7 {
        parts.allow(i, (i + 1) % 7);
    }
    let skeleton = skeleton_from(g, &parts);
    let guaranteed = clean.report.hypotheses_hold();
    let checks = c7_checks(g, &skeleton, &parts, &base, alpha, guaranteed);
    let mut all = vec![ClaimCheck::new(
        "residual inside skeleton",
        clean.residual.is_edge_subgraph_of(&skeleton),
        true,
        String::new(),
    )];
    all.extend(checks);
    Ok(RefinedPartition {
        kind: RefinedKind::C7,
        parts,
        skeleton,
        checks: all,
    })
}

fn c7_checks(
    g: &Graph,
    skeleton: &Graph,
    parts: &VertexPartition,
    base: &[BitSet],
    alpha: f64,
    guaranteed: bool,
) -> Vec<ClaimCheck> {
    let n = g.n();
    let nf = n as f64;
    let sets: Vec<BitSet> = (0..8).map(|p| BitSet::from_iter_with_len(n, parts.members(p))).collect();
    let an = alpha * nf;
    let mut checks = Vec::new();

    let empty = base.iter().filter(|b| b.is_empty()).count();
    checks.push(ClaimCheck::new(
        "every V'_i nonempty",
        empty == 0,
        true,
        format!("{empty} empty"),
    ));

    let delta = min_degree_over(skeleton, (0..n).filter(|&v| parts.part_of(v) < 7));
    let bound = (0.25 + alpha / 2.0) * nf;
    checks.push(ClaimCheck::new(
        "(i) skeleton min degree >= (1/4 + α/2)n",
        delta as f64 >= bound,
        guaranteed,
        format!("{delta} vs {bound:.3}"),
    ));

    let mut min_codeg = usize::MAX;
    let mut bad_pairs = 0usize;
    for i in 0..7 {
        let here = sets[i].to_vec();
        for (idx, &u) in here.iter().enumerate() {
            let row = skeleton.neighbors(u);
            let same = here[idx + 1..].iter();
            let two_up = sets[(i + 2) % 7].iter();
            for v in same.copied().chain(two_up) {
                let c = row.intersection_count(skeleton.neighbors(v));
                min_codeg = min_codeg.min(c);
                if (c as f64) < an {
                    bad_pairs += 1;
                }
            }
        }
    }
    checks.push(ClaimCheck::new(
        "(ii) codegree >= αn within V_i and across V_i, V_{i+2}",
        bad_pairs == 0,
        guaranteed,
        format!("{bad_pairs} pairs below, min {}", if min_codeg == usize::MAX { 0 } else { min_codeg }),
    ));

    let mut thin = 0usize;
    for i in 0..7 {
        for v in sets[i].iter() {
            let row = skeleton.neighbors(v);
            let lo = row.intersection_count(&sets[(i + 6) % 7]);
            let hi = row.intersection_count(&sets[(i + 1) % 7]);
            if (lo.min(hi) as f64) < an {
                thin += 1;
            }
        }
    }
    checks.push(ClaimCheck::new(
        "(iii) >= αn neighbours in each adjacent part",
        thin == 0,
        guaranteed,
        format!("{thin} vertices below"),
    ));

    let mut stranded = 0usize;
    for a in sets[7].iter() {
        if c7_leftover_pair(g, &sets, a, alpha).is_none() {
            stranded += 1;
        }
    }
    checks.push(ClaimCheck::new(
        "(iv) every leftover vertex sees two parts at distance 1 or 3",
        stranded == 0,
        guaranteed,
        format!("{stranded} vertices without such parts"),
    ));
    checks
}

/// First `(i, j)` with `j - i ≡ 1 or 3 (mod 7)` where `a` has more than
/// `2 alpha n / 25` neighbours in both `V_i` and `V_j`.
pub(crate) fn c7_leftover_pair(g: &Graph, sets: &[BitSet], a: usize, alpha: f64) -> Option<(usize, usize)> {
    let limit = 2.0 * alpha * g.n() as f64 / 25.0;
    let counts: Vec<f64> = (0..7)
        .map(|i| g.neighbors(a).intersection_count(&sets[i]) as f64)
        .collect();
    (0..7).find_map(|i| {
        [1, 3]
            .iter()
            .map(|off| (i + off) % 7)
            .find(|&j| counts[i] > limit && counts[j] > limit)
            .map(|j| (i, j))
    })
}

/// Edges of `g` missing from the skeleton, split into those with both ends
/// in skeleton parts and those touching the leftover part.
pub fn classify_removed_edges(g: &Graph, refined: &RefinedPartition) -> (Vec<Edge>, Vec<Edge>) {
    let mut inner = Vec::new();
    let mut touching = Vec::new();
    for e in g.edges() {
        if refined.skeleton.has_edge(e.u, e.v) {
            continue;
        }
        if refined.is_leftover(e.u) || refined.is_leftover(e.v) {
            touching.push(e);
        } else {
            inner.push(e);
        }
    }
    (inner, touching)
}
