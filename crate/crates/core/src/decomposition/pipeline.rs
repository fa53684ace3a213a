use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::counting::{CopyCount, CopySearch};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::invariants::{critical_edges, odd_girth};
use crate::packing::greedy_packing;

use super::cleanup::{cleanup_short_cycles, CleanupReport};
use super::refine::{c7_leftover_pair, classify_removed_edges, refine_bipartite, refine_c7, ClaimCheck, RefinedKind};
use super::{chi3_decompose, Chi3Decomposition, Chi3Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineCase {
    /// The pattern has a triangle: anchors come from a greedy packing.
    Triangle,
    /// Odd girth at least 5 and a bipartite residual.
    Bipartite,
    /// Odd girth 5 and a residual mapping onto `C_7`.
    C7,
    /// The residual maps to neither; no anchors were produced.
    Unresolved,
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub budget: Budget,
    pub seed: u64,
    /// Process at most this many anchors (in their deterministic order).
    pub max_anchors: Option<usize>,
    /// Copies kept per anchor for auditing.
    pub sample_per_anchor: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            budget: Budget::from_env(),
            seed: 0,
            max_anchors: None,
            sample_per_anchor: 2,
        }
    }
}

/// Per-source totals. `hypothesis_failures` counts anchors whose sets fall
/// short of the size or codegree the recipe assumes; their copies are still
/// genuine.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnchorTally {
    pub source: &'static str,
    pub recipe: &'static str,
    pub anchors: usize,
    pub copies: u128,
    pub hypothesis_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineTrace {
    pub case: PipelineCase,
    pub critical_edge: Edge,
    pub n: usize,
    pub min_degree: usize,
    pub degree_required: f64,
    pub degree_hypothesis: bool,
    pub packing_size: Option<usize>,
    pub cleanup: Option<CleanupReport>,
    pub refinement_checks: Vec<ClaimCheck>,
    pub inner_edges: usize,
    pub leftover_edges: usize,
    pub tallies: Vec<AnchorTally>,
    pub anchors_total: usize,
    pub truncated: bool,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    /// Distinct labeled copies found through all anchors.
    pub total: CopyCount,
    /// A sample of those copies, each a map from pattern to host vertices.
    pub sample: Vec<Vec<usize>>,
    pub trace: PipelineTrace,
}

#[derive(Clone, Debug)]
enum Recipe {
    /// Common-neighbourhood recipe: the third part goes into `N(a) ∩ N(b)`.
    Codegree { required: f64 },
    /// Neighbourhood recipe: the fifth part goes into `near_a ⊆ N(a)`, the
    /// third into `near_b ⊆ N(b)`.
    Neighbourhoods { near_a: BitSet, near_b: BitSet, required: f64 },
}

#[derive(Clone, Debug)]
struct Anchor {
    a: usize,
    b: usize,
    source: &'static str,
    recipe: Recipe,
}

impl Recipe {
    fn name(&self) -> &'static str {
        match self {
            Recipe::Codegree { .. } => "codegree",
            Recipe::Neighbourhoods { .. } => "neighbourhoods",
        }
    }
}

struct Decompositions {
    triangle: Chi3Decomposition,
    pentagon: Option<Chi3Decomposition>,
}

fn anchor_domains(g: &Graph, dec: &Decompositions, anchor: &Anchor) -> Result<Vec<BitSet>> {
    let n = g.n();
    let (a, b) = (anchor.a, anchor.b);
    let mut rest = BitSet::full(n);
    rest.remove(a);
    rest.remove(b);
    let single = |v: usize| BitSet::from_iter_with_len(n, [v]);
    match &anchor.recipe {
        Recipe::Codegree { .. } => {
            let d = &dec.triangle;
            let mut common = g.neighbors(a).clone();
            common.intersect_with(g.neighbors(b));
            Ok(d.part_map()
                .iter()
                .map(|&p| match p {
                    0 => single(a),
                    1 => single(b),
                    2 => common.clone(),
                    _ => rest.clone(),
                })
                .collect())
        }
        Recipe::Neighbourhoods { near_a, near_b, .. } => {
            let d = dec
                .pentagon
                .as_ref()
                .ok_or_else(|| Error::Precondition("neighbourhood recipe needs odd girth >= 5".into()))?;
            Ok(d.part_map()
                .iter()
                .map(|&p| match p {
                    0 => single(a),
                    1 => single(b),
                    2 => near_b.clone(),
                    3 => rest.clone(),
                    _ => near_a.clone(),
                })
                .collect())
        }
    }
}

fn anchor_hypothesis(g: &Graph, anchor: &Anchor) -> bool {
    match &anchor.recipe {
        Recipe::Codegree { required } => {
            g.neighbors(anchor.a).intersection_count(g.neighbors(anchor.b)) as f64 >= *required
        }
        Recipe::Neighbourhoods {
            near_a,
            near_b,
            required,
        } => {
            if (near_a.count() as f64) < *required || (near_b.count() as f64) < *required {
                return false;
            }
            near_a.iter().all(|u| {
                near_b
                    .iter()
                    .all(|v| u == v || g.neighbors(u).intersection_count(g.neighbors(v)) as f64 >= *required)
            })
        }
    }
}

fn triangle_anchors(h: &Graph, g: &Graph, alpha: f64, opts: &PipelineOptions) -> Result<(Vec<Anchor>, usize)> {
    let (u, v, w) = (0..h.n())
        .flat_map(|u| (u + 1..h.n()).flat_map(move |v| (v + 1..h.n()).map(move |w| (u, v, w))))
        .find(|&(u, v, w)| h.has_edge(u, v) && h.has_edge(u, w) && h.has_edge(v, w))
        .ok_or_else(|| Error::Precondition("pattern has no triangle".into()))?;
    let packing = greedy_packing(h, g, Some(opts.seed), opts.budget)?;
    let required = alpha * g.n() as f64;
    let anchors = packing
        .copies()
        .iter()
        .map(|copy| {
            let (cu, cv, cw) = (copy[u], copy[v], copy[w]);
            let (a, b) = [(cu, cv), (cu, cw), (cv, cw)]
                .into_iter()
                .rev()
                .max_by_key(|&(p, q)| g.neighbors(p).intersection_count(g.neighbors(q)))
                .expect("three pairs");
            Anchor {
                a,
                b,
                source: "packed-copy",
                recipe: Recipe::Codegree { required },
            }
        })
        .collect();
    Ok((anchors, packing.len()))
}

fn neighbours_in(g: &Graph, v: usize, set: &BitSet) -> BitSet {
    let mut out = g.neighbors(v).clone();
    out.intersect_with(set);
    out
}

/// Runs the constructive copy-finding argument for a 3-chromatic pattern
/// with a critical edge: pick anchor edges `ab` of the host, and for each
/// count the copies mapping the critical edge `xy` onto `ab` whose remaining
/// parts land in the sets the argument prescribes. Copies through distinct
/// ordered anchors differ in the image of `x` or `y`, so the total counts
/// distinct labeled copies.
pub fn find_h_copies_pipeline(h: &Graph, g: &Graph, alpha: f64, opts: &PipelineOptions) -> Result<PipelineResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let crit = critical_edges(h)?;
    if crit.chi != 3 {
        return Err(Error::Precondition(format!("pattern has chromatic number {}, not 3", crit.chi)));
    }
    let edge = *crit
        .edges
        .first()
        .ok_or_else(|| Error::Precondition("pattern has no critical edge".into()))?;
    let girth = odd_girth(h).value.expect("3-chromatic graphs have odd cycles");
    let dec = Decompositions {
        triangle: chi3_decompose(h, (edge.u, edge.v), Chi3Mode::Triangle)?,
        pentagon: (girth >= 5)
            .then(|| chi3_decompose(h, (edge.u, edge.v), Chi3Mode::Cycle { k: 2 }))
            .transpose()?,
    };

    let n = g.n();
    let nf = n as f64;
    let min_degree = g.min_degree();
    let degree_required = if girth == 3 { (1.0 / 3.0 + alpha) * nf } else { (0.25 + alpha) * nf };
    let mut trace = PipelineTrace {
        case: PipelineCase::Triangle,
        critical_edge: edge,
        n,
        min_degree,
        degree_required,
        degree_hypothesis: min_degree as f64 >= degree_required,
        packing_size: None,
        cleanup: None,
        refinement_checks: Vec::new(),
        inner_edges: 0,
        leftover_edges: 0,
        tallies: Vec::new(),
        anchors_total: 0,
        truncated: false,
        flags: Vec::new(),
    };
    if !trace.degree_hypothesis {
        trace
            .flags
            .push(format!("min degree {min_degree} below the required {degree_required:.3}"));
    }

    let anchors = if girth == 3 {
        let (anchors, packed) = triangle_anchors(h, g, alpha, opts)?;
        trace.packing_size = Some(packed);
        anchors
    } else {
        odd_girth_anchors(g, girth, alpha, opts, &mut trace)?
    };
    run_anchors(h, g, &dec, anchors, opts, trace)
}

fn odd_girth_anchors(
    g: &Graph,
    girth: usize,
    alpha: f64,
    opts: &PipelineOptions,
    trace: &mut PipelineTrace,
) -> Result<Vec<Anchor>> {
    let n = g.n();
    let an = alpha * n as f64;
    let k = (girth - 1) / 2;
    let clean = cleanup_short_cycles(g, k, alpha, Some(opts.seed))?;
    trace.flags.extend(clean.report.flags.iter().cloned());
    trace.cleanup = Some(clean.report.clone());
    let refined = if crate::invariants::is_bipartite(&clean.residual).is_some() {
        trace.case = PipelineCase::Bipartite;
        refine_bipartite(g, &clean, alpha)?
    } else {
        trace.case = PipelineCase::C7;
        match refine_c7(g, &clean, alpha, opts.budget) {
            Ok(r) => r,
            Err(Error::NoHomomorphism(msg)) => {
                trace.case = PipelineCase::Unresolved;
                trace.flags.push(msg);
                return Ok(Vec::new());
            }
            Err(e) => return Err(e),
        }
    };
    for c in refined.violations() {
        trace.flags.push(format!("{} VIOLATED ({})", c.name, c.detail));
    }
    trace.refinement_checks = refined.checks.clone();
    let (inner, touching) = classify_removed_edges(g, &refined);
    trace.inner_edges = inner.len();
    trace.leftover_edges = touching.len();
    let skel = &refined.skeleton;
    let mut anchors = Vec::new();

    match refined.kind {
        RefinedKind::Bipartite => {
            for e in &inner {
                let (a, b) = (e.u, e.v);
                let codeg = g.neighbors(a).intersection_count(g.neighbors(b)) as f64;
                let recipe = if codeg >= an / 2.0 {
                    Recipe::Codegree { required: an / 2.0 }
                } else {
                    Recipe::Neighbourhoods {
                        near_a: skel.neighbors(a).clone(),
                        near_b: skel.neighbors(b).clone(),
                        required: an,
                    }
                };
                anchors.push(Anchor {
                    a,
                    b,
                    source: "inner-edge",
                    recipe,
                });
            }
            let (l, r) = (refined.part_set(0), refined.part_set(1));
            let (small, large) = if l.count() <= r.count() { (l, r) } else { (r, l) };
            for a in refined.part_set(2).iter() {
                let near_a = neighbours_in(g, a, &large);
                for b in neighbours_in(g, a, &small).iter() {
                    anchors.push(Anchor {
                        a,
                        b,
                        source: "leftover-edge",
                        recipe: Recipe::Neighbourhoods {
                            near_a: near_a.clone(),
                            near_b: skel.neighbors(b).clone(),
                            required: an / 5.0,
                        },
                    });
                }
            }
        }
        RefinedKind::C7 => {
            let sets: Vec<BitSet> = (0..8).map(|p| refined.part_set(p)).collect();
            let part = |v: usize| refined.parts.part_of(v);
            for e in &inner {
                let (mut a, mut b) = (e.u, e.v);
                let diff = (part(b) + 7 - part(a)) % 7;
                let recipe = match diff {
                    0 | 2 | 5 => Recipe::Codegree { required: an },
                    _ => {
                        if diff == 4 {
                            std::mem::swap(&mut a, &mut b);
                        }
                        let (i, j) = (part(a), part(b));
                        Recipe::Neighbourhoods {
                            near_a: neighbours_in(g, a, &sets[(i + 6) % 7]),
                            near_b: neighbours_in(g, b, &sets[(j + 1) % 7]),
                            required: an,
                        }
                    }
                };
                anchors.push(Anchor {
                    a,
                    b,
                    source: "inner-edge",
                    recipe,
                });
            }
            for a in sets[7].iter() {
                let Some((i, j)) = c7_leftover_pair(g, &sets, a, alpha) else {
                    trace.flags.push(format!("leftover vertex {a} sees no two parts at distance 1 or 3"));
                    continue;
                };
                let near_a = neighbours_in(g, a, &sets[j]);
                for b in neighbours_in(g, a, &sets[i]).iter() {
                    anchors.push(Anchor {
                        a,
                        b,
                        source: "leftover-edge",
                        recipe: Recipe::Neighbourhoods {
                            near_a: near_a.clone(),
                            near_b: neighbours_in(g, b, &sets[(i + 1) % 7]),
                            required: 2.0 * an / 25.0,
                        },
                    });
                }
            }
        }
    }
    Ok(anchors)
}

fn run_anchors(
    h: &Graph,
    g: &Graph,
    dec: &Decompositions,
    mut anchors: Vec<Anchor>,
    opts: &PipelineOptions,
    mut trace: PipelineTrace,
) -> Result<PipelineResult> {
    let mut seen = BTreeSet::new();
    anchors.retain(|an| seen.insert((an.a, an.b)));
    if let Some(cap) = opts.max_anchors {
        if anchors.len() > cap {
            trace.truncated = true;
            trace.flags.push(format!("processed {cap} of {} anchors", anchors.len()));
            anchors.truncate(cap);
        }
    }
    trace.anchors_total = anchors.len();

    let results: Vec<(u128, Vec<Vec<usize>>, bool)> = anchors
        .par_iter()
        .map(|anchor| -> Result<_> {
            let domains = anchor_domains(g, dec, anchor)?;
            let search = CopySearch::for_graph(h, g, Some(&domains))?;
            let count = search.count(opts.budget)?;
            let mut sample = Vec::new();
            if opts.sample_per_anchor > 0 && count > 0 {
                let _ = search.for_each(opts.budget, |map| {
                    sample.push(map.to_vec());
                    if sample.len() >= opts.sample_per_anchor {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                })?;
            }
            Ok((count, sample, anchor_hypothesis(g, anchor)))
        })
        .collect::<Result<_>>()?;

    let mut total = 0u128;
    let mut sample = Vec::new();
    for (anchor, (count, copies, ok)) in anchors.iter().zip(results) {
        total += count;
        sample.extend(copies);
        let tally = match trace
            .tallies
            .iter_mut()
            .find(|t| t.source == anchor.source && t.recipe == anchor.recipe.name())
        {
            Some(t) => t,
            None => {
                trace.tallies.push(AnchorTally {
                    source: anchor.source,
                    recipe: anchor.recipe.name(),
                    anchors: 0,
                    copies: 0,
                    hypothesis_failures: 0,
                });
                trace.tallies.last_mut().expect("just pushed")
            }
        };
        tally.anchors += 1;
        tally.copies += count;
        tally.hypothesis_failures += usize::from(!ok);
    }
    Ok(PipelineResult {
        total: CopyCount::new(total, g.n(), h.n()),
        sample,
        trace,
    })
}
