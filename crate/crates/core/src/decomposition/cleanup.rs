use rand::seq::SliceRandom;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::generators::cycle;
use crate::graph::{Edge, Graph};
use crate::invariants::odd_girth;
use crate::packing::{pack_odd_cycles_residual, Packing};
use crate::rng;

/// Measured quantities of a cleanup run and the inequalities they are
/// expected to satisfy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CleanupReport {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    /// Incidence count that puts a vertex into the removed set.
    pub threshold: usize,
    /// Sizes of the `C_3, C_5, …, C_{2k+1}` packings.
    pub packing_sizes: Vec<usize>,
    pub cut_edges: usize,
    /// `|E_c| / (k(k+2) n^2)`: the packing density the cut edges certify.
    pub eps_c_implied: f64,
    pub min_degree: usize,
    /// `δ(G) >= (1/4 + alpha) n`.
    pub degree_hypothesis: bool,
    /// `|E_c| < alpha^2 n^2 / 200`, which forces `|S| < alpha n / 10`.
    pub edge_hypothesis: bool,
    pub removed: usize,
    pub removed_bound_holds: bool,
    pub kept_vertices: usize,
    pub kept_bound_holds: bool,
    pub residual_min_degree: usize,
    pub residual_degree_bound: f64,
    pub residual_degree_holds: bool,
    pub residual_odd_girth: Option<usize>,
    pub flags: Vec<String>,
}

impl CleanupReport {
    /// Both hypotheses hold, so the removed-set and degree bounds are
    /// guaranteed.
    pub fn hypotheses_hold(&self) -> bool {
        self.degree_hypothesis && self.edge_hypothesis
    }

    pub fn bounds_hold(&self) -> bool {
        self.removed_bound_holds && self.kept_bound_holds && self.residual_degree_holds
    }
}

#[derive(Clone, Debug)]
pub struct CleanupResult {
    pub k: usize,
    pub alpha: f64,
    /// `packings[l - 1]` packs `C_{2l+1}`.
    pub packings: Vec<Packing>,
    pub cut_edges: Vec<Edge>,
    pub removed: Vec<usize>,
    /// The residual on all `n` vertices, removed vertices isolated.
    pub residual: Graph,
    pub kept: BitSet,
    pub report: CleanupReport,
}

impl CleanupResult {
    pub fn kept_vertices(&self) -> Vec<usize> {
        self.kept.to_vec()
    }
}

/// Packs `C_3, C_5, …, C_{2k+1}` in turn, each maximal in what the earlier
/// packings left, then deletes the used edges and the vertices incident to
/// at least `ceil(alpha n / 10)` of them. Roots are scanned in ascending
/// order, or shuffled per length when a seed is given.
pub fn cleanup_short_cycles(g: &Graph, k: usize, alpha: f64, seed: Option<u64>) -> Result<CleanupResult> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let n = g.n();
    let nf = n as f64;
    let mut rows = g.rows().to_vec();
    let mut packings = Vec::with_capacity(k);
    let mut cut_edges = Vec::new();
    for l in 1..=k {
        let len = 2 * l + 1;
        let mut roots: Vec<usize> = (0..n).collect();
        if let Some(seed) = seed {
            roots.shuffle(&mut rng::stream(seed, "cleanup-roots", l as u64));
        }
        let copies = pack_odd_cycles_residual(len, &mut rows, &roots)?;
        let packing = Packing::from_copies(cycle(len), copies);
        cut_edges.extend(packing.used_edges());
        packings.push(packing);
    }
    cut_edges.sort_unstable();

    let threshold = ((alpha * nf / 10.0).ceil() as usize).max(1);
    let mut incidence = vec![0usize; n];
    for e in &cut_edges {
        incidence[e.u] += 1;
        incidence[e.v] += 1;
    }
    let removed: Vec<usize> = (0..n).filter(|&v| incidence[v] >= threshold).collect();
    let removed_set = BitSet::from_iter_with_len(n, removed.iter().copied());
    let mut kept = BitSet::full(n);
    kept.difference_with(&removed_set);

    let residual = Graph::from_rows(rows)?.isolate_vertices(&removed_set);
    let residual_min_degree = kept.iter().map(|v| residual.degree(v)).min().unwrap_or(0);

    let min_degree = g.min_degree();
    let degree_hypothesis = min_degree as f64 >= (0.25 + alpha) * nf;
    let edge_hypothesis = (cut_edges.len() as f64) < alpha * alpha * nf * nf / 200.0;
    let removed_bound_holds = (removed.len() as f64) < alpha * nf / 10.0;
    let kept_bound_holds = (kept.count() as f64) > (1.0 - alpha / 10.0) * nf;
    let residual_degree_bound = (0.25 + 0.8 * alpha) * nf;
    let residual_degree_holds = residual_min_degree as f64 > residual_degree_bound;
    let girth = odd_girth(&residual).value;

    let mut flags = Vec::new();
    if girth.is_some_and(|og| og <= 2 * k + 1) {
        return Err(Error::Verification(format!(
            "residual keeps an odd cycle of length {}",
            girth.unwrap_or(0)
        )));
    }
    if !degree_hypothesis {
        flags.push(format!(
            "degree hypothesis fails: δ(G) = {min_degree} < (1/4 + α)n = {:.3}",
            (0.25 + alpha) * nf
        ));
    }
    if !edge_hypothesis {
        flags.push(format!(
            "edge hypothesis fails: |E_c| = {} >= α²n²/200 = {:.3}",
            cut_edges.len(),
            alpha * alpha * nf * nf / 200.0
        ));
    }
    let bounds = [
        (removed_bound_holds, "|S| < αn/10", edge_hypothesis),
        (kept_bound_holds, "|V(G')| > (1 - α/10)n", edge_hypothesis),
        (residual_degree_holds, "δ(G') > (1/4 + 4α/5)n", degree_hypothesis && edge_hypothesis),
    ];
    for (holds, what, guaranteed) in bounds {
        if !holds {
            let tag = if guaranteed { "VIOLATED" } else { "fails (hypotheses not met)" };
            flags.push(format!("{what} {tag}"));
        }
    }

    let report = CleanupReport {
        n,
        k,
        alpha,
        threshold,
        packing_sizes: packings.iter().map(Packing::len).collect(),
        cut_edges: cut_edges.len(),
        eps_c_implied: if n == 0 {
            0.0
        } else {
            cut_edges.len() as f64 / ((k * (k + 2)) as f64 * nf * nf)
        },
        min_degree,
        degree_hypothesis,
        edge_hypothesis,
        removed: removed.len(),
        removed_bound_holds,
        kept_vertices: kept.count(),
        kept_bound_holds,
        residual_min_degree,
        residual_degree_bound,
        residual_degree_holds,
        residual_odd_girth: girth,
        flags,
    };
    Ok(CleanupResult {
        k,
        alpha,
        packings,
        cut_edges,
        removed,
        residual,
        kept,
        report,
    })
}
