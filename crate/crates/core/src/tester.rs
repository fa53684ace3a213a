//! Vertex-sampling homomorphism tester and the empirical copy-density
//! estimator.

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::counting::{count_labeled_copies, CopyCount};
use crate::error::{Error, Result};
use crate::generators::complete;
use crate::graph::{Edge, Graph};
use crate::homomorphism::{find_homomorphism_with, HomSearch};
use crate::invariants::{clique_number_with, is_bipartite, odd_girth};
use crate::packing::{greedy_packing, Packing};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Accept,
    Reject,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TesterReport {
    pub q: usize,
    pub trials: usize,
    pub rejects: usize,
    /// Trials whose homomorphism search ran out of budget; never rejects.
    pub undecided: usize,
    /// `rejects / trials`.
    pub reject_freq: f64,
    /// Fraction of trials whose `q` draws were pairwise distinct.
    pub distinct_fraction: f64,
    /// Per trial, `δ(G[X]) / |X|` for the sampled set `X`.
    pub min_relative_degree: Vec<f64>,
}

impl TesterReport {
    /// Fraction of trials whose sample has relative minimum degree below
    /// `threshold`.
    pub fn fraction_below(&self, threshold: f64) -> f64 {
        let below = self.min_relative_degree.iter().filter(|&&d| d < threshold).count();
        below as f64 / self.trials as f64
    }
}

/// Draws `q` vertices uniformly with repetition per trial, collapses them to
/// the set `X`, and rejects when `G[X]` does not map to `f`. Trial `t` uses
/// its own random stream, so results do not depend on scheduling.
pub fn sample_test(g: &Graph, f: &Graph, q: usize, trials: usize, seed: u64, budget: Budget) -> Result<TesterReport> {
    if q == 0 || trials == 0 {
        return Err(Error::InvalidInput("q and trials must be positive".into()));
    }
    if g.n() == 0 {
        return Err(Error::InvalidInput("cannot sample from an empty graph".into()));
    }
    let outcomes: Vec<(Verdict, bool, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let mut r = rng::stream(seed, "tester-trial", t as u64);
            let mut draws: Vec<usize> = (0..q).map(|_| r.gen_range(0..g.n())).collect();
            draws.sort_unstable();
            draws.dedup();
            let distinct = draws.len() == q;
            let (sample, _) = g.induced_subgraph(&draws)?;
            let rel = sample.min_degree() as f64 / sample.n() as f64;
            let verdict = match find_homomorphism_with(&sample, f, budget) {
                HomSearch::Found(_) => Verdict::Accept,
                HomSearch::NotFound => Verdict::Reject,
                HomSearch::BudgetExhausted => Verdict::Undecided,
            };
            Ok((verdict, distinct, rel))
        })
        .collect::<Result<_>>()?;
    let rejects = outcomes.iter().filter(|o| o.0 == Verdict::Reject).count();
    let undecided = outcomes.iter().filter(|o| o.0 == Verdict::Undecided).count();
    let distinct = outcomes.iter().filter(|o| o.1).count();
    Ok(TesterReport {
        q,
        trials,
        rejects,
        undecided,
        reject_freq: rejects as f64 / trials as f64,
        distinct_fraction: distinct as f64 / trials as f64,
        min_relative_degree: outcomes.into_iter().map(|o| o.2).collect(),
    })
}

/// Lower bound on the number of edge deletions that make `g` map to `f`,
/// from edge-disjoint obstructions: each needs its own deletion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FarCertificate {
    pub obstruction: String,
    pub lower_bound: usize,
    /// Deletions known to suffice, when cheaply available.
    pub upper_bound: Option<usize>,
    pub exact: bool,
}

/// Edge-disjoint odd cycles, shortest first.
fn odd_cycle_packing(g: &Graph) -> Vec<Vec<usize>> {
    let mut residual = g.clone();
    let mut cycles = Vec::new();
    while let Some(c) = odd_girth(&residual).witness {
        let len = c.len();
        let edges: Vec<_> = (0..len)
            .map(|i| Edge::ordered(c[i], c[(i + 1) % len]))
            .collect();
        residual = residual.without_edges(&edges);
        cycles.push(c);
    }
    cycles
}

/// Edges left inside the sides of a locally optimal cut: flipping any single
/// vertex does not reduce them.
fn local_cut_defect(g: &Graph) -> usize {
    let n = g.n();
    if is_bipartite(g).is_some() {
        return 0;
    }
    // Start from a BFS two-coloring, then flip while it helps.
    let mut side = vec![false; n];
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u).iter() {
                if !seen[w] {
                    seen[w] = true;
                    side[w] = !side[u];
                    queue.push_back(w);
                }
            }
        }
    }
    loop {
        let mut improved = false;
        for v in 0..n {
            let same = g.neighbors(v).iter().filter(|&u| side[u] == side[v]).count();
            if 2 * same > g.degree(v) {
                side[v] = !side[v];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    g.edges().iter().filter(|e| side[e.u] == side[e.v]).count()
}

pub fn certify_far(g: &Graph, f: &Graph, budget: Budget) -> Result<FarCertificate> {
    if f.m() == 0 {
        let ok = f.n() > 0 || g.n() == 0;
        return Ok(FarCertificate {
            obstruction: "edge".into(),
            lower_bound: if ok { g.m() } else { 0 },
            upper_bound: ok.then_some(g.m()),
            exact: ok,
        });
    }
    if is_bipartite(f).is_some() {
        let lower_bound = odd_cycle_packing(g).len();
        let upper = local_cut_defect(g);
        return Ok(FarCertificate {
            obstruction: "odd cycle".into(),
            lower_bound,
            upper_bound: Some(upper),
            exact: lower_bound == upper,
        });
    }
    let omega = clique_number_with(f, budget)?;
    let packing = greedy_packing(&complete(omega + 1), g, None, budget)?;
    Ok(FarCertificate {
        obstruction: format!("K_{}", omega + 1),
        lower_bound: packing.len(),
        upper_bound: None,
        exact: false,
    })
}

/// A host graph with an optional known packing of the pattern.
#[derive(Clone, Debug)]
pub struct EstimatorInstance {
    pub id: String,
    pub graph: Graph,
    pub packing: Option<Packing>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorReport {
    pub instance: String,
    pub n: usize,
    pub gamma: f64,
    /// `δ(G) / n`.
    pub gamma_realized: f64,
    pub packing_size: usize,
    /// `|P| / n^2`.
    pub eps_realized: f64,
    pub copies: CopyCount,
    /// `copies / n^h`.
    pub copy_density: f64,
}

/// Exact copy densities of `h` over explicit instances. Each instance must
/// have minimum degree at least `gamma n`; its packing is audited, or a
/// greedy one is computed when absent. The reports only bound the true
/// threshold function from above: they are witnesses, not a minimum over
/// all graphs.
pub fn estimate_delta(
    h: &Graph,
    gamma: f64,
    instances: &[EstimatorInstance],
    seed: u64,
    budget: Budget,
) -> Result<Vec<EstimatorReport>> {
    instances
        .iter()
        .map(|inst| {
            let g = &inst.graph;
            let n = g.n();
            let nf = n as f64;
            if (g.min_degree() as f64) < gamma * nf - 1e-9 {
                return Err(Error::Verification(format!(
                    "instance {}: min degree {} below gamma n = {:.3}",
                    inst.id,
                    g.min_degree(),
                    gamma * nf
                )));
            }
            let packing = match &inst.packing {
                Some(p) => {
                    if p.pattern() != h {
                        return Err(Error::InvalidInput(format!("instance {}: packing of another pattern", inst.id)));
                    }
                    p.audit(g)?;
                    p.clone()
                }
                None => greedy_packing(h, g, Some(seed), budget)?,
            };
            let copies = count_labeled_copies(h, g, budget)?;
            let copy_density = copies.normalized();
            Ok(EstimatorReport {
                instance: inst.id.clone(),
                n,
                gamma,
                gamma_realized: g.min_degree() as f64 / nf,
                packing_size: packing.len(),
                eps_realized: packing.len() as f64 / (nf * nf),
                copies,
                copy_density,
            })
        })
        .collect()
}

/// Least-squares fit of `log y = log c + e log x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Root-mean-square residual in natural-log units.
    pub residual: f64,
    pub points: usize,
}

/// Fits over the points with both coordinates positive; needs two distinct
/// abscissae.
pub fn power_law_fit(points: &[(f64, f64)]) -> Option<PowerFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let sse: f64 = logs.iter().map(|p| (p.1 - intercept - exponent * p.0).powi(2)).sum();
    Some(PowerFit {
        exponent,
        prefactor: intercept.exp(),
        residual: (sse / k).sqrt(),
        points: logs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_bipartite, cycle, disjoint_union, random_bipartite};

    #[test]
    fn bipartite_hosts_never_reject() {
        let g = random_bipartite(20, 20, 0.3, 4);
        let r = sample_test(&g, &complete(2), 12, 50, 1, Budget::default()).unwrap();
        assert_eq!(r.rejects, 0);
        assert_eq!(r.reject_freq, 0.0);
    }

    #[test]
    fn triangle_rejects_when_fully_sampled() {
        let r = sample_test(&complete(3), &complete(2), 1, 20, 9, Budget::default()).unwrap();
        assert_eq!(r.rejects, 0);
        assert_eq!(r.distinct_fraction, 1.0);
        let r = sample_test(&complete(3), &complete(2), 2, 20, 9, Budget::default()).unwrap();
        assert_eq!(r.rejects, 0);
        // Three draws hit all three vertices with probability 3!/27.
        let r = sample_test(&complete(3), &complete(2), 3, 4000, 9, Budget::default()).unwrap();
        assert!((r.reject_freq - 6.0 / 27.0).abs() < 0.03, "{}", r.reject_freq);
        assert_eq!(r.distinct_fraction, r.reject_freq);
    }

    #[test]
    fn far_certificates() {
        let c = certify_far(&complete(3), &complete(2), Budget::default()).unwrap();
        assert_eq!((c.lower_bound, c.upper_bound, c.exact), (1, Some(1), true));
        let t = complete(3);
        let g = disjoint_union(&[&t, &t, &t, &t]);
        let c = certify_far(&g, &complete(2), Budget::default()).unwrap();
        assert_eq!(c.lower_bound, 4);
        assert!(c.exact);
        let c = certify_far(&complete(5), &complete(3), Budget::default()).unwrap();
        assert_eq!(c.obstruction, "K_4");
        assert_eq!(c.lower_bound, 1);
        let c = certify_far(&cycle(5), &Graph::empty(1), Budget::default()).unwrap();
        assert_eq!(c.lower_bound, 5);
    }

    #[test]
    fn estimator_on_bipartite_host() {
        let inst = EstimatorInstance {
            id: "k33".into(),
            graph: complete_bipartite(3, 3),
            packing: None,
        };
        let r = estimate_delta(&complete(3), 0.5, &[inst.clone()], 0, Budget::default()).unwrap();
        assert_eq!(r[0].eps_realized, 0.0);
        assert_eq!(r[0].copy_density, 0.0);
        assert!(estimate_delta(&complete(3), 0.6, &[inst], 0, Budget::default()).is_err());
    }

    #[test]
    fn fit_recovers_exponent() {
        let pts: Vec<(f64, f64)> = [0.1, 0.2, 0.4, 0.8].iter().map(|&x: &f64| (x, 3.0 * x.powi(2))).collect();
        let fit = power_law_fit(&pts).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-9);
        assert!((fit.prefactor - 3.0).abs() < 1e-9);
        assert!(fit.residual < 1e-9);
        assert!(power_law_fit(&[(1.0, 1.0)]).is_none());
    }
}
