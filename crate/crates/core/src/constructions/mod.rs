//! Extremal constructions, each emitted with its designed partition and,
//! where there is one, its designed packing.
//!
//! Constructions are also reachable by name through [`lookup`], which backs
//! the `construct` subcommand.

mod dense;
mod rs;
mod solution_free;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::packing::Packing;
use crate::partition::VertexPartition;

pub use dense::{double_gadget_construction, turan_graph, turan_partition, turan_regular_construction};
pub use rs::{padded_rs_construction, rs_gadget, RsLayout};
pub use solution_free::{behrend_set, solution_free_set, SolutionFreeSet};

/// Echo of the inputs and derived integer parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ParamEcho {
    pub n: usize,
    pub parts: Option<usize>,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub eps: Option<f64>,
    /// Realized regular degree `d = round(eps n)`.
    pub degree: Option<usize>,
    /// `d / n`.
    pub eps_realized: Option<f64>,
    pub m: Option<usize>,
    pub set_size: Option<usize>,
    pub seed: Option<u64>,
}

/// Minimum-degree statement attached to a construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DegreeClaim {
    /// `δ(G) >= value - slack`.
    AtLeast { value: f64, slack: f64 },
    /// `|δ(G) - value| <= slack`.
    About { value: f64, slack: f64 },
}

impl DegreeClaim {
    pub fn holds(&self, min_degree: usize) -> bool {
        let d = min_degree as f64;
        match *self {
            DegreeClaim::AtLeast { value, slack } => d >= value - slack - 1e-9,
            DegreeClaim::About { value, slack } => (d - value).abs() <= slack + 1e-9,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionOutput {
    pub name: String,
    pub graph: Graph,
    pub partition: VertexPartition,
    pub designed_packing: Option<Packing>,
    pub params: ParamEcho,
    pub degree_claim: Option<DegreeClaim>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionAudit {
    pub partition_valid: bool,
    pub packing_valid: Option<bool>,
    pub packing_size: Option<usize>,
    pub min_degree: usize,
    pub degree_claim: Option<DegreeClaim>,
    pub degree_ok: bool,
}

impl ConstructionAudit {
    pub fn passed(&self) -> bool {
        self.partition_valid && self.packing_valid.unwrap_or(true) && self.degree_ok
    }
}

impl ConstructionOutput {
    pub fn audit(&self) -> ConstructionAudit {
        let min_degree = self.graph.min_degree();
        let packing_valid = self
            .designed_packing
            .as_ref()
            .map(|p| p.audit(&self.graph).is_ok());
        ConstructionAudit {
            partition_valid: self.partition.is_valid_for(&self.graph),
            packing_valid,
            packing_size: self.designed_packing.as_ref().map(Packing::len),
            min_degree,
            degree_claim: self.degree_claim,
            degree_ok: self.degree_claim.is_none_or(|c| c.holds(min_degree)),
        }
    }

    /// Vertices of the named part.
    pub fn part(&self, name: &str) -> Result<Vec<usize>> {
        self.partition.members_named(name)
    }
}

/// Largest-remainder apportionment of `total` by `weights`; ties go to the
/// lower index.
pub fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut sizes: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        sizes[i] += 1;
    }
    sizes
}

/// Consecutive vertex ranges for the given part sizes.
pub(crate) fn ranges(sizes: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let r = start..start + s;
            start += s;
            r
        })
        .collect()
}

/// Named inputs for registry lookups. Each construction reads the fields it
/// needs and reports missing ones.
#[derive(Clone, Debug, Default)]
pub struct ConstructionParams {
    pub n: Option<usize>,
    pub parts: Option<usize>,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub eps: Option<f64>,
    pub m: Option<usize>,
    pub seed: u64,
}

fn need<T: Copy>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("missing parameter `{what}`")))
}

pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, p: &ConstructionParams) -> Result<ConstructionOutput>;
}

struct Turan;
struct RsGadget;
struct PaddedRs;
struct DoubleGadget;
struct TuranRegular;

impl Construction for Turan {
    fn name(&self) -> &'static str {
        "turan"
    }
    fn summary(&self) -> &'static str {
        "balanced complete multipartite graph (n, parts)"
    }
    fn build(&self, p: &ConstructionParams) -> Result<ConstructionOutput> {
        let n = need(p.n, "n")?;
        let parts = need(p.parts, "parts")?;
        let (graph, partition) = turan_partition(n, parts)?;
        let delta = n - n.div_ceil(parts);
        Ok(ConstructionOutput {
            name: self.name().into(),
            graph,
            partition,
            designed_packing: None,
            params: ParamEcho {
                n,
                parts: Some(parts),
                ..ParamEcho::default()
            },
            degree_claim: Some(DegreeClaim::About {
                value: delta as f64,
                slack: 0.0,
            }),
        })
    }
}

impl Construction for RsGadget {
    fn name(&self) -> &'static str {
        "rs-gadget"
    }
    fn summary(&self) -> &'static str {
        "(2k+1)-partite gadget with m|B| edge-disjoint designated odd cycles (k, m)"
    }
    fn build(&self, p: &ConstructionParams) -> Result<ConstructionOutput> {
        let k = need(p.k, "k")?;
        let m = need(p.m, "m")?;
        let set = solution_free_set(m, k);
        rs_gadget(k, m, &set, RsLayout::Shifted)
    }
}

impl Construction for PaddedRs {
    fn name(&self) -> &'static str {
        "padded-rs"
    }
    fn summary(&self) -> &'static str {
        "odd-cycle gadget on an alpha fraction, padded by a path of complete bipartite blocks (k, n, alpha, [m])"
    }
    fn build(&self, p: &ConstructionParams) -> Result<ConstructionOutput> {
        padded_rs_construction(need(p.k, "k")?, need(p.n, "n")?, need(p.alpha, "alpha")?, p.m)
    }
}

impl Construction for DoubleGadget {
    fn name(&self) -> &'static str {
        "double-gadget"
    }
    fn summary(&self) -> &'static str {
        "r+1 parts with two eps n-regular bipartite gadgets (r, n, eps, seed)"
    }
    fn build(&self, p: &ConstructionParams) -> Result<ConstructionOutput> {
        double_gadget_construction(need(p.r, "r")?, need(p.n, "n")?, need(p.eps, "eps")?, p.seed)
    }
}

impl Construction for TuranRegular {
    fn name(&self) -> &'static str {
        "turan-regular"
    }
    fn summary(&self) -> &'static str {
        "Turan graph T(n, r-1) plus an eps n-regular graph inside the first part (r, n, eps, seed)"
    }
    fn build(&self, p: &ConstructionParams) -> Result<ConstructionOutput> {
        turan_regular_construction(need(p.r, "r")?, need(p.n, "n")?, need(p.eps, "eps")?, p.seed)
    }
}

/// All registered constructions, in listing order.
pub fn registry() -> Vec<Box<dyn Construction>> {
    vec![
        Box::new(Turan),
        Box::new(RsGadget),
        Box::new(PaddedRs),
        Box::new(DoubleGadget),
        Box::new(TuranRegular),
    ]
}

pub fn lookup(name: &str) -> Result<Box<dyn Construction>> {
    registry()
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::UnknownConstruction(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apportionment() {
        assert_eq!(apportion(10, &[1.0, 1.0, 1.0]), vec![4, 3, 3]);
        assert_eq!(apportion(7, &[1.0, 3.0]), vec![2, 5]);
        assert_eq!(apportion(0, &[1.0]), vec![0]);
        let s = apportion(301, &[0.1, 0.1, 0.4, 0.4]);
        assert_eq!(s.iter().sum::<usize>(), 301);
    }

    #[test]
    fn registry_lookup() {
        let names: Vec<_> = registry().iter().map(|c| c.name()).collect();
        assert_eq!(names, ["turan", "rs-gadget", "padded-rs", "double-gadget", "turan-regular"]);
        assert!(matches!(lookup("nope"), Err(Error::UnknownConstruction(_))));
        let out = lookup("turan")
            .unwrap()
            .build(&ConstructionParams {
                n: Some(10),
                parts: Some(3),
                ..Default::default()
            })
            .unwrap();
        assert!(out.audit().passed());
        assert_eq!(out.graph.min_degree(), 6);
        assert!(lookup("turan").unwrap().build(&ConstructionParams::default()).is_err());
    }
}
