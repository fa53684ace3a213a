//! The standard named test corpus and its manifest of expected invariants.

use serde::Serialize;

use crate::budget::Budget;
use crate::constructions::{lookup, ConstructionParams};
use crate::error::Result;
use crate::generators::{blowup, complete, cycle, petersen, random_bipartite, with_pendant_path};
use crate::graph::Graph;
use crate::invariants::{chromatic_number_with, is_bipartite, odd_girth, MAX_COLORING_VERTICES};
use crate::packing::Packing;
use crate::partition::VertexPartition;
use crate::rng::derive_seed;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub family: &'static str,
    pub graph: Graph,
    pub partition: Option<VertexPartition>,
    pub packing: Option<Packing>,
}

/// One manifest row. Column order of the CSV form follows field order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifestRow {
    pub name: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    /// `None` for bipartite graphs.
    pub odd_girth: Option<usize>,
    pub bipartite: bool,
    /// Exact chromatic number, for graphs small enough to color.
    pub chi: Option<usize>,
    pub packing_size: Option<usize>,
}

pub const MANIFEST_COLUMNS: [&str; 10] = [
    "name",
    "family",
    "n",
    "m",
    "min_degree",
    "max_degree",
    "odd_girth",
    "bipartite",
    "chi",
    "packing_size",
];

fn plain(name: impl Into<String>, family: &'static str, graph: Graph) -> CorpusEntry {
    CorpusEntry {
        name: name.into(),
        family,
        graph,
        partition: None,
        packing: None,
    }
}

/// Builds the corpus. Only the random families depend on `seed`, each
/// through its own derived stream.
pub fn standard_corpus(seed: u64) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for len in [3, 5, 7, 9, 11] {
        out.push(plain(format!("cycle-{len}"), "odd-cycle", cycle(len)));
    }
    out.push(plain("petersen", "named", petersen()));
    out.push(plain("k4", "named", complete(4)));
    for (at, len) in [(5, 2), (7, 3)] {
        out.push(plain(
            format!("cycle-{at}-pendant-{len}"),
            "pendant-cycle",
            with_pendant_path(&cycle(at), 0, len),
        ));
    }
    for (n, parts) in [(12, 2), (12, 3), (20, 4)] {
        let (graph, partition) = crate::constructions::turan_partition(n, parts)?;
        out.push(CorpusEntry {
            partition: Some(partition),
            ..plain(format!("turan-{n}-{parts}"), "turan", graph)
        });
    }
    for (base, sizes) in [(5, vec![2; 5]), (5, vec![1, 2, 3, 2, 1]), (7, vec![3; 7])] {
        let (graph, _) = blowup(&cycle(base), &sizes)?;
        let label = sizes.iter().map(ToString::to_string).collect::<Vec<_>>().join("-");
        out.push(plain(format!("cycle-{base}-blowup-{label}"), "blowup", graph));
    }
    for (i, (a, b, p)) in [(6, 6, 0.5), (10, 14, 0.3), (20, 20, 0.2)].into_iter().enumerate() {
        let s = derive_seed(seed, "corpus-bipartite", i as u64);
        out.push(plain(format!("bipartite-{a}-{b}"), "random-bipartite", random_bipartite(a, b, p, s)));
    }

    let constructions: [(&str, [ConstructionParams; 3]); 4] = [
        (
            "rs-gadget",
            [10, 20, 30].map(|m| ConstructionParams {
                k: Some(1),
                m: Some(m),
                ..Default::default()
            }),
        ),
        (
            "padded-rs",
            [60, 120, 150].map(|n| ConstructionParams {
                k: Some(1),
                n: Some(n),
                alpha: Some(0.2),
                ..Default::default()
            }),
        ),
        (
            "double-gadget",
            [40, 80, 120].map(|n| ConstructionParams {
                r: Some(3),
                n: Some(n),
                eps: Some(0.05),
                ..Default::default()
            }),
        ),
        (
            "turan-regular",
            [40, 80, 120].map(|n| ConstructionParams {
                r: Some(3),
                n: Some(n),
                eps: Some(0.05),
                ..Default::default()
            }),
        ),
    ];
    for (name, sizes) in constructions {
        let c = lookup(name)?;
        for (i, mut params) in sizes.into_iter().enumerate() {
            params.seed = derive_seed(seed, name, i as u64);
            let built = c.build(&params)?;
            out.push(CorpusEntry {
                name: format!("{name}-{}", built.graph.n()),
                family: c.name(),
                graph: built.graph,
                partition: Some(built.partition),
                packing: built.designed_packing,
            });
        }
    }
    Ok(out)
}

pub fn manifest_row(e: &CorpusEntry, budget: Budget) -> ManifestRow {
    let g = &e.graph;
    let og = odd_girth(g);
    let chi = if g.n() <= MAX_COLORING_VERTICES {
        chromatic_number_with(g, budget).ok()
    } else {
        None
    };
    ManifestRow {
        name: e.name.clone(),
        family: e.family.to_string(),
        n: g.n(),
        m: g.m(),
        min_degree: g.min_degree(),
        max_degree: g.max_degree(),
        odd_girth: og.value,
        bipartite: is_bipartite(g).is_some(),
        chi,
        packing_size: e.packing.as_ref().map(Packing::len),
    }
}
