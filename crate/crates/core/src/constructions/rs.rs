use crate::error::{Error, Result};
use crate::generators::cycle;
use crate::graph::GraphBuilder;
use crate::packing::Packing;
use crate::partition::VertexPartition;

use super::{apportion, ranges, ConstructionOutput, DegreeClaim, ParamEcho, SolutionFreeSet};

/// Vertex layout of the odd-cycle gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RsLayout {
    /// Part `i` is the integer range `[0, (i+1)m)`; needs `B ⊆ [1, m]`.
    Shifted,
    /// Every part is `Z_m`; needs `2k (max B - min B) < m` so that no
    /// cycle equation wraps around.
    Cyclic,
}

impl RsLayout {
    fn part_size(self, i: usize, m: usize) -> usize {
        match self {
            RsLayout::Shifted => (i + 1) * m,
            RsLayout::Cyclic => m,
        }
    }

    fn place(self, x: usize, i: usize, b: usize, m: usize) -> usize {
        match self {
            RsLayout::Shifted => x + i * b,
            RsLayout::Cyclic => (x + i * b) % m,
        }
    }
}

fn check_set(k: usize, m: usize, set: &SolutionFreeSet, layout: RsLayout) -> Result<()> {
    if set.k != k {
        return Err(Error::InvalidInput(format!("set built for k = {}, gadget needs k = {k}", set.k)));
    }
    if !set.is_solution_free() {
        return Err(Error::InvalidInput("set has a nontrivial solution".into()));
    }
    let (Some(&lo), Some(&hi)) = (set.elements.iter().min(), set.elements.iter().max()) else {
        return Ok(());
    };
    let fits = match layout {
        RsLayout::Shifted => hi <= m,
        RsLayout::Cyclic => 2 * k * (hi - lo) < m,
    };
    if !fits {
        return Err(Error::InvalidInput(format!(
            "set elements {lo}..={hi} do not fit the {layout:?} layout with m = {m}"
        )));
    }
    Ok(())
}

/// Adds the designated cycles `x, x+b, …, x+2kb` (one vertex per part, the
/// last part closing back to the first) and returns them.
fn add_gadget(
    gb: &mut GraphBuilder,
    k: usize,
    m: usize,
    set: &SolutionFreeSet,
    layout: RsLayout,
    offsets: &[usize],
) -> Result<Vec<Vec<usize>>> {
    let len = 2 * k + 1;
    let mut cycles = Vec::with_capacity(m * set.len());
    for x in 0..m {
        for &b in &set.elements {
            let cyc: Vec<usize> = (0..len).map(|i| offsets[i] + layout.place(x, i, b, m)).collect();
            for i in 0..len {
                if !gb.add_edge(cyc[i], cyc[(i + 1) % len]) {
                    return Err(Error::Verification(format!(
                        "designated cycles share the edge {}-{}",
                        cyc[i],
                        cyc[(i + 1) % len]
                    )));
                }
            }
            cycles.push(cyc);
        }
    }
    Ok(cycles)
}

fn cyclic_allowed(p: &mut VertexPartition, parts: usize, first: usize) {
    for i in 0..parts {
        p.allow(first + i, first + (i + 1) % parts);
    }
}

/// The `(2k+1)`-partite gadget with `m·|B|` pairwise edge-disjoint
/// designated `C_{2k+1}` copies. Every `C_{2k+1}` in the gadget winds once
/// around the parts, and solution-freeness of `B` makes it designated.
pub fn rs_gadget(k: usize, m: usize, set: &SolutionFreeSet, layout: RsLayout) -> Result<ConstructionOutput> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    check_set(k, m, set, layout)?;
    let len = 2 * k + 1;
    let sizes: Vec<usize> = (0..len).map(|i| layout.part_size(i, m)).collect();
    let spans = ranges(&sizes);
    let n: usize = sizes.iter().sum();
    let offsets: Vec<usize> = spans.iter().map(|r| r.start).collect();
    let mut gb = GraphBuilder::new(n);
    let cycles = add_gadget(&mut gb, k, m, set, layout, &offsets)?;
    let parts: Vec<(String, Vec<usize>)> = spans
        .iter()
        .enumerate()
        .map(|(i, r)| (format!("V_{}", i + 1), r.clone().collect()))
        .collect();
    let mut partition = VertexPartition::from_parts(n, &parts)?;
    cyclic_allowed(&mut partition, len, 0);
    Ok(ConstructionOutput {
        name: "rs-gadget".into(),
        graph: gb.build(),
        partition,
        designed_packing: Some(Packing::from_copies(cycle(len), cycles)),
        params: ParamEcho {
            n,
            k: Some(k),
            m: Some(m),
            set_size: Some(set.len()),
            ..ParamEcho::default()
        },
        degree_claim: None,
    })
}

/// Gadget on parts `V_1..V_{2k+1}` (an `alpha` share of `n`), plus parts
/// `U_1..U_{2k+1}` with complete bipartite blocks `U_i–V_i` and `U_i–U_{i+1}`.
/// The gadget uses the first `m` vertices of each `V_i` (default: one less
/// than the smallest `V_i`, so every `V_i` keeps a vertex whose only
/// neighbours are in `U_i`), cyclic layout, and the largest set range that
/// layout allows.
pub fn padded_rs_construction(k: usize, n: usize, alpha: f64, m: Option<usize>) -> Result<ConstructionOutput> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let len = 2 * k + 1;
    let mut weights = vec![alpha / len as f64; len];
    weights.extend(vec![(1.0 - alpha) / len as f64; len]);
    let sizes = apportion(n, &weights);
    let spans = ranges(&sizes);
    let min_v = sizes[..len].iter().copied().min().unwrap_or(0);
    if sizes[len..].contains(&0) {
        return Err(Error::InvalidInput(format!("n = {n} leaves an empty padding part")));
    }
    let m = m.unwrap_or(min_v.saturating_sub(1));
    if m > min_v {
        return Err(Error::InvalidInput(format!(
            "m = {m} exceeds the smallest gadget part ({min_v})"
        )));
    }
    let set = if m == 0 {
        SolutionFreeSet {
            range: 0,
            k,
            elements: Vec::new(),
        }
    } else {
        super::solution_free_set((m - 1) / (2 * k) + 1, k)
    };
    check_set(k, m, &set, RsLayout::Cyclic)?;

    let mut gb = GraphBuilder::new(n);
    let offsets: Vec<usize> = spans[..len].iter().map(|r| r.start).collect();
    let cycles = add_gadget(&mut gb, k, m, &set, RsLayout::Cyclic, &offsets)?;
    for i in 0..len {
        let v: Vec<usize> = spans[i].clone().collect();
        let u: Vec<usize> = spans[len + i].clone().collect();
        gb.join(&u, &v);
        if i + 1 < len {
            let next: Vec<usize> = spans[len + i + 1].clone().collect();
            gb.join(&u, &next);
        }
    }

    let mut parts: Vec<(String, Vec<usize>)> = Vec::with_capacity(2 * len);
    for i in 0..len {
        parts.push((format!("V_{}", i + 1), spans[i].clone().collect()));
    }
    for i in 0..len {
        parts.push((format!("U_{}", i + 1), spans[len + i].clone().collect()));
    }
    let mut partition = VertexPartition::from_parts(n, &parts)?;
    cyclic_allowed(&mut partition, len, 0);
    for i in 0..len {
        partition.allow(len + i, i);
        if i + 1 < len {
            partition.allow(len + i, len + i + 1);
        }
    }

    let value = (1.0 - alpha) * n as f64 / len as f64;
    let slack = len as f64;
    Ok(ConstructionOutput {
        name: "padded-rs".into(),
        graph: gb.build(),
        partition,
        designed_packing: Some(Packing::from_copies(cycle(len), cycles)),
        params: ParamEcho {
            n,
            k: Some(k),
            alpha: Some(alpha),
            m: Some(m),
            set_size: Some(set.len()),
            ..ParamEcho::default()
        },
        degree_claim: Some(if m < min_v {
            DegreeClaim::About { value, slack }
        } else {
            DegreeClaim::AtLeast { value, slack }
        }),
    })
}
