use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::generators::{clique_pair, regular_bipartite_edges, regular_graph_edges};
use crate::graph::{Graph, GraphBuilder};
use crate::packing::Packing;
use crate::partition::VertexPartition;
use crate::rng;

use super::{apportion, ranges, ConstructionOutput, DegreeClaim, ParamEcho};

fn turan_sizes(n: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|i| n / parts + usize::from(i < n % parts)).collect()
}

/// Complete `parts`-partite graph with balanced parts, larger parts first.
pub fn turan_graph(n: usize, parts: usize) -> Result<Graph> {
    Ok(turan_partition(n, parts)?.0)
}

pub fn turan_partition(n: usize, parts: usize) -> Result<(Graph, VertexPartition)> {
    if parts == 0 {
        return Err(Error::InvalidInput("a Turan graph needs at least one part".into()));
    }
    let spans = ranges(&turan_sizes(n, parts));
    let mut gb = GraphBuilder::new(n);
    let members: Vec<Vec<usize>> = spans.iter().map(|r| r.clone().collect()).collect();
    for i in 0..parts {
        for j in i + 1..parts {
            gb.join(&members[i], &members[j]);
        }
    }
    let named: Vec<(String, Vec<usize>)> = members
        .into_iter()
        .enumerate()
        .map(|(i, m)| (format!("V_{}", i + 1), m))
        .collect();
    let mut p = VertexPartition::from_parts(n, &named)?;
    for i in 0..parts {
        for j in i + 1..parts {
            p.allow(i, j);
        }
    }
    Ok((gb.build(), p))
}

fn realized_degree(n: usize, eps: f64) -> Result<usize> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps = {eps} must be a nonnegative number")));
    }
    Ok((eps * n as f64).round() as usize)
}

/// Parts `V_0..V_r`: `V_1, V_2, V_3` of equal size `floor(n/(3r-5))`, the
/// rest of `n` apportioned to `V_0` (weight 1) and `V_4..V_r` (weight 3
/// each). Complete bipartite `V_0–V_1`, `V_0 ∪ V_1 – V_4 ∪ … ∪ V_r` and
/// `V_i–V_j` for `2 <= i < j <= r`; `d`-regular bipartite `V_1–V_2` and
/// `V_1–V_3` with `d = round(eps n)`.
pub fn double_gadget_construction(r: usize, n: usize, eps: f64, seed: u64) -> Result<ConstructionOutput> {
    if r < 3 {
        return Err(Error::InvalidInput(format!("r = {r} must be at least 3")));
    }
    let unit = 3 * r - 5;
    let s = n / unit;
    let mut weights = vec![1.0];
    weights.extend(vec![3.0; r - 3]);
    let rest = apportion(n - 3 * s, &weights);
    let mut sizes = vec![rest[0], s, s, s];
    sizes.extend(&rest[1..]);
    let spans = ranges(&sizes);
    let members: Vec<Vec<usize>> = spans.iter().map(|r| r.clone().collect()).collect();
    let d = realized_degree(n, eps)?;
    if d > s {
        return Err(Error::InfeasibleDegree(format!(
            "degree {d} exceeds the gadget part size {s}"
        )));
    }

    let mut gb = GraphBuilder::new(n);
    gb.join(&members[0], &members[1]);
    let high: Vec<usize> = members[4..].iter().flatten().copied().collect();
    gb.join(&members[0], &high);
    gb.join(&members[1], &high);
    for i in 2..=r {
        for j in i + 1..=r {
            gb.join(&members[i], &members[j]);
        }
    }
    for (target, name) in [(2, "double-gadget-12"), (3, "double-gadget-13")] {
        let mut rng = rng::stream(seed, name, (n * 4096 + d) as u64);
        for (a, b) in regular_bipartite_edges(s, d, &mut rng)? {
            gb.add_edge(members[1][a], members[target][b]);
        }
    }

    let named: Vec<(String, Vec<usize>)> = members
        .into_iter()
        .enumerate()
        .map(|(i, m)| (format!("V_{i}"), m))
        .collect();
    let mut partition = VertexPartition::from_parts(n, &named)?;
    partition.allow(0, 1);
    partition.allow(1, 2);
    partition.allow(1, 3);
    for i in 4..=r {
        partition.allow(0, i);
        partition.allow(1, i);
    }
    for i in 2..=r {
        for j in i + 1..=r {
            partition.allow(i, j);
        }
    }

    Ok(ConstructionOutput {
        name: "double-gadget".into(),
        graph: gb.build(),
        partition,
        designed_packing: None,
        params: ParamEcho {
            n,
            r: Some(r),
            eps: Some(eps),
            degree: Some(d),
            eps_realized: Some(d as f64 / n.max(1) as f64),
            seed: Some(seed),
            ..ParamEcho::default()
        },
        degree_claim: Some(DegreeClaim::AtLeast {
            value: (3 * r - 8) as f64 * n as f64 / unit as f64,
            slack: 3.0,
        }),
    })
}

/// Pairs of vertex-disjoint inner edges, each completed to two `K_r` through
/// a shared center in `V_2` and fresh vertices of `V_3..V_{r-1}`. A pair is
/// skipped when no completion avoids the edges already used.
fn clique_pair_copies(n: usize, parts: &[Vec<usize>], inner: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut pairs = Vec::new();
    for &(a, b) in inner {
        match pending.iter().position(|&(c, d)| c != a && c != b && d != a && d != b) {
            Some(i) => pairs.push((pending.remove(i), (a, b))),
            None => pending.push((a, b)),
        }
    }
    let mut used: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
    let fresh = |used: &[BitSet], x: usize, clique: &[usize]| clique.iter().all(|&y| y != x && !used[x].contains(y));
    let mut cursor = vec![0usize; parts.len()];
    let mut copies = Vec::new();
    for ((u1, v1), (u2, v2)) in pairs {
        let centers = &parts[1];
        let found = (0..centers.len()).find_map(|t| {
            let c = centers[(cursor[1] + t) % centers.len()];
            let mut map = vec![c];
            for (a, b) in [(u1, v1), (u2, v2)] {
                let mut clique = vec![c, a, b];
                if !fresh(&used, a, &[c]) || !fresh(&used, b, &[c]) {
                    return None;
                }
                for (j, part) in parts.iter().enumerate().skip(2) {
                    let start = cursor[j];
                    let w = (0..part.len())
                        .map(|s| part[(start + s) % part.len()])
                        .find(|&w| !map.contains(&w) && fresh(&used, w, &clique))?;
                    clique.push(w);
                }
                map.extend_from_slice(&clique[1..]);
            }
            Some((t, map))
        });
        let Some((t, map)) = found else { continue };
        cursor[1] = (cursor[1] + t + 1) % parts[1].len();
        for (j, c) in cursor.iter_mut().enumerate().skip(2) {
            *c = (*c + 1) % parts[j].len();
        }
        let r = parts.len() + 1;
        for side in [&map[1..r], &map[r..]] {
            let clique: Vec<usize> = std::iter::once(map[0]).chain(side.iter().copied()).collect();
            for (i, &x) in clique.iter().enumerate() {
                for &y in &clique[i + 1..] {
                    used[x].insert(y);
                    used[y].insert(x);
                }
            }
        }
        copies.push(map);
    }
    copies
}

/// `T(n, r-1)` plus a `d`-regular graph inside the first (largest) part,
/// `d = round(eps n)`. The designed packing holds edge-disjoint copies of two
/// `K_r` sharing a vertex, two inner edges per copy.
pub fn turan_regular_construction(r: usize, n: usize, eps: f64, seed: u64) -> Result<ConstructionOutput> {
    if r < 3 {
        return Err(Error::InvalidInput(format!("r = {r} must be at least 3")));
    }
    let (turan, mut partition) = turan_partition(n, r - 1)?;
    let first = partition.members(0);
    let d = realized_degree(n, eps)?;
    let mut gb = GraphBuilder::from(&turan);
    let mut rng = rng::stream(seed, "turan-regular", (n * 4096 + d) as u64);
    let mut inner = Vec::new();
    for (a, b) in regular_graph_edges(first.len(), d, &mut rng)? {
        gb.add_edge(first[a], first[b]);
        inner.push((first[a], first[b]));
    }
    partition.allow(0, 0);
    let parts: Vec<Vec<usize>> = (0..r - 1).map(|i| partition.members(i)).collect();
    let copies = if parts.iter().skip(1).any(Vec::is_empty) {
        Vec::new()
    } else {
        clique_pair_copies(n, &parts, &inner)
    };
    Ok(ConstructionOutput {
        name: "turan-regular".into(),
        graph: gb.build(),
        partition,
        designed_packing: Some(Packing::from_copies(clique_pair(r), copies)),
        params: ParamEcho {
            n,
            r: Some(r),
            eps: Some(eps),
            degree: Some(d),
            eps_realized: Some(d as f64 / n.max(1) as f64),
            seed: Some(seed),
            ..ParamEcho::default()
        },
        degree_claim: Some(DegreeClaim::AtLeast {
            value: (r - 2) as f64 * n as f64 / (r - 1) as f64,
            slack: 1.0,
        }),
    })
}
