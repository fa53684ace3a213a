//! The ten acceptance criteria. Runs without the libtest harness so every
//! criterion prints one PASS or FAIL line; exits non-zero on any failure.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng as _;
use removal_lab::bitset::BitSet;
use removal_lab::budget::Budget;
use removal_lab::constructions::{
    behrend_set, double_gadget_construction, padded_rs_construction, rs_gadget, turan_regular_construction, RsLayout,
};
use removal_lab::counting::{
    count_anchored_copies, count_blowup_copies, count_constrained_copies, count_labeled_copies, BlowupSpec,
};
use removal_lab::decomposition::{chi3_decompose, cleanup_short_cycles, max_cycle_k, Chi3Mode};
use removal_lab::generators::{
    blowup, complete, complete_bipartite, cycle, random_bipartite, random_graph, with_pendant_path,
};
use removal_lab::graph::{Graph, GraphBuilder};
use removal_lab::homomorphism::minimal_images;
use removal_lab::invariants::critical_edges;
use removal_lab::packing::{boost_cycles, greedy_packing, BoostOptions, Packing};
use removal_lab::rng;
use removal_lab::tester::{estimate_delta, power_law_fit, sample_test, EstimatorInstance};

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn budget() -> Budget {
    Budget::default()
}

fn random_pattern(r: &mut rng::Rng, h: usize) -> Graph {
    let mut gb = GraphBuilder::new(h);
    for u in 0..h {
        for v in u + 1..h {
            if r.gen_bool(0.6) {
                gb.add_edge(u, v);
            }
        }
    }
    gb.build()
}

fn random_subset(r: &mut rng::Rng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| r.gen_bool(0.7)).collect()
}

fn counting_oracles() -> Outcome {
    let mut checked = 0;
    for i in 0..200u64 {
        let mut r = rng::stream(2024, "acceptance-counting", i);
        let order = r.gen_range(1..=4);
        let h = random_pattern(&mut r, order);
        let n = r.gen_range(h.n()..=8);
        let g = random_graph(n, r.gen_range(0.3..0.9), r.gen());

        let labeled = ok(count_labeled_copies(&h, &g, budget()))?.to_u128().unwrap();
        let want = naive_copies(&h, &g, &|_| true);
        ensure!(labeled == want, "pair {i}: labeled {labeled} != naive {want}");

        let allowed: Vec<Vec<usize>> = (0..h.n()).map(|_| random_subset(&mut r, n)).collect();
        let parts: Vec<BitSet> = allowed.iter().map(|a| BitSet::from_iter_with_len(n, a.iter().copied())).collect();
        let got = ok(count_constrained_copies(&h, &g, &parts, budget()))?.to_u128().unwrap();
        let want = naive_copies(&h, &g, &|m| m.iter().enumerate().all(|(x, v)| allowed[x].contains(v)));
        ensure!(got == want, "pair {i}: constrained {got} != naive {want}");

        let h_edges = edge_list(&h);
        let g_edges = edge_list(&g);
        if !h_edges.is_empty() && !g_edges.is_empty() {
            let (x, y) = h_edges[r.gen_range(0..h_edges.len())];
            let (a, b) = g_edges[r.gen_range(0..g_edges.len())];
            let (a, b) = if r.gen_bool(0.5) { (a, b) } else { (b, a) };
            let got = ok(count_anchored_copies(&h, (x, y), &g, (a, b), budget()))?.to_u128().unwrap();
            let want = naive_copies(&h, &g, &|m| m[x] == a && m[y] == b);
            ensure!(got == want, "pair {i}: anchored {got} != naive {want}");
        }

        let mut sizes: Vec<usize> = (0..h.n()).map(|_| r.gen_range(1..=2)).collect();
        while sizes.iter().sum::<usize>() > n {
            let j = sizes.iter().position(|&s| s == 2).unwrap();
            sizes[j] = 1;
        }
        let (blown, class) = naive_blowup(&h, &sizes);
        let spec = ok(BlowupSpec::new(sizes.clone()))?;
        let got = ok(count_blowup_copies(&h, &spec, &g, &parts, budget()))?.to_u128().unwrap();
        let want = naive_copies(&blown, &g, &|m| m.iter().enumerate().all(|(z, v)| allowed[class[z]].contains(v)));
        ensure!(got == want, "pair {i}: blow-up {sizes:?} {got} != naive {want}");
        checked += 1;
    }
    Ok(format!("{checked} random pairs, four counting functions agree with enumeration"))
}

fn rs_gadget_exactness() -> Outcome {
    let mut notes = Vec::new();
    for m in [20, 50, 100] {
        let set = behrend_set(m);
        let out = ok(rs_gadget(1, m, &set, RsLayout::Shifted))?;
        let tri = triangles(&out.graph).len() as u128 * 6;
        let want = 6 * (m * set.len()) as u128;
        ensure!(tri == want, "m = {m}: {tri} labeled triangles, expected {want}");
        let p = out.designed_packing.as_ref().unwrap();
        let mut seen = HashSet::new();
        for c in p.copies() {
            for j in 0..3 {
                let (a, b) = (c[j], c[(j + 1) % 3]);
                ensure!(out.graph.has_edge(a, b), "designated triangle {c:?} is not in the graph");
                ensure!(seen.insert((a.min(b), a.max(b))), "designated triangles share edge {a}-{b}");
            }
        }
        ensure!(p.len() == m * set.len(), "m = {m}: {} designated triangles", p.len());
        notes.push(format!("m={m} |B|={}", set.len()));
    }
    Ok(notes.join(", "))
}

fn padded_rs_checks() -> Outcome {
    let mut notes = Vec::new();
    for n in [150, 300] {
        for alpha in [0.2, 0.5] {
            let out = ok(padded_rs_construction(1, n, alpha, None))?;
            let g = &out.graph;
            let target = (1.0 - alpha) * n as f64 / 3.0;
            let delta = g.min_degree() as f64;
            ensure!((delta - target).abs() <= 3.0, "n={n} alpha={alpha}: δ = {delta}, target {target}");
            let mut u_vertices = vec![false; n];
            for i in 1..=3 {
                for v in ok(out.part(&format!("U_{i}")))? {
                    u_vertices[v] = true;
                }
            }
            let touching = triangles(g).iter().filter(|t| t.iter().any(|&v| u_vertices[v])).count();
            ensure!(touching == 0, "n={n} alpha={alpha}: {touching} triangles touch U");
            notes.push(format!("n={n} α={alpha} δ={delta}"));
        }
    }
    Ok(notes.join(", "))
}

fn double_gadget_checks() -> Outcome {
    let mut cases = 0;
    for n in [40, 80, 120, 160, 200] {
        for (j, eps) in [0.02, 0.05, 0.1].into_iter().enumerate() {
            let out = ok(double_gadget_construction(3, n, eps, 100 + j as u64))?;
            let g = &out.graph;
            ensure!(g.min_degree() + 2 >= n / 4, "n={n} eps={eps}: δ = {}", g.min_degree());
            let part = |name: &str| -> Result<Vec<bool>, String> {
                let mut mask = vec![false; n];
                for v in ok(out.part(name))? {
                    mask[v] = true;
                }
                Ok(mask)
            };
            let (v1, v2, v3) = (part("V_1")?, part("V_2")?, part("V_3")?);
            let tris = triangles(g);
            for t in &tris {
                let edge_between = |a: &[bool], b: &[bool]| {
                    (0..3).filter(|&i| {
                        let (x, y) = (t[i], t[(i + 1) % 3]);
                        (a[x] && b[y]) || (a[y] && b[x])
                    })
                    .count()
                };
                ensure!(
                    edge_between(&v1, &v2) == 1 && edge_between(&v1, &v3) == 1,
                    "n={n} eps={eps}: triangle {t:?} misses the gadget edges"
                );
            }
            // Each V_1 vertex has d neighbours in V_2 and d in V_3, and
            // V_2–V_3 is complete, so it heads exactly d^2 triangles.
            let d = out.params.degree.unwrap();
            for x in (0..n).filter(|&x| v1[x]) {
                let a = (0..n).filter(|&y| v2[y] && g.has_edge(x, y)).count();
                let b = (0..n).filter(|&y| v3[y] && g.has_edge(x, y)).count();
                ensure!(a == d && b == d, "vertex {x}: multiplicities {a}, {b} instead of {d}");
            }
            let size1 = v1.iter().filter(|&&b| b).count();
            let want = 6 * size1 * d * d;
            ensure!(tris.len() * 6 == want, "n={n} eps={eps}: {} labeled triangles, formula {want}", tris.len() * 6);
            cases += 1;
        }
        let flat = ok(double_gadget_construction(3, n, 0.0, 1))?;
        ensure!(two_color(&flat.graph).is_some(), "n={n}: eps = 0 graph is not bipartite");
        ensure!(flat.graph.m() > 0, "n={n}: eps = 0 graph is empty");
    }
    Ok(format!("{cases} (n, eps) cases, eps = 0 bipartite for all n"))
}

fn theta_like(odd: usize, even: usize) -> Graph {
    // An odd cycle and an even cycle glued at vertex 0.
    let mut gb = GraphBuilder::new(odd + even - 1);
    for i in 0..odd {
        gb.add_edge(i, (i + 1) % odd);
    }
    let mut prev = 0;
    for j in 0..even - 1 {
        let v = odd + j;
        gb.add_edge(prev, v);
        prev = v;
    }
    gb.add_edge(prev, 0);
    gb.build()
}

fn decomposition_suite() -> Outcome {
    let suite: Vec<(&str, Graph)> = vec![
        ("C3", cycle(3)),
        ("C5", cycle(5)),
        ("C7", cycle(7)),
        ("C9", cycle(9)),
        ("C3+P2", with_pendant_path(&cycle(3), 0, 2)),
        ("C5+P2", with_pendant_path(&cycle(5), 0, 2)),
        ("C5+P3@2", with_pendant_path(&cycle(5), 2, 3)),
        ("C7+P1", with_pendant_path(&cycle(7), 3, 1)),
        ("C7+P4", with_pendant_path(&cycle(7), 0, 4)),
        ("C3.C4", theta_like(3, 4)),
        ("C5.C6", theta_like(5, 6)),
        ("C7.C4", theta_like(7, 4)),
    ];
    let mut runs = 0;
    for (name, h) in &suite {
        let crit = ok(critical_edges(h))?;
        ensure!(crit.chi == 3 && !crit.edges.is_empty(), "{name}: not 3-chromatic with a critical edge");
        let girth = naive_odd_girth(h).unwrap();
        let kmax = max_cycle_k(h).unwrap();
        ensure!(2 * kmax + 1 == girth, "{name}: max k {kmax} vs odd girth {girth}");
        for e in &crit.edges {
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                let mut modes = vec![Chi3Mode::Triangle];
                modes.extend((2..=kmax).map(|k| Chi3Mode::Cycle { k }));
                for mode in modes {
                    let d = ok(chi3_decompose(h, (x, y), mode))?;
                    let part = d.part_map();
                    ensure!(part[x] == 0 && part[y] == 1, "{name} {mode:?}: anchor parts");
                    ensure!(
                        (0..h.n()).filter(|&v| part[v] <= 1).count() == 2,
                        "{name} {mode:?}: first two parts are not singletons"
                    );
                    for (a, b) in edge_list(h) {
                        let (p, q) = (part[a].min(part[b]), part[a].max(part[b]));
                        let fine = match mode {
                            Chi3Mode::Triangle => matches!((p, q), (0, 1) | (0, 2) | (1, 2) | (2, 3)),
                            Chi3Mode::Cycle { k } => q - p == 1 || (p == 0 && q == 2 * k),
                        };
                        ensure!(fine, "{name} {mode:?}: edge {a}-{b} joins parts {p}, {q}");
                    }
                    if let Chi3Mode::Cycle { k } = mode {
                        let target = cycle(2 * k + 1);
                        ensure!(maps_edges(h, &target, part), "{name}: part map is not a homomorphism");
                        ensure!(find_hom(h, &target).is_some(), "{name}: independent search finds no map to C_{}", 2 * k + 1);
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{} patterns, {runs} decompositions audited", suite.len()))
}

fn is_cycle_graph(g: &Graph, len: usize) -> bool {
    g.n() == len && g.m() == len && (0..len).all(|v| g.degree(v) == 2) && naive_odd_girth(g) == Some(len)
}

fn minimal_image_checks() -> Outcome {
    for k in 1..=3 {
        let len = 2 * k + 1;
        let h = cycle(len);
        let fam = ok(minimal_images(&h))?;
        let mut found: BTreeSet<usize> = BTreeSet::new();
        for m in &fam.members {
            let g = &m.graph;
            let which = (1..=k).map(|j| 2 * j + 1).find(|&l| is_cycle_graph(g, l));
            let Some(l) = which else {
                return Err(format!("C{len}: member with n={} m={} is not an odd cycle", g.n(), g.m()));
            };
            ensure!(found.insert(l), "C{len}: C{l} listed twice");
            ensure!(maps_edges(&h, g, &m.witness), "C{len}: witness onto C{l} is not a homomorphism");
            for (a, b) in edge_list(g) {
                let smaller = Graph::from_edges(
                    g.n(),
                    &edge_list(g).into_iter().filter(|&e| e != (a, b)).collect::<Vec<_>>(),
                )
                .unwrap();
                ensure!(find_hom(&h, &smaller).is_none(), "C{len}: C{l} minus an edge is still an image");
            }
        }
        let want: BTreeSet<usize> = (1..=k).map(|j| 2 * j + 1).collect();
        ensure!(found == want, "C{len}: members {found:?}, expected {want:?}");
    }
    Ok("C3, C5, C7 families match with witnesses and edge-minimality".into())
}

fn planted_bipartite(a: usize, t: usize, seed: u64) -> Graph {
    let mut gb = GraphBuilder::from(&complete_bipartite(a, a));
    let mut left: Vec<usize> = (0..a).collect();
    rand::seq::SliceRandom::shuffle(&mut left[..], &mut rng::stream(seed, "acceptance-plant", a as u64));
    for pair in left.chunks(2).take(t) {
        gb.add_edge(pair[0], pair[1]);
    }
    gb.build()
}

fn cleanup_instances() -> Vec<(String, Graph, usize, f64)> {
    let mut out = Vec::new();
    for (i, (a, t)) in [(100, 0), (100, 3), (150, 5), (150, 8), (200, 0), (200, 4), (200, 8), (200, 10)]
        .into_iter()
        .enumerate()
    {
        let k = 1 + i % 2;
        out.push((format!("K{a},{a}+{t}"), planted_bipartite(a, t, i as u64), k, 0.2));
    }
    for (n_part, planted) in [(20, false), (40, false), (40, true)] {
        let (g, _) = blowup(&cycle(7), &[n_part; 7]).unwrap();
        let mut gb = GraphBuilder::from(&g);
        if planted {
            gb.add_edge(0, 1);
        }
        for k in [1, 2] {
            out.push((format!("C7[{n_part}]{}", if planted { "+1" } else { "" }), gb.clone().build(), k, 0.03));
        }
    }
    for k in [1, 2] {
        let mut gb = GraphBuilder::from(&random_bipartite(100, 100, 0.6, 11 + k as u64));
        for j in 0..5 {
            gb.add_edge(2 * j, 2 * j + 1);
        }
        out.push((format!("bip(100,100,0.6)+5 k={k}"), gb.build(), k, 0.2));
    }
    for (n, p) in [(60, 0.3), (120, 0.2)] {
        for k in [1, 2] {
            out.push((format!("G({n},{p})"), random_graph(n, p, n as u64), k, 0.1));
        }
    }
    out
}

fn cleanup_checks() -> Outcome {
    let instances = cleanup_instances();
    ensure!(instances.len() == 20, "{} instances", instances.len());
    let mut guaranteed = 0;
    let mut flagged = 0;
    for (i, (name, g, k, alpha)) in instances.iter().enumerate() {
        ensure!(g.n() <= 400, "{name}: n = {}", g.n());
        let c = ok(cleanup_short_cycles(g, *k, *alpha, Some(i as u64)))?;
        let girth = naive_odd_girth(&c.residual);
        ensure!(girth.is_none_or(|l| l > 2 * k + 1), "{name}: residual odd girth {girth:?}");
        let by_sizes: usize = (1..=*k).map(|l| (2 * l + 1) * c.packings[l - 1].len()).sum();
        ensure!(c.cut_edges.len() == by_sizes, "{name}: |E_c| = {} vs {by_sizes}", c.cut_edges.len());
        let distinct: HashSet<_> = c.cut_edges.iter().collect();
        ensure!(distinct.len() == c.cut_edges.len(), "{name}: packings overlap");
        let n = g.n() as f64;
        let s_bound = (c.removed.len() as f64) < alpha * n / 10.0;
        let kept_min = c.kept_vertices().iter().map(|&v| c.residual.degree(v)).min().unwrap_or(0);
        let deg_bound = kept_min as f64 > (0.25 + 0.8 * alpha) * n;
        let hyp = g.min_degree() as f64 >= (0.25 + alpha) * n && (c.cut_edges.len() as f64) < alpha * alpha * n * n / 200.0;
        ensure!(hyp == c.report.hypotheses_hold(), "{name}: hypothesis bookkeeping disagrees");
        if hyp {
            ensure!(s_bound && deg_bound, "{name}: hypotheses hold but |S| or δ(G') bound fails");
            ensure!(!c.report.flags.iter().any(|f| f.contains("VIOLATED")), "{name}: violation flag");
            guaranteed += 1;
        } else {
            ensure!(!c.report.flags.is_empty(), "{name}: hypotheses fail without a flag");
            flagged += 1;
        }
    }
    ensure!(guaranteed >= 5, "only {guaranteed} instances meet the hypotheses");
    Ok(format!("20 instances: {guaranteed} with hypotheses (bounds hold), {flagged} flagged"))
}

fn tester_checks() -> Outcome {
    let out = ok(double_gadget_construction(3, 200, 0.05, 8))?;
    let r = ok(sample_test(&out.graph, &complete(2), 60, 400, 2024, budget()))?;
    ensure!(r.undecided == 0, "{} undecided trials", r.undecided);
    ensure!(r.reject_freq >= 2.0 / 3.0, "reject_freq {} < 2/3", r.reject_freq);
    let flat = ok(double_gadget_construction(3, 200, 0.0, 8))?;
    for (name, g) in [
        ("eps=0 gadget", flat.graph),
        ("K100,100", complete_bipartite(100, 100)),
        ("random bipartite", random_bipartite(90, 110, 0.3, 5)),
    ] {
        let b = ok(sample_test(&g, &complete(2), 60, 400, 2024, budget()))?;
        ensure!(b.rejects == 0, "{name}: {} rejects on a bipartite host", b.rejects);
    }
    Ok(format!("reject_freq {:.4} at q=60, 400 trials; bipartite hosts 0", r.reject_freq))
}

fn boost_checks() -> Outcome {
    let mut emitted = 0;
    let mut instances = Vec::new();
    for s in 0..4u64 {
        instances.push((random_graph(16, 0.5, s), 3, 2));
        instances.push((random_graph(20, 0.35, 10 + s), 3, 2));
    }
    instances.push((complete(9), 3, 2));
    instances.push((complete(10), 3, 3));
    instances.push((random_graph(14, 0.5, 77), 5, 3));
    instances.push((random_graph(18, 0.4, 78), 3, 3));
    for (i, (g, short, k)) in instances.iter().enumerate() {
        let packing = ok(greedy_packing(&cycle(*short), g, Some(i as u64), budget()))?;
        let p = Packing::from_copies(cycle(*short), packing.into_copies());
        let r = ok(boost_cycles(g, &p, *k, i as u64, BoostOptions::default()))?;
        let len = 2 * k + 1;
        let all = all_cycles(g, len);
        for c in &r.cycles {
            ensure!(c.len() == len, "instance {i}: cycle of length {}", c.len());
            let distinct: HashSet<_> = c.iter().collect();
            ensure!(distinct.len() == len, "instance {i}: repeated vertex in {c:?}");
            ensure!((0..len).all(|j| g.has_edge(c[j], c[(j + 1) % len])), "instance {i}: {c:?} is not a cycle of G");
            ensure!(all.contains(&normalize_cycle(c)), "instance {i}: {c:?} missing from the enumeration");
        }
        emitted += r.cycles.len();
    }
    ensure!(emitted > 0, "no cycles were emitted");
    Ok(format!("{} instances, {emitted} emitted cycles all in the enumeration", instances.len()))
}

fn scaling_checks() -> Outcome {
    let h = bowtie();
    let mut instances = Vec::new();
    for (i, eps) in [0.04, 0.06, 0.08, 0.10, 0.12].into_iter().enumerate() {
        let out = ok(turan_regular_construction(3, 200, eps, 31 + i as u64))?;
        ensure!(out.audit().passed(), "eps={eps}: construction audit failed");
        let formula = bowtie_formula(&out.graph);
        let counted = ok(count_labeled_copies(&h, &out.graph, budget()))?.to_u128().unwrap();
        ensure!(counted == formula, "eps={eps}: count {counted} vs neighbourhood formula {formula}");
        let packing = out.designed_packing.clone().ok_or("no designed packing")?;
        ensure!(packing.pattern() == &h, "designed packing is not a bowtie packing");
        instances.push(EstimatorInstance {
            id: format!("turan-regular-eps{eps}"),
            graph: out.graph,
            packing: Some(packing),
        });
    }
    let reports = ok(estimate_delta(&h, 0.5, &instances, 5, budget()))?;
    let points: Vec<(f64, f64)> = reports.iter().map(|r| (r.eps_realized, r.copy_density)).collect();
    ensure!(points.iter().all(|p| p.0 > 0.0 && p.1 > 0.0), "degenerate sweep {points:?}");
    let fit = power_law_fit(&points).ok_or("fit failed")?;
    ensure!(
        (1.8..=2.2).contains(&fit.exponent),
        "exponent {:.4} outside [1.8, 2.2] (residual {:.3e})",
        fit.exponent,
        fit.residual
    );
    Ok(format!("exponent {:.4}, prefactor {:.4e}, residual {:.3e}", fit.exponent, fit.prefactor, fit.residual))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("counting oracle equivalence", 60, counting_oracles),
        ("triangle gadget exactness", 120, rs_gadget_exactness),
        ("padded gadget degree and isolation", 120, padded_rs_checks),
        ("double gadget structure", 120, double_gadget_checks),
        ("critical-edge decomposition suite", 30, decomposition_suite),
        ("minimal images of odd cycles", 120, minimal_image_checks),
        ("short odd cycle cleanup", 300, cleanup_checks),
        ("sampling tester statistics", 120, tester_checks),
        ("boosted cycle validity", 120, boost_checks),
        ("copy density scaling", 300, scaling_checks),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; took {took:.1?} > {limit} s")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{took:.2?}]", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {msg} [{took:.2?}]", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
