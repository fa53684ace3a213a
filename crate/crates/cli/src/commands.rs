use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, ValueEnum};
use removal_lab::bitset::BitSet;
use removal_lab::constructions::{lookup, registry, ConstructionParams};
use removal_lab::corpus::{manifest_row, standard_corpus, ManifestRow, MANIFEST_COLUMNS};
use removal_lab::counting::{
    count_anchored_copies, count_blowup_copies, count_constrained_copies, count_labeled_copies, is_valid_copy,
    BlowupSpec, CopyCount,
};
use removal_lab::decomposition::{chi3_decompose, cleanup_short_cycles, find_h_copies_pipeline, Chi3Mode, PipelineOptions};
use removal_lab::generators::cycle;
use removal_lab::graph::Graph;
use removal_lab::homomorphism::{find_homomorphism_with, is_homomorphism, minimal_images_with, HomSearch};
use removal_lab::invariants::{is_bipartite, is_cycle_in, summarize};
use removal_lab::io::{edge_list_string, load_graph, load_maps, maps_string, partition_string, save_graph};
use removal_lab::packing::{boost_cycles, greedy_packing, BoostOptions, Packing};
use removal_lab::tester::{certify_far, estimate_delta, power_law_fit, sample_test, EstimatorInstance};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{sig12, Report, Table};
use crate::{CliError, CliResult, GlobalOpts};

fn params<A: Serialize>(args: &A, global: &GlobalOpts) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), json!(global.seed()));
        m.insert("budget".into(), json!(global.budget().max_nodes));
    }
    v
}

fn load(path: &Path) -> CliResult<Graph> {
    load_graph(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn out_path(global: &GlobalOpts, explicit: &Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    explicit.clone().or_else(|| global.out.as_ref().map(|d| d.join(default_name)))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AnalyzeArgs {
    pub graph: PathBuf,
}

pub fn analyze(a: &AnalyzeArgs, global: &GlobalOpts) -> CliResult<Report> {
    let g = load(&a.graph)?;
    let s = summarize(&g, global.budget());
    let mut r = Report::new("analyze", params(a, global));
    let opt = |v: Option<usize>, none: &str| v.map_or(none.to_string(), |x| x.to_string());
    r.line(format!("n {}", s.n));
    r.line(format!("m {}", s.m));
    r.line(format!("min_degree {}", s.min_degree));
    r.line(format!("chi {}", opt(s.chi, "unknown")));
    r.line(format!("odd_girth {}", opt(s.odd_girth, "inf")));
    r.line(format!("critical_edges {}", opt(s.critical_edges, "unknown")));
    r.line(format!("bipartite {}", s.bipartite));
    let consistent = s.odd_girth.is_none() == is_bipartite(&g).is_some();
    r.check("odd-girth-bipartite", consistent, "infinite odd girth exactly when a bipartition exists");
    if let Some(w) = &s.odd_girth_witness {
        r.check("odd-girth-witness", is_cycle_in(&g, w, w.len()), format!("witness {w:?}"));
    }
    r.result = to_value(&s);
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HomArgs {
    pub h: PathBuf,
    pub f: PathBuf,
    /// Print the homomorphism found.
    #[arg(long)]
    pub witness: bool,
}

pub fn hom(a: &HomArgs, global: &GlobalOpts) -> CliResult<Report> {
    let h = load(&a.h)?;
    let f = load(&a.f)?;
    let mut r = Report::new("hom", params(a, global));
    match find_homomorphism_with(&h, &f, global.budget()) {
        HomSearch::Found(map) => {
            r.line("homomorphic yes");
            if a.witness {
                r.line(format!("map {}", map.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")));
            }
            r.check("witness", is_homomorphism(&h, &f, &map), "map preserves every edge");
            r.check("homomorphic", true, "a homomorphism exists");
            r.result = json!({ "homomorphic": true, "map": map });
        }
        HomSearch::NotFound => {
            r.line("homomorphic no");
            r.check("homomorphic", false, "no homomorphism exists");
            r.result = json!({ "homomorphic": false });
        }
        HomSearch::BudgetExhausted => {
            return Err(CliError::Core(removal_lab::error::Error::BudgetExceeded {
                what: "homomorphism search",
                limit: global.budget().max_nodes,
            }))
        }
    }
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ImagesArgs {
    pub h: PathBuf,
}

pub fn images(a: &ImagesArgs, global: &GlobalOpts) -> CliResult<Report> {
    let h = load(&a.h)?;
    let fam = minimal_images_with(&h, global.budget())?;
    let mut r = Report::new("images", params(a, global));
    r.line(format!("members {}", fam.members.len()));
    for (i, m) in fam.members.iter().enumerate() {
        r.line(format!("# member {i}"));
        r.text.push_str(&edge_list_string(&m.graph));
        let ok = is_homomorphism(&h, &m.graph, &m.witness);
        r.check(&format!("witness-{i}"), ok, "pattern maps onto the member");
    }
    r.result = to_value(&fam);
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CountArgs {
    pub h: PathBuf,
    pub g: PathBuf,
    /// Host vertices allowed for each pattern vertex, one line per pattern vertex.
    #[arg(long)]
    pub parts: Option<PathBuf>,
    /// Pin pattern edge x-y to host edge a-b.
    #[arg(long, num_args = 4, value_names = ["X", "Y", "A", "B"])]
    pub anchor: Option<Vec<usize>>,
    /// Count copies of the blow-up H[s1, ..., sh].
    #[arg(long, value_delimiter = ',')]
    pub blowup: Option<Vec<usize>>,
}

fn load_domains(path: &Path, h: &Graph, g: &Graph) -> CliResult<Vec<BitSet>> {
    let rows = load_maps(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if rows.len() != h.n() {
        return Err(CliError::Usage(format!(
            "{}: {} lines for a pattern on {} vertices",
            path.display(),
            rows.len(),
            h.n()
        )));
    }
    rows.into_iter()
        .map(|row| {
            if let Some(&v) = row.iter().find(|&&v| v >= g.n()) {
                return Err(CliError::Usage(format!("part vertex {v} out of range")));
            }
            Ok(BitSet::from_iter_with_len(g.n(), row))
        })
        .collect()
}

fn count_line(r: &mut Report, c: &CopyCount) {
    r.line(format!("copies {}", c.value));
    r.line(format!("density {}", sig12(c.normalized())));
    r.result = to_value(c);
}

pub fn count(a: &CountArgs, global: &GlobalOpts) -> CliResult<Report> {
    let h = load(&a.h)?;
    let g = load(&a.g)?;
    let domains = a.parts.as_ref().map(|p| load_domains(p, &h, &g)).transpose()?;
    let b = global.budget();
    let c = match (&a.blowup, &a.anchor) {
        (Some(_), Some(_)) => return Err(CliError::Usage("--blowup and --anchor are exclusive".into())),
        (Some(sizes), None) => {
            let spec = BlowupSpec::new(sizes.clone())?;
            let parts = domains.unwrap_or_else(|| (0..h.n()).map(|_| BitSet::full(g.n())).collect());
            count_blowup_copies(&h, &spec, &g, &parts, b)?
        }
        (None, Some(an)) => {
            if domains.is_some() {
                return Err(CliError::Usage("--parts and --anchor are exclusive".into()));
            }
            count_anchored_copies(&h, (an[0], an[1]), &g, (an[2], an[3]), b)?
        }
        (None, None) => match &domains {
            Some(parts) => count_constrained_copies(&h, &g, parts, b)?,
            None => count_labeled_copies(&h, &g, b)?,
        },
    };
    let mut r = Report::new("count", params(a, global));
    count_line(&mut r, &c);
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PackArgs {
    pub h: PathBuf,
    pub g: PathBuf,
    /// Copies file (default: packing.txt under --out).
    #[arg(long)]
    pub copies: Option<PathBuf>,
}

pub fn pack(a: &PackArgs, global: &GlobalOpts) -> CliResult<Report> {
    let h = load(&a.h)?;
    let g = load(&a.g)?;
    let p = greedy_packing(&h, &g, global.seed, global.budget())?;
    let mut r = Report::new("pack", params(a, global));
    r.line(format!("packing_size {}", p.len()));
    r.check("packing-valid", p.audit(&g).is_ok(), "copies are valid and pairwise edge-disjoint");
    if let Some(path) = out_path(global, &a.copies, "packing.txt") {
        write_file(&path, &maps_string(p.copies()))?;
        r.line(format!("copies_file {}", path.display()));
    }
    r.result = json!({ "packing_size": p.len(), "copies": p.copies() });
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoostArgs {
    pub g: PathBuf,
    /// Packing of a short odd cycle, one cycle per line in cyclic order.
    pub packing: PathBuf,
    /// Target cycle length is 2k+1.
    #[arg(long)]
    pub k: usize,
    /// Partition draws per root.
    #[arg(long, default_value_t = 8)]
    pub draws: usize,
}

pub fn boost(a: &BoostArgs, global: &GlobalOpts) -> CliResult<Report> {
    let g = load(&a.g)?;
    let copies = load_maps(&a.packing).map_err(|e| CliError::Usage(format!("{}: {e}", a.packing.display())))?;
    let len = copies.first().map_or(3, Vec::len);
    if copies.iter().any(|c| c.len() != len) {
        return Err(CliError::Usage("packing rows have different lengths".into()));
    }
    let p = Packing::from_copies(cycle(len), copies);
    let opts = BoostOptions {
        draws: a.draws,
        budget: global.budget(),
        ..BoostOptions::default()
    };
    let res = boost_cycles(&g, &p, a.k, global.seed(), opts)?;
    let mut r = Report::new("boost", params(a, global));
    let long = 2 * a.k + 1;
    r.line(format!("cycles {}", res.cycles.len()));
    let valid = res.cycles.iter().all(|c| is_cycle_in(&g, c, long));
    r.check("cycles-valid", valid, format!("every emitted cycle is a simple C_{long} of G"));
    if let Some(path) = out_path(global, &None, "cycles.txt") {
        write_file(&path, &maps_string(&res.cycles))?;
    } else {
        r.text.push_str(&maps_string(&res.cycles));
    }
    r.result = json!({ "report": res.report, "cycles": res.cycles });
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ConstructArgs {
    /// Construction name; see --list.
    #[arg(required_unless_present = "list")]
    pub name: Option<String>,
    /// List the registered constructions.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub parts: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
}

pub fn construct(a: &ConstructArgs, global: &GlobalOpts) -> CliResult<Report> {
    let mut r = Report::new("construct", params(a, global));
    if a.list {
        for c in registry() {
            r.line(format!("{:<14} {}", c.name(), c.summary()));
        }
        r.result = json!(registry().iter().map(|c| c.name()).collect::<Vec<_>>());
        return Ok(r);
    }
    let name = a.name.as_deref().unwrap_or_default();
    let c = lookup(name)?;
    let out = c.build(&ConstructionParams {
        n: a.n,
        parts: a.parts,
        r: a.r,
        k: a.k,
        alpha: a.alpha,
        eps: a.eps,
        m: a.m,
        seed: global.seed(),
    })?;
    let audit = out.audit();
    let dir = global.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}-n{}", out.name, out.graph.n())));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    save_graph(&out.graph, dir.join("graph.txt"))?;
    write_file(&dir.join("partition.txt"), &partition_string(&out.partition))?;
    if let Some(p) = &out.designed_packing {
        write_file(&dir.join("packing.txt"), &maps_string(p.copies()))?;
        write_file(&dir.join("pattern.txt"), &edge_list_string(p.pattern()))?;
    }
    let echo = json!({ "name": out.name, "params": out.params, "audit": audit });
    write_file(&dir.join("params.json"), &(serde_json::to_string_pretty(&echo).map_err(anyhow::Error::from)? + "\n"))?;

    r.line(format!("name {}", out.name));
    r.line(format!("n {}", out.graph.n()));
    r.line(format!("m {}", out.graph.m()));
    r.line(format!("min_degree {}", audit.min_degree));
    if let Some(s) = audit.packing_size {
        r.line(format!("packing_size {s}"));
    }
    r.line(format!("written {}", dir.display()));
    r.check("partition-valid", audit.partition_valid, "every edge joins an allowed pair of parts");
    if let Some(ok) = audit.packing_valid {
        r.check("packing-valid", ok, "designed copies are valid and edge-disjoint");
    }
    if let Some(claim) = audit.degree_claim {
        r.check("degree-claim", audit.degree_ok, format!("δ = {} against {claim:?}", audit.min_degree));
    }
    r.result = echo;
    Ok(r)
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Triangle,
    Cycle,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DecomposeArgs {
    pub h: PathBuf,
    /// Oriented critical edge.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], required = true)]
    pub edge: Vec<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Triangle)]
    pub mode: ModeArg,
    /// Cycle mode targets C_{2k+1}.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

pub fn decompose(a: &DecomposeArgs, global: &GlobalOpts) -> CliResult<Report> {
    let h = load(&a.h)?;
    let mode = match a.mode {
        ModeArg::Triangle => Chi3Mode::Triangle,
        ModeArg::Cycle => Chi3Mode::Cycle { k: a.k },
    };
    let d = chi3_decompose(&h, (a.edge[0], a.edge[1]), mode)?;
    let mut r = Report::new("decompose", params(a, global));
    r.text.push_str(&partition_string(&d.parts));
    r.check("edges-contained", d.parts.is_valid_for(&h), "every edge joins an allowed pair of parts");
    if let Chi3Mode::Cycle { k } = mode {
        let hom = is_homomorphism(&h, &cycle(2 * k + 1), d.part_map());
        r.check("cycle-homomorphism", hom, format!("part map is a homomorphism to C_{}", 2 * k + 1));
    }
    let parts: Vec<Value> = (0..d.parts.num_parts())
        .map(|p| json!({ "name": d.parts.name(p), "members": d.part_members(p) }))
        .collect();
    r.result = json!({ "mode": mode, "x": d.x, "y": d.y, "parts": parts });
    if let Some(path) = out_path(global, &None, "partition.txt") {
        write_file(&path, &partition_string(&d.parts))?;
    }
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CleanupArgs {
    pub g: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub alpha: f64,
    /// Where to write G' (default: residual.txt under --out).
    #[arg(long)]
    pub residual: Option<PathBuf>,
}

pub fn cleanup(a: &CleanupArgs, global: &GlobalOpts) -> CliResult<Report> {
    let g = load(&a.g)?;
    let c = cleanup_short_cycles(&g, a.k, a.alpha, global.seed)?;
    let rep = &c.report;
    let mut r = Report::new("cleanup", params(a, global));
    r.line(format!("packing_sizes {:?}", rep.packing_sizes));
    r.line(format!("cut_edges {}", rep.cut_edges));
    r.line(format!("threshold {}", rep.threshold));
    r.line(format!("removed {}", rep.removed));
    r.line(format!("kept_vertices {}", rep.kept_vertices));
    r.line(format!("residual_min_degree {}", rep.residual_min_degree));
    r.line(format!("residual_degree_bound {}", sig12(rep.residual_degree_bound)));
    r.line(format!("eps_c_implied {}", sig12(rep.eps_c_implied)));
    r.line(format!("hypotheses_hold {}", rep.hypotheses_hold()));
    for f in &rep.flags {
        r.line(format!("flag {f}"));
    }
    let og = rep.residual_odd_girth;
    r.check(
        "residual-odd-girth",
        og.is_none_or(|l| l > 2 * a.k + 1),
        format!("odd girth of G' is {}", og.map_or("inf".into(), |l| l.to_string())),
    );
    let guaranteed = rep.hypotheses_hold();
    for (id, holds, what) in [
        ("removed-bound", rep.removed_bound_holds, "|S| < alpha n / 10"),
        ("kept-bound", rep.kept_bound_holds, "|V(G')| > (1 - alpha/10) n"),
        ("residual-degree-bound", rep.residual_degree_holds, "δ(G') > (1/4 + 4 alpha/5) n"),
    ] {
        // Outside the hypotheses a miss is reported, not failed.
        let detail = match (holds, guaranteed) {
            (true, _) => what.to_string(),
            (false, true) => format!("{what} violated"),
            (false, false) => format!("{what} fails, hypotheses not met"),
        };
        r.check(id, holds || !guaranteed, detail);
    }
    if let Some(path) = out_path(global, &a.residual, "residual.txt") {
        write_file(&path, &edge_list_string(&c.residual))?;
        r.line(format!("residual_file {}", path.display()));
    }
    r.result = to_value(rep);
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PipelineArgs {
    pub h: PathBuf,
    pub g: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    /// Process at most this many anchors.
    #[arg(long)]
    pub max_anchors: Option<usize>,
}

pub fn pipeline(a: &PipelineArgs, global: &GlobalOpts) -> CliResult<Report> {
    let h = load(&a.h)?;
    let g = load(&a.g)?;
    let opts = PipelineOptions {
        budget: global.budget(),
        seed: global.seed(),
        max_anchors: a.max_anchors,
        ..PipelineOptions::default()
    };
    let res = find_h_copies_pipeline(&h, &g, a.alpha, &opts)?;
    let t = &res.trace;
    let mut r = Report::new("pipeline", params(a, global));
    r.line(format!("case {:?}", t.case));
    r.line(format!("critical_edge {}", t.critical_edge));
    r.line(format!("anchors {}", t.anchors_total));
    r.line(format!("copies {}", res.total.value));
    r.line(format!("density {}", sig12(res.total.normalized())));
    for tally in &t.tallies {
        r.line(format!(
            "tally {} {} anchors={} copies={}",
            tally.source, tally.recipe, tally.anchors, tally.copies
        ));
    }
    for f in &t.flags {
        r.line(format!("flag {f}"));
    }
    let valid = res.sample.iter().all(|m| is_valid_copy(&h, &g, m));
    r.check("sample-valid", valid, format!("{} sampled copies are valid", res.sample.len()));
    for (i, c) in t.refinement_checks.iter().enumerate() {
        r.check(&format!("refinement-{}", i + 1), !c.violated(), format!("{}: {}", c.name, c.detail));
    }
    let violated = t.flags.iter().any(|f| f.contains("VIOLATED"));
    r.check("no-violations", !violated, "no guaranteed bound failed");
    r.result = json!({ "total": res.total, "sample": res.sample, "trace": t });
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TestHomArgs {
    pub g: PathBuf,
    pub f: PathBuf,
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = 400)]
    pub trials: usize,
    /// Also compute an edit-distance certificate.
    #[arg(long)]
    pub certify: bool,
}

pub fn test_hom(a: &TestHomArgs, global: &GlobalOpts) -> CliResult<Report> {
    let g = load(&a.g)?;
    let f = load(&a.f)?;
    let t = sample_test(&g, &f, a.q, a.trials, global.seed(), global.budget())?;
    let mut r = Report::new("test-hom", params(a, global));
    r.line(format!("reject_freq {}", sig12(t.reject_freq)));
    r.line(format!("rejects {}", t.rejects));
    r.line(format!("undecided {}", t.undecided));
    r.line(format!("distinct_fraction {}", sig12(t.distinct_fraction)));
    let mut result = json!({ "tester": t });
    if a.certify {
        let c = certify_far(&g, &f, global.budget())?;
        r.line(format!("far_lower_bound {}", c.lower_bound));
        if let Some(u) = c.upper_bound {
            r.line(format!("far_upper_bound {u}"));
        }
        result["certificate"] = to_value(&c);
    }
    r.result = result;
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EstimateArgs {
    pub h: PathBuf,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sweep: Vec<f64>,
    #[arg(long)]
    pub n: usize,
    /// Construction supplying the instances; eps is swept.
    #[arg(long, default_value = "turan-regular")]
    pub construction: String,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
}

pub fn estimate(a: &EstimateArgs, global: &GlobalOpts) -> CliResult<Report> {
    let h = load(&a.h)?;
    let c = lookup(&a.construction)?;
    let mut instances = Vec::new();
    for (i, &eps) in a.sweep.iter().enumerate() {
        let out = c.build(&ConstructionParams {
            n: Some(a.n),
            r: Some(a.r),
            eps: Some(eps),
            seed: removal_lab::rng::derive_seed(global.seed(), "estimate", i as u64),
            ..ConstructionParams::default()
        })?;
        let packing = out.designed_packing.filter(|p| p.pattern() == &h);
        instances.push(EstimatorInstance {
            id: format!("{}-n{}-eps{}", out.name, a.n, sig12(eps)),
            graph: out.graph,
            packing,
        });
    }
    let reports = estimate_delta(&h, a.gamma, &instances, global.seed(), global.budget())?;
    let mut table = Table::new(&["instance", "n", "gamma_realized", "eps_realized", "copies", "copy_density"]);
    for e in &reports {
        table.rows.push(vec![
            e.instance.clone(),
            e.n.to_string(),
            sig12(e.gamma_realized),
            sig12(e.eps_realized),
            e.copies.value.to_string(),
            sig12(e.copy_density),
        ]);
    }
    let points: Vec<(f64, f64)> = reports.iter().map(|e| (e.eps_realized, e.copy_density)).collect();
    let fit = power_law_fit(&points);
    let mut r = Report::new("estimate", params(a, global));
    r.text.push_str(&table.to_csv()?);
    if let Some(f) = &fit {
        eprintln!(
            "fit copy_density = {} * eps^{} (rms log residual {}, {} points)",
            sig12(f.prefactor),
            sig12(f.exponent),
            sig12(f.residual),
            f.points
        );
    }
    let leak = reports.iter().any(|e| e.eps_realized == 0.0 && e.copy_density > 0.0 && e.packing_size == 0);
    r.check("density-without-packing", !leak, "no copies reported where the packing is empty");
    r.result = json!({ "rows": reports, "fit": fit, "note": "each row is one explicit instance, so it bounds the threshold function from above only" });
    r.table = Some(table);
    Ok(r)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CorpusArgs {}

pub fn corpus(a: &CorpusArgs, global: &GlobalOpts) -> CliResult<Report> {
    let dir = global
        .out
        .clone()
        .ok_or_else(|| CliError::Usage("corpus needs --out DIR".into()))?;
    let entries = standard_corpus(global.seed())?;
    let rows: Vec<ManifestRow> = entries.iter().map(|e| manifest_row(e, global.budget())).collect();
    for e in &entries {
        write_file(&dir.join("graphs").join(format!("{}.txt", e.name)), &edge_list_string(&e.graph))?;
        if let Some(p) = &e.partition {
            write_file(&dir.join("partitions").join(format!("{}.txt", e.name)), &partition_string(p))?;
        }
        if let Some(p) = &e.packing {
            write_file(&dir.join("packings").join(format!("{}.txt", e.name)), &maps_string(p.copies()))?;
        }
    }
    let mut table = Table::new(&MANIFEST_COLUMNS);
    let cell = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
    for m in &rows {
        table.rows.push(vec![
            m.name.clone(),
            m.family.clone(),
            m.n.to_string(),
            m.m.to_string(),
            m.min_degree.to_string(),
            m.max_degree.to_string(),
            cell(m.odd_girth),
            m.bipartite.to_string(),
            cell(m.chi),
            cell(m.packing_size),
        ]);
    }
    write_file(&dir.join("manifest.csv"), &table.to_csv()?)?;
    let manifest = json!({ "seed": global.seed(), "columns": MANIFEST_COLUMNS, "graphs": rows });
    write_file(&dir.join("manifest.json"), &(serde_json::to_string_pretty(&manifest).map_err(anyhow::Error::from)? + "\n"))?;

    let mut r = Report::new("corpus", params(a, global));
    r.line(format!("graphs {}", rows.len()));
    r.line(format!("written {}", dir.display()));
    let consistent = rows.iter().all(|m| m.odd_girth.is_none() == m.bipartite);
    r.check("odd-girth-bipartite", consistent, "infinite odd girth exactly for bipartite graphs");
    r.result = json!({ "graphs": rows.len() });
    Ok(r)
}
