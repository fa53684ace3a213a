//! Sequential experiment orchestration from a JSON config.
//!
//! ```json
//! { "seed": 7, "out": "results", "budget": 100000000,
//!   "experiments": [ { "id": "c9", "args": ["analyze", "corpus/graphs/cycle-9.txt"] } ] }
//! ```
//!
//! Each experiment writes its report under `out/<id>/` and inherits the
//! config seed and budget unless its own arguments set them.

use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{Report, Table};
use crate::{dispatch, Cli, CliError, CliResult, Command, GlobalOpts};

#[derive(Args, Debug, Clone, Serialize)]
pub struct RunArgs {
    pub config: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    budget: Option<u64>,
    #[serde(default)]
    experiments: Vec<Experiment>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Experiment {
    id: String,
    args: Vec<String>,
}

pub fn run(a: &RunArgs, global: &GlobalOpts) -> CliResult<Report> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let config: Config =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", a.config.display())))?;
    if config.experiments.is_empty() {
        return Err(CliError::Usage("config lists no experiments".into()));
    }
    let root = global.out.clone().or(config.out.clone()).unwrap_or_else(|| PathBuf::from("results"));
    let seed = global.seed.or(config.seed);
    let budget = global.budget.or(config.budget);

    let mut parsed = Vec::new();
    for e in &config.experiments {
        if e.id.is_empty() || e.id.contains(['/', '\\']) || e.id.starts_with('.') {
            return Err(CliError::Usage(format!("bad experiment id `{}`", e.id)));
        }
        let argv = std::iter::once("removal-lab".to_string()).chain(e.args.iter().cloned());
        let cli = Cli::try_parse_from(argv).map_err(|err| CliError::Usage(format!("experiment {}: {err}", e.id)))?;
        if matches!(cli.command, Command::Run(_)) {
            return Err(CliError::Usage(format!("experiment {}: nested run", e.id)));
        }
        parsed.push((e, cli));
    }

    let mut table = Table::new(&["id", "command", "exit_code", "checks", "failed", "error"]);
    let mut report = Report::new("run", json!({ "config": a.config, "seed": seed, "budget": budget, "out": root }));
    for (e, cli) in parsed {
        let g = GlobalOpts {
            json: false,
            out: Some(root.join(&e.id)),
            seed: cli.global.seed.or(seed),
            threads: None,
            budget: cli.global.budget.or(budget),
        };
        let name = e.args.first().cloned().unwrap_or_default();
        let (code, checks, failed, error) = match dispatch(&cli.command, &g) {
            Ok(r) => {
                r.write(g.out.as_deref().expect("set above"))?;
                let failed: Vec<String> = r.checks.iter().filter(|c| !c.pass).map(|c| c.id.clone()).collect();
                (u8::from(!r.passed()), r.checks.len(), failed, String::new())
            }
            Err(err) => (err.exit_code(), 0, Vec::new(), err.to_string()),
        };
        report.line(format!("{} {name} exit={code}{}", e.id, if failed.is_empty() { String::new() } else { format!(" failed={}", failed.join(",")) }));
        report.check(&e.id, code == 0, if error.is_empty() { format!("{checks} checks") } else { error.clone() });
        table.rows.push(vec![
            e.id.clone(),
            name,
            code.to_string(),
            checks.to_string(),
            failed.join(";"),
            error,
        ]);
    }
    report.table = Some(table);
    report.write(&root)?;
    Ok(report)
}
