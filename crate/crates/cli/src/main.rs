//! `removal-lab` command-line front end.
//!
//! Exit codes: 0 when every audit passes, 1 when an audit fails or a search
//! gives up, 2 for usage and input errors.

mod commands;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use removal_lab::budget::Budget;
use removal_lab::error::Error as CoreError;
use serde::{Deserialize, Serialize};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "removal-lab", version, about = "Exact copy counting, packings, constructions and testers for removal thresholds")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, Default)]
pub struct GlobalOpts {
    /// Print the full JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory for report.json, report.csv and written artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Root seed; every random stream is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Node-expansion budget; overrides REMOVAL_LAB_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

impl GlobalOpts {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn budget(&self) -> Budget {
        self.budget.map(Budget::nodes).unwrap_or_default()
    }
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Basic invariants of a graph.
    Analyze(commands::AnalyzeArgs),
    /// Decide whether H maps homomorphically to F (exit 0 yes, 1 no).
    Hom(commands::HomArgs),
    /// Inclusion-minimal homomorphic images of a small pattern.
    Images(commands::ImagesArgs),
    /// Exact labeled copy counts.
    Count(commands::CountArgs),
    /// Greedy maximal edge-disjoint packing.
    Pack(commands::PackArgs),
    /// Turn a short odd cycle packing into longer odd cycles.
    Boost(commands::BoostArgs),
    /// Build a named construction with its partition and packing.
    Construct(commands::ConstructArgs),
    /// Split a 3-chromatic pattern around a critical edge.
    Decompose(commands::DecomposeArgs),
    /// Remove short odd cycles and report the resulting bounds.
    Cleanup(commands::CleanupArgs),
    /// Find pattern copies through the structural pipeline.
    Pipeline(commands::PipelineArgs),
    /// Vertex-sampling homomorphism tester.
    TestHom(commands::TestHomArgs),
    /// Copy densities over a construction sweep (CSV).
    Estimate(commands::EstimateArgs),
    /// Write the standard corpus with its manifest.
    Corpus(commands::CorpusArgs),
    /// Run the experiments listed in a JSON config.
    Run(run::RunArgs),
}

/// Error classes with their exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => core_exit_code(e),
            CliError::Other(e) => match e.downcast_ref::<CoreError>() {
                Some(c) => core_exit_code(c),
                None if e.downcast_ref::<std::io::Error>().is_some() => 2,
                None => 1,
            },
        }
    }
}

fn core_exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::VertexOutOfRange { .. }
        | CoreError::SelfLoop(_)
        | CoreError::DuplicateEdge(..)
        | CoreError::TooManyVertices { .. }
        | CoreError::Parse { .. }
        | CoreError::Io(_)
        | CoreError::InfeasibleDegree(_)
        | CoreError::SizeLimit { .. }
        | CoreError::AnchorNotEdge(_)
        | CoreError::InvalidInput(_)
        | CoreError::UnknownConstruction(_) => 2,
        _ => 1,
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn dispatch(command: &Command, global: &GlobalOpts) -> CliResult<Report> {
    match command {
        Command::Analyze(a) => commands::analyze(a, global),
        Command::Hom(a) => commands::hom(a, global),
        Command::Images(a) => commands::images(a, global),
        Command::Count(a) => commands::count(a, global),
        Command::Pack(a) => commands::pack(a, global),
        Command::Boost(a) => commands::boost(a, global),
        Command::Construct(a) => commands::construct(a, global),
        Command::Decompose(a) => commands::decompose(a, global),
        Command::Cleanup(a) => commands::cleanup(a, global),
        Command::Pipeline(a) => commands::pipeline(a, global),
        Command::TestHom(a) => commands::test_hom(a, global),
        Command::Estimate(a) => commands::estimate(a, global),
        Command::Corpus(a) => commands::corpus(a, global),
        Command::Run(a) => run::run(a, global),
    }
}

/// Prints the report, writes it to `--out` if given, and returns the exit
/// code it implies.
pub fn emit(report: &Report, global: &GlobalOpts) -> CliResult<u8> {
    if global.json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).map_err(anyhow::Error::from)?);
    } else {
        print!("{}", report.render_text());
    }
    if let Some(dir) = &global.out {
        report.write(dir)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = dispatch(&cli.command, &cli.global).and_then(|r| emit(&r, &cli.global));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
