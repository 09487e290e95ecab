//! Command-line front end. Every command renders its whole output before
//! anything is written, so failures never leave partial output on stdout.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lite_repair_core::eval::{self, GenSpec, Ratio};
use lite_repair_core::{
    answer_profile, cns_rank, ConjunctiveQuery, Engine, GenError, KbError, Pipeline,
    PrioritizedKb, QueryError, StratifiedAssertions, Strategy, SupportMode,
};
use thiserror::Error;

use crate::bench::{self, BenchConfig};
use crate::report::{ratio, Report};
use crate::textio::{self, LoadError, ParseError, QueryParseError};

#[derive(Debug, Parser)]
#[command(
    name = "lite-repair",
    version,
    about = "Query answering over prioritized, inconsistent DL-Lite knowledge bases"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check each stratum and the union of all strata for consistency.
    Check(KbArgs),
    /// List the minimal conflicts of the strata, or of the answer supports.
    Conflicts(InputArgs),
    /// List the assertions that belong to no conflict.
    Free(InputArgs),
    /// Compute the consistency rank.
    Rank(InputArgs),
    /// Repair and answer a query.
    Repair(RepairArgs),
    /// Answer a query stratum by stratum, ignoring inconsistency.
    Query(QueryArgs),
    /// Run a timed strategy × pipeline grid on generated knowledge bases.
    Bench(BenchArgs),
    /// Generate a knowledge base with an exact number of conflicts.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct KbArgs {
    #[arg(long, value_name = "FILE")]
    pub kb: PathBuf,
    /// Write the report to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long, value_name = "FILE")]
    pub kb: PathBuf,
    /// Work on the answer supports of this query instead of the raw strata.
    #[arg(long, value_name = "FILE")]
    pub query: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::AboutAnswers)]
    pub mode: ModeArg,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RepairArgs {
    #[arg(long, value_name = "FILE")]
    pub kb: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub query: PathBuf,
    #[arg(long, value_enum, default_value_t = StrategyArg::All)]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = PipelineArg::After)]
    pub pipeline: PipelineArg,
    #[arg(long, value_enum, default_value_t = ModeArg::AboutAnswers)]
    pub mode: ModeArg,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long, value_name = "FILE")]
    pub kb: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub query: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::AboutAnswers)]
    pub mode: ModeArg,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    pub assertions: usize,
    #[arg(long, default_value_t = 5)]
    pub strata: usize,
    /// Comma-separated conflict counts.
    #[arg(long, value_delimiter = ',', default_value = "50,200,500")]
    pub conflicts: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Timed runs per cell (at least 3).
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(3..))]
    pub repetitions: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::All)]
    pub strategy: StrategyArg,
    /// Both pipelines when omitted.
    #[arg(long, value_enum)]
    pub pipeline: Option<PipelineArg>,
    #[arg(long, value_enum, default_value_t = ModeArg::AboutAnswers)]
    pub mode: ModeArg,
    /// Write the CSV grid to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub assertions: usize,
    #[arg(long)]
    pub strata: usize,
    #[arg(long)]
    pub conflicts: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub concepts: Option<usize>,
    #[arg(long)]
    pub roles: Option<usize>,
    #[arg(long)]
    pub individuals: Option<usize>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    AboutAnswers,
    Instantiation,
}

impl From<ModeArg> for SupportMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::AboutAnswers => SupportMode::AboutAnswers,
            ModeArg::Instantiation => SupportMode::Instantiation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Pi,
    Linear,
    Nd,
    All,
}

impl StrategyArg {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyArg::Pi => vec![Strategy::Pi],
            StrategyArg::Linear => vec![Strategy::Linear],
            StrategyArg::Nd => vec![Strategy::NonDefeated],
            StrategyArg::All => Strategy::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PipelineArg {
    After,
    Before,
}

impl From<PipelineArg> for Pipeline {
    fn from(p: PipelineArg) -> Self {
        match p {
            PipelineArg::After => Pipeline::AfterQuery,
            PipelineArg::Before => Pipeline::BeforeQuery,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("error[io]: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("error[parse]: {path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("error[query]: {path}: {source}")]
    Query { path: PathBuf, source: QueryError },
    #[error("error[kb]: {path}: {source}")]
    Kb { path: PathBuf, source: KbError },
    #[error("error[gen]: {0}")]
    Gen(#[from] GenError),
}

impl CliError {
    /// 1 for domain errors, 2 for usage, parse and I/O errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Kb { .. } | CliError::Gen(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Query { .. } => 2,
        }
    }
}

/// Rendered output and where it goes (`None` is stdout).
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub path: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_kb(path: &Path) -> Result<PrioritizedKb, CliError> {
    textio::parse_kb(&read(path)?).map_err(|e| match e {
        LoadError::Parse(source) => CliError::Parse {
            path: path.to_owned(),
            source,
        },
        LoadError::Kb(source) => CliError::Kb {
            path: path.to_owned(),
            source,
        },
    })
}

fn load_query(path: &Path) -> Result<ConjunctiveQuery, CliError> {
    textio::parse_query(&read(path)?).map_err(|e| match e {
        QueryParseError::Parse(source) => CliError::Parse {
            path: path.to_owned(),
            source,
        },
        QueryParseError::Query(source) => CliError::Query {
            path: path.to_owned(),
            source,
        },
    })
}

fn render_ratio(r: Ratio) -> String {
    if r.undefined {
        format!("{} (undefined)", ratio(r.value))
    } else {
        ratio(r.value)
    }
}

/// The strata themselves, or the answer supports when a query is given.
fn input(args: &InputArgs, report: &mut Report) -> Result<(PrioritizedKb, StratifiedAssertions), CliError> {
    let kb = load_kb(&args.kb)?;
    let s = match &args.query {
        None => {
            report.scalar("input", "strata");
            kb.profile().clone()
        }
        Some(path) => {
            let query = load_query(path)?;
            let mode = SupportMode::from(args.mode);
            report
                .scalar("input", "supports")
                .scalar("query", &query)
                .scalar("mode", mode);
            answer_profile(&query, &kb, mode).into_supports()
        }
    };
    Ok((kb, s))
}

fn check(args: &KbArgs) -> Result<Output, CliError> {
    let kb = load_kb(&args.kb)?;
    let mut r = Report::new();
    for stratum in kb.strata() {
        r.scalar(&format!("stratum {}", stratum.index), "OK");
    }
    let conflicts = kb.closure().conflicts(&kb.profile().union_all());
    r.scalar(
        "global",
        if conflicts.is_empty() {
            "CONSISTENT"
        } else {
            "INCONSISTENT"
        },
    )
    .list("conflicts", &conflicts);
    Ok(Output {
        text: r.to_string(),
        path: args.out.clone(),
    })
}

fn conflicts(args: &InputArgs) -> Result<Output, CliError> {
    let mut r = Report::new();
    let (kb, s) = input(args, &mut r)?;
    r.list("conflicts", kb.closure().conflicts(&s.union_all()));
    Ok(Output {
        text: r.to_string(),
        path: args.out.clone(),
    })
}

fn free(args: &InputArgs) -> Result<Output, CliError> {
    let mut r = Report::new();
    let (kb, s) = input(args, &mut r)?;
    r.list("free", kb.closure().free_set(&s.union_all()));
    Ok(Output {
        text: r.to_string(),
        path: args.out.clone(),
    })
}

fn rank(args: &InputArgs) -> Result<Output, CliError> {
    let mut r = Report::new();
    let (kb, s) = input(args, &mut r)?;
    let outcome = cns_rank(kb.closure(), &s);
    r.scalar("strata", s.len())
        .scalar("rank", outcome.rank)
        .scalar("checks", outcome.checks);
    Ok(Output {
        text: r.to_string(),
        path: args.out.clone(),
    })
}

fn repair(args: &RepairArgs) -> Result<Output, CliError> {
    let kb = load_kb(&args.kb)?;
    let query = load_query(&args.query)?;
    let mode = SupportMode::from(args.mode);
    let pipeline = Pipeline::from(args.pipeline);
    let engine = Engine::new(kb);
    let raw = engine.raw_answers(&engine.rewrite(&query));
    let mut blocks = Vec::new();
    for strategy in args.strategy.strategies() {
        let start = Instant::now();
        let outcome = engine.run(&query, strategy, pipeline, mode);
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let m = eval::metrics(engine.closure(), &outcome.universe(), &outcome.repair.assertions);
        let mut metrics = Report::new();
        metrics
            .scalar("cr", m.cr)
            .scalar("cnr", m.cnr)
            .scalar("ir", m.ir)
            .scalar("inr", m.inr)
            .scalar("precision", render_ratio(m.precision))
            .scalar("recall", render_ratio(m.recall))
            .scalar("f_measure", render_ratio(m.f_measure));
        let mut r = Report::new();
        r.scalar("query", &query)
            .scalar("mode", mode)
            .scalar("strategy", strategy)
            .scalar("pipeline", pipeline)
            .scalar("rank", outcome.repair.rank)
            .scalar("checks", outcome.repair.checks)
            .list("repair", &outcome.repair.assertions)
            .list("answers", &outcome.answers)
            .list("raw_answers", &raw)
            .scalar("productivity", render_ratio(eval::productivity(&outcome.answers, &raw)))
            .scalar("productivity_base", "answers")
            .section("metrics", metrics)
            .scalar("elapsed_ms", format!("{elapsed:.3}"));
        blocks.push(r.to_string());
    }
    Ok(Output {
        text: blocks.join("\n"),
        path: args.out.clone(),
    })
}

fn query(args: &QueryArgs) -> Result<Output, CliError> {
    let kb = load_kb(&args.kb)?;
    let query = load_query(&args.query)?;
    let mode = SupportMode::from(args.mode);
    let profile = answer_profile(&query, &kb, mode);
    let mut r = Report::new();
    r.scalar("query", &query)
        .scalar("kind", query.kind())
        .scalar("mode", mode);
    for (i, s) in profile.strata().iter().enumerate() {
        let mut section = Report::new();
        section.list("answers", &s.answers).list("support", profile.support(i + 1));
        r.section(&format!("stratum {}", i + 1), section);
    }
    r.list("raw_answers", profile.raw_answers());
    Ok(Output {
        text: r.to_string(),
        path: args.out.clone(),
    })
}

fn run_bench(args: &BenchArgs) -> Result<Output, CliError> {
    let mut config = BenchConfig::new(args.assertions, args.strata, args.conflicts.clone(), args.seed);
    config.repetitions = args.repetitions as usize;
    config.strategies = args.strategy.strategies();
    if let Some(p) = args.pipeline {
        config.pipelines = vec![p.into()];
    }
    config.mode = args.mode.into();
    let rows = bench::run_bench(&config)?;
    let mut buf = Vec::new();
    bench::write_csv(&config, &rows, &mut buf).expect("writing to memory");
    Ok(Output {
        text: String::from_utf8(buf).expect("CSV output is UTF-8"),
        path: args.csv.clone(),
    })
}

fn generate(args: &GenerateArgs) -> Result<Output, CliError> {
    let mut spec = GenSpec::new(args.assertions, args.strata, args.conflicts, args.seed);
    if let Some(c) = args.concepts {
        spec.concepts = c;
    }
    if let Some(r) = args.roles {
        spec.roles = r;
    }
    if let Some(n) = args.individuals {
        spec.individuals = n;
    }
    let generated = eval::generate(&spec)?;
    let text = format!(
        "% assertions={} strata={} conflicts={} seed={} concepts={} roles={} individuals={}\n{}",
        spec.assertions,
        spec.strata,
        spec.conflicts,
        spec.seed,
        spec.concepts,
        spec.roles,
        spec.individuals,
        textio::emit_kb(&generated.kb)
    );
    Ok(Output {
        text,
        path: args.out.clone(),
    })
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Check(a) => check(a),
        Command::Conflicts(a) => conflicts(a),
        Command::Free(a) => free(a),
        Command::Rank(a) => rank(a),
        Command::Repair(a) => repair(a),
        Command::Query(a) => query(a),
        Command::Bench(a) => run_bench(a),
        Command::Generate(a) => generate(a),
    }
}

/// Writes `output` to its destination.
pub fn deliver(output: &Output) -> Result<(), CliError> {
    match &output.path {
        Some(path) => fs::write(path, &output.text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}
