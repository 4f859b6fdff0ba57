#![forbid(unsafe_code)]

//! `hedonica` — stability checking, solving, and conversion for hedonic
//! coalition-formation games.
//!
//! Every successful run ends with a machine-readable line: `STABLE`,
//! `UNSTABLE <witness>`, `PARTITION <literal>`, `EMPTY`, or `WROTE <path>`.
//! Exit codes: 0 success, 1 cap or precondition failure, 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hedonica::fixtures::{self, FixtureId};
use hedonica::games::GameRepr;
use hedonica::generator::{GeneratorKind, GeneratorSpec, generate};
use hedonica::json;
use hedonica::model::{DEFAULT_PARTITION_CAP, Partition};
use hedonica::solve::{
    as_subset_neutral, common_ranking_greedy, enumerate_stable_with_cap, nash_global_optimum_with_cap,
    nash_local_search, top_coalition_greedy,
};
use hedonica::stability::{Notion, Stability, classify};
use hedonica::transform::{
    na_to_subset_neutral, symmetric_as_to_subset_neutral, to_subset_additive,
};
use std::path::PathBuf;
use std::process::ExitCode;

const PARTITION_CAP_ENV: &str = "HEDONICA_PARTITION_CAP";

#[derive(Parser)]
#[command(
    name = "hedonica",
    version,
    about = "Hedonic coalition-formation games: check stability, solve, convert"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one stability notion (or all five) for a partition.
    Check(CheckArgs),
    /// Report all five stability verdicts for a partition.
    Classify(ClassifyArgs),
    /// Compute a stable partition.
    Solve(SolveArgs),
    /// List all partitions satisfying a set of notions.
    Enumerate(EnumerateArgs),
    /// Convert a game to another representation.
    Convert(ConvertArgs),
    /// Print a built-in fixture as JSON.
    Fixture(FixtureArgs),
    /// Generate a seeded random instance as JSON.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Path to a JSON instance.
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "fixture",
        required_unless_present = "fixture"
    )]
    instance: Option<PathBuf>,
    /// Name of a built-in fixture.
    #[arg(long, value_name = "ID")]
    fixture: Option<FixtureId>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Partition literal, e.g. "1,2|3".
    #[arg(long, value_name = "LITERAL")]
    partition: String,
    /// nash, is, cis, core, strongcore, or all.
    #[arg(long, value_name = "NOTION")]
    notion: NotionArg,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_name = "LITERAL")]
    partition: String,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum)]
    method: Method,
    /// Start partition for local search (default: all singletons).
    #[arg(long, value_name = "LITERAL")]
    start: Option<String>,
    /// Print the better-response trace as TSV (local search only).
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Comma-separated notions, or "all".
    #[arg(long, value_delimiter = ',', value_name = "NOTIONS")]
    notion: Vec<NotionArg>,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Target representation.
    #[arg(long, value_enum)]
    to: ConvertTarget,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixtureArgs {
    /// Fixture name; omit with --list to see all names.
    id: Option<FixtureId>,
    /// List the available fixture names.
    #[arg(long)]
    list: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator name, e.g. random_subset_neutral.
    #[arg(long)]
    kind: GeneratorKind,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inclusive integer bounds for drawn values.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-10, 10])]
    range: Vec<i64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Local,
    Global,
    Greedy,
    Topcoalition,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ConvertTarget {
    SubsetAdditive,
    SubsetNeutral,
}

/// A stability notion argument, with `all` expanding to the full set.
#[derive(Clone, Copy, PartialEq, Eq)]
enum NotionArg {
    One(Notion),
    All,
}

impl ValueEnum for NotionArg {
    fn value_variants<'a>() -> &'a [Self] {
        &[
            NotionArg::One(Notion::Nash),
            NotionArg::One(Notion::Individual),
            NotionArg::One(Notion::Contractual),
            NotionArg::One(Notion::Core),
            NotionArg::One(Notion::StrongCore),
            NotionArg::All,
        ]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            NotionArg::One(n) => n.name(),
            NotionArg::All => "all",
        }))
    }
}

fn expand_notions(args: &[NotionArg]) -> Vec<Notion> {
    let mut notions = Vec::new();
    for arg in args {
        match arg {
            NotionArg::All => notions.extend(Notion::ALL),
            NotionArg::One(n) => notions.push(*n),
        }
    }
    notions.dedup();
    notions
}

/// Failures after argument parsing: exit 1, as opposed to clap usage errors
/// (exit 2). Malformed partition literals count as usage.
enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn failure(err: impl std::fmt::Display) -> Self {
        CliError::Failure(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap reports help/version on stdout with success; everything
            // else is a usage error (exit 2).
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check(args) => check(args),
        Command::Classify(args) => classify_cmd(args),
        Command::Solve(args) => solve(args),
        Command::Enumerate(args) => enumerate(args),
        Command::Convert(args) => convert(args),
        Command::Fixture(args) => fixture(args),
        Command::Generate(args) => generate_cmd(args),
    }
}

fn load_game(args: &InstanceArgs) -> Result<GameRepr, CliError> {
    if let Some(id) = args.fixture {
        return Ok(fixtures::load_fixture(id));
    }
    let path = args
        .instance
        .as_ref()
        .expect("clap enforces --instance or --fixture");
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Failure(format!("cannot read {}: {e}", path.display())))?;
    json::from_str(&text).map_err(CliError::failure)
}

fn parse_partition_arg(text: &str, n: u32) -> Result<Partition, CliError> {
    Partition::parse(text, n).map_err(|e| CliError::Usage(format!("invalid partition literal: {e}")))
}

fn partition_cap() -> Result<u32, CliError> {
    match std::env::var(PARTITION_CAP_ENV) {
        Ok(text) => text.trim().parse::<u32>().map_err(|_| {
            CliError::Failure(format!(
                "{PARTITION_CAP_ENV} must be a positive integer, got `{text}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_PARTITION_CAP),
    }
}

fn verdict_line(verdict: &Stability<hedonica::stability::Witness>) -> String {
    match verdict {
        Stability::Stable => "STABLE".to_string(),
        Stability::Unstable(w) => format!("UNSTABLE {w}"),
    }
}

/// Prints the five per-notion lines and an overall summary line.
fn print_report(report: &hedonica::stability::StabilityReport) {
    for (notion, verdict) in report.rows() {
        println!("{notion}: {}", verdict_line(&verdict));
    }
    if report.all_stable() {
        println!("STABLE");
    } else {
        let first = report
            .rows()
            .into_iter()
            .find_map(|(_, v)| v.witness().cloned());
        println!("UNSTABLE {}", first.expect("an unstable report has a witness"));
    }
}

fn check(args: CheckArgs) -> Result<(), CliError> {
    let game = load_game(&args.instance)?;
    let partition = parse_partition_arg(&args.partition, game.n())?;
    match args.notion {
        NotionArg::All => {
            let report = classify(&game, &partition).map_err(CliError::failure)?;
            print_report(&report);
        }
        NotionArg::One(notion) => {
            let verdict =
                hedonica::stability::check(&game, &partition, notion).map_err(CliError::failure)?;
            println!("{}", verdict_line(&verdict));
        }
    }
    Ok(())
}

fn classify_cmd(args: ClassifyArgs) -> Result<(), CliError> {
    let game = load_game(&args.instance)?;
    let partition = parse_partition_arg(&args.partition, game.n())?;
    let report = classify(&game, &partition).map_err(CliError::failure)?;
    print_report(&report);
    Ok(())
}

fn solve(args: SolveArgs) -> Result<(), CliError> {
    let game = load_game(&args.instance)?;
    let result = match args.method {
        Method::Local => {
            let neutral = as_subset_neutral(&game).map_err(CliError::failure)?;
            let start = match &args.start {
                Some(text) => Some(parse_partition_arg(text, game.n())?),
                None => None,
            };
            let (partition, trace) =
                nash_local_search(&neutral, start).map_err(CliError::failure)?;
            if args.trace {
                println!("step\tplayer\tfrom\tto\tphi_before\tphi_after");
                for (index, step) in trace.iter().enumerate() {
                    println!(
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        index + 1,
                        step.player,
                        step.from,
                        step.to,
                        step.phi_before,
                        step.phi_after
                    );
                }
            }
            partition
        }
        Method::Global => {
            let neutral = as_subset_neutral(&game).map_err(CliError::failure)?;
            nash_global_optimum_with_cap(&neutral, partition_cap()?).map_err(CliError::failure)?
        }
        Method::Greedy => common_ranking_greedy(&game).map_err(CliError::failure)?,
        Method::Topcoalition => top_coalition_greedy(&game).map_err(CliError::failure)?,
    };
    println!("PARTITION {result}");
    Ok(())
}

fn enumerate(args: EnumerateArgs) -> Result<(), CliError> {
    if args.notion.is_empty() {
        return Err(CliError::Usage(
            "enumerate requires --notion (a comma-separated list, or `all`)".to_string(),
        ));
    }
    let game = load_game(&args.instance)?;
    let notions = expand_notions(&args.notion);
    let stable = enumerate_stable_with_cap(&game, &notions, partition_cap()?)
        .map_err(CliError::failure)?;
    if stable.is_empty() {
        println!("EMPTY");
    } else {
        for partition in stable {
            println!("PARTITION {partition}");
        }
    }
    Ok(())
}

fn emit_json(game: &GameRepr, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = json::to_string_pretty(game).map_err(CliError::failure)?;
    match out {
        Some(path) => {
            std::fs::write(path, text.as_bytes())
                .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
            println!("WROTE {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn convert(args: ConvertArgs) -> Result<(), CliError> {
    let game = load_game(&args.instance)?;
    let converted = match args.to {
        ConvertTarget::SubsetAdditive => {
            GameRepr::SubsetAdditive(to_subset_additive(&game).map_err(CliError::failure)?)
        }
        ConvertTarget::SubsetNeutral => match &game {
            GameRepr::SubsetNeutral(_) => game.clone(),
            GameRepr::NeutrallyAnonymous(na) => GameRepr::SubsetNeutral(na_to_subset_neutral(na)),
            GameRepr::AdditivelySeparable(m) => GameRepr::SubsetNeutral(
                symmetric_as_to_subset_neutral(m).map_err(CliError::failure)?,
            ),
            other => {
                return Err(CliError::Failure(format!(
                    "cannot convert a {} game to subset_neutral (supported: neutrally_anonymous, \
                     symmetric additively_separable, subset_neutral)",
                    other.kind()
                )));
            }
        },
    };
    emit_json(&converted, args.out.as_ref())
}

fn fixture(args: FixtureArgs) -> Result<(), CliError> {
    if args.list {
        for id in FixtureId::ALL {
            println!("{id}");
        }
        return Ok(());
    }
    let id = args.id.ok_or_else(|| {
        CliError::Usage("fixture requires a fixture name or --list".to_string())
    })?;
    emit_json(&fixtures::load_fixture(id), args.out.as_ref())
}

fn generate_cmd(args: GenerateArgs) -> Result<(), CliError> {
    let spec = GeneratorSpec {
        kind: args.kind,
        n: args.n,
        seed: args.seed,
        lo: args.range[0],
        hi: args.range[1],
    };
    let game = generate(&spec).map_err(CliError::failure)?;
    emit_json(&game, args.out.as_ref())
}
