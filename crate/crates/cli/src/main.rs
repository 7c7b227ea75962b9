use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coremax::card::{encoding_size, Relation, Strategy};
use coremax::formula::write_dimacs;
use coremax::maxsat::{Algorithm, CardMode, MaxSatConfig};
use coremax::{minimize_core, parse_dimacs, ClauseId, Formula, SolveResult, SolverConfig};
use coremax_cli::bench::{self, BenchConfig, Clock};
use coremax_cli::generate::{self, RandomSpec};
use coremax_cli::{exit, report};

#[derive(Parser)]
#[command(name = "coremax", version, about = "Core-guided MaxSAT solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a MaxSAT instance (DIMACS .cnf or unweighted .wcnf).
    Solve(SolveArgs),
    /// Run algorithms over a directory of instances and write CSV results.
    Bench(BenchArgs),
    /// Decide satisfiability of all clauses; report a model or a core.
    Sat(SatArgs),
    /// Print the size of a cardinality encoding without building it.
    CardSize(CardSizeArgs),
    /// Write generated instances.
    #[command(subcommand)]
    Generate(GenerateCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Pairwise,
    Bdd,
    Auto,
}

impl From<EncodingArg> for Strategy {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Pairwise => Strategy::Pairwise,
            EncodingArg::Bdd => Strategy::Bdd,
            EncodingArg::Auto => Strategy::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CardArg {
    Equals,
    Atmost,
}

impl From<CardArg> for CardMode {
    fn from(c: CardArg) -> Self {
        match c {
            CardArg::Equals => CardMode::Equals,
            CardArg::Atmost => CardMode::AtMost,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Atmost,
    Atleast,
    Equals,
}

impl From<RelationArg> for Relation {
    fn from(r: RelationArg) -> Self {
        match r {
            RelationArg::Atmost => Relation::AtMost,
            RelationArg::Atleast => Relation::AtLeast,
            RelationArg::Equals => Relation::Equals,
        }
    }
}

#[derive(Args)]
struct EngineArgs {
    /// Encoding of cardinality constraints (default depends on the algorithm).
    #[arg(long, value_enum)]
    encoding: Option<EncodingArg>,
    /// Equals or AtMost core constraints (default depends on the algorithm).
    #[arg(long, value_enum)]
    card: Option<CardArg>,
    /// Memory cap on the clause database, in MiB.
    #[arg(long, default_value_t = 2048)]
    mem_mb: usize,
    /// Seed for the SAT engine's random decisions.
    #[arg(long, env = "COREMAX_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value = "msu3")]
    algo: Algorithm,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 1000.0)]
    timeout: f64,
    /// Print search statistics as comments.
    #[arg(long)]
    stats: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    dir: PathBuf,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_value = "msu1,msu2,msu3,linear")]
    algos: Vec<Algorithm>,
    /// Per-run limit, in seconds (wall) or thousands of conflicts (effort).
    #[arg(long, default_value_t = 1000.0)]
    timeout: f64,
    /// Output prefix for the CSV files.
    #[arg(long)]
    out: String,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// `wall` (seconds) or `effort` (thousands of conflicts, reproducible).
    #[arg(long, default_value = "wall")]
    clock: Clock,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct SatArgs {
    file: PathBuf,
    /// Shrink the core until every clause in it is necessary.
    #[arg(long)]
    minimize: bool,
    #[arg(long, env = "COREMAX_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CardSizeArgs {
    #[arg(long, value_enum, default_value = "bdd")]
    strategy: EncodingArg,
    #[arg(long, value_enum, default_value = "atmost")]
    relation: RelationArg,
    #[arg(short)]
    r: usize,
    #[arg(short, default_value_t = 1)]
    k: usize,
    /// Largest BDD (r·k) counted; pairwise sizes are closed-form.
    #[arg(long, default_value_t = 100_000_000)]
    cap: u64,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Uniform random clauses.
    Random {
        #[arg(long, default_value_t = 12)]
        vars: u32,
        #[arg(long, default_value_t = 40)]
        clauses: usize,
        #[arg(long, default_value_t = 0.0)]
        hard_ratio: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A chain of `r` soft clauses forming a single core.
    Chain {
        #[arg(short)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_formula(path: &Path) -> Result<Formula> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    parse_dimacs(BufReader::new(file)).with_context(|| format!("cannot parse {}", path.display()))
}

fn max_config(engine: &EngineArgs, timeout: f64) -> MaxSatConfig {
    MaxSatConfig {
        encoding: engine.encoding.map(Strategy::from),
        card_mode: engine.card.map(CardMode::from),
        sat: SolverConfig::with_seed(engine.seed),
        timeout: Some(Duration::from_secs_f64(timeout)),
        mem_limit_bytes: Some(engine.mem_mb << 20),
        ..MaxSatConfig::default()
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let formula = read_formula(&args.file)?;
    let report = report::solve_report(&formula, args.algo, &max_config(&args.engine, args.timeout), args.stats);
    io::stdout().write_all(report.stdout.as_bytes())?;
    io::stderr().write_all(report.stderr.as_bytes())?;
    if args.stats {
        if let Some(kb) = coremax_cli::peak_rss_kb() {
            eprintln!("c peak_rss_kb {kb}");
        }
    }
    Ok(report.code)
}

fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    let instances = bench::list_instances(&args.dir)?;
    let config = BenchConfig {
        algorithms: args.algos.clone(),
        timeout: args.timeout,
        mem_mb: Some(args.engine.mem_mb),
        seed: args.engine.seed,
        jobs: args.jobs,
        clock: args.clock,
        encoding: args.engine.encoding.map(Strategy::from),
        card_mode: args.engine.card.map(CardMode::from),
    };
    let records = bench::run_bench(&instances, &config);
    for path in bench::write_outputs(&records, &config, &args.out)? {
        println!("c wrote {}", path.display());
    }
    Ok(exit::OPTIMUM)
}

fn cmd_sat(args: &SatArgs) -> Result<i32> {
    let formula = read_formula(&args.file)?;
    let tracked: Vec<ClauseId> = formula.ids().collect();
    let config = SolverConfig::with_seed(args.seed);
    let mut out = io::stdout().lock();
    match coremax::solve(&formula, &tracked, &config)? {
        SolveResult::Sat(model) => {
            let lits: Vec<String> = model.literals().map(|l| l.to_dimacs().to_string()).collect();
            writeln!(out, "s SATISFIABLE")?;
            writeln!(out, "v {} 0", lits.join(" "))?;
            Ok(exit::SAT)
        }
        SolveResult::Unsat(mut core) => {
            if args.minimize {
                core = minimize_core(&formula, &tracked, &core, &config)?;
            }
            let ids: Vec<String> = core.iter().map(|id| (id.index() + 1).to_string()).collect();
            writeln!(out, "s UNSATISFIABLE")?;
            writeln!(out, "c core size {}", core.len())?;
            writeln!(out, "c core {}", ids.join(" "))?;
            Ok(exit::HARD_UNSAT)
        }
    }
}

fn cmd_card_size(args: &CardSizeArgs) -> Result<i32> {
    let strategy = Strategy::from(args.strategy);
    let relation = Relation::from(args.relation);
    let nodes = (args.r as u64).saturating_mul(args.k as u64 + 1);
    if !matches!(strategy, Strategy::Pairwise) && nodes > args.cap {
        bail!("r·k = {nodes} exceeds --cap {}", args.cap);
    }
    let size = encoding_size(relation, args.r, args.k, strategy)?;
    println!(
        "strategy {} relation {} r {} k {} clauses {} vars {}",
        args.strategy.to_possible_value().map_or_else(String::new, |v| v.get_name().to_string()),
        args.relation.to_possible_value().map_or_else(String::new, |v| v.get_name().to_string()),
        args.r,
        args.k,
        size.clauses,
        size.fresh_vars
    );
    Ok(exit::OPTIMUM)
}

fn emit(formula: &Formula, out: &Option<PathBuf>) -> Result<i32> {
    match out {
        Some(path) => write_dimacs(formula, io::BufWriter::new(fs::File::create(path)?))?,
        None => write_dimacs(formula, io::stdout().lock())?,
    }
    Ok(exit::OPTIMUM)
}

fn cmd_generate(cmd: &GenerateCommand) -> Result<i32> {
    match cmd {
        GenerateCommand::Random { vars, clauses, hard_ratio, seed, out } => {
            let spec = RandomSpec {
                vars: *vars,
                clauses: *clauses,
                hard_ratio: *hard_ratio,
                ..RandomSpec::default()
            };
            emit(&generate::random_seeded(&spec, *seed), out)
        }
        GenerateCommand::Chain { r, out } => {
            if *r < 2 {
                bail!("chain needs r >= 2");
            }
            emit(&generate::chain(*r), out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Sat(args) => cmd_sat(args),
        Command::CardSize(args) => cmd_card_size(args),
        Command::Generate(cmd) => cmd_generate(cmd),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::ERROR as u8)
        }
    }
}
