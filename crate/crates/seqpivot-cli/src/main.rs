//! `seqpivot` — simulate and verify the sequential pivotal mechanism for
//! the public project problem, in exact rational arithmetic.
//!
//! Subcommands: `replay-tables`, `simulate`, `sweep`, `verify`. Exit
//! codes: 0 success / all properties hold, 1 a property failed or a
//! reference table mismatched, 2 usage or configuration error.
//! `SEQPIVOT_THREADS` caps worker threads (0 or unset: automatic).

mod golden;
mod report;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use seqpivot::engine::{play, sweep_orders, PlayerOrder};
use seqpivot::error::Error;
use seqpivot::model::{GrovesSpec, ProjectInstance, TaxScheme, TypeProfile};
use seqpivot::rat::Rat;
use seqpivot::strategy::{Strategy, StrategyVector};
use seqpivot::verdict::Verdict;
use seqpivot::verify::{
    nash_check, verify_groves_invariance, verify_ic, verify_opt_constraints, verify_optimal,
    verify_socially_optimal, verify_welfare_maximality, welfare_maximality_report,
    DeviationUniverse, Grid, Metric, Relation,
};

use report::{
    sweep_csv, sweep_table, to_json_pretty, trace_csv, trace_table, verdict_line, Format, SweepRow,
};

#[derive(Parser)]
#[command(
    name = "seqpivot",
    about = "Sequential pivotal mechanism toolkit: exact simulation, order sweeps, brute-force verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the built-in reference tables and diff them field by field
    ReplayTables,
    /// Play the sequential mechanism once and report the trace
    Simulate(SimulateArgs),
    /// Play every player order and report one row per permutation
    Sweep(SweepArgs),
    /// Run a verification suite over a grid
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Project cost (integer, decimal, or p/q)
    #[arg(long, default_value = "300")]
    cost: String,
    /// Output format
    #[arg(long, default_value = "table")]
    format: Format,
    /// Write the report to this path instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// True types, comma-separated (e.g. 110,80,110)
    #[arg(long, required = true)]
    types: String,
    /// Player order, comma-separated 1-based indices (default 1,2,...,n)
    #[arg(long)]
    order: Option<String>,
    /// Strategy id for every player (truth|thm3|thm5|greedy), or one id
    /// per player comma-separated
    #[arg(long, default_value = "truth")]
    strategy: String,
    /// Tax scheme: pivotal|hzero|zerotax
    #[arg(long, default_value = "pivotal")]
    scheme: String,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// True types, comma-separated
    #[arg(long, required = true)]
    types: String,
    /// Strategy id(s) as in simulate
    #[arg(long, default_value = "thm3")]
    strategy: String,
    /// Tax scheme: pivotal|hzero|zerotax
    #[arg(long, default_value = "pivotal")]
    scheme: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Suite: optimal|social|compat|ic|nash|invariance|welfare-max|all
    suite: String,
    /// Player count
    #[arg(long, default_value_t = 3)]
    players: usize,
    /// Uniform grid steps (points 0, c/m, ..., c)
    #[arg(long, default_value_t = 6)]
    steps: usize,
    /// Grid steps for the nash suite (its deviation universe grows fast)
    #[arg(long, default_value_t = 3)]
    nash_steps: usize,
    /// Extra exact grid points, comma-separated
    #[arg(long)]
    enrich: Option<String>,
    /// Restrict optimal/social/invariance to one strategy id
    #[arg(long)]
    strategy: Option<String>,
    /// Vector to check in the nash suite
    #[arg(long, default_value = "thm3")]
    vector: String,
    /// Check the projection vector under the preference relation composed
    /// through this base vector (nash suite)
    #[arg(long)]
    through: Option<String>,
    /// Comparison metric: utility|valuation
    #[arg(long, default_value = "utility")]
    metric: String,
    /// Tax scheme for the ic suite: pivotal|hzero|zerotax (default: both
    /// Groves members)
    #[arg(long)]
    scheme: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let result = match cli.command {
        Command::ReplayTables => cmd_replay_tables(),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::InternalInvariant(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn init_threads() {
    if let Ok(value) = std::env::var("SEQPIVOT_THREADS") {
        if let Ok(threads) = value.trim().parse::<usize>() {
            if threads > 0 {
                // Ignore failure: the pool can only be set once.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        } else {
            eprintln!("warning: SEQPIVOT_THREADS={value:?} is not a number; using automatic");
        }
    }
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.parse()
}

fn parse_rats(s: &str) -> Result<Vec<Rat>, Error> {
    s.split(',').map(|part| parse_rat(part.trim())).collect()
}

fn parse_scheme(s: &str) -> Result<TaxScheme, Error> {
    match s {
        "pivotal" => Ok(TaxScheme::pivotal()),
        "hzero" => Ok(TaxScheme::h_zero()),
        "zerotax" => Ok(TaxScheme::ZeroTax),
        other => Err(Error::Config(format!(
            "unknown scheme {other:?} (pivotal|hzero|zerotax)"
        ))),
    }
}

fn parse_metric(s: &str) -> Result<Metric, Error> {
    match s {
        "utility" => Ok(Metric::FinalUtility),
        "valuation" => Ok(Metric::DecisionValuation),
        other => Err(Error::Config(format!(
            "unknown metric {other:?} (utility|valuation)"
        ))),
    }
}

fn parse_vector(ids: &str, n: usize) -> Result<StrategyVector, Error> {
    let parts: Vec<&str> = ids.split(',').map(str::trim).collect();
    if parts.len() == 1 {
        StrategyVector::by_name(parts[0], n)
    } else if parts.len() == n {
        let strategies = parts
            .iter()
            .enumerate()
            .map(|(k, name)| Strategy::by_name(name, k + 1))
            .collect::<Result<Vec<_>, _>>()?;
        StrategyVector::new(strategies)
    } else {
        Err(Error::Config(format!(
            "expected 1 or {n} strategy ids, got {}",
            parts.len()
        )))
    }
}

fn emit(common: &CommonArgs, body: String) -> Result<(), Error> {
    match &common.out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Error::Config(format!("cannot write {path}: {e}")))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn cmd_replay_tables() -> Result<ExitCode, Error> {
    let mut log = String::new();
    let diffs = golden::replay(&mut log);
    print!("{log}");
    if diffs.is_empty() {
        println!("all reference tables reproduce bit-exactly");
        Ok(ExitCode::SUCCESS)
    } else {
        for d in &diffs {
            println!("diff: {d}");
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, Error> {
    let cost = parse_rat(&args.common.cost)?;
    let values = parse_rats(&args.types)?;
    let instance = ProjectInstance::new(values.len(), cost)?;
    let types = TypeProfile::new(&instance, values)?;
    let n = instance.players();
    let order = match &args.order {
        None => PlayerOrder::identity(n),
        Some(text) => {
            let indices = text
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Config(format!("bad order entry {p:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            PlayerOrder::new(indices, n)?
        }
    };
    let vector = parse_vector(&args.strategy, n)?;
    let scheme = parse_scheme(&args.scheme)?;
    let trace = play(&instance, &scheme, &order, &vector, &types)?;
    let body = match args.common.format {
        Format::Json => to_json_pretty(&trace),
        Format::Csv => trace_csv(&trace),
        Format::Table => trace_table(&trace),
    };
    emit(&args.common, body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let cost = parse_rat(&args.common.cost)?;
    let values = parse_rats(&args.types)?;
    let instance = ProjectInstance::new(values.len(), cost)?;
    let types = TypeProfile::new(&instance, values)?;
    let vector = parse_vector(&args.strategy, instance.players())?;
    let scheme = parse_scheme(&args.scheme)?;
    let rows: Vec<SweepRow> = sweep_orders(&instance, &scheme, &vector, &types)?
        .iter()
        .map(|(_, trace)| SweepRow::from_trace(trace))
        .collect();
    let body = match args.common.format {
        Format::Json => to_json_pretty(&rows),
        Format::Csv => sweep_csv(&rows),
        Format::Table => sweep_table(&rows),
    };
    emit(&args.common, body)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport {
    suite: String,
    steps: usize,
    enriched: Vec<Rat>,
    metric: String,
    verdicts: Vec<Verdict>,
    all_hold: bool,
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let cost = parse_rat(&args.common.cost)?;
    let instance = ProjectInstance::new(args.players, cost)?;
    let enriched = match &args.enrich {
        Some(text) => parse_rats(text)?,
        None => Vec::new(),
    };
    let build_grid = |steps: usize| -> Result<Grid, Error> {
        let grid = Grid::new(instance.clone(), steps)?.enrich(&enriched)?;
        if !grid.contains_share() {
            eprintln!(
                "warning: the cost share {} is not a grid point; boundary cases of the \
                 socially optimal rule will not be exercised (pick steps divisible by {} \
                 or enrich)",
                instance.share(),
                instance.players()
            );
        }
        Ok(grid)
    };
    let grid = build_grid(args.steps)?;
    let metric = parse_metric(&args.metric)?;
    let n = instance.players();

    let strategies_under_test: Vec<&str> = match &args.strategy {
        Some(id) => vec![id.as_str()],
        None => vec!["truth", "thm3", "thm5"],
    };

    let mut verdicts: Vec<Verdict> = Vec::new();
    let mut extra_lines: Vec<String> = Vec::new();
    let suites: Vec<&str> = if args.suite == "all" {
        vec![
            "optimal",
            "social",
            "compat",
            "ic",
            "invariance",
            "welfare-max",
            "nash",
        ]
    } else {
        vec![args.suite.as_str()]
    };

    for suite in &suites {
        match *suite {
            "optimal" => {
                for id in &strategies_under_test {
                    for player in 1..=n {
                        verdicts.push(verify_optimal(&Strategy::by_name(id, player)?, &grid)?);
                    }
                }
            }
            "social" => {
                let ids: Vec<&str> = match &args.strategy {
                    Some(id) => vec![id.as_str()],
                    None => vec!["thm5"],
                };
                for id in ids {
                    for player in 1..=n {
                        verdicts.push(verify_socially_optimal(
                            &Strategy::by_name(id, player)?,
                            &grid,
                        )?);
                    }
                }
            }
            "compat" => verdicts.push(verify_opt_constraints(&grid)?),
            "ic" => match &args.scheme {
                Some(id) => verdicts.push(verify_ic(&parse_scheme(id)?, &grid)?),
                None => {
                    verdicts.push(verify_ic(&TaxScheme::pivotal(), &grid)?);
                    verdicts.push(verify_ic(&TaxScheme::h_zero(), &grid)?);
                }
            },
            "invariance" => {
                let ids: Vec<&str> = match &args.strategy {
                    Some(id) => vec![id.as_str()],
                    None => Strategy::NAMED_IDS.to_vec(),
                };
                for id in ids {
                    for player in 1..=n {
                        verdicts.push(verify_groves_invariance(
                            &Strategy::by_name(id, player)?,
                            &grid,
                            &GrovesSpec::Pivotal,
                            &GrovesSpec::h_zero(),
                        )?);
                    }
                }
            }
            "welfare-max" => {
                verdicts.push(verify_welfare_maximality(&grid)?);
                for id in ["thm3", "thm5"] {
                    let report =
                        welfare_maximality_report(&grid, &StrategyVector::by_name(id, n)?)?;
                    extra_lines.push(match &report.first_miss {
                        None => format!(
                            "note  {id} play attains the optimal-path welfare maximum at all {} profiles",
                            report.profiles
                        ),
                        Some((profile, played, max)) => format!(
                            "note  {id} play attains the maximum at {}/{} profiles; first miss at \
                             ({}) with welfare {} vs maximum {}",
                            report.attains_maximum,
                            report.profiles,
                            profile
                                .iter()
                                .map(|r| r.to_string())
                                .collect::<Vec<_>>()
                                .join(", "),
                            played,
                            max
                        ),
                    });
                }
            }
            "nash" => {
                let nash_grid = build_grid(args.nash_steps)?;
                let scheme = TaxScheme::pivotal();
                let vector = parse_vector(&args.vector, n)?;
                match &args.through {
                    None => {
                        let universe = DeviationUniverse::standard(&nash_grid, &vector)?;
                        verdicts.push(nash_check(
                            &scheme,
                            &nash_grid,
                            &vector,
                            &universe,
                            metric,
                            Relation::Direct,
                        )?);
                        if args.suite == "all" {
                            let thm5 = StrategyVector::by_name("thm5", n)?;
                            let universe = DeviationUniverse::standard(&nash_grid, &thm5)?;
                            verdicts.push(nash_check(
                                &scheme,
                                &nash_grid,
                                &thm5,
                                &universe,
                                metric,
                                Relation::Direct,
                            )?);
                        }
                    }
                    Some(base_id) => {
                        let base = parse_vector(base_id, n)?;
                        let projection = StrategyVector::by_name("truth", n)?;
                        let universe = DeviationUniverse::standard(&nash_grid, &projection)?;
                        verdicts.push(nash_check(
                            &scheme,
                            &nash_grid,
                            &projection,
                            &universe,
                            metric,
                            Relation::ComposedThrough(&base),
                        )?);
                    }
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown suite {other:?} \
                     (optimal|social|compat|ic|nash|invariance|welfare-max|all)"
                )))
            }
        }
    }

    let all_hold = verdicts.iter().all(|v| v.holds);
    let body = match args.common.format {
        Format::Json => to_json_pretty(&VerifyReport {
            suite: args.suite.clone(),
            steps: args.steps,
            enriched,
            metric: metric.name().to_string(),
            verdicts: verdicts.clone(),
            all_hold,
        }),
        _ => {
            let mut out = String::new();
            for v in &verdicts {
                out.push_str(&verdict_line(v));
                out.push('\n');
            }
            for line in &extra_lines {
                out.push_str(line);
                out.push('\n');
            }
            out.push_str(&format!(
                "{}: {} properties checked, {} hold\n",
                if all_hold { "ok" } else { "FAILED" },
                verdicts.len(),
                verdicts.iter().filter(|v| v.holds).count()
            ));
            out
        }
    };
    emit(&args.common, body)?;
    Ok(if all_hold {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
