//! Command-line front end: validation, estimation, decomposition,
//! decentralized runs, window automata and the two-tank benchmark.
//!
//! All verbs read and write JSON (`--format table` switches to aligned
//! text where a table exists).  Exit codes: 0 on success, 1 on domain
//! failures such as a machine that is not chain-decomposable, 2 on usage
//! errors.  The `SVEST_BUDGET` environment variable overrides the
//! enumeration budget of exhaustive operations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use svest::decentralized::{run_trace, verify_exactness};
use svest::decomposition::{build_distributed, chain_partition, synthesize_suite, AggregationSuite};
use svest::estimator::{brute_force_estimate, estimate};
use svest::hybrid::twotank::{
    run_experiment, twotank_complexity, TwoTankOracle, TwoTankTrace, TwoTankView,
};
use svest::lcomplete::{build_lcomplete, complexity_report, online_estimate, CountingConvention};
use svest::machine::MachineDefinition;
use svest::{EnumerationBudget, Error, FiniteStateMachine, Result, SignalString};

/// Baseline figures for the two-tank benchmark: states / annotation
/// entries of the monolithic automaton and of the two single-tank
/// automata combined, at window lengths 2 and 3.
const BASELINE_FIGURES: [BaselineRow; 2] = [
    BaselineRow {
        ell: 2,
        monolithic_states: 172,
        monolithic_annotations: 993,
        per_channel_states: [54, 54],
        per_channel_annotations: [307, 310],
        combined_states: 108,
        combined_annotations: 617,
    },
    BaselineRow {
        ell: 3,
        monolithic_states: 2260,
        monolithic_annotations: 17743,
        per_channel_states: [703, 703],
        per_channel_annotations: [5509, 5556],
        combined_states: 1406,
        combined_annotations: 11065,
    },
];

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
struct BaselineRow {
    ell: usize,
    monolithic_states: u64,
    monolithic_annotations: u64,
    per_channel_states: [u64; 2],
    per_channel_annotations: [u64; 2],
    combined_states: u64,
    combined_annotations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Parser)]
#[command(
    name = "svest",
    version,
    about = "Set-valued state estimation on finite and hybrid machines"
)]
struct Cli {
    /// Output format; verbs without a table rendering fall back to JSON.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Cap the worker threads used for parallel construction.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Seed recorded for randomized fixtures; every built-in verb is
    /// deterministic, so this only pins the value in reproduction scripts.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a machine definition and report structural findings.
    Validate {
        /// Machine definition (JSON).
        machine: PathBuf,
    },
    /// Estimate current states and one-step prediction for a string.
    Estimate {
        machine: PathBuf,
        /// Comma-separated symbols, e.g. `a,a,b`.
        #[arg(long)]
        string: String,
        /// Start time of the observation window.
        #[arg(long, default_value_t = 0)]
        tau: usize,
        /// Also run the exhaustive reference estimator and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Estimate by exhaustive run enumeration (the reference semantics).
    Oracle {
        machine: PathBuf,
        #[arg(long)]
        string: String,
        #[arg(long, default_value_t = 0)]
        tau: usize,
        /// Unobserved steps enumerated before the window starts; defaults
        /// to `tau`, anchoring runs at time zero.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Partition the alphabet into non-deterministic chains.
    Chains {
        machine: PathBuf,
    },
    /// Synthesize a consistent aggregation suite from the chain partition.
    Decompose {
        machine: PathBuf,
        /// Number of aggregation functions (observers).
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Write the suite here (stdout otherwise).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Relabel a machine through each function of an aggregation suite.
    Distribute {
        machine: PathBuf,
        suite: PathBuf,
        /// Write one `distributed_<k>.json` per observer to this directory.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run per-observer estimators over a string and fuse their estimates.
    Decentralized {
        machine: PathBuf,
        suite: PathBuf,
        /// Comma-separated symbols of the original alphabet.
        #[arg(long, required_unless_present = "verify")]
        string: Option<String>,
        /// Also run the monolithic estimator and flag exact steps.
        #[arg(long)]
        compare: bool,
        /// Instead of one string, compare fused and monolithic estimates
        /// on every feasible string up to this length.
        #[arg(long, value_name = "MAXLEN", conflicts_with = "string")]
        verify: Option<usize>,
    },
    /// Build the depth-ℓ sliding-window automaton of a machine or of a
    /// two-tank observer.
    Lcomplete {
        /// Machine definition (JSON); omit when using --twotank.
        #[arg(required_unless_present = "twotank")]
        machine: Option<PathBuf>,
        /// Use the two-tank benchmark as the estimation source.
        #[arg(long)]
        twotank: bool,
        /// Two-tank observer to build for (with --twotank).
        #[arg(long, value_enum, default_value = "monolithic", requires = "twotank")]
        view: ViewArg,
        /// Window length.
        #[arg(long)]
        ell: usize,
        /// Write the automaton (states, annotations, transitions) here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print state counts instead of the automaton.
        #[arg(long)]
        report: bool,
        /// Counting conventions for --report.
        #[arg(long, value_delimiter = ',', default_value = "all,feasible,reachable")]
        count: Vec<CountingConvention>,
        /// Replay a comma-separated string through the automaton and print
        /// the per-step estimates.
        #[arg(long)]
        string: Option<String>,
    },
    /// Simulate the two-tank benchmark and estimate along the trace.
    Twotank {
        /// Window length.
        #[arg(long, default_value_t = 2)]
        ell: usize,
        /// Number of steps (prefix of the trace).
        #[arg(long)]
        steps: Option<usize>,
        /// Trace file (initial state + input levels); defaults to the
        /// built-in eight-step benchmark run.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Print the complexity table instead of running the trace.
        #[arg(long)]
        report: bool,
        /// Write the per-step estimate polygons (vertex lists) here.
        #[arg(long, value_name = "FILE")]
        emit_sets: Option<PathBuf>,
    },
    /// Compare two-tank automaton sizes against the baseline figures.
    Report {
        /// Window lengths to build.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        ell: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ViewArg {
    Monolithic,
    Channel1,
    Channel2,
}

impl From<ViewArg> for TwoTankView {
    fn from(arg: ViewArg) -> TwoTankView {
        match arg {
            ViewArg::Monolithic => TwoTankView::Monolithic,
            ViewArg::Channel1 => TwoTankView::Channel1,
            ViewArg::Channel2 => TwoTankView::Channel2,
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("cannot serialize: {e}")))?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("cannot serialize: {e}")))?;
    println!("{text}");
    Ok(())
}

/// The enumeration budget: `SVEST_BUDGET` when set, else the verb default.
fn effective_budget(default_budget: usize) -> Result<EnumerationBudget> {
    match std::env::var("SVEST_BUDGET") {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map(EnumerationBudget)
            .map_err(|_| Error::InvalidArgument(format!("invalid SVEST_BUDGET `{text}`"))),
        Err(std::env::VarError::NotPresent) => Ok(EnumerationBudget(default_budget)),
        Err(e) => Err(Error::InvalidArgument(format!("invalid SVEST_BUDGET: {e}"))),
    }
}

/// Budget default for the two-tank automata, sized so that every depth up
/// to 3 builds without tuning (about 1.8 million feasibility evaluations
/// for the monolithic observer at depth 3).
const TWOTANK_BUDGET: usize = 20_000_000;

fn load_machine(path: &Path) -> Result<Arc<FiniteStateMachine>> {
    Ok(Arc::new(read_json::<FiniteStateMachine>(path)?))
}

fn run(cli: Cli) -> Result<()> {
    let format = cli.format;
    match cli.command {
        Command::Validate { machine } => {
            let definition: MachineDefinition = read_json(&machine)?;
            let report = definition.validate();
            match format {
                Format::Json => print_json(&json!({
                    "blockingStates": report.blocking_states,
                    "sourcelessStates": report.sourceless_states,
                    "danglingReferences": report.dangling_references,
                    "clean": report.is_clean(),
                    "buildable": report.is_buildable(),
                }))?,
                Format::Table => {
                    println!("clean:     {}", report.is_clean());
                    println!("buildable: {}", report.is_buildable());
                    for state in &report.blocking_states {
                        println!("blocking state:      {state}");
                    }
                    for state in &report.sourceless_states {
                        println!("sourceless state:    {state}");
                    }
                    for finding in &report.dangling_references {
                        println!("dangling reference:  {finding}");
                    }
                }
            }
        }
        Command::Estimate { machine, string, tau, oracle } => {
            let machine = load_machine(&machine)?;
            let w = SignalString::parse(&string, tau)?;
            let pair = estimate(&machine, &w)?;
            if oracle {
                let budget = effective_budget(EnumerationBudget::default().0)?;
                let reference = brute_force_estimate(&machine, &w, tau, budget)?;
                let agrees = pair == reference;
                print_json(&json!({
                    "chi": pair.compatible,
                    "rho": pair.predicted,
                    "oracle": reference,
                    "agrees": agrees,
                }))?;
            } else {
                print_json(&pair)?;
            }
        }
        Command::Oracle { machine, string, tau, horizon } => {
            let machine = load_machine(&machine)?;
            let w = SignalString::parse(&string, tau)?;
            let budget = effective_budget(EnumerationBudget::default().0)?;
            let pair = brute_force_estimate(&machine, &w, horizon.unwrap_or(tau), budget)?;
            print_json(&pair)?;
        }
        Command::Chains { machine } => {
            let machine = load_machine(&machine)?;
            let partition = chain_partition(&machine)?;
            match format {
                Format::Json => print_json(&partition)?,
                Format::Table => {
                    for (j, block) in partition.blocks.iter().enumerate() {
                        let symbols: Vec<&str> =
                            block.symbols.iter().map(|s| s.as_str()).collect();
                        println!(
                            "block {}: {{{}}} ({} transitions)",
                            j + 1,
                            symbols.join(", "),
                            block.transitions.len()
                        );
                    }
                }
            }
        }
        Command::Decompose { machine, p, output } => {
            let machine = load_machine(&machine)?;
            let partition = chain_partition(&machine)?;
            let suite = synthesize_suite(&partition, p)?;
            match output {
                Some(path) => {
                    write_json(&path, &suite)?;
                    eprintln!("wrote suite with p={p} to {}", path.display());
                }
                None => print_json(&suite)?,
            }
        }
        Command::Distribute { machine, suite, output } => {
            let machine = load_machine(&machine)?;
            let suite: AggregationSuite = read_json(&suite)?;
            let distributed = suite
                .functions()
                .iter()
                .map(|f| build_distributed(&machine, f))
                .collect::<Result<Vec<_>>>()?;
            if let Some(dir) = &output {
                fs::create_dir_all(dir)
                    .map_err(|e| Error::Parse(format!("cannot create {}: {e}", dir.display())))?;
                for d in &distributed {
                    let path = dir.join(format!("distributed_{}.json", d.aggregation.index()));
                    write_json(&path, d.machine.as_ref())?;
                    eprintln!("wrote {}", path.display());
                }
            } else {
                let wire: Vec<_> = distributed
                    .iter()
                    .map(|d| {
                        json!({
                            "index": d.aggregation.index(),
                            "machine": d.machine.as_ref(),
                        })
                    })
                    .collect();
                print_json(&wire)?;
            }
        }
        Command::Decentralized { machine, suite, string, compare, verify } => {
            let machine = load_machine(&machine)?;
            let suite: AggregationSuite = read_json(&suite)?;
            if let Some(max_length) = verify {
                let budget = effective_budget(EnumerationBudget::default().0)?;
                let report = verify_exactness(&machine, &suite, max_length, budget)?;
                print_json(&report)?;
            } else {
                let spec = string.expect("clap requires --string unless --verify is given");
                let w = SignalString::parse(&spec, 0)?;
                let trace = run_trace(&machine, &suite, &w, compare)?;
                print_json(&trace)?;
            }
        }
        Command::Lcomplete { machine, twotank, view, ell, output, report, count, string } => {
            let budget =
                effective_budget(if twotank { TWOTANK_BUDGET } else { EnumerationBudget::default().0 })?;
            if twotank {
                let oracle = TwoTankOracle::new(view.into());
                let automaton = build_lcomplete(&oracle, ell, budget)?;
                emit_lcomplete(&automaton, format, output, report, &count, string)?;
            } else {
                let machine = load_machine(&machine.expect("clap requires a machine path"))?;
                let automaton = build_lcomplete(machine.as_ref(), ell, budget)?;
                emit_lcomplete(&automaton, format, output, report, &count, string)?;
            }
        }
        Command::Twotank { ell, steps, trace, report, emit_sets } => {
            if report {
                let budget = effective_budget(TWOTANK_BUDGET)?;
                let complexity = twotank_complexity(ell, budget)?;
                match format {
                    Format::Json => print_json(&complexity)?,
                    Format::Table => print!("{}", complexity.to_table()),
                }
                return Ok(());
            }
            let mut trace = match trace {
                Some(path) => read_json::<TwoTankTrace>(&path)?,
                None => TwoTankTrace::reference(),
            };
            if let Some(steps) = steps {
                if steps == 0 || steps > trace.inputs.len() {
                    return Err(Error::InvalidArgument(format!(
                        "steps must be 1..={} for this trace",
                        trace.inputs.len()
                    )));
                }
                trace.inputs.truncate(steps);
            }
            let experiment = run_experiment(&trace, ell)?;
            if let Some(path) = &emit_sets {
                write_json(path, &experiment)?;
                eprintln!("wrote estimate polygons to {}", path.display());
            }
            match format {
                Format::Json => print_json(&experiment)?,
                Format::Table => {
                    println!(
                        "{:<4}  {:<8}  {:<9}  {:<5}  {}",
                        "t", "symbol", "contained", "exact", "fused vertices"
                    );
                    for step in &experiment.steps {
                        println!(
                            "{:<4}  {:<8}  {:<9}  {:<5}  {}",
                            step.time,
                            step.symbol.as_str(),
                            step.contains_true,
                            step.exact,
                            step.fused.vertex_count()
                        );
                    }
                    println!(
                        "all contained: {}; all exact: {}",
                        experiment.all_contained, experiment.all_exact
                    );
                }
            }
        }
        Command::Report { ell } => {
            let budget = effective_budget(TWOTANK_BUDGET)?;
            let mut measured = Vec::new();
            for &ell in &ell {
                measured.push(twotank_complexity(ell, budget)?);
            }
            match format {
                Format::Json => print_json(&json!({
                    "measured": measured,
                    "baseline": BASELINE_FIGURES,
                }))?,
                Format::Table => {
                    for complexity in &measured {
                        print!("{}", complexity.to_table());
                        println!();
                    }
                    println!("baseline figures for the benchmark:");
                    println!(
                        "{:<4}  {:>10}  {:>10}  {:>12}  {:>12}",
                        "ell", "mono |Z|", "mono n_chi", "channels |Z|", "channels n_chi"
                    );
                    for row in &BASELINE_FIGURES {
                        println!(
                            "{:<4}  {:>10}  {:>10}  {:>12}  {:>12}",
                            row.ell,
                            row.monolithic_states,
                            row.monolithic_annotations,
                            row.combined_states,
                            row.combined_annotations
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn emit_lcomplete<A>(
    automaton: &svest::lcomplete::LCompleteAutomaton<A>,
    format: Format,
    output: Option<PathBuf>,
    report: bool,
    conventions: &[CountingConvention],
    string: Option<String>,
) -> Result<()>
where
    A: svest::lcomplete::Annotation + Serialize + std::fmt::Display,
{
    if let Some(path) = &output {
        write_json(path, automaton)?;
        eprintln!("wrote automaton with {} states to {}", automaton.states().len(), path.display());
    }
    if let Some(spec) = &string {
        let w = SignalString::parse(spec, 0)?;
        let emitted = online_estimate(automaton, &w);
        match format {
            Format::Json => {
                let wire: Vec<_> = emitted
                    .iter()
                    .zip(w.symbols())
                    .enumerate()
                    .map(|(t, (annotation, symbol))| {
                        json!({
                            "time": t,
                            "symbol": symbol,
                            "estimate": annotation.as_ref(),
                        })
                    })
                    .collect();
                print_json(&wire)?;
            }
            Format::Table => {
                for (t, (annotation, symbol)) in emitted.iter().zip(w.symbols()).enumerate() {
                    println!("{t:<4}  {:<8}  {}", symbol.as_str(), annotation);
                }
            }
        }
        return Ok(());
    }
    if report {
        let reports: Vec<_> =
            conventions.iter().map(|&c| complexity_report(automaton, c)).collect();
        match format {
            Format::Json => print_json(&reports)?,
            Format::Table => {
                println!("{:<11}  {:>8}  {:>10}", "convention", "|Z|", "n_chi");
                for r in &reports {
                    println!("{:<11}  {:>8}  {:>10}", r.convention.to_string(), r.state_count, r.annotation_size);
                }
            }
        }
        return Ok(());
    }
    if output.is_none() {
        print_json(automaton)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) =
            rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()
        {
            eprintln!("error: cannot configure {jobs} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
