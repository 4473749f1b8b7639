use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use fbg_cqed::sweep::{run_scenario, Scenario, SolverPath, SCENARIO_NAMES};

use fbg_cqed_cli::config::{parse_entries, parse_overrides, resolve, ConfigError, Entry, Location};
use fbg_cqed_cli::{output, selftest};

const CHECK_LIMIT: f64 = 0.01;

#[derive(Parser)]
#[command(name = "fbgsim", version, about = "Atom near a nanofiber Bragg-grating cavity: steady-state sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write one row per scan point and solver path.
    Run(RunArgs),
    /// Print the predefined scenario names.
    ListScenarios,
    /// Run quick invariant checks of the solvers.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("source").required(true).multiple(true).args(["scenario", "config", "replay"])))]
struct RunArgs {
    /// Predefined scenario to start from.
    #[arg(long)]
    scenario: Option<String>,
    /// `key=value` configuration file applied on top of the scenario.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one key; may be repeated, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Re-run the configuration recorded in an earlier output file.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["scenario", "config"])]
    replay: Option<PathBuf>,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads for the sweep.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Print progress to standard error; repeat for more detail.
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Solve both paths and exit nonzero unless they agree within 1%.
    #[arg(long)]
    check: bool,
    /// Also write a gnuplot script next to the output file.
    #[arg(long, requires = "out")]
    plot: bool,
}

enum Failure {
    Config(String),
    Solver(String),
    Check,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Config(_) => 3,
            Failure::Solver(_) => 4,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(&args),
        Command::ListScenarios => {
            for name in SCENARIO_NAMES {
                println!("{name}");
            }
            Ok(())
        }
        Command::Selftest => selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(msg) => eprintln!("config error: {msg}"),
                Failure::Solver(msg) => eprintln!("solver error: {msg}"),
                Failure::Check => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// Configuration entries recorded in a CSV (`# config key=value`) or JSON
/// (`"config"` object) output file.
fn replay_entries(path: &Path) -> Result<Vec<Entry>, Failure> {
    let text = read(path)?;
    let context = |msg: String| Failure::Config(format!("{}: {msg}", path.display()));
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| context(e.to_string()))?;
        let obj = v
            .get("config")
            .and_then(|c| c.as_object())
            .ok_or_else(|| context("no config object".into()))?;
        return obj
            .iter()
            .map(|(k, v)| {
                let value = v.as_str().ok_or_else(|| context(format!("config value for {k} is not a string")))?;
                Ok(Entry {
                    key: k.clone(),
                    value: value.to_string(),
                    at: Location::End,
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix("# config ") {
            let mut e = parse_entries(rest)?;
            for entry in &mut e {
                entry.at = Location::Line(i + 1);
            }
            out.extend(e);
        }
    }
    if out.is_empty() {
        return Err(context("no `# config` lines found".into()));
    }
    Ok(out)
}

fn scenario_for(args: &RunArgs) -> Result<Scenario, Failure> {
    let mut entries = match (&args.replay, &args.config) {
        (Some(path), _) => replay_entries(path)?,
        (None, Some(path)) => {
            let text = read(path)?;
            parse_entries(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        (None, None) => Vec::new(),
    };
    entries.extend(parse_overrides(&args.set)?);
    let located = |e: ConfigError| match (&args.config, e.location()) {
        (Some(path), Location::Line(_)) if args.replay.is_none() => Failure::Config(format!("{}: {e}", path.display())),
        _ => Failure::from(e),
    };
    resolve(&entries, args.scenario.as_deref()).map_err(located)
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    let mut scenario = scenario_for(args)?;
    if args.check && scenario.solver != SolverPath::Both {
        scenario.solver = SolverPath::Both;
    }
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    if args.verbose > 0 {
        eprintln!(
            "running {}: {} points along {}, solver {}",
            scenario.name,
            scenario.scan.points,
            scenario.scan.axis.name(),
            scenario.solver.name()
        );
    }
    let res = run_scenario(&scenario).map_err(|e| Failure::Solver(e.to_string()))?;
    if args.verbose > 0 {
        eprintln!("kappa/2pi = {:.4} MHz, {} failed points", res.kappa / (2e6 * std::f64::consts::PI), res.failures());
    }
    if args.verbose > 1 {
        for (k, v) in output::resolved(&res) {
            eprintln!("  {k} = {v}");
        }
    }

    let now = timestamp();
    let written = match args.format {
        Format::Csv => output::write_csv(&mut sink, &res, now),
        Format::Json => output::write_json(&mut sink, &res, now),
    };
    written
        .and_then(|_| sink.flush())
        .map_err(|e| Failure::Config(format!("writing output: {e}")))?;
    if args.plot {
        let out = args.out.as_ref().expect("clap requires --out with --plot");
        let script = out.with_extension("gp");
        let csv_name = out.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        fs::write(&script, output::plot_script(&res, &csv_name))
            .map_err(|e| Failure::Config(format!("{}: {e}", script.display())))?;
    }

    let failed = output::records(&res).into_iter().filter(|r| r.error.is_some()).collect::<Vec<_>>();
    for r in &failed {
        eprintln!("warning: {} path failed at coord {}: {}", r.path, r.coord, r.error.as_deref().unwrap_or(""));
    }
    if args.check {
        let gap = res.max_relative_gap();
        let line = match gap {
            Some(g) => format!("max relative gap exact vs weak drive: {g:.6e} ({:.4}%)", 100.0 * g),
            None => "max relative gap exact vs weak drive: undefined, no point solved on both paths".to_string(),
        };
        // Keep standard output clean when the data itself goes there.
        if args.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
        if !failed.is_empty() {
            return Err(Failure::Solver(format!("{} of {} rows failed", failed.len(), output::records(&res).len())));
        }
        return if gap.is_some_and(|g| g < CHECK_LIMIT) { Ok(()) } else { Err(Failure::Check) };
    }
    if !failed.is_empty() {
        return Err(Failure::Solver(format!("{} of {} rows failed", failed.len(), output::records(&res).len())));
    }
    Ok(())
}

fn selftest() -> Result<(), Failure> {
    let checks = selftest::run();
    for c in &checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
