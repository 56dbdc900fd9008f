//! Command-line harness for the service-reliability toolkit: closed-form
//! evaluation, Monte Carlo validation, provisioning searches, and parameter
//! sweeps that emit plot-ready datasets.

mod row;
mod sweep;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sfcrel::analytic::evaluate;
use sfcrel::model::{BackupSpec, ChainSpec, ReliabilityParams, Scenario, Strategy, Violation};
use sfcrel::montecarlo::estimate;
use sfcrel::search::{max_protected_n, min_sigma, SearchError};

use row::{write_rows, Format, ResultRow};

const EXIT_VALIDATION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_DISAGREEMENT: u8 = 4;

/// A simulation is flagged when it lands beyond this many binomial standard
/// errors from the closed form.
const DISAGREEMENT_SIGMAS: f64 = 4.0;

#[derive(Parser)]
#[command(
    name = "sfcrel",
    version,
    about = "Service-success probability and backup utilization for parallelized VNF chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form success probability of one scenario.
    Eval {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a Monte Carlo estimate next to the closed form.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Number of simulated component worlds.
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        /// Base seed; a fixed seed makes the run bit-reproducible.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Exit with status 4 when simulation and closed form disagree beyond
        /// four standard errors (a warning is printed either way).
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Find the minimal backup provisioning for a target, or with --max-n the
    /// largest protected sub-flow count under a fixed budget.
    Search {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Success probability to reach.
        #[arg(long)]
        target: f64,
        /// Fix sigma (and m) and search the largest protected n instead of
        /// the smallest sigma.
        #[arg(long = "max-n")]
        max_n: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the sweep described by a config file (see the configs/ directory
    /// for the shipped sweeps).
    Sweep {
        /// Path to the sweep description file.
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Scenario parameters shared by eval, simulate and search.
#[derive(Args)]
struct ScenarioArgs {
    /// Placement strategy.
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    /// Number of parallel sub-flows.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Chain length: total number of VNF types.
    #[arg(long, default_value_t = 1)]
    psi: u32,
    /// Active servers per sub-flow (distributed strategies; centralized
    /// strategies always use one server per type).
    #[arg(long = "N", default_value_t = 1)]
    n_servers: u32,
    /// Explicit types-per-server split, comma-separated (e.g. 2,1); replaces
    /// the even split and implies --N from its length.
    #[arg(long = "psi-split", value_delimiter = ',', value_name = "A,B,...")]
    psi_split: Option<Vec<u32>>,
    /// Backup chain copies reserved per backup server.
    #[arg(long, default_value_t = 0)]
    sigma: u32,
    /// Backup server count (pooled strategy only; must be a multiple of N).
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Active server reliability.
    #[arg(long, default_value_t = 1.0)]
    phi: f64,
    /// Backup server reliability.
    #[arg(long = "phi-r", default_value_t = 1.0)]
    phi_r: f64,
    /// Active VNF instance reliability.
    #[arg(long, default_value_t = 1.0)]
    upsilon: f64,
    /// Backup VNF instance reliability.
    #[arg(long = "upsilon-r", default_value_t = 1.0)]
    upsilon_r: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    CvNone,
    DvNone,
    Asbn,
    Asbs,
    Anbn,
    Anbs,
    VnfOnly,
}

impl From<StrategyArg> for Strategy {
    fn from(arg: StrategyArg) -> Strategy {
        match arg {
            StrategyArg::CvNone => Strategy::CvNone,
            StrategyArg::DvNone => Strategy::DvNone,
            StrategyArg::Asbn => Strategy::Asbn,
            StrategyArg::Asbs => Strategy::Asbs,
            StrategyArg::Anbn => Strategy::Anbn,
            StrategyArg::Anbs => Strategy::Anbs,
            StrategyArg::VnfOnly => Strategy::VnfOnly,
        }
    }
}

impl ScenarioArgs {
    fn chain(&self) -> ChainSpec {
        match &self.psi_split {
            Some(split) => ChainSpec::new(self.n, self.psi, split.clone()),
            None => ChainSpec::with_even_split(self.n, self.psi, self.n_servers),
        }
    }

    fn params(&self) -> ReliabilityParams {
        ReliabilityParams::new(self.phi, self.phi_r, self.upsilon, self.upsilon_r)
    }

    fn scenario(&self) -> Result<Scenario, CliError> {
        let sc = Scenario::new(
            self.strategy.into(),
            self.params(),
            self.chain(),
            BackupSpec::new(self.sigma, self.m),
        );
        sc.validate().map_err(CliError::Invalid)?;
        Ok(sc)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the dataset to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

impl OutputArgs {
    fn emit(&self, rows: &[ResultRow]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => {
                let file = File::create(path).map_err(|e| {
                    CliError::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
                let mut w = BufWriter::new(file);
                write_rows(rows, self.format, &mut w)?;
                w.flush()?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                write_rows(rows, self.format, &mut w)?;
            }
        }
        Ok(())
    }
}

enum CliError {
    /// Scenario or argument rejected; maps to exit code 2.
    Invalid(Vec<Violation>),
    /// Any other user-input problem (bad config, unwritable output, bad
    /// target); also exit code 2.
    Usage(String),
    /// A search target no provisioning can reach; exit code 3.
    Infeasible(String),
    /// Simulation vs. closed form beyond the threshold under --strict; exit
    /// code 4.
    Disagreement(String),
    /// The consumer closed stdout (e.g. `| head`); not an error.
    Pipe,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(violations) => {
                let joined = violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ");
                write!(f, "invalid scenario: {joined}")
            }
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            CliError::Disagreement(msg) => write!(f, "disagreement: {msg}"),
            CliError::Pipe => write!(f, "output pipe closed"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        if e.kind() == io::ErrorKind::BrokenPipe {
            CliError::Pipe
        } else {
            CliError::Usage(format!("i/o error: {e}"))
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Disagreement(_) => EXIT_DISAGREEMENT,
            CliError::Pipe => 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) | Err(CliError::Pipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Eval { scenario, output } => {
            let sc = scenario.scenario()?;
            let analytic = evaluate(&sc).map_err(|e| CliError::Usage(e.to_string()))?;
            output.emit(&[ResultRow::new(&sc, analytic.value())])
        }
        Command::Simulate {
            scenario,
            trials,
            seed,
            strict,
            output,
        } => {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let sc = scenario.scenario()?;
            let analytic = evaluate(&sc)
                .map_err(|e| CliError::Usage(e.to_string()))?
                .value();
            let est = estimate(&sc, trials, seed);
            let row = ResultRow::new(&sc, analytic).with_estimate(&est);
            output.emit(&[row])?;

            let se = (analytic * (1.0 - analytic) / trials as f64).sqrt();
            let deviation = (est.mean - analytic).abs();
            if deviation > DISAGREEMENT_SIGMAS * se {
                let msg = format!(
                    "simulation mean {:.8} vs closed form {analytic:.8} \
                     ({deviation:.2e} > {DISAGREEMENT_SIGMAS} standard errors = {:.2e})",
                    est.mean,
                    DISAGREEMENT_SIGMAS * se,
                );
                eprintln!("warning: {msg}");
                if strict {
                    return Err(CliError::Disagreement(msg));
                }
            }
            Ok(())
        }
        Command::Search {
            scenario,
            target,
            max_n,
            output,
        } => {
            if !(target > 0.0 && target < 1.0) {
                return Err(CliError::Usage(format!(
                    "--target must lie strictly between 0 and 1, got {target}"
                )));
            }
            let strategy: Strategy = scenario.strategy.into();
            let params = scenario.params();
            if max_n {
                let best = max_protected_n(
                    strategy,
                    params,
                    scenario.psi,
                    scenario.n_servers,
                    scenario.sigma,
                    scenario.m,
                    target,
                )
                .map_err(|e| CliError::Usage(e.to_string()))?;
                if best == 0 {
                    return Err(CliError::Infeasible(format!(
                        "no sub-flow count reaches {target} with sigma = {} and m = {}",
                        scenario.sigma, scenario.m
                    )));
                }
                let sc = Scenario::new(
                    strategy,
                    params,
                    ChainSpec::with_even_split(best, scenario.psi, scenario.n_servers),
                    BackupSpec::new(scenario.sigma, scenario.m),
                );
                let analytic = evaluate(&sc).map_err(|e| CliError::Usage(e.to_string()))?;
                output.emit(&[ResultRow::new(&sc, analytic.value())])
            } else {
                let result = min_sigma(strategy, params, &scenario.chain(), scenario.m, target)
                    .map_err(|e| match e {
                        SearchError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
                        other => CliError::Usage(other.to_string()),
                    })?;
                let m = if strategy == Strategy::Anbn {
                    scenario.m
                } else {
                    0
                };
                let sc = Scenario::new(
                    strategy,
                    params,
                    scenario.chain(),
                    BackupSpec::new(result.sigma_min, m),
                );
                output.emit(&[ResultRow::new(&sc, result.achieved)])
            }
        }
        Command::Sweep { config, output } => {
            let cfg = sweep::load(&config).map_err(CliError::Usage)?;
            let rows = sweep::run(&cfg).map_err(CliError::Usage)?;
            output.emit(&rows)
        }
    }
}
