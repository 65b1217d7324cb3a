use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperfact::coloring::HostKind;
use hyperfact::error::Error;
use hyperfact::extend::GenericOutcome;
use hyperfact::oracle::{SearchConfig, SearchOutcome};
use hyperfact::{extend, hf, oracle, verify, PartialFact};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hyperfact",
    about = "construct, extend and verify r-factorizations of complete h-uniform hypergraphs",
    version
)]
struct Cli {
    /// Number of concurrent jobs for detachment restarts (runs are
    /// deterministic; 1 executes restart seeds sequentially in the same
    /// order a parallel race would settle them)
    #[arg(long, global = true, default_value_t = 1)]
    jobs: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArg {
    /// Output path (standard output when omitted)
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    K4,
    K5,
    Pieces,
    Outside,
    Generic,
}

#[derive(Subcommand)]
enum Command {
    /// Build an r-factorization of the complete h-uniform hypergraph from
    /// scratch
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Extend a partial r-factorization to a full one
    Extend {
        #[arg(long = "in")]
        input: PathBuf,
        /// Target vertex count (required for complete-host inputs)
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Detachment restart budget
        #[arg(long, default_value_t = extend::DEFAULT_RESTART_BUDGET)]
        budget: u32,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Check that a file is a (partial) r-factorization
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Check the partial conditions only (degree caps), not fullness
        #[arg(long)]
        partial: bool,
    },
    /// Evaluate the necessary extension conditions for restrict or pieces
    /// hosts
    Conditions {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Exhaustive backtracking extension search (tiny scales)
    OracleExtend {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1_000_000)]
        node_budget: u64,
        #[arg(long, default_value_t = 60)]
        time_budget_secs: u64,
    },
}

fn emit(pf: &PartialFact, out: &OutputArg) -> hyperfact::Result<()> {
    match &out.out {
        Some(path) => hf::write_hf(pf, path),
        None => {
            print!("{}", hf::format_hf(pf));
            Ok(())
        }
    }
}

fn default_mode(pf: &PartialFact) -> Mode {
    match (&pf.kind, pf.params.h) {
        (HostKind::Pieces { .. }, _) => Mode::Pieces,
        (HostKind::Restrict { .. }, _) => Mode::Outside,
        (_, 4) => Mode::K4,
        (_, 5) => Mode::K5,
        _ => Mode::Generic,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen {
            n,
            h,
            r,
            seed,
            output,
        } => {
            let res = extend::factorize(n, h, r, seed)?;
            emit(&res.factorization, &output)?;
            Ok(EXIT_OK)
        }
        Command::Extend {
            input,
            n,
            mode,
            seed,
            budget,
            output,
        } => {
            let pf = hf::read_hf(&input)?;
            let mode = mode.unwrap_or_else(|| default_mode(&pf));
            let target = |n: Option<u32>| {
                n.ok_or_else(|| {
                    Error::InvalidParameters("--n is required for this mode".into())
                })
            };
            let res = match mode {
                Mode::K4 => extend::extend_k4(&pf, target(n)?, seed)?,
                Mode::K5 => extend::extend_k5(&pf, target(n)?, seed)?,
                Mode::Pieces => extend::extend_pieces(&pf, seed)?,
                Mode::Outside => extend::extend_outside(&pf, seed)?,
                Mode::Generic => match extend::extend_generic(&pf, target(n)?, seed, budget)? {
                    GenericOutcome::Extended(res) => *res,
                    GenericOutcome::Stuck { stage } => {
                        eprintln!("extension failed: stuck at stage '{stage}'");
                        return Ok(EXIT_NEGATIVE);
                    }
                },
            };
            emit(&res.factorization, &output)?;
            Ok(EXIT_OK)
        }
        Command::Verify { input, partial } => {
            let pf = hf::read_hf(&input)?;
            let report = if partial {
                verify::check_partial(&pf)
            } else {
                verify::check_full(&pf)
            };
            if report.ok() {
                eprintln!("ok");
                Ok(EXIT_OK)
            } else {
                for v in &report.violations {
                    eprintln!("{v}");
                }
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Conditions { input } => {
            let pf = hf::read_hf(&input)?;
            let report = match &pf.kind {
                HostKind::Restrict { .. } => verify::check_conditions(&pf),
                HostKind::Pieces { .. } => verify::check_pieces_conditions(&pf),
                _ => {
                    return Err(Error::InvalidInput(
                        "conditions applies to kind=restrict or kind=pieces files".into(),
                    ))
                }
            };
            if report.ok() {
                eprintln!("ok");
                Ok(EXIT_OK)
            } else {
                for v in &report.violations {
                    eprintln!("{v}");
                }
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::OracleExtend {
            input,
            n,
            node_budget,
            time_budget_secs,
        } => {
            let pf = hf::read_hf(&input)?;
            let cfg = SearchConfig {
                node_budget,
                time_budget: Duration::from_secs(time_budget_secs),
                symmetry_pruning: true,
            };
            match oracle::oracle_extend(&pf, n, &cfg)? {
                SearchOutcome::Found(found) => {
                    print!("{}", hf::format_hf(&found));
                    Ok(EXIT_OK)
                }
                SearchOutcome::None { reason } => {
                    eprintln!("no extension exists: {reason}");
                    Ok(EXIT_NEGATIVE)
                }
                SearchOutcome::Exhausted => {
                    eprintln!("search budget exhausted, no conclusion");
                    Ok(EXIT_EXHAUSTED)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::SearchExhausted { .. } => EXIT_EXHAUSTED,
                _ => EXIT_INVALID,
            };
            ExitCode::from(code)
        }
    }
}
