use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

mod commands;
mod report;

use report::{Failure, Report};

/// Order bounds and minimal prolongation orders for differential systems.
///
/// Exit codes: 0 success, 1 min-order found nothing up to --h-max, 2 parse or
/// usage error, 3 resource cap hit, 4 construction infeasible.
#[derive(Debug, Parser)]
#[command(name = "diffnull", version)]
struct Cli {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Include wall-clock time in the JSON report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the characteristic decomposition on a problem file.
    Decompose {
        file: PathBuf,
        /// Write the iteration trace as JSON.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        /// Check the τ lineages and degree growth of the trace.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 5000)]
        max_iterations: u64,
        #[arg(long, value_name = "MS")]
        time_ms: Option<u64>,
    },
    /// Find the least h with f in the radical of the h-th prolongation.
    MinOrder {
        file: PathBuf,
        #[arg(long)]
        h_max: u32,
        #[arg(long, value_name = "MS")]
        time_ms: Option<u64>,
    },
    /// Print the symbolic order bounds for a problem file.
    Bound {
        file: PathBuf,
        /// Largest integer, in bits, that is evaluated rather than kept symbolic.
        #[arg(long, default_value_t = diffnull::bounds::DEFAULT_BIT_CAP)]
        bit_cap: u64,
    },
    /// Dicksonian sequence tools; sequences are JSON arrays of integer arrays.
    Dickson {
        #[command(subcommand)]
        action: DicksonCommand,
    },
    /// Evaluate the Ackermann function A(M, N) exactly.
    Ackermann {
        m: u32,
        n: String,
        #[arg(long, default_value_t = diffnull::bounds::DEFAULT_BIT_CAP)]
        bit_cap: u64,
    },
    /// Print the problem file of an example family, e.g. `example ex3 2`.
    Example {
        /// One of ex1, ex2, ex3, ex4.
        family: String,
        param: u32,
        /// Write to this file instead of stdout.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

/// JSON arguments are either inline text or a path to a file.
#[derive(Debug, Subcommand)]
enum DicksonCommand {
    /// Is the sequence dicksonian?
    Check { seq: String },
    /// Pad a unit-growth sequence to one of growth f.
    Pad {
        seq: String,
        /// Growth function, e.g. '{"affine":{"a":1,"b":5}}' or '{"table":[2,3,5]}'.
        #[arg(long)]
        f: String,
        #[arg(long)]
        d: usize,
    },
    /// Longest dicksonian sequence of growth f in n variables.
    Search {
        f: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        coord_cap: u64,
        #[arg(long, default_value_t = diffnull::dickson::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
}

fn run(cli: &Cli) -> Result<(Report, u8), Failure> {
    match &cli.command {
        Command::Decompose { file, trace, verify, max_iterations, time_ms } => {
            commands::decompose(file, trace.as_deref(), *verify, *max_iterations, *time_ms)
        }
        Command::MinOrder { file, h_max, time_ms } => commands::min_order(file, *h_max, *time_ms),
        Command::Bound { file, bit_cap } => commands::bound(file, *bit_cap),
        Command::Dickson { action } => match action {
            DicksonCommand::Check { seq } => commands::dickson_check(seq),
            DicksonCommand::Pad { seq, f, d } => commands::dickson_pad(seq, f, *d),
            DicksonCommand::Search { f, n, coord_cap, budget } => commands::dickson_search(f, *n, *coord_cap, *budget),
        },
        Command::Ackermann { m, n, bit_cap } => commands::ackermann(*m, n, *bit_cap),
        Command::Example { family, param, output } => commands::example(family, *param, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (mut report, code) = match run(&cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            match f.report {
                Some(r) => (*r, f.code),
                None => return ExitCode::from(f.code),
            }
        }
    };
    print!("{}", report.human);
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(report::EXIT_USAGE);
        }
    }
    ExitCode::from(code)
}
