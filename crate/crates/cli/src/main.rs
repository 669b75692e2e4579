use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use locomp_cli::{ClassSpecFile, CliError, NRange, Report};

#[derive(Parser)]
#[command(name = "locomp", version, about = "Exact and asymptotic enumeration of locally restricted compositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct Common {
    /// Class definition file (JSON).
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts per size.
    Count {
        #[command(flatten)]
        common: Common,
        /// Sizes, as `N` or `LO..HI` (inclusive).
        #[arg(long = "n-range", visible_alias = "n")]
        range: NRange,
    },
    /// List every structure of one size.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: u32,
        #[arg(long, env = "LOCOMP_ENUM_CAP", default_value_t = locomp::DEFAULT_ENUM_CAP)]
        enum_cap: usize,
    },
    /// Structural and regularity checks.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Longest walk length searched for a size-aperiodicity witness.
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        /// Largest size for the walk-uniqueness check.
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, env = "LOCOMP_ENUM_CAP", default_value_t = locomp::DEFAULT_ENUM_CAP)]
        enum_cap: usize,
    },
    /// Longest-run law of the file's run composition against its limit.
    RunStats {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 16)]
        kmax: u32,
    },
    /// Growth constants r, A and C.
    Asym {
        #[command(flatten)]
        common: Common,
        /// Counting bound; defaults to the file's budget.
        #[arg(long = "budget", visible_alias = "b")]
        budget: Option<u32>,
    },
    /// Exact counts against A r^-n.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long = "n-range", visible_alias = "n")]
        range: NRange,
    },
}

fn load(path: &PathBuf) -> Result<ClassSpecFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Spec(format!("cannot read {}: {e}", path.display())))?;
    ClassSpecFile::parse(&text)
}

fn emit(report: &Report, common: &Common) -> Result<(), CliError> {
    let text = match common.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &common.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Failure(e.to_string()))?;
    }
    let (report, common) = match &cli.command {
        Command::Count { common, range } => (locomp_cli::count(&load(&common.spec)?, *range)?, common),
        Command::Enumerate { common, n, enum_cap } => {
            (locomp_cli::enumerate(&load(&common.spec)?, *n, *enum_cap)?, common)
        }
        Command::Validate { common, kmax, n, enum_cap } => {
            (locomp_cli::validate(&load(&common.spec)?, *kmax, *n, *enum_cap)?, common)
        }
        Command::RunStats { common, n, kmax } => (locomp_cli::run_stats(&load(&common.spec)?, *n, *kmax)?, common),
        Command::Asym { common, budget } => (locomp_cli::asym(&load(&common.spec)?, *budget)?, common),
        Command::Compare { common, range } => (locomp_cli::compare(&load(&common.spec)?, *range)?, common),
    };
    emit(&report, common)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("locomp {}: error: {e}", env!("CARGO_PKG_VERSION"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
