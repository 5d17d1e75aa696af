use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nagao_cli::commands::{self, FaultInjection, RunConfig};
use nagao_cli::config::resolve_family;
use nagao_cli::store::RecordCache;
use nagao_cli::{CliError, CliResult};
use nagao_core::{Convention, FitBasis, Mode};

#[derive(Parser)]
#[command(
    name = "nagao",
    version,
    about = "Nagao-sum rank estimates for fibrations over P^1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-prime average traces, the three rank estimators and a summary.
    Estimate(RunArgs),
    /// Singular places, Kodaira types and the Shioda-Tate ledger.
    FiberReport {
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check the exact per-prime identities and the residual decay.
    VerifyIdentities {
        #[command(flatten)]
        run: RunArgs,
        /// Corrupt the record of this prime before checking.
        #[arg(long, hide = true)]
        inject_fault: Option<u64>,
    },
    /// List the built-in families.
    CorpusList,
}

#[derive(Args)]
struct RunArgs {
    /// `corpus:NAME` or a path to a family file.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 10_000)]
    tmax: u64,
    /// Comma-separated, increasing, at most --tmax.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<u64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Weierstrass)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    mode: ModeArg,
    /// Worker threads for the prime sweep (default: available cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = BasisArg::Reference)]
    fit_basis: BasisArg,
    #[arg(long, default_value = "nagao-out")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Weierstrass,
    Smooth,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Lenient,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    /// Fit against the truncated prime sum over the same primes.
    Reference,
    /// Fit against `1/(s-1)`.
    Pole,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Lenient => Mode::Lenient,
        }
    }
}

impl RunArgs {
    fn into_config(self) -> CliResult<RunConfig> {
        if self.threads == Some(0) {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        let threads = self
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Ok(RunConfig {
            family: resolve_family(&self.family)?,
            t_max: self.tmax,
            checkpoints: RunConfig::resolve_checkpoints(self.tmax, &self.checkpoints)?,
            convention: match self.convention {
                ConventionArg::Weierstrass => Convention::WeierstrassFiber,
                ConventionArg::Smooth => Convention::SmoothModelFiber,
            },
            mode: self.mode.into(),
            threads,
            fit_basis: match self.fit_basis {
                BasisArg::Reference => FitBasis::ReferencePrimeSum,
                BasisArg::Pole => FitBasis::Pole,
            },
            cache: RecordCache::from_env(&self.out_dir.join("cache")),
            out_dir: self.out_dir,
        })
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Estimate(args) => {
            commands::cmd_estimate(&args.into_config()?, &mut out)?;
        }
        Command::FiberReport {
            family,
            mode,
            out_dir,
        } => {
            commands::cmd_fiber_report(
                &resolve_family(&family)?,
                mode.into(),
                out_dir.as_deref(),
                &mut out,
            )?;
        }
        Command::VerifyIdentities { run, inject_fault } => {
            let fault = inject_fault.map(|p| FaultInjection { p });
            commands::cmd_verify_identities(&run.into_config()?, fault, &mut out)?;
        }
        Command::CorpusList => commands::cmd_corpus_list(&mut out),
    }
    let _ = out.flush();
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nagao: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
