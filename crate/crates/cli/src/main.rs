use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use diracsplit_cli::commands::{self, exit_code, load_config};

#[derive(Parser)]
#[command(name = "diracsplit", version, about = "Time-splitting spectral solvers for the Dirac equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Run configuration file.
    config: PathBuf,
}

#[derive(Args)]
struct StudyArgs {
    /// Run configuration file.
    config: PathBuf,
    /// Also write a gnuplot script to this path.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured problem and dump the final state.
    Solve(ConfigArg),
    /// Temporal convergence table.
    ConvergeTime(StudyArgs),
    /// Spatial convergence table.
    ConvergeSpace(StudyArgs),
    /// Uniform-in-epsilon error sweep.
    Superres(StudyArgs),
    /// Solve or check the order conditions of the compact sixth-order scheme.
    Coeffs {
        #[arg(long, conflicts_with = "verify", required_unless_present = "verify")]
        derive: bool,
        #[arg(long)]
        verify: bool,
        /// Write the derived constants here instead of to standard output.
        #[arg(long)]
        write: Option<PathBuf>,
        /// Additional random Newton starts.
        #[arg(long, default_value_t = 0)]
        starts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Fused T and W exponential counts of a scheme.
    Opcount { scheme: String },
    /// Check the Lie-algebra identities and the printed expansion tables.
    VerifyLie {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> diracsplit::Result<i32> {
    match cli.command {
        Command::Solve(a) => commands::solve(&load_config(&a.config)?, out),
        Command::ConvergeTime(a) => commands::converge_time(&load_config(&a.config)?, a.gnuplot.as_deref(), out, err),
        Command::ConvergeSpace(a) => commands::converge_space(&load_config(&a.config)?, a.gnuplot.as_deref(), out),
        Command::Superres(a) => commands::superres(&load_config(&a.config)?, a.gnuplot.as_deref(), out),
        Command::Coeffs { derive: true, write, starts, seed, .. } => {
            commands::coeffs_derive(write.as_deref(), starts, seed, out)
        }
        Command::Coeffs { .. } => commands::coeffs_verify(out),
        Command::Opcount { scheme } => commands::opcount(&scheme, out, err),
        Command::VerifyLie { trials, seed } => commands::verify_lie(trials, seed, out),
    }
}

fn main() -> ExitCode {
    // usage errors are configuration errors (exit 1); clap would use 2
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = match run(cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
