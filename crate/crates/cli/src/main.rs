use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slcsurf_cli::commands::{self, CycleMode};
use slcsurf_cli::report::Format;
use slcsurf_cli::CliError;

/// Exact invariants and embedding criteria for stable log surfaces.
#[derive(Parser)]
#[command(name = "slcsurf", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// K^2, chi and the multi-node table of a surface document.
    Invariants { file: PathBuf },
    /// Semi-numerical cycle, fundamental cycle or hat transform of a graph document.
    Cycle {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CycleMode::Semi)]
        mode: CycleMode,
    },
    /// Threshold verdicts on X and on D+Delta for a range of multiples.
    Criteria {
        file: PathBuf,
        /// Inclusive range `a..b`.
        #[arg(long, default_value = "1..8")]
        m_range: String,
    },
    /// Dimensions of the graded ring of the `descend` example.
    RingDims {
        #[arg(long, default_value_t = 16)]
        max_k: u32,
    },
    /// Built-in example: descend, largeK2:<k> (2 <= k <= 50) or multinode3.
    Example {
        name: String,
        /// Print the surface document instead of the report.
        #[arg(long)]
        emit_json: bool,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let report = match cli.command {
        Command::Invariants { file } => commands::cmd_invariants(&file)?,
        Command::Cycle { file, mode } => commands::cmd_cycle(&file, mode)?,
        Command::Criteria { file, m_range } => commands::cmd_criteria(&file, &m_range)?,
        Command::RingDims { max_k } => commands::ring_dims_report(max_k)?,
        Command::Example { name, emit_json: true } => return Ok(commands::example_document(&name)?.to_json() + "\n"),
        Command::Example { name, emit_json: false } => commands::cmd_example(&name)?,
    };
    Ok(report.render(cli.format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
