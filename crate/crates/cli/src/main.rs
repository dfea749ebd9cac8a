use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use jetgauge_cli::commands::parse_seed_arg;
use jetgauge_cli::{exit_code, run, Command, Overrides, INPUT_ERROR};

/// Verify jet-bundle prolongation and gauge identities.
///
/// Exit status: 0 when every verdict holds, 1 when some verdict is false,
/// 2 on input errors.
#[derive(Debug, Parser)]
#[command(name = "jetgauge", version)]
struct Cli {
    /// Operation to run.
    #[arg(value_enum)]
    command: Command,
    /// Problem file, or the example number for `example`.
    input: String,
    /// Oracle seed (decimal or 0x-prefixed).
    #[arg(long, value_parser = parse_seed_arg)]
    seed: Option<u64>,
    /// Number of oracle samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Oracle tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Also write the machine-readable report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the machine-readable report instead of the human one.
    #[arg(long)]
    machine: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR as u8 } else { 0 });
        }
    };
    let overrides = Overrides { seed: cli.seed, samples: cli.samples, tol: cli.tol };
    let report = match run(cli.command, &cli.input, &overrides) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("jetgauge {}: {e}", cli.command);
            return ExitCode::from(INPUT_ERROR as u8);
        }
    };
    let machine = report.render_machine();
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &machine) {
            eprintln!("jetgauge: cannot write {}: {e}", path.display());
            return ExitCode::from(INPUT_ERROR as u8);
        }
    }
    if cli.machine {
        print!("{machine}");
    } else {
        print!("{}", report.render_human());
    }
    ExitCode::from(exit_code(&report) as u8)
}
