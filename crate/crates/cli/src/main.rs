use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use essmod_cli::commands::{cmd_check, cmd_witness, io_error, read_instance, WitnessOptions};
use essmod_cli::error::{CliError, CliResult, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use essmod_cli::gen::{generate, DefectMode, GenOptions};
use essmod_cli::instance::Kind;
use essmod_cli::report::Report;
use essmod_cli::suite::{cmd_suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "essmod", version, about = "Essential submodules and ideals: generation, checks, witnesses, properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json_pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance with a planted answer.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block sizes of the algebra, comma separated.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<usize>>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        pieces: Option<usize>,
        #[arg(long)]
        generators: Option<usize>,
        #[arg(long, value_enum, default_value_t = DefectMode::Points)]
        defect: DefectMode,
        #[command(flatten)]
        output: Output,
    },
    /// Decide essentiality of an instance.
    Check {
        /// Read the instance from here instead of stdin.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Construct and recheck witnesses for an instance.
    Witness {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the property suite.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn read_input(path: &Option<PathBuf>) -> CliResult<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(io_error),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(io_error)?;
            Ok(s)
        }
    }
}

fn write_json<T: serde::Serialize>(value: &T, output: &Output) -> CliResult<()> {
    let mut text = if output.json_pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serializable");
    text.push('\n');
    match &output.out {
        Some(p) => fs::write(p, text).map_err(io_error),
        None => io::stdout().write_all(text.as_bytes()).map_err(io_error),
    }
}

fn finish(report: &Report, output: &Output) -> CliResult<i32> {
    write_json(report, output)?;
    Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Gen { kind, seed, blocks, k, d, pieces, generators, defect, output } => {
            let opts = GenOptions { blocks, k, d, pieces, generators, defect };
            write_json(&generate(kind, &opts, seed)?, &output)?;
            Ok(EXIT_PASS)
        }
        Command::Check { input, output } => {
            let inst = read_instance(&read_input(&input)?)?;
            finish(&cmd_check(&inst)?, &output)
        }
        Command::Witness { input, samples, output } => {
            let inst = read_instance(&read_input(&input)?)?;
            finish(&cmd_witness(&inst, &WitnessOptions { samples })?, &output)
        }
        Command::Suite { seed, trials, output } => {
            let start = Instant::now();
            let report = cmd_suite(&SuiteConfig::new(seed, trials));
            eprintln!("suite finished in {:.1} s", start.elapsed().as_secs_f64());
            finish(&report, &output)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("essmod: {e}");
            match e {
                CliError::SizeCap(_) | CliError::Schema(_) | CliError::Io(_) | CliError::Core(_) => EXIT_INPUT,
            }
        }
    };
    ExitCode::from(code as u8)
}
