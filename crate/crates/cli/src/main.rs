use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kframe_cli::{emit_report, fixture_scenario, load_scenario, run_suite, CliError, Format};

#[derive(Parser)]
#[command(name = "kframe", version, about = "Seeded verification of dual K-frame properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run property suites over a scenario file.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated property ids (default: all).
        #[arg(long)]
        properties: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Print a built-in fixture scenario.
    Fixtures {
        #[arg(long)]
        name: String,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify {
            config,
            properties,
            trials,
            seed,
            report,
            format,
        } => {
            let mut scenario = load_scenario(&config)?;
            if let Some(t) = trials {
                scenario.trials = t;
            }
            if let Some(s) = seed {
                scenario.seed = s;
            }
            let props: Vec<String> = properties.into_iter().collect();
            let result = run_suite(&scenario, &props)?;
            let format = match format {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            };
            match report {
                Some(path) => emit_report(&result, &path, format)?,
                None => print!("{}", result.render(format)),
            }
            Ok(result.all_pass())
        }
        Command::Fixtures { name } => {
            let scenario = fixture_scenario(&name)
                .ok_or_else(|| CliError::Usage(format!("unknown fixture `{name}`; expected W1 or W1p")))?;
            println!("{}", scenario.to_json());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
