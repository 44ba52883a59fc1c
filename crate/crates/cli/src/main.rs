//! `maxmono`: run experiment configs, the bundled gallery, and trajectory exports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use maxmono::experiment::{self, gallery, ExperimentConfig, Format, RunError};

#[derive(Parser)]
#[command(name = "maxmono", version, about = "Verify limit formulas for maximal monotone operators against exact oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a config, write the reports and print the summary.
    Run { config: PathBuf },
    /// Run the bundled examples and print a table of results.
    Gallery {
        /// Run a single example by tag.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
    },
    /// Write the Yosida trajectory of the config's first yosida_min_norm check as CSV.
    ExportTrajectory {
        config: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(config: PathBuf) -> Result<i32, RunError> {
    let cfg = ExperimentConfig::load(&config)?;
    let results = experiment::execute(&cfg)?;
    experiment::write_reports(&cfg, config.parent(), &results)?;
    let format = cfg.output.as_ref().map_or(Format::Json, |o| o.format);
    print!("{}", experiment::summary_text(&cfg, &results, format));
    Ok(experiment::exit_code(&results))
}

fn export(config: PathBuf, out: Option<PathBuf>) -> Result<i32, RunError> {
    let cfg = ExperimentConfig::load(&config)?;
    let csv = experiment::trajectory(&cfg)?.to_csv();
    match out {
        Some(path) => std::fs::write(&path, csv).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config } => run(config),
        Command::Gallery { only, format } => gallery::run(only.as_deref()).map(|g| {
            print!("{}", g.render(format.map(Format::from)));
            g.exit_code()
        }),
        Command::ExportTrajectory { config, out } => export(config, out),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
