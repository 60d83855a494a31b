use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use micropolar::cli::{parse_config_with_overrides, run_study};

#[derive(Parser)]
#[command(name = "micropolar", version, about = "Fractional-step micropolar Navier-Stokes solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the study described by a key=value config file and write a CSV report.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (overrides `out`); stdout when neither is given.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for independent sweep points (overrides `threads`).
        #[arg(long)]
        threads: Option<usize>,
        /// Extra KEY=VALUE overrides applied after the file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, threads, set } => run(config, out, threads, set),
    }
}

fn run(config: PathBuf, out: Option<PathBuf>, threads: Option<usize>, set: Vec<String>) -> ExitCode {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    let mut overrides = Vec::new();
    for kv in set {
        match kv.split_once('=') {
            Some((k, v)) => overrides.push((k.to_string(), v.to_string())),
            None => {
                eprintln!("error: --set expects KEY=VALUE, got '{kv}'");
                return ExitCode::from(2);
            }
        }
    }
    if let Some(o) = out {
        overrides.push(("out".into(), o.display().to_string()));
    }
    if let Some(t) = threads {
        overrides.push(("threads".into(), t.to_string()));
    }
    let cfg = match parse_config_with_overrides(&text, &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };

    let (csv, code) = match run_study(&cfg) {
        Ok(output) => (output.to_csv(), ExitCode::SUCCESS),
        Err(failure) => {
            eprintln!("error: {}", failure.error);
            (failure.flagged_csv(), ExitCode::FAILURE)
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, csv) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{csv}"),
    }
    code
}
