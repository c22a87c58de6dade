use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curvesynth::cli::{self, RunConfig, EXIT_CONFIG};
use curvesynth::Error;

#[derive(Parser)]
#[command(name = "curvesynth", version, about = "Synthesise space curves and their Frenet frames")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON config and write a trace CSV (or a compare report).
    Run {
        /// Config file, or `-` for standard input.
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two trace CSVs on the same grid and write a JSON report.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(source: &str) -> Result<RunConfig, Error> {
    let text = if source == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Io(format!("cannot read standard input: {e}")))?;
        buf
    } else {
        cli::read_file(Path::new(source))?
    };
    RunConfig::from_json(&text)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io(format!("cannot write standard output: {e}"))),
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run { config, out } => {
            let cfg = load_config(&config)?;
            let text = cli::run_config(&cfg)?;
            let out = out.or_else(|| cfg.output.as_ref().map(PathBuf::from));
            emit(&text, out.as_deref())
        }
        Command::Compare { a, b, out } => emit(&cli::compare_files(&a, &b)?, out.as_deref()),
    }
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("curvesynth: {}", one_line(first.trim_start_matches("error:")));
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    match execute(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("curvesynth: {}", one_line(&e.to_string()));
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
