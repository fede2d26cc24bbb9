use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coopsec::harness::{run_mobility, run_sweep, run_validation, write_mobility_csv, ExperimentConfig};
use coopsec::protocol::{negotiate, ConstraintMode};
use coopsec::rates::LogBase;
use coopsec::{Error, Result};

#[derive(Parser)]
#[command(name = "coopsec", version, about = "Cooperative secrecy-rate simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Secrecy rates and allocations along one axis (CSV).
    Sweep(Common),
    /// Published formulas against the brute-force oracle (JSON).
    Validate(Common),
    /// Mode negotiation along Eve's trajectory (CSV).
    Mobility(Common),
    /// One negotiation round at the configured geometry (JSON).
    Negotiate(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration; omitted fields keep their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Figure preset (fig3..fig8), applied on top of the configuration.
    #[arg(long)]
    preset: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_mode)]
    constraint_mode: Option<ConstraintMode>,
    #[arg(long, value_parser = parse_base)]
    log_base: Option<LogBase>,
}

fn parse_mode(s: &str) -> std::result::Result<ConstraintMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_base(s: &str) -> std::result::Result<LogBase, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(name) = &self.preset {
            cfg.apply_preset(name)?;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(mode) = self.constraint_mode {
            cfg.constraint_mode = mode;
        }
        if let Some(base) = self.log_base {
            cfg.log_base = base;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn write(&self, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match &self.out {
            Some(path) => {
                let file = File::create(path).map_err(|source| output_error(path, source))?;
                let mut w = BufWriter::new(file);
                body(&mut w)?;
                w.flush().map_err(|source| output_error(path, source))
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                body(&mut lock)?;
                lock.flush()?;
                Ok(())
            }
        }
    }
}

fn output_error(path: &Path, source: io::Error) -> Error {
    Error::Output {
        path: path.to_path_buf(),
        source,
    }
}

fn write_json<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => {
            let table = run_sweep(&args.config()?)?;
            args.write(|w| table.write_csv(w))
        }
        Command::Validate(args) => {
            let report = run_validation(&args.config()?)?;
            args.write(|w| write_json(w, &report))
        }
        Command::Mobility(args) => {
            let rows = run_mobility(&args.config()?)?;
            args.write(|w| write_mobility_csv(&rows, w))
        }
        Command::Negotiate(args) => {
            let cfg = args.config()?;
            let outcome = negotiate(&cfg.negotiation_policy(), &cfg.scenario(), &cfg.geometry, cfg.constraint_mode)?;
            args.write(|w| write_json(w, &outcome))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("coopsec: {e}");
            ExitCode::FAILURE
        }
    }
}
