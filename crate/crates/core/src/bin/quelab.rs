use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quelab::cli::{metadata_json, run_experiment, write_csv, write_jsonl, ExperimentConfig, Kind, RunOptions};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "quelab", version, about = "Shrinking-ball mass experiments for Eisenstein series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ball masses with the Cauchy–Schwarz lower bound.
    OmegaScan(RunArgs),
    /// Ball masses against the QUE main term.
    QeScan(RunArgs),
    /// Windowed variance of the mass deviation over [T, 2T].
    Variance(RunArgs),
    /// Critical-line moments of zeta functions.
    Moments(RunArgs),
    /// Selberg transform of the ball kernel against closed forms and asymptotics.
    SelbergCheck(RunArgs),
    /// |E| at the center along the critical line.
    Eval(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path, or `-` for stdout.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (falls back to QUELAB_THREADS).
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides experiment.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the rows as JSON lines.
    #[arg(long)]
    jsonl: Option<PathBuf>,
    /// Record per-row wall time (makes the output run-dependent).
    #[arg(long)]
    timings: bool,
}

impl Command {
    fn split(self) -> (Kind, RunArgs) {
        match self {
            Command::OmegaScan(a) => (Kind::OmegaScan, a),
            Command::QeScan(a) => (Kind::QeScan, a),
            Command::Variance(a) => (Kind::Variance, a),
            Command::Moments(a) => (Kind::Moments, a),
            Command::SelbergCheck(a) => (Kind::SelbergCheck, a),
            Command::Eval(a) => (Kind::Eval, a),
        }
    }
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("QUELAB_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| format!("QUELAB_THREADS: expected a positive integer, got {v:?}")),
        _ => Ok(None),
    }
}

fn sink(path: &Path) -> io::Result<Box<dyn Write>> {
    if path == Path::new("-") {
        Ok(Box::new(io::stdout().lock()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn main() -> ExitCode {
    let (kind, args) = Cli::parse().command.split();
    let mut config = match ExperimentConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("quelab: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if config.kind != kind {
        eprintln!("quelab: config error: experiment.kind is {} but the subcommand is {}", config.kind, kind.command());
        return ExitCode::from(EXIT_CONFIG);
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let threads = match threads(args.threads) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("quelab: config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let table = match run_experiment(&config, &RunOptions { threads, timings: args.timings }) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("quelab: startup failed: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let written = (|| -> io::Result<()> {
        write_csv(&table, sink(&args.out)?)?;
        if let Some(p) = &args.jsonl {
            write_jsonl(&table, sink(p)?)?;
        }
        if args.out != Path::new("-") {
            let mut meta = args.out.clone().into_os_string();
            meta.push(".meta.json");
            std::fs::write(meta, metadata_json(&config, &table) + "\n")?;
        }
        Ok(())
    })();
    if let Err(e) = written {
        eprintln!("quelab: writing output: {e}");
        return ExitCode::from(EXIT_IO);
    }
    let failed = table.failed_rows();
    if failed > 0 {
        eprintln!("quelab: {failed} of {} rows failed", table.rows.len());
    }
    if table.mostly_failed() {
        return ExitCode::from(EXIT_NUMERIC);
    }
    ExitCode::SUCCESS
}
