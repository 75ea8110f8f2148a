//! `glow`: exact and Monte Carlo glow computations from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glow_core::GlowError;
use serde::Serialize;
use serde_json::{Map, Value};

use output::{Format, Manifest};

#[derive(Parser, Debug)]
#[command(
    name = "glow",
    version,
    about = "Glow of Hadamard and Fourier matrices"
)]
struct Cli {
    /// Output encoding; `verify` prints a table unless this or `--out` is given.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "GLOW_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact glow distribution of a ±1 Hadamard matrix.
    Binary(MatrixSource),
    /// Exact moments E|Ω|^{2p} through the partition expansion.
    Moments(MomentsArgs),
    /// The Fourier count I(π) with its arithmetic part and second-order data.
    Ipartition(IpartitionArgs),
    /// Exact Fourier moments against the three-term expansion.
    Asymptotics(AsymptoticsArgs),
    /// Exact polynomial fits of Walsh-matrix counts in N = 2^n.
    WalshFit(WalshFitArgs),
    /// Seeded Monte Carlo moments and histograms.
    Mc(McArgs),
    /// Runs the built-in acceptance suite.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Binary(_) => "binary",
            Command::Moments(_) => "moments",
            Command::Ipartition(_) => "ipartition",
            Command::Asymptotics(_) => "asymptotics",
            Command::WalshFit(_) => "walsh-fit",
            Command::Mc(_) => "mc",
            Command::Verify(_) => "verify",
        }
    }

    fn flags(&self) -> Value {
        let v = match self {
            Command::Binary(a) => serde_json::to_value(a),
            Command::Moments(a) => serde_json::to_value(a),
            Command::Ipartition(a) => serde_json::to_value(a),
            Command::Asymptotics(a) => serde_json::to_value(a),
            Command::WalshFit(a) => serde_json::to_value(a),
            Command::Mc(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
        };
        v.unwrap_or(Value::Null)
    }
}

/// Exactly one matrix source.
#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct MatrixSource {
    /// Sylvester matrix of order 2^n.
    #[arg(long)]
    pub sylvester: Option<usize>,
    /// `.hdm` file of `+`/`-` rows.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct AnySource {
    /// Fourier matrix of a finite abelian group, e.g. `Z4xZ2`.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub sylvester: Option<usize>,
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Oracle,
}

#[derive(Args, Debug, Serialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub source: AnySource,
    #[arg(long)]
    pub p: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
}

#[derive(Args, Debug, Serialize)]
pub struct IpartitionArgs {
    #[arg(long)]
    pub group: String,
    /// Blocks separated by `|`, elements by `,`.
    #[arg(long)]
    pub partition: String,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Z_N.
    Cyclic,
    /// Z_2^n.
    Elementary,
    /// Every abelian group of each order.
    All,
}

#[derive(Args, Debug, Serialize)]
pub struct AsymptoticsArgs {
    #[arg(long, value_enum, default_value = "cyclic")]
    pub family: Family,
    #[arg(long, default_value_t = 4)]
    pub pmax: usize,
    #[arg(long, default_value_t = 16)]
    pub nmax: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct WalshFitArgs {
    #[arg(long, default_value_t = 4)]
    pub p: usize,
    /// Largest n with N = 2^n.
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct McArgs {
    #[command(flatten)]
    pub source: AnySource,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Area name (partition, moments, fourier, binary, mc) or criterion id.
    #[arg(long)]
    pub filter: Option<String>,
}

/// Usage-type errors exit 2, everything else 1.
fn error_code(e: &GlowError) -> u8 {
    match e {
        GlowError::Parse { .. } | GlowError::Argument(_) | GlowError::Range(_) => 2,
        GlowError::Size(_) | GlowError::Precondition(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("glow: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let result = match &cli.command {
        Command::Binary(a) => commands::binary(a),
        Command::Moments(a) => commands::moments(a),
        Command::Ipartition(a) => commands::ipartition(a),
        Command::Asymptotics(a) => commands::asymptotics(a),
        Command::WalshFit(a) => commands::walsh_fit(a),
        Command::Mc(a) => commands::mc(a),
        Command::Verify(a) => commands::verify(a),
    };
    let report = match result {
        Ok(r) => r,
        Err(commands::Failure::Glow(e)) => {
            eprintln!("glow: {e}");
            return ExitCode::from(error_code(&e));
        }
        Err(commands::Failure::Io(e)) => {
            eprintln!("glow: {e}");
            return ExitCode::from(1);
        }
    };

    let mut flags = Map::new();
    flags.insert("args".into(), cli.command.flags());
    flags.insert("threads".into(), cli.threads.into());
    let manifest = Manifest {
        subcommand: cli.command.name(),
        flags,
        seed: report.seed,
        wall_time: start.elapsed().as_secs_f64(),
        output: cli.out.clone(),
    };

    if let Some(text) = &report.summary {
        if cli.format.is_none() && cli.out.is_none() {
            print!("{text}");
        } else {
            eprint!("{text}");
        }
    }
    let bare_table = report.summary.is_some() && cli.format.is_none() && cli.out.is_none();
    if !bare_table {
        let format = cli.format.unwrap_or(Format::Json);
        let written = output::render(&report, &manifest, format)
            .and_then(|b| output::emit(&b, cli.out.as_ref()));
        if let Err(e) = written {
            eprintln!("glow: {e}");
            return ExitCode::from(1);
        }
    }
    if report.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
