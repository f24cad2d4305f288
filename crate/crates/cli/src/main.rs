use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cli::commands::{self, FamilyFlag};
use cli::config::Config;
use cli::parse::rational;
use cli::{report_bytes, write_outputs, CliError, Globals, Output};
use construct::Mode;

#[derive(Parser)]
#[command(name = "dioph", version, about = "Heights, angles, constructions and exponent experiments for rational subspaces")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GlobalArgs {
    /// Seed for digits, sampling and random β.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Working precision of certified interval arithmetic.
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Directory for report.json, records.csv and manifest.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Relaxed,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    MinAngle,
    LastAngleD,
    Custom,
}

/// Vectors inline (`"1,0,1;0,1,1"`) or from a file, one per line.
#[derive(Args)]
struct Vectors {
    #[arg(long, conflicts_with = "basis_file")]
    basis: Option<String>,
    #[arg(long)]
    basis_file: Option<PathBuf>,
}

impl Vectors {
    fn text(&self) -> Result<String, CliError> {
        match (&self.basis, &self.basis_file) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            (None, None) => Err(CliError::Validation("give --basis or --basis-file".into())),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact squared height of the span of integer vectors.
    Height(Vectors),
    /// Whether an integer vector lies in the span.
    Member {
        #[arg(long)]
        y: String,
        #[command(flatten)]
        basis: Vectors,
    },
    /// Principal angles between two row spans.
    Angles {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Line construction from a `[line]` config.
    ConstructLine { config: PathBuf },
    /// Block construction from a `[blocks]` config.
    ConstructBlocks { config: PathBuf },
    /// Recursive construction from a `[recursive]` config.
    ConstructRecursive { config: PathBuf },
    /// Best-approximation scan from `[target]`/`[line]` and `[scan]`.
    Scan { config: PathBuf },
    /// Exponent estimate compared with the formula at a tolerance (exit 4 on failure).
    Estimate {
        config: PathBuf,
        /// Relative tolerance as a fraction, e.g. `1/10`.
        #[arg(long)]
        tolerance: Option<String>,
    },
    /// Jacobian rank certificate for an exponent family.
    SpectrumCertify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Members of a custom family, `"e,k;e,k"`.
        #[arg(long)]
        u: Option<String>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn run(cli: Cli, start: Instant) -> Result<Output, CliError> {
    let g = Globals {
        seed: cli.global.seed,
        precision_bits: cli.global.precision_bits,
        mode: cli.global.mode.map(|m| match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Relaxed => Mode::Relaxed,
        }),
        workers: cli.global.workers,
        out: cli.global.out,
    };
    match cli.cmd {
        Cmd::Height(v) => commands::height(&v.text()?),
        Cmd::Member { y, basis } => commands::member(&y, &basis.text()?),
        Cmd::Angles { a, b } => commands::angles(&a, &b, &g),
        Cmd::ConstructLine { config } => commands::construct_line(&Config::load(&config)?, &g),
        Cmd::ConstructBlocks { config } => commands::construct_blocks(&Config::load(&config)?, &g),
        Cmd::ConstructRecursive { config } => commands::construct_recursive(&Config::load(&config)?, &g),
        Cmd::Scan { config } => commands::scan(&Config::load(&config)?, &g),
        Cmd::Estimate { config, tolerance } => {
            let tol = tolerance
                .map(|t| rational(&t).ok_or_else(|| CliError::Parse { line: 1, column: 1, msg: format!("bad tolerance {t:?}") }))
                .transpose()?;
            commands::estimate(&Config::load(&config)?, &g, tol)
        }
        Cmd::SpectrumCertify { family, n, d, u, trials } => {
            let f = match family {
                FamilyArg::MinAngle => FamilyFlag::MinAngle,
                FamilyArg::LastAngleD => FamilyFlag::LastAngleD,
                FamilyArg::Custom => FamilyFlag::Custom,
            };
            commands::spectrum_certify(f, n, d, u.as_deref(), trials, &g)
        }
    }
    .and_then(|o| finish(o, &g, start))
}

fn finish(o: Output, g: &Globals, start: Instant) -> Result<Output, CliError> {
    if let Some(dir) = &g.out {
        write_outputs(&o, dir, start.elapsed())?;
    }
    Ok(o)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    match run(cli, start) {
        Ok(o) => {
            let _ = std::io::stdout().write_all(&report_bytes(&o));
            ExitCode::from(o.exit)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
