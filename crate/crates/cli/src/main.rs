mod commands;
mod golden;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "biboolean", version, about = "Exact moment and cumulant computations for two-faced pairs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Add decimal approximations next to exact values.
    #[arg(long, global = true)]
    float: bool,
    /// Write to a file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convert between moments and cumulants.
    Cumulants {
        /// Target: moments, boolean, free, bifree, biboolean or bifermi.
        #[arg(long)]
        kind: String,
        /// Truncation degree (required for atomic measures).
        #[arg(long)]
        degree: Option<usize>,
        input: PathBuf,
    },
    /// Combine two inputs.
    Convolve {
        #[arg(long, value_enum)]
        op: ConvolveOp,
        /// Degree used when an input is an atomic measure.
        #[arg(long, default_value_t = 6)]
        degree: usize,
        a: PathBuf,
        b: PathBuf,
    },
    /// Enumerate a partition family, or the coloring partition when --omega is given.
    Partitions {
        /// BI, BNC, ABI, BI_STAR, NC or INT.
        #[arg(long)]
        family: String,
        /// Faces as a string over {l, r}.
        #[arg(long)]
        chi: String,
        /// One color symbol per position.
        #[arg(long)]
        omega: Option<String>,
    },
    /// Generating series of a moment table.
    Series {
        #[arg(long, value_enum)]
        transform: Transform,
        #[arg(long)]
        degree: usize,
        input: PathBuf,
    },
    /// Run seeded random trials of an identity and report residuals.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Moment matrix positivity at a given order.
    Psd {
        #[arg(long)]
        order: usize,
        input: PathBuf,
    },
    /// Positivity of the n-th additive root under bi-Boolean convolution.
    Infdiv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: usize,
        input: PathBuf,
    },
    /// Recompute a pinned reference value and compare.
    Golden {
        #[arg(long, value_enum)]
        case: golden::Case,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConvolveOp {
    #[value(name = "uplusuplus")]
    Biboolean,
    #[value(name = "boxplusboxplus")]
    Bifree,
    #[value(name = "bulletbullet")]
    Bifermi,
    #[value(name = "twisted-mult")]
    TwistedMult,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    #[value(name = "eta")]
    Eta,
    #[value(name = "E")]
    SelfEnergy,
    #[value(name = "M")]
    Moments,
    #[value(name = "H")]
    H,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    #[value(name = "partial-eta")]
    PartialEta,
    #[value(name = "T")]
    T,
    #[value(name = "T-mirror")]
    TMirror,
    #[value(name = "S")]
    S,
    #[value(name = "S2")]
    S2,
    #[value(name = "breta")]
    Breta,
    #[value(name = "star-homomorphism")]
    StarHomomorphism,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let rendered = output::render(&report, cli.format, cli.float);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(if report.ok { 0 } else { 1 })
}
