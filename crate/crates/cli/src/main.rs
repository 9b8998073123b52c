use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod render;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_CONTRADICTION: u8 = 2;
pub const EXIT_MATH: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "genseq", version, about = "Generating sequences, quadratic transforms and monomial extensions")]
pub struct Cli {
    /// Number of jumping pairs to use (default: all)
    #[arg(long, global = true)]
    pub depth: Option<usize>,

    /// Largest value tested by `verify`
    #[arg(long, global = true, default_value = "5")]
    pub gamma_max: String,

    /// Degree bound for test polynomials in `verify`
    #[arg(long, global = true, default_value_t = 8)]
    pub deg_bound: u32,

    /// Seed for randomized batteries
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jumping polynomials, values and the inequality checks
    Genseq { spec: PathBuf },
    /// Value and initial term of a polynomial
    Eval { spec: PathBuf, poly: String },
    /// Standard expansion of a polynomial
    Expand { spec: PathBuf, poly: String },
    /// Euclidean data of a coprime pair
    Euclid { p: u64, q: u64 },
    /// Quadratic transforms along the valuation and chunk equivalence
    Blowup {
        spec: PathBuf,
        /// Number of single transforms to trace (default: k_depth)
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Charts at the independent levels
    Monoidal {
        spec: PathBuf,
        /// Highest level (default: all known levels)
        #[arg(long)]
        level: Option<usize>,
    },
    /// Jumping sequences on both sides of an extension
    Dual { ext: PathBuf },
    /// Stable-form ladder of an extension
    Ladder { ext: PathBuf },
    /// Generating-sequence and minimality checks
    Verify { spec: PathBuf },
    /// Toroidal form of an extension
    Classify {
        ext: PathBuf,
        /// Override the valuation type (cases 1-3 are declarative)
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Divisorial,
    RankTwo,
    RationalRankTwo,
    NonDiscrete,
    Discrete,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (report, code) = commands::run(&cli);
    let text = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => render::text(&report),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
