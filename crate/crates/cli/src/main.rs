mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "strata", version, about = "Exact invariants of stratified pseudomanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Perversity: lower-middle, upper-middle, zero, top or a list `p2,p3,..`.
    #[arg(long, global = true, default_value = "lower-middle")]
    perversity: String,

    /// Number of barycentric subdivisions applied before computing.
    #[arg(long, global = true, default_value_t = 0)]
    subdivide: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cross-check against the brute-force reference computations.
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rational Betti numbers of the triangulation.
    Homology { file: PathBuf },
    /// Intersection homology ranks and allowable simplex counts.
    Ih { file: PathBuf },
    /// Witt condition, stratum by stratum.
    Witt { file: PathBuf },
    /// Signature of a closed oriented Witt space.
    Signature { file: PathBuf },
    /// Faces and corners of the resolution. With `--base`, the grid
    /// resolution of the product bundle with fiber FILE.
    Resolve {
        file: PathBuf,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Exhaustive checks of the orientation calculus.
    OrientCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = commands::Options {
        perversity: cli.perversity,
        subdivide: cli.subdivide,
        oracle: cli.oracle,
        limits: commands::Limits::from_env(),
    };
    let outcome = std::panic::catch_unwind(|| commands::run(&cli.command, &opts));
    let (report, code) = match outcome {
        Ok(Ok(r)) => {
            let code = if r.ok { 0 } else { 1 };
            (r, code)
        }
        Ok(Err(Failure::Validation(m))) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
        Ok(Err(Failure::Internal(m))) => {
            eprintln!("internal error: {m}");
            return ExitCode::from(2);
        }
        Err(_) => {
            eprintln!("internal error: panic");
            return ExitCode::from(2);
        }
    };
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Text => print!("{}", report.text),
    }
    ExitCode::from(code)
}
