use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shapecert::linalg::DEFAULT_SIGMA_DIGITS;
use shapecert::prover::ProverConfig;
use shapecert::rational::DEFAULT_DIGITS;
use shapecert_cli::commands::{self, EmbedOverrides, ProveArgs};
use shapecert_cli::CliError;

#[derive(Parser)]
#[command(
    name = "shapecert",
    version,
    about = "Certified existence of simplicial complexes with prescribed edge lengths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the existence conditions for the starting realization in FILE.
    Prove {
        file: PathBuf,
        /// Decimal places for square-root enclosures.
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        /// Decimal places for the smallest singular value enclosure.
        #[arg(long, default_value_t = DEFAULT_SIGMA_DIGITS)]
        sigma_digits: u32,
        /// Print the full proof log instead of only the verdict.
        #[arg(long)]
        verbose: bool,
        /// Also write the full proof log here.
        #[arg(long)]
        log_out: Option<PathBuf>,
    },
    /// Compute starting coordinates for FILE with the spring heuristic.
    Embed {
        file: PathBuf,
        #[command(flatten)]
        flags: EmbedFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact squared distance between the convex hulls of two point lists.
    Distance {
        /// Points such as "[[3,0,0],[0,3,0],[0,0,3]]".
        #[arg(required_unless_present = "file")]
        x: Option<String>,
        #[arg(required_unless_present = "file")]
        y: Option<String>,
        /// TOML file with `x` and `y` point lists.
        #[arg(long, conflicts_with_all = ["x", "y"])]
        file: Option<PathBuf>,
    },
    /// Write the first three coordinates of FILE as a Wavefront OBJ mesh.
    ExportObj {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EmbedFlags {
    #[arg(long)]
    seed: Option<u64>,
    /// Decimal places kept when rounding to fractions.
    #[arg(long)]
    round_digits: Option<u32>,
    #[arg(long)]
    repulsion_strength: Option<f64>,
    #[arg(long)]
    spring_strength: Option<f64>,
    #[arg(long)]
    time_step: Option<f64>,
    #[arg(long)]
    phase1_iterations: Option<usize>,
    #[arg(long)]
    phase2_iterations: Option<usize>,
    #[arg(long)]
    max_restarts: Option<usize>,
}

impl From<EmbedFlags> for EmbedOverrides {
    fn from(f: EmbedFlags) -> Self {
        EmbedOverrides {
            seed: f.seed,
            round_digits: f.round_digits,
            repulsion_strength: f.repulsion_strength,
            spring_strength: f.spring_strength,
            time_step: f.time_step,
            phase1_iterations: f.phase1_iterations,
            phase2_iterations: f.phase2_iterations,
            max_restarts: f.max_restarts,
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    match cli.command {
        Command::Prove {
            file,
            digits,
            sigma_digits,
            verbose,
            log_out,
        } => commands::prove(
            &ProveArgs {
                input: file,
                config: ProverConfig {
                    digits,
                    sigma_digits,
                },
                verbose,
                log_out,
            },
            out,
        ),
        Command::Embed {
            file,
            flags,
            out: path,
        } => commands::embed(&file, &flags.into(), path.as_deref(), out).map(|()| true),
        Command::Distance { x, y, file } => {
            let (x, y) = match (file, x, y) {
                (Some(path), _, _) => commands::load_point_lists(&path)?,
                (None, Some(x), Some(y)) => (
                    commands::parse_point_list(&x)?,
                    commands::parse_point_list(&y)?,
                ),
                _ => return Err(CliError::Usage("give two point lists or --file".into())),
            };
            let line = commands::distance(&x, &y)?;
            writeln!(out, "{line}").map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
            Ok(true)
        }
        Command::ExportObj { file, out: path } => {
            commands::export_obj(&file, path.as_deref(), out).map(|()| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
