use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use qnull::spaces::SpaceTag;
use qnull_cli::commands::{self, LoopSource};
use qnull_cli::{CliError, Outcome};

#[derive(Parser)]
#[command(
    name = "qnull",
    version,
    about = "Quantum nullhomotopy certificates: construct, verify, push forward, and the S¹ winding obstruction",
    after_help = "EXIT CODES:\n  0  success / ACCEPT\n  1  REJECT\n  2  input error or refusal\n\n\
                  ENVIRONMENT:\n  QNULL_DEFAULT_TOL  default verification tolerance (1e-9)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructSpace {
    Rp2,
    Wedge,
}

#[derive(Subcommand)]
enum Command {
    /// Winding number of det(s·I_n) around the circle, with a CSV phase trace
    Obstruct {
        /// Matrix size, 1 to 8
        #[arg(long)]
        n: usize,
        /// Number of samples of the circle
        #[arg(long)]
        samples: usize,
        /// Where to write the phase trace
        #[arg(long, default_value = "det_phase.csv")]
        csv: PathBuf,
    },
    /// Build a certificate for a loop in ℝP² or a commutator loop in S¹∨S¹
    #[command(group(ArgGroup::new("input").args(["loop_file", "generator", "a_turns"])))]
    Construct {
        #[arg(long, value_enum)]
        space: ConstructSpace,
        /// JSON array of points (ℝP²: [re α, im α, t])
        #[arg(long = "loop", value_name = "FILE")]
        loop_file: Option<PathBuf>,
        /// The generator loop (ℝP²) or [a,b] (wedge)
        #[arg(long)]
        generator: bool,
        /// Traversals of the ℝP² generator
        #[arg(long, default_value_t = 1)]
        times: u32,
        /// Samples of the ℝP² generator
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Turns of the a-circle in [a^k, b^m]
        #[arg(long, allow_hyphen_values = true, requires = "b_turns")]
        a_turns: Option<i64>,
        /// Turns of the b-circle in [a^k, b^m]
        #[arg(long, allow_hyphen_values = true, requires = "a_turns")]
        b_turns: Option<i64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a certificate file; exit 0 on ACCEPT, 1 on REJECT
    Verify {
        #[arg(long)]
        cert: PathBuf,
        /// Boundary and basepoint tolerance (default: QNULL_DEFAULT_TOL or 1e-9)
        #[arg(long)]
        tol: Option<f64>,
        /// Machine-readable report (default: <cert>.report.json)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Push a wedge certificate forward along a collapse onto one circle
    Pushforward {
        #[arg(long)]
        cert: PathBuf,
        /// collapseA or collapseB
        #[arg(long)]
        map: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Obstruct { n, samples, csv } => commands::obstruct(n, samples, &csv),
        Command::Construct {
            space,
            loop_file,
            generator,
            times,
            samples,
            a_turns,
            b_turns,
            out,
        } => {
            let (space, source) = match space {
                ConstructSpace::Rp2 => {
                    let source = match (loop_file, generator) {
                        (Some(path), _) => LoopSource::File(path),
                        (None, true) => LoopSource::Rp2Generator { times, samples },
                        (None, false) => {
                            return Err(CliError::Usage("rp2 needs --loop <file> or --generator".into()))
                        }
                    };
                    (SpaceTag::Rp2, source)
                }
                ConstructSpace::Wedge => {
                    let source = match (loop_file, a_turns, b_turns) {
                        (Some(path), _, _) => LoopSource::File(path),
                        (None, Some(a_turns), Some(b_turns)) => LoopSource::Commutator { a_turns, b_turns },
                        _ if generator => LoopSource::Commutator { a_turns: 1, b_turns: 1 },
                        _ => {
                            return Err(CliError::Usage(
                                "wedge needs --a-turns k --b-turns m or --generator".into(),
                            ))
                        }
                    };
                    (SpaceTag::Wedge, source)
                }
            };
            commands::construct(space, source, &out)
        }
        Command::Verify { cert, tol, report } => {
            commands::verify_file(&cert, tol, report.as_deref()).map(|(outcome, _)| outcome)
        }
        Command::Pushforward { cert, map, out } => commands::pushforward(&cert, &map, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
