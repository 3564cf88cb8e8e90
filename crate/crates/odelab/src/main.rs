use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use odelab::format::{read_trajectory, Format};
use odelab::parser::parse_field;
use odelab::problem::{
    parse_z0, run, run_stencil, CliError, Exit, Mode, OutputOptions, ProblemFile, ProblemSpec,
    SequenceKind,
};

#[derive(Args)]
struct Output {
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Add a rounded decimal column to CSV output.
    #[arg(long, global = true)]
    decimals: Option<usize>,
}

#[derive(Args)]
struct Problem {
    /// Polynomial right-hand side, e.g. "1/2*z^2 - 3*z + 1".
    #[arg(long, allow_hyphen_values = true)]
    field: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    z0: String,
    /// Last lattice index (or coefficient index).
    #[arg(long = "n")]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the lattice map from z0.
    Evolve(Problem),
    /// Transport the Taylor coefficients and check the residuals.
    Solve(Problem),
    /// Check a trajectory file against the lattice map.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        /// JSON array or `n,value` CSV.
        #[arg(long)]
        input: PathBuf,
    },
    /// Borel-regularized trajectory and its residuals (degree at most 2).
    Borel(Problem),
    /// Hat-space coefficients of the lattice solution.
    Recurrence(Problem),
    /// Taylor coefficients of the continuum solution.
    Taylor(Problem),
    /// Closed-form coefficient sequences.
    Sequence {
        #[command(subcommand)]
        which: SequenceCommand,
    },
    /// Stencil of the delta operator on [lower, upper].
    Stencil {
        #[arg(long, allow_hyphen_values = true)]
        lower: i64,
        #[arg(long, allow_hyphen_values = true)]
        upper: i64,
        #[arg(long, default_value = "1")]
        sigma: String,
    },
    /// Run a JSON problem file.
    Run { file: PathBuf },
}

#[derive(Subcommand)]
enum SequenceCommand {
    Gamma {
        #[arg(long = "n")]
        n: usize,
    },
    Beta(Problem),
}

#[derive(Parser)]
#[command(
    name = "odelab",
    version,
    about = "Exact lattice maps for polynomial ODEs"
)]
struct Top {
    #[command(flatten)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

fn problem(p: Problem, mode: Mode) -> Result<ProblemSpec, CliError> {
    Ok(ProblemSpec {
        field: parse_field(&p.field)?,
        z0: parse_z0(&p.z0)?,
        n_max: p.n,
        mode,
    })
}

fn execute(top: Top) -> Result<Exit, CliError> {
    let opts = OutputOptions {
        format: top.output.format,
        decimals: top.output.decimals,
    };
    let report = match top.command {
        Command::Stencil {
            lower,
            upper,
            sigma,
        } => {
            let sigma = parse_z0(&sigma)
                .map_err(|_| CliError::Input(format!("invalid sigma `{sigma}`")))?;
            run_stencil(lower, upper, &sigma, &opts)?
        }
        command => {
            let spec = match command {
                Command::Evolve(p) => problem(p, Mode::Evolve)?,
                Command::Solve(p) => problem(p, Mode::Solve)?,
                Command::Borel(p) => problem(p, Mode::Borel)?,
                Command::Recurrence(p) => problem(p, Mode::Recurrence)?,
                Command::Taylor(p) => problem(p, Mode::Taylor)?,
                Command::Sequence {
                    which: SequenceCommand::Beta(p),
                } => problem(p, Mode::Sequence(SequenceKind::Beta))?,
                Command::Sequence {
                    which: SequenceCommand::Gamma { n },
                } => ProblemSpec {
                    field: rota::lattice::VectorField::new(vec![]),
                    z0: rota::rational::int(0),
                    n_max: n,
                    mode: Mode::Sequence(SequenceKind::Gamma),
                },
                Command::Verify { field, input } => {
                    let z = read_trajectory(&std::fs::read_to_string(input)?)?;
                    let n_max = z.len().saturating_sub(1);
                    let z0 = z
                        .values
                        .first()
                        .cloned()
                        .unwrap_or_else(|| rota::rational::int(0));
                    ProblemSpec {
                        field: parse_field(&field)?,
                        z0,
                        n_max,
                        mode: Mode::Verify(z),
                    }
                }
                Command::Run { file } => {
                    let text = std::fs::read_to_string(&file)?;
                    let parsed: ProblemFile = serde_json::from_str(&text)
                        .map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
                    let base = file.parent().map(PathBuf::from).unwrap_or_default();
                    parsed.into_spec(|p| std::fs::read_to_string(base.join(p)))?
                }
                Command::Stencil { .. } => unreachable!(),
            };
            run(&spec, &opts)?
        }
    };
    match &top.output.out {
        Some(path) => std::fs::write(path, &report.body)?,
        None => print!("{}", report.body),
    }
    eprintln!("{}", report.summary);
    Ok(report.exit)
}

fn main() -> ExitCode {
    let top = match Top::try_parse() {
        Ok(top) => top,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(top) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("odelab: {e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}
