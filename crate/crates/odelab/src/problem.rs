//! Problem descriptions and their execution.

use std::fmt;

use rota::borel::{borel_transform, verify_borel_solution};
use rota::continuum::{
    beta_sequence, gamma_sequence, lattice_solution, recurrence_residuals, taylor_coefficients,
    QuadraticClosedForm,
};
use rota::lattice::{all_zero, evolve, verify_solution, Residual, VectorField};
use rota::rational::{format_rational, parse_rational};
use rota::umbral::{lattice_to_hat, make_delta_operator, LatticeTrajectory};
use rota::Rational;
use serde::{Deserialize, Serialize};

use crate::format::{
    json_sequence, residual_strings, strings, to_json, Format, FormatError, Table,
};
use crate::parser::{parse_field, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Gamma,
    Beta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Evolve,
    Solve,
    Verify(LatticeTrajectory),
    Borel,
    Recurrence,
    Taylor,
    Sequence(SequenceKind),
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Evolve => "evolve",
            Mode::Solve => "solve",
            Mode::Verify(_) => "verify",
            Mode::Borel => "borel",
            Mode::Recurrence => "recurrence",
            Mode::Taylor => "taylor",
            Mode::Sequence(SequenceKind::Gamma) => "sequence gamma",
            Mode::Sequence(SequenceKind::Beta) => "sequence beta",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Mode::Evolve | Mode::Solve | Mode::Verify(_) | Mode::Borel => Format::Csv,
            Mode::Recurrence | Mode::Taylor | Mode::Sequence(_) => Format::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub field: VectorField,
    pub z0: Rational,
    pub n_max: usize,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutputOptions {
    /// `None` picks the mode's natural format.
    pub format: Option<Format>,
    /// Extra decimal column in CSV output.
    pub decimals: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    VerificationFailed = 1,
    Usage = 2,
}

/// Output of a run: the artifact text plus a one-line summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub exit: Exit,
    pub body: String,
    pub summary: String,
}

#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Input(String),
    Math(rota::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Input(e) => f.write_str(e),
            CliError::Math(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<rota::Error> for CliError {
    fn from(e: rota::Error) -> Self {
        CliError::Math(e)
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.0)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// Every error is a usage or input problem.
    pub fn exit(&self) -> Exit {
        Exit::Usage
    }
}

/// JSON problem file: `{"field": "z^2", "z0": "1/2", "n_max": 20, "mode": "solve"}`.
///
/// `mode = "sequence"` also reads `"sequence": "gamma" | "beta"`;
/// `mode = "verify"` reads the trajectory file named by `"input"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: String,
    #[serde(default = "zero_text")]
    pub z0: String,
    pub n_max: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

fn zero_text() -> String {
    "0".into()
}

pub fn parse_z0(text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Input(format!("invalid z0 `{text}`: {e}")))
}

impl ProblemFile {
    /// Resolves the file into a spec. `read` loads the verify input by path.
    pub fn into_spec(
        self,
        read: impl FnOnce(&str) -> std::io::Result<String>,
    ) -> Result<ProblemSpec, CliError> {
        let field = parse_field(&self.field)?;
        let z0 = parse_z0(&self.z0)?;
        let mode = match self.mode.as_str() {
            "evolve" => Mode::Evolve,
            "solve" => Mode::Solve,
            "borel" => Mode::Borel,
            "recurrence" => Mode::Recurrence,
            "taylor" => Mode::Taylor,
            "sequence" => Mode::Sequence(self.sequence.ok_or_else(|| {
                CliError::Input("mode `sequence` needs \"sequence\": \"gamma\" or \"beta\"".into())
            })?),
            "verify" => {
                let path = self.input.ok_or_else(|| {
                    CliError::Input("mode `verify` needs an \"input\" trajectory file".into())
                })?;
                Mode::Verify(crate::format::read_trajectory(&read(&path)?)?)
            }
            other => return Err(CliError::Input(format!("unknown mode `{other}`"))),
        };
        Ok(ProblemSpec {
            field,
            z0,
            n_max: self.n_max,
            mode,
        })
    }
}

#[derive(Serialize)]
struct SolutionReport<'a> {
    field: String,
    z0: String,
    n_max: usize,
    coefficients: Vec<String>,
    #[serde(rename = "trajectory")]
    values: Vec<String>,
    kind: &'a str,
    residuals: Vec<String>,
    all_zero: bool,
}

#[derive(Serialize)]
struct ResidualReport {
    field: String,
    residuals: Vec<String>,
    all_zero: bool,
}

#[derive(Serialize)]
struct RecurrenceReport {
    field: String,
    z0: String,
    hat: Vec<String>,
    residuals: Vec<String>,
    all_zero: bool,
}

#[derive(Serialize)]
struct StencilReport {
    lower: i64,
    upper: i64,
    order: u32,
    sigma: String,
    stencil: Vec<String>,
}

fn summarize(mode: &str, residuals: &[Residual]) -> (Exit, String) {
    let nonzero = residuals.iter().filter(|r| !r.is_zero()).count();
    if nonzero == 0 {
        (
            Exit::Success,
            format!("{mode}: {} residuals, all exactly zero", residuals.len()),
        )
    } else {
        let first = residuals
            .iter()
            .find(|r| !r.is_zero())
            .map_or(0, |r| r.index);
        (
            Exit::VerificationFailed,
            format!(
                "{mode}: {nonzero} of {} residuals nonzero (first at n = {first})",
                residuals.len()
            ),
        )
    }
}

fn sequence_output(values: &[Rational], format: Format, decimals: Option<usize>) -> String {
    match format {
        Format::Json => json_sequence(values),
        Format::Csv => Table::indexed("k", values.len())
            .rational_column("value", values, decimals)
            .render(),
    }
}

fn trajectory_with_residuals(
    spec: &ProblemSpec,
    coefficients: &[Rational],
    trajectory: &LatticeTrajectory,
    residuals: &[Residual],
    kind: &str,
    opts: &OutputOptions,
    format: Format,
) -> String {
    match format {
        Format::Json => to_json(&SolutionReport {
            field: spec.field.to_string(),
            z0: format_rational(&spec.z0),
            n_max: spec.n_max,
            coefficients: strings(coefficients),
            values: strings(&trajectory.values),
            kind,
            residuals: residual_strings(residuals),
            all_zero: all_zero(residuals),
        }),
        Format::Csv => Table::indexed("n", trajectory.len())
            .rational_column("value", &trajectory.values, opts.decimals)
            .column("residual", residual_strings(residuals))
            .render(),
    }
}

/// Executes a problem. Verification failures are reported through
/// [`Report::exit`], not as errors.
pub fn run(spec: &ProblemSpec, opts: &OutputOptions) -> Result<Report, CliError> {
    let format = opts.format.unwrap_or_else(|| spec.mode.default_format());
    let n = spec.n_max;
    match &spec.mode {
        Mode::Evolve => {
            let z = evolve(&spec.field, &spec.z0, n);
            let body = match format {
                Format::Json => json_sequence(&z.values),
                Format::Csv => Table::indexed("n", z.len())
                    .rational_column("value", &z.values, opts.decimals)
                    .render(),
            };
            Ok(Report {
                exit: Exit::Success,
                body,
                summary: format!("evolve: {} lattice points", z.len()),
            })
        }
        Mode::Solve => {
            let b = taylor_coefficients(&spec.field, &spec.z0, n);
            let z = lattice_solution(&b, n)?;
            let residuals = verify_solution(&spec.field, &z);
            let (exit, summary) = summarize("solve", &residuals);
            let body =
                trajectory_with_residuals(spec, &b.coeffs, &z, &residuals, "plain", opts, format);
            Ok(Report {
                exit,
                body,
                summary,
            })
        }
        Mode::Borel => {
            let b = taylor_coefficients(&spec.field, &spec.z0, n);
            let w = borel_transform(&b, n)?;
            let residuals = verify_borel_solution(&spec.field, &w)?;
            let (exit, summary) = summarize("borel", &residuals);
            let body =
                trajectory_with_residuals(spec, &b.coeffs, &w, &residuals, "borel", opts, format);
            Ok(Report {
                exit,
                body,
                summary,
            })
        }
        Mode::Verify(z) => {
            let residuals = verify_solution(&spec.field, z);
            let (exit, summary) = summarize("verify", &residuals);
            let body = match format {
                Format::Json => to_json(&ResidualReport {
                    field: spec.field.to_string(),
                    residuals: residual_strings(&residuals),
                    all_zero: all_zero(&residuals),
                }),
                Format::Csv => Table::indexed("n", residuals.len())
                    .column("residual", residual_strings(&residuals))
                    .render(),
            };
            Ok(Report {
                exit,
                body,
                summary,
            })
        }
        Mode::Recurrence => {
            // lattice solution pulled back through the inverse transform
            let b = taylor_coefficients(&spec.field, &spec.z0, n);
            let z = lattice_solution(&b, n)?;
            let hat = lattice_to_hat(&z);
            let residuals = recurrence_residuals(&spec.field, &hat);
            let (exit, summary) = summarize("recurrence", &residuals);
            let body = match format {
                Format::Json => to_json(&RecurrenceReport {
                    field: spec.field.to_string(),
                    z0: format_rational(&spec.z0),
                    hat: strings(hat.coeffs()),
                    residuals: residual_strings(&residuals),
                    all_zero: all_zero(&residuals),
                }),
                Format::Csv => Table::indexed("l", hat.coeffs().len())
                    .rational_column("hat", hat.coeffs(), opts.decimals)
                    .column("residual", residual_strings(&residuals))
                    .render(),
            };
            Ok(Report {
                exit,
                body,
                summary,
            })
        }
        Mode::Taylor => {
            let b = taylor_coefficients(&spec.field, &spec.z0, n);
            Ok(Report {
                exit: Exit::Success,
                body: sequence_output(&b.coeffs, format, opts.decimals),
                summary: format!("taylor: {} coefficients", b.len()),
            })
        }
        Mode::Sequence(kind) => {
            let seq = match kind {
                SequenceKind::Gamma => gamma_sequence(n),
                SequenceKind::Beta => {
                    if spec.field.degree() > 2 {
                        return Err(rota::Error::UnsupportedDegree {
                            degree: spec.field.degree(),
                            max: 2,
                        }
                        .into());
                    }
                    let qcf = QuadraticClosedForm::new(
                        spec.field.coeff(0),
                        spec.field.coeff(1),
                        spec.field.coeff(2),
                        spec.z0.clone(),
                    )?;
                    beta_sequence(&qcf, n)
                }
            };
            Ok(Report {
                exit: Exit::Success,
                body: sequence_output(&seq.coeffs, format, opts.decimals),
                summary: format!("sequence {}: {} terms", seq.label, seq.len()),
            })
        }
    }
}

/// Prints the stencil of the order-`upper - lower` delta operator.
pub fn run_stencil(
    lower: i64,
    upper: i64,
    sigma: &Rational,
    opts: &OutputOptions,
) -> Result<Report, CliError> {
    let op = make_delta_operator(lower, upper, sigma.clone())?;
    let body = match opts.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&StencilReport {
            lower,
            upper,
            order: op.order(),
            sigma: format_rational(sigma),
            stencil: strings(op.stencil()),
        }),
        Format::Csv => {
            let mut table = Table::indexed("i", op.stencil().len())
                .column("k", (lower..=upper).map(|k| k.to_string()));
            table = table.rational_column("alpha", op.stencil(), opts.decimals);
            table.render()
        }
    };
    Ok(Report {
        exit: Exit::Success,
        body,
        summary: format!("stencil: order {} on [{lower}, {upper}]", op.order()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(field: &str, z0: &str, n_max: usize, mode: Mode) -> ProblemSpec {
        ProblemSpec {
            field: parse_field(field).unwrap(),
            z0: parse_z0(z0).unwrap(),
            n_max,
            mode,
        }
    }

    #[test]
    fn evolve_csv() {
        let r = run(
            &spec("z^2", "1", 2, Mode::Evolve),
            &OutputOptions::default(),
        )
        .unwrap();
        assert_eq!(r.body, "n,value\n0,1\n1,2\n2,5\n");
        assert_eq!(r.exit, Exit::Success);
    }

    #[test]
    fn verify_flags_bad_trajectories() {
        let bad = LatticeTrajectory::new(vec![rota::rational::int(1), rota::rational::int(3)]);
        let r = run(
            &spec("z^2", "0", 0, Mode::Verify(bad)),
            &OutputOptions::default(),
        )
        .unwrap();
        assert_eq!(r.exit, Exit::VerificationFailed);
        assert_eq!(r.body, "n,residual\n0,1\n");
    }

    #[test]
    fn beta_needs_quadratic() {
        let opts = OutputOptions::default();
        assert!(run(
            &spec("z^3", "1", 3, Mode::Sequence(SequenceKind::Beta)),
            &opts
        )
        .is_err());
        assert!(run(
            &spec("z + 1", "1", 3, Mode::Sequence(SequenceKind::Beta)),
            &opts
        )
        .is_err());
        let tan = run(
            &spec("z^2 + 1", "0", 5, Mode::Sequence(SequenceKind::Beta)),
            &opts,
        )
        .unwrap();
        assert_eq!(tan.body, "[\"0\",\"1\",\"0\",\"1/3\",\"0\",\"2/15\"]\n");
    }

    #[test]
    fn borel_rejects_cubic() {
        let err = run(&spec("z^3", "1", 3, Mode::Borel), &OutputOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            CliError::Math(rota::Error::UnsupportedDegree { .. })
        ));
    }

    #[test]
    fn problem_file_modes() {
        let file: ProblemFile =
            serde_json::from_str(r#"{"field": "z^2", "z0": "1/2", "n_max": 4, "mode": "solve"}"#)
                .unwrap();
        let s = file.into_spec(|_| unreachable!()).unwrap();
        assert_eq!(s.mode, Mode::Solve);

        let file: ProblemFile = serde_json::from_str(
            r#"{"field": "z^2", "n_max": 4, "mode": "sequence", "sequence": "gamma"}"#,
        )
        .unwrap();
        assert_eq!(
            file.into_spec(|_| unreachable!()).unwrap().mode,
            Mode::Sequence(SequenceKind::Gamma)
        );

        let file: ProblemFile = serde_json::from_str(
            r#"{"field": "z^2", "n_max": 1, "mode": "verify", "input": "t.json"}"#,
        )
        .unwrap();
        let s = file.into_spec(|path| {
            assert_eq!(path, "t.json");
            Ok("[\"1\", \"2\"]".into())
        });
        assert_eq!(s.unwrap().mode.name(), "verify");

        for bad in [
            r#"{"field": "z^2", "n_max": 1, "mode": "fly"}"#,
            r#"{"field": "z^2", "n_max": 1, "mode": "sequence"}"#,
            r#"{"field": "z^2", "n_max": 1, "mode": "verify"}"#,
            r#"{"field": "z^", "n_max": 1, "mode": "solve"}"#,
            r#"{"field": "z", "z0": "1/0", "n_max": 1, "mode": "solve"}"#,
        ] {
            let file: ProblemFile = serde_json::from_str(bad).unwrap();
            assert!(file.into_spec(|_| Ok(String::new())).is_err(), "{bad}");
        }
        assert!(serde_json::from_str::<ProblemFile>(
            r#"{"field": "z", "n_max": 1, "mode": "solve", "x": 1}"#
        )
        .is_err());
    }
}
