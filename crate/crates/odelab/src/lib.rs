//! Library side of the `odelab` command: a text parser for vector fields,
//! problem descriptions, and the CSV/JSON encoders used by every subcommand.
//!
//! ```
//! use odelab::problem::{run, Mode, OutputOptions, ProblemSpec};
//! use odelab::parser::parse_field;
//!
//! let spec = ProblemSpec {
//!     field: parse_field("z^2").unwrap(),
//!     z0: rota::rational::int(1),
//!     n_max: 2,
//!     mode: Mode::Evolve,
//! };
//! let report = run(&spec, &OutputOptions::default()).unwrap();
//! assert_eq!(report.body, "n,value\n0,1\n1,2\n2,5\n");
//! ```

pub mod format;
pub mod parser;
pub mod problem;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
