//! Exact umbral calculus on the integer lattice.
//!
//! `rota` turns a polynomial vector field `dz/dt = a_N z^N + ... + a_0` into
//! a nonlocal difference equation on `n = 0, 1, 2, ...` whose solutions are
//! the continuum Taylor series re-expanded in lower factorials. Everything
//! algebraic is done over exact rationals, so claims such as "this series
//! solves the map" are checked with residuals that are literally zero.
//!
//! * [`umbral`]: delta operators, basic polynomials, the star product and the
//!   lattice/hat-space transforms.
//! * [`lattice`]: vector fields, the lattice map, its kernels and
//!   verification.
//! * [`continuum`]: Taylor coefficients, transported solutions, closed forms
//!   and number sequences.
//! * [`borel`]: finite Borel-type regularization of quadratic maps.
//!
//! ```
//! use rota::continuum::{lattice_solution, taylor_coefficients};
//! use rota::lattice::{all_zero, verify_solution, VectorField};
//! use rota::rational::rat;
//!
//! let field = VectorField::new(vec![rat(1, 2), rat(-1, 1), rat(2, 3)]);
//! let b = taylor_coefficients(&field, &rat(1, 4), 12);
//! let z = lattice_solution(&b, 12).unwrap();
//! assert!(all_zero(&verify_solution(&field, &z)));
//! ```

pub mod borel;
pub mod continuum;
pub mod error;
pub mod lattice;
pub mod rational;
pub mod umbral;

pub use error::{Error, Result};
pub use rational::Rational;

// The guide's code listings run as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/hat-space.md")]
    mod hat_space {}
    #[doc = include_str!("../../../book/src/lattice-maps.md")]
    mod lattice_maps {}
    #[doc = include_str!("../../../book/src/continuum.md")]
    mod continuum {}
    #[doc = include_str!("../../../book/src/borel.md")]
    mod borel {}
    #[doc = include_str!("../../../book/src/stencils.md")]
    mod stencils {}
}
