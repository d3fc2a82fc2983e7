//! Numerical solution of linear Fredholm integral equations of the second kind,
//!
//! ```text
//! a(x) φ(x) + λ ∫_a^b k(t, x) φ(t) dt = f(x),   a ≤ x ≤ b,
//! ```
//!
//! by the Galerkin method with Bernstein polynomial trial functions.
//!
//! Two solution paths are provided:
//!
//! - [`galerkin`]: floating point assembly by Gauss–Legendre [`quadrature`]
//!   and an LU solve from [`linalg`]. Works for any kernel the [`expr`]
//!   language can express.
//! - [`exact`]: arbitrary-precision rational assembly and elimination for
//!   problems whose data are polynomials with rational coefficients. Returns
//!   the trial coefficients as exact fractions.
//!
//! [`galerkin::solve`] picks the exact path automatically when the problem
//! allows it. The [`cli`] module wires everything into the `fredholm`
//! command-line tool.

pub mod basis;
pub mod cli;
pub mod exact;
pub mod expr;
pub mod galerkin;
pub mod linalg;
pub mod quadrature;

pub use basis::BasisSpec;
pub use exact::{BivarPoly, ExactProblem, Rational};
pub use expr::Expr;
pub use galerkin::{FredholmProblem, GalerkinSystem, Solution, SolveMode};
