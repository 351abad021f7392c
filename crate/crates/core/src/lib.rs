//! Verification and extremal search for the sharp fifth-coefficient bound
//! `|a5| <= 1 + λ + λ² + λ³ + λ⁴` on the subclass of `U(λ)` defined by
//! `f(z)/z ≺ 1/((1+z)(1+λz))`.
//!
//! The crate is organised bottom-up:
//!
//! * [`schwarz`]: Schwarz-function coefficient tuples and the Schur chart of
//!   their coefficient body (admissibility test, sampling).
//! * [`coeffs`]: the geometric weights `q_n(λ)`, the map from Schwarz
//!   coefficients to `a2..a5`, Carathéodory coefficients `p1..p4`.
//! * [`proofchain`]: the Leverenz quadratic form, the witness vector, the
//!   quantities `L` and `R` and the chain of upper bounds.
//! * [`inequalities`]: the quadratic `F(λ, t)`, its vertex, the root `λ0`
//!   and the Prokhorov–Szynal coefficient lemma.
//! * [`search`]: multi-start Nelder–Mead maximization over the Schur chart.
//! * [`cli`]: command-line runner with JSON/CSV output.

pub mod cli;
pub mod coeffs;
pub mod error;
pub mod inequalities;
pub mod proofchain;
pub mod schwarz;
pub mod search;
mod series;
pub mod tolerance;

pub use error::{Error, Result};
pub use num_complex::Complex64;
