//! Exact rational arithmetic and an exact linear-programming solver.
//!
//! This is the numeric substrate for the whole crate: channels, priors,
//! vulnerabilities and every game solver sit on top of [`Rational`] and
//! [`lp_solve`].

mod rational;
mod simplex;

pub use rational::{rat, rational_parse, Rational};
pub use simplex::{
    lp_solve, Constraint, LinearProgram, LpOutcome, Relation, Sense, VarBounds,
};

use thiserror::Error;

/// Errors from parsing rationals or from structurally invalid programs.
///
/// `MalformedProgram` is deliberately distinct from [`LpOutcome::Infeasible`]:
/// the former means the caller built a broken program, the latter is a valid
/// answer about a well-formed one.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("malformed rational literal: {0:?}")]
    MalformedRational(String),
    #[error("rational with zero denominator")]
    ZeroDenominator,
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
}
