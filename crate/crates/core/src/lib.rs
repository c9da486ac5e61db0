//! Solvers for information-leakage games.
//!
//! A system that processes a secret is modeled as a channel: a row-stochastic
//! matrix giving the probability of each observable output for each secret
//! input. A defender picks which system variant runs, an attacker picks a low
//! input, and the payoff of the resulting zero-sum game is the posterior
//! vulnerability of the secret. This crate provides:
//!
//! * exact rational arithmetic and an exact two-phase simplex ([`numerics`]),
//! * channels, priors, hypers and a channel-equivalence decision procedure
//!   ([`channel`]),
//! * the hidden and visible probabilistic choice operators with their
//!   algebraic laws ([`choice`]),
//! * Bayes and gain-function vulnerability ([`vulnerability`]),
//! * equilibrium solvers for the six game variants that cross
//!   {simultaneous, defender-first, attacker-first} with {visible, hidden}
//!   defender choice, plus the payoff-ordering verifier ([`games`]),
//! * built-in scenario generators: a two-program running example and a
//!   timing side channel in a bitwise password checker ([`scenarios`]),
//! * reproduction checks of the reference values bundled with the scenarios
//!   ([`casestudy`]).
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here can be used concurrently without locks.

pub mod casestudy;
pub mod channel;
pub mod choice;
pub mod games;
pub mod numerics;
pub mod scenarios;
pub mod vulnerability;

pub use channel::{Channel, ChannelError, Hyper, Label, Prior};
pub use choice::{ChannelFamily, ChoiceError, FamilyKind, Mix, WeightedMatrix};
pub use games::{
    GameError, GameId, GameOptions, GameSpec, HierarchyReport, Solution, Strategy,
};
pub use numerics::{rational_parse, LinearProgram, LpOutcome, NumericsError, Rational};
pub use vulnerability::{GainFunction, VulnerabilityError, VulnerabilityMeasure};
