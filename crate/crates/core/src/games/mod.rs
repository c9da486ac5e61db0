//! Payoff construction and equilibrium solvers for the six leakage games.
//!
//! A [`GameSpec`] assigns a channel to every pair of defender and attacker
//! actions; the payoff of a pure profile is the posterior vulnerability of
//! its channel, which the attacker maximizes and the defender minimizes.
//! The six variants cross the order of play (simultaneous, defender-first,
//! attacker-first) with the visibility of the defender's choice:
//!
//! | game | order           | defender choice |
//! |------|-----------------|-----------------|
//! | I    | simultaneous    | visible         |
//! | II   | defender first  | visible         |
//! | III  | attacker first  | visible         |
//! | IV   | simultaneous    | hidden          |
//! | V    | defender first  | hidden          |
//! | VI   | attacker first  | hidden          |
//!
//! Visible-choice games reduce to ordinary matrix games on the payoff table.
//! Hidden choice makes the payoff convex (not linear) in the defender's mix,
//! so games IV-VI need the epigraph formulation of [`hidden`], and game V
//! collapses to game IV because an attacker who cannot see the committed
//! action is in exactly the simultaneous position.

mod hidden;
mod hierarchy;
mod matrix;

pub use hidden::{solve_game_iv, solve_game_v, solve_game_vi};
pub use hierarchy::{verify_hierarchy, HierarchyCheck, HierarchyReport};
pub use matrix::{solve_matrix_game, MatrixGameSolution};

use std::fmt;

use thiserror::Error;

use crate::channel::{Channel, ChannelError, Prior};
use crate::choice::{ChoiceError, Mix};
use crate::numerics::{NumericsError, Rational};
use crate::vulnerability::{posterior_vulnerability, VulnerabilityError, VulnerabilityMeasure};

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),
    #[error(
        "guess-function enumeration needs {required} strategies, over the budget of {budget}"
    )]
    EnumerationBudget { required: u128, budget: u128 },
    #[error("payoff ordering violated: {0}")]
    HierarchyViolation(String),
    #[error("solver invariant broken: {0}")]
    Internal(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
    #[error(transparent)]
    Vulnerability(#[from] VulnerabilityError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Which of the six variants a [`Solution`] answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameId {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl GameId {
    pub const ALL: [GameId; 6] = [
        GameId::I,
        GameId::II,
        GameId::III,
        GameId::IV,
        GameId::V,
        GameId::VI,
    ];

    pub fn parse(s: &str) -> Option<GameId> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Some(GameId::I),
            "II" | "2" => Some(GameId::II),
            "III" | "3" => Some(GameId::III),
            "IV" | "4" => Some(GameId::IV),
            "V" | "5" => Some(GameId::V),
            "VI" | "6" => Some(GameId::VI),
            _ => None,
        }
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GameId::I => "I",
            GameId::II => "II",
            GameId::III => "III",
            GameId::IV => "IV",
            GameId::V => "V",
            GameId::VI => "VI",
        };
        write!(f, "{s}")
    }
}

/// Tunables shared by the solvers.
#[derive(Clone, Debug)]
pub struct GameOptions {
    /// Cap on `|W|^|Y|`, the number of guess functions enumerated for the
    /// extended game of the hidden-choice solvers.
    pub guess_enumeration_budget: u128,
}

impl Default for GameOptions {
    fn default() -> Self {
        GameOptions {
            guess_enumeration_budget: 65_536,
        }
    }
}

/// A leakage game: defender and attacker action sets, one channel per action
/// pair (all of one type), a prior on secrets, and the vulnerability measure
/// the payoff is computed in.
#[derive(Clone, Debug)]
pub struct GameSpec {
    defender_actions: Vec<String>,
    attacker_actions: Vec<String>,
    channels: Vec<Vec<Channel>>,
    prior: Prior,
    measure: VulnerabilityMeasure,
}

impl GameSpec {
    pub fn new(
        defender_actions: Vec<String>,
        attacker_actions: Vec<String>,
        channels: Vec<Vec<Channel>>,
        prior: Prior,
        measure: VulnerabilityMeasure,
    ) -> Result<Self, GameError> {
        if defender_actions.is_empty() || attacker_actions.is_empty() {
            return Err(GameError::InvalidSpec("empty action set".into()));
        }
        if channels.len() != defender_actions.len()
            || channels.iter().any(|r| r.len() != attacker_actions.len())
        {
            return Err(GameError::InvalidSpec(
                "channel map does not cover defender x attacker actions".into(),
            ));
        }
        let reference = &channels[0][0];
        for row in &channels {
            for c in row {
                if !c.same_type_as(reference) {
                    return Err(GameError::InvalidSpec(
                        "all channels must share the same input and output spaces".into(),
                    ));
                }
            }
        }
        if prior.labels() != reference.inputs() {
            return Err(GameError::InvalidSpec(
                "prior labels do not match channel inputs".into(),
            ));
        }
        measure
            .check_secrets(prior.labels())
            .map_err(GameError::from)?;
        Ok(GameSpec {
            defender_actions,
            attacker_actions,
            channels,
            prior,
            measure,
        })
    }

    pub fn defender_actions(&self) -> &[String] {
        &self.defender_actions
    }

    pub fn attacker_actions(&self) -> &[String] {
        &self.attacker_actions
    }

    pub fn channel(&self, d: usize, a: usize) -> &Channel {
        &self.channels[d][a]
    }

    pub fn channels(&self) -> &[Vec<Channel>] {
        &self.channels
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn measure(&self) -> &VulnerabilityMeasure {
        &self.measure
    }

    pub fn secrets(&self) -> &[String] {
        self.channels[0][0].inputs()
    }

    pub fn outputs(&self) -> &[crate::channel::Label] {
        self.channels[0][0].outputs()
    }

    /// Looks up a channel by its action labels.
    pub fn channel_by_labels(&self, d: &str, a: &str) -> Option<&Channel> {
        let di = self.defender_actions.iter().position(|x| x == d)?;
        let ai = self.attacker_actions.iter().position(|x| x == a)?;
        Some(&self.channels[di][ai])
    }
}

/// A strategy for either player. Function-valued strategies are the
/// deterministic follower strategies of the sequential games: the theorems
/// for games II, III and VI guarantee optimal followers need no mixing, so
/// mixtures over functions are never materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    PureDefender(usize),
    PureAttacker(usize),
    MixedDefender(Mix),
    MixedAttacker(Mix),
    /// Best response per defender action: `d -> a`.
    AttackerFunction(Vec<usize>),
    /// Best response per attacker action: `a -> d`.
    DefenderFunction(Vec<usize>),
}

/// Per-branch certificate of the attacker-first hidden game: committing to
/// `action` lets the defender push the vulnerability down to exactly `value`
/// with the mix `defender`.
#[derive(Clone, Debug)]
pub struct HiddenBranch {
    pub action: usize,
    pub value: Rational,
    pub defender: Mix,
}

/// One pure strategy of the extended game with positive equilibrium weight:
/// the attacker plays `action` and guesses `guess_function[y]` (a guess
/// index) after observing output `y`.
#[derive(Clone, Debug)]
pub struct ExtendedStrategyWeight {
    pub action: usize,
    pub guess_function: Vec<usize>,
    pub weight: Rational,
}

/// Solver-specific evidence that the reported value is right.
#[derive(Clone, Debug)]
pub enum Certificates {
    /// Game I: optimal values of the primal (defender) and dual (attacker)
    /// LPs; exact LP duality makes them equal.
    MatrixGame {
        defender_lp_value: Rational,
        attacker_lp_value: Rational,
    },
    /// Games II and III: the follower-optimized value of every leader action.
    SequentialVisible { leader_values: Vec<Rational> },
    /// Games IV and V: the defender-side epigraph optimum, the independently
    /// solved extended-game value (equal by construction), the response value
    /// per attacker action under the returned defender mix, and the support
    /// of the extended attacker equilibrium.
    HiddenSimultaneous {
        epigraph_value: Rational,
        extended_value: Rational,
        response_values: Vec<Rational>,
        extended_support: Vec<ExtendedStrategyWeight>,
    },
    /// Game VI: the defender's best reachable value for every attacker
    /// commitment.
    HiddenAttackerFirst { branches: Vec<HiddenBranch> },
}

/// A solved game: its value, the equilibrium strategies, and certificates.
#[derive(Clone, Debug)]
pub struct Solution {
    pub game: GameId,
    pub value: Rational,
    pub defender: Strategy,
    pub attacker: Strategy,
    pub certificates: Certificates,
}

/// The payoff table: entry `(d, a)` is the posterior vulnerability of the
/// channel assigned to that profile.
pub fn payoff_matrix(spec: &GameSpec) -> Result<Vec<Vec<Rational>>, GameError> {
    spec.channels
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    posterior_vulnerability(&spec.measure, &spec.prior, c).map_err(GameError::from)
                })
                .collect()
        })
        .collect()
}

/// Closed-form mixed equilibrium of a 2x2 zero-sum game:
/// `delta*(d0) = (u11-u10)/(u00-u01-u10+u11)` and
/// `alpha*(a0) = (u11-u01)/(u00-u01-u10+u11)`.
/// Absent when the denominator vanishes or either value leaves `[0,1]`.
pub fn closed_form_2x2(payoffs: &[Vec<Rational>]) -> Option<(Rational, Rational)> {
    if payoffs.len() != 2 || payoffs.iter().any(|r| r.len() != 2) {
        return None;
    }
    let (u00, u01) = (&payoffs[0][0], &payoffs[0][1]);
    let (u10, u11) = (&payoffs[1][0], &payoffs[1][1]);
    let den = &(u00 - u01) - &(u10 - u11);
    if den.is_zero() {
        return None;
    }
    let delta0 = &(u11 - u10) / &den;
    let alpha0 = &(u11 - u01) / &den;
    if delta0.is_probability() && alpha0.is_probability() {
        Some((delta0, alpha0))
    } else {
        None
    }
}

/// Game I, simultaneous play with visible choice: the expected payoff is
/// bilinear in the two mixes, so the equilibrium is the minimax solution of
/// the payoff matrix, solved by a primal/dual LP pair.
pub fn solve_game_i(spec: &GameSpec) -> Result<Solution, GameError> {
    let payoffs = payoff_matrix(spec)?;
    let sol = solve_matrix_game(&payoffs)?;
    Ok(Solution {
        game: GameId::I,
        value: sol.value.clone(),
        defender: Strategy::MixedDefender(Mix::new(sol.defender.clone())?),
        attacker: Strategy::MixedAttacker(Mix::new(sol.attacker.clone())?),
        certificates: Certificates::MatrixGame {
            defender_lp_value: sol.defender_lp_value,
            attacker_lp_value: sol.attacker_lp_value,
        },
    })
}

pub(crate) fn argmax(values: impl Iterator<Item = Rational>) -> Option<(usize, Rational)> {
    let mut best: Option<(usize, Rational)> = None;
    for (i, v) in values.enumerate() {
        match &best {
            Some((_, b)) if &v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

pub(crate) fn argmin(values: impl Iterator<Item = Rational>) -> Option<(usize, Rational)> {
    argmax(values.map(|v| -v)).map(|(i, v)| (i, -v))
}

/// Game II, defender commits first, choice visible: deterministic optimal
/// strategies exist, so the defender minimizes the best-response row value
/// and the attacker is the exact best-response function. Ties resolve to the
/// lowest defender index, then the lowest attacker index.
pub fn solve_game_ii(spec: &GameSpec) -> Result<Solution, GameError> {
    let payoffs = payoff_matrix(spec)?;
    let best_response: Vec<(usize, Rational)> = payoffs
        .iter()
        .map(|row| argmax(row.iter().cloned()).expect("nonempty row"))
        .collect();
    let (d_star, value) =
        argmin(best_response.iter().map(|(_, v)| v.clone())).expect("nonempty action set");
    Ok(Solution {
        game: GameId::II,
        value,
        defender: Strategy::PureDefender(d_star),
        attacker: Strategy::AttackerFunction(best_response.iter().map(|(a, _)| *a).collect()),
        certificates: Certificates::SequentialVisible {
            leader_values: best_response.into_iter().map(|(_, v)| v).collect(),
        },
    })
}

/// Game III, attacker commits first, choice visible: the mirror image of
/// game II with the roles inverted.
pub fn solve_game_iii(spec: &GameSpec) -> Result<Solution, GameError> {
    let payoffs = payoff_matrix(spec)?;
    let num_a = spec.attacker_actions.len();
    let best_response: Vec<(usize, Rational)> = (0..num_a)
        .map(|a| {
            argmin(payoffs.iter().map(|row| row[a].clone())).expect("nonempty column")
        })
        .collect();
    let (a_star, value) =
        argmax(best_response.iter().map(|(_, v)| v.clone())).expect("nonempty action set");
    Ok(Solution {
        game: GameId::III,
        value,
        defender: Strategy::DefenderFunction(best_response.iter().map(|(d, _)| *d).collect()),
        attacker: Strategy::PureAttacker(a_star),
        certificates: Certificates::SequentialVisible {
            leader_values: best_response.into_iter().map(|(_, v)| v).collect(),
        },
    })
}
