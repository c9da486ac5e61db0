//! Prior and posterior vulnerability.
//!
//! Vulnerability measures the attacker's expected success. Bayes
//! vulnerability is the probability of guessing the secret in one try; the
//! gain-function form generalizes it to an arbitrary finite gain matrix over
//! guesses and secrets. Posterior vulnerability averages the prior form over
//! the posteriors induced by a channel, and is the payoff of every game in
//! [`crate::games`].

use thiserror::Error;

use crate::channel::{push_prior, Channel, ChannelError, Prior};
use crate::numerics::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VulnerabilityError {
    #[error("gain function is not rectangular")]
    NotRectangular,
    #[error("gain function has no guesses")]
    Empty,
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// A finite gain matrix: `gains[w][x]` is the attacker's gain for guessing
/// `w` when the secret is `x`. Entries may be any rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GainFunction {
    guesses: Vec<String>,
    secrets: Vec<String>,
    gains: Vec<Vec<Rational>>,
}

impl GainFunction {
    pub fn new(
        guesses: Vec<String>,
        secrets: Vec<String>,
        gains: Vec<Vec<Rational>>,
    ) -> Result<Self, VulnerabilityError> {
        if guesses.is_empty() || secrets.is_empty() {
            return Err(VulnerabilityError::Empty);
        }
        if gains.len() != guesses.len() || gains.iter().any(|r| r.len() != secrets.len()) {
            return Err(VulnerabilityError::NotRectangular);
        }
        Ok(GainFunction {
            guesses,
            secrets,
            gains,
        })
    }

    /// The identity gain over a secret space; behaves exactly like Bayes.
    pub fn identity(secrets: Vec<String>) -> Self {
        let n = secrets.len();
        let gains = (0..n)
            .map(|w| {
                (0..n)
                    .map(|x| {
                        if w == x {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        GainFunction {
            guesses: secrets.clone(),
            secrets,
            gains,
        }
    }

    pub fn guesses(&self) -> &[String] {
        &self.guesses
    }

    pub fn secrets(&self) -> &[String] {
        &self.secrets
    }

    pub fn gains(&self) -> &[Vec<Rational>] {
        &self.gains
    }
}

/// Which vulnerability the games are played in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VulnerabilityMeasure {
    Bayes,
    Gain(GainFunction),
}

impl VulnerabilityMeasure {
    /// Number of available guesses for a given secret space.
    pub fn guess_count(&self, secrets: &[String]) -> usize {
        match self {
            VulnerabilityMeasure::Bayes => secrets.len(),
            VulnerabilityMeasure::Gain(g) => g.guesses.len(),
        }
    }

    /// Gain for guess index `w` against secret index `x`.
    pub fn gain(&self, w: usize, x: usize) -> Rational {
        match self {
            VulnerabilityMeasure::Bayes => {
                if w == x {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            VulnerabilityMeasure::Gain(g) => g.gains[w][x].clone(),
        }
    }

    pub fn check_secrets(&self, secrets: &[String]) -> Result<(), VulnerabilityError> {
        match self {
            VulnerabilityMeasure::Bayes => Ok(()),
            VulnerabilityMeasure::Gain(g) => {
                if g.secrets == secrets {
                    Ok(())
                } else {
                    Err(VulnerabilityError::IndexMismatch(
                        "gain function secrets do not match prior labels".into(),
                    ))
                }
            }
        }
    }
}

/// Expected gain of one guess under a prior.
fn expected_gain(measure: &VulnerabilityMeasure, prior: &Prior, w: usize) -> Rational {
    prior
        .probs()
        .iter()
        .enumerate()
        .map(|(x, p)| measure.gain(w, x) * p)
        .sum()
}

/// The vulnerability of the prior itself: `max_w sum_x pi(x) g(w,x)`;
/// for Bayes this is `max_x pi(x)`.
pub fn prior_vulnerability(
    measure: &VulnerabilityMeasure,
    prior: &Prior,
) -> Result<Rational, VulnerabilityError> {
    Ok(best_guess(measure, prior)?.1)
}

/// The maximizing guess and its expected gain. Ties resolve to the lowest
/// guess index, which keeps derived guess functions deterministic.
pub fn best_guess(
    measure: &VulnerabilityMeasure,
    prior: &Prior,
) -> Result<(usize, Rational), VulnerabilityError> {
    measure.check_secrets(prior.labels())?;
    let count = measure.guess_count(prior.labels());
    let mut best: Option<(usize, Rational)> = None;
    for w in 0..count {
        let v = expected_gain(measure, prior, w);
        match &best {
            Some((_, b)) if v <= *b => {}
            _ => best = Some((w, v)),
        }
    }
    best.ok_or(VulnerabilityError::Empty)
}

/// Posterior vulnerability `sum_y p(y) V(posterior_y)`; observables with
/// zero probability contribute nothing.
pub fn posterior_vulnerability(
    measure: &VulnerabilityMeasure,
    prior: &Prior,
    channel: &Channel,
) -> Result<Rational, VulnerabilityError> {
    measure.check_secrets(prior.labels())?;
    let hyper = push_prior(prior, channel)?;
    let mut total = Rational::zero();
    for (p, posterior) in hyper.outer().iter().zip(hyper.posteriors()) {
        total += &(p * &prior_vulnerability(measure, posterior)?);
    }
    Ok(total)
}
