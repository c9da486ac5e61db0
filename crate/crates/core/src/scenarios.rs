//! Built-in scenario generators.
//!
//! Two scenarios ship with the crate. The running example is a two-program
//! system over a one-bit secret whose four channels cover the interesting
//! range from non-interferent to fully revealing. The password checker
//! models a timing side channel: a bitwise comparison over n-bit passwords
//! that rejects at the first mismatch, where the defender picks the order in
//! which bits are compared and the attacker picks the guess. Both the
//! verdict and the number of loop iterations are observable, so each
//! (order, guess) pair is a deterministic channel.

use thiserror::Error;

use crate::channel::{Channel, ChannelError, Label, Prior};
use crate::choice::Mix;
use crate::games::{GameError, GameSpec};
use crate::numerics::{rational_parse, Rational};
use crate::vulnerability::VulnerabilityMeasure;

/// Reference values the password scenario reproduces; see
/// [`crate::casestudy`] for the checks run against them.
pub mod reference {
    /// Published prior over 3-bit passwords, as 4-decimal literals. The
    /// rounding makes them sum to 1.0001, which the generator renormalizes.
    pub const PASSWORD_PRIOR: [&str; 8] = [
        "0.0137", "0.0548", "0.2191", "0.4382", "0.0002", "0.0002", "0.0548", "0.2191",
    ];

    /// Reference utility (posterior Bayes vulnerability) per (order, guess)
    /// profile, rows in order-label order, columns in guess order 000..111.
    pub const PASSWORD_UTILITIES: [[&str; 8]; 6] = [
        ["0.7257", "0.7257", "0.9311", "0.9311", "0.6577", "0.6577", "0.7122", "0.7122"],
        ["0.8900", "0.9311", "0.8900", "0.9311", "0.7122", "0.7122", "0.7122", "0.7122"],
        ["0.5068", "0.5068", "0.9311", "0.9311", "0.4934", "0.4934", "0.7668", "0.7668"],
        ["0.5068", "0.5068", "0.7668", "0.9311", "0.5068", "0.5068", "0.7668", "0.9311"],
        ["0.7257", "0.9311", "0.7257", "0.9311", "0.7122", "0.8766", "0.7122", "0.8766"],
        ["0.6712", "0.7122", "0.7257", "0.9311", "0.6712", "0.7122", "0.7257", "0.9311"],
    ];

    pub const PRIOR_VULNERABILITY: &str = "0.4382";
    pub const VULNERABILITY_123_101: &str = "0.6577";
    pub const VULNERABILITY_CONSTANT_101: &str = "0.4384";
    pub const EXPECTED_ITERATIONS_123_101: &str = "1.2747";
    pub const UNIFORM_VALUE_BOUND: &str = "0.6573";
    pub const UNIFORM_RUNTIME_BOUND: &str = "2.3922";
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid bit order {0:?}: must be a permutation of 1..=n")]
    BadOrder(Vec<usize>),
    #[error("invalid guess {0:?}: expected an n-bit string")]
    BadGuess(String),
    #[error("invalid prior: {0}")]
    BadPrior(String),
    #[error("mix has {got} weights for {expected} orders")]
    MixWidth { expected: usize, got: usize },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Game(#[from] GameError),
}

fn bit_string(value: usize, bits: usize) -> String {
    (0..bits)
        .rev()
        .map(|i| if value & (1 << i) != 0 { '1' } else { '0' })
        .collect()
}

/// The two-program running example: a one-bit secret, defender actions
/// selecting the program, attacker actions selecting its low input, uniform
/// prior, Bayes vulnerability. Program 0 outputs `x & a`; program 1 outputs
/// `x` with probability `a/3` and its complement otherwise.
pub fn running_example() -> GameSpec {
    let chan = |rows: &[&[&str]]| {
        Channel::from_literals(&["0", "1"], &["0", "1"], rows).expect("static channel")
    };
    let c00 = chan(&[&["1", "0"], &["1", "0"]]);
    let c01 = chan(&[&["1", "0"], &["0", "1"]]);
    let c10 = chan(&[&["0", "1"], &["1", "0"]]);
    let c11 = chan(&[&["1/3", "2/3"], &["2/3", "1/3"]]);
    GameSpec::new(
        vec!["0".into(), "1".into()],
        vec!["0".into(), "1".into()],
        vec![vec![c00, c01], vec![c10, c11]],
        Prior::uniform(vec!["0".into(), "1".into()]),
        VulnerabilityMeasure::Bayes,
    )
    .expect("static spec")
}

/// The running example with the channel of profile (1,1) replaced by the
/// non-interferent channel of profile (0,0). Used to show that the
/// attacker-first visible game and the hidden simultaneous game are not
/// ordered: here the former drops to 1/2 while the latter rises to 3/4.
pub fn modified_running_example() -> GameSpec {
    let spec = running_example();
    let c00 = spec.channel(0, 0).clone();
    GameSpec::new(
        spec.defender_actions().to_vec(),
        spec.attacker_actions().to_vec(),
        vec![
            vec![spec.channel(0, 0).clone(), spec.channel(0, 1).clone()],
            vec![spec.channel(1, 0).clone(), c00],
        ],
        spec.prior().clone(),
        spec.measure().clone(),
    )
    .expect("static spec")
}

/// Configuration of the password-checker scenario.
#[derive(Clone, Debug)]
pub struct PasswordConfig {
    bits: usize,
    orders: Vec<Vec<usize>>,
    prior: Prior,
    constant_time: bool,
}

impl PasswordConfig {
    /// The standard study: 3-bit passwords, all six comparison orders, the
    /// published prior, early-exit checker.
    pub fn standard() -> Self {
        PasswordConfig::new(3, all_orders(3), published_prior_weights(), false)
            .expect("static config")
    }

    /// The time-padded variant: the checker always runs all n iterations,
    /// so only the verdict is observable.
    pub fn constant_time() -> Self {
        PasswordConfig::new(3, all_orders(3), published_prior_weights(), true)
            .expect("static config")
    }

    /// Builds a configuration. Each order must be a permutation of `1..=n`.
    /// Prior weights whose sum is off from 1 by at most `1/1000` are
    /// renormalized; larger deviations are rejected.
    pub fn new(
        bits: usize,
        orders: Vec<Vec<usize>>,
        prior_weights: Vec<Rational>,
        constant_time: bool,
    ) -> Result<Self, ScenarioError> {
        if bits == 0 || bits > 16 {
            return Err(ScenarioError::BadPrior(format!(
                "unsupported bit length {bits}"
            )));
        }
        for order in &orders {
            check_order(order, bits)?;
        }
        if orders.is_empty() {
            return Err(ScenarioError::BadOrder(vec![]));
        }
        let n = 1usize << bits;
        if prior_weights.len() != n {
            return Err(ScenarioError::BadPrior(format!(
                "{} weights for {} passwords",
                prior_weights.len(),
                n
            )));
        }
        let sum: Rational = prior_weights.iter().sum();
        let deviation = (Rational::one() - &sum).abs();
        if deviation > Rational::new(1, 1000) {
            return Err(ScenarioError::BadPrior(format!(
                "weights sum to {sum}, more than 1/1000 away from 1"
            )));
        }
        let labels = (0..n).map(|v| bit_string(v, bits)).collect();
        let prior = Prior::normalized(labels, prior_weights)
            .map_err(|e| ScenarioError::BadPrior(e.to_string()))?;
        Ok(PasswordConfig {
            bits,
            orders,
            prior,
            constant_time,
        })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn is_constant_time(&self) -> bool {
        self.constant_time
    }

    pub fn order_labels(&self) -> Vec<String> {
        self.orders.iter().map(|o| order_label(o)).collect()
    }

    pub fn secret_labels(&self) -> Vec<String> {
        self.prior.labels().to_vec()
    }

    /// Output space shared by every channel of the game: all rejection
    /// timings plus acceptance (constant time collapses the timings).
    pub fn output_labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        if self.constant_time {
            out.push(Label::tagged(Label::name("F"), self.bits.to_string()));
        } else {
            for k in 1..=self.bits {
                out.push(Label::tagged(Label::name("F"), k.to_string()));
            }
        }
        out.push(Label::tagged(Label::name("T"), self.bits.to_string()));
        out
    }
}

fn order_label(order: &[usize]) -> String {
    order.iter().map(|p| p.to_string()).collect()
}

fn all_orders(bits: usize) -> Vec<Vec<usize>> {
    // lexicographic permutations of 1..=bits
    let mut orders = vec![vec![]];
    for _ in 0..bits {
        let mut next = Vec::new();
        for prefix in &orders {
            for p in 1..=bits {
                if !prefix.contains(&p) {
                    let mut o = prefix.clone();
                    o.push(p);
                    next.push(o);
                }
            }
        }
        orders = next;
    }
    orders.retain(|o| o.len() == bits);
    orders
}

fn published_prior_weights() -> Vec<Rational> {
    reference::PASSWORD_PRIOR
        .iter()
        .map(|s| rational_parse(s).expect("static literal"))
        .collect()
}

fn check_order(order: &[usize], bits: usize) -> Result<(), ScenarioError> {
    if order.len() != bits {
        return Err(ScenarioError::BadOrder(order.to_vec()));
    }
    for p in 1..=bits {
        if !order.contains(&p) {
            return Err(ScenarioError::BadOrder(order.to_vec()));
        }
    }
    Ok(())
}

fn check_guess(guess: &str, bits: usize) -> Result<(), ScenarioError> {
    if guess.len() != bits || !guess.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(ScenarioError::BadGuess(guess.to_string()));
    }
    Ok(())
}

/// Number of loop iterations the checker performs: the position (within the
/// comparison order) of the first mismatching bit, or n when the guess is
/// accepted. The constant-time variant always runs all n iterations.
pub fn checker_iterations(
    cfg: &PasswordConfig,
    order: &[usize],
    guess: &str,
    secret: &str,
) -> Result<usize, ScenarioError> {
    check_order(order, cfg.bits)?;
    check_guess(guess, cfg.bits)?;
    check_guess(secret, cfg.bits)?;
    if cfg.constant_time {
        return Ok(cfg.bits);
    }
    let guess = guess.as_bytes();
    let secret = secret.as_bytes();
    for (k, &pos) in order.iter().enumerate() {
        if guess[pos - 1] != secret[pos - 1] {
            return Ok(k + 1);
        }
    }
    Ok(cfg.bits)
}

/// The full iteration-count table of a configuration, indexed by order,
/// guess and secret in the configuration's label orders.
#[derive(Clone, Debug)]
pub struct TimingProfile {
    table: Vec<Vec<Vec<usize>>>,
}

impl TimingProfile {
    pub fn new(cfg: &PasswordConfig) -> Result<Self, ScenarioError> {
        let secrets = cfg.secret_labels();
        let mut table = Vec::with_capacity(cfg.orders.len());
        for order in &cfg.orders {
            let mut per_guess = Vec::with_capacity(secrets.len());
            for guess in &secrets {
                let row = secrets
                    .iter()
                    .map(|secret| checker_iterations(cfg, order, guess, secret))
                    .collect::<Result<_, _>>()?;
                per_guess.push(row);
            }
            table.push(per_guess);
        }
        Ok(TimingProfile { table })
    }

    pub fn iterations(&self, order: usize, guess: usize, secret: usize) -> usize {
        self.table[order][guess][secret]
    }
}

/// The deterministic channel of one (order, guess) profile: row `x` puts all
/// mass on the observable `(F, k)` of the first mismatch, or `(T, n)` on
/// acceptance.
pub fn password_channel(
    cfg: &PasswordConfig,
    order: &[usize],
    guess: &str,
) -> Result<Channel, ScenarioError> {
    check_order(order, cfg.bits)?;
    check_guess(guess, cfg.bits)?;
    let outputs = cfg.output_labels();
    let secrets = cfg.secret_labels();
    let accept_col = outputs.len() - 1;
    let mut rows = Vec::with_capacity(secrets.len());
    for secret in &secrets {
        let mut row = vec![Rational::zero(); outputs.len()];
        let col = if secret == guess {
            accept_col
        } else if cfg.constant_time {
            0
        } else {
            checker_iterations(cfg, order, guess, secret)? - 1
        };
        row[col] = Rational::one();
        rows.push(row);
    }
    Ok(Channel::new(secrets, outputs, rows)?)
}

/// The full leakage game: defender actions are the comparison orders,
/// attacker actions the guesses, payoff the posterior Bayes vulnerability.
pub fn password_game(cfg: &PasswordConfig) -> Result<GameSpec, ScenarioError> {
    let guesses = cfg.secret_labels();
    let mut channels = Vec::with_capacity(cfg.orders.len());
    for order in &cfg.orders {
        let row = guesses
            .iter()
            .map(|g| password_channel(cfg, order, g))
            .collect::<Result<_, _>>()?;
        channels.push(row);
    }
    Ok(GameSpec::new(
        cfg.order_labels(),
        guesses,
        channels,
        cfg.prior.clone(),
        VulnerabilityMeasure::Bayes,
    )?)
}

/// Expected number of iterations when the defender mixes over the orders
/// with `delta` and the attacker submits `guess`.
pub fn expected_iterations(
    cfg: &PasswordConfig,
    delta: &Mix,
    guess: &str,
) -> Result<Rational, ScenarioError> {
    check_guess(guess, cfg.bits)?;
    if delta.len() != cfg.orders.len() {
        return Err(ScenarioError::MixWidth {
            expected: cfg.orders.len(),
            got: delta.len(),
        });
    }
    let mut total = Rational::zero();
    for (w, order) in delta.weights().iter().zip(&cfg.orders) {
        if w.is_zero() {
            continue;
        }
        let mut per_order = Rational::zero();
        for (x, secret) in cfg.secret_labels().iter().enumerate() {
            let iters = checker_iterations(cfg, order, guess, secret)?;
            per_order += &(&cfg.prior.probs()[x] * &Rational::from_integer(iters as i64));
        }
        total += &(w * &per_order);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use crate::vulnerability::{posterior_vulnerability, prior_vulnerability};

    #[test]
    fn running_example_channels_match_their_programs() {
        let spec = running_example();
        // program 0 with a=0 maps every secret to output 0
        assert_eq!(spec.channel(0, 0).rows()[1], vec![rat(1, 1), rat(0, 1)]);
        // program 1 with a=1 flips the secret with probability 2/3
        assert_eq!(spec.channel(1, 1).entry(0, 1), &rat(2, 3));
    }

    #[test]
    fn password_prior_is_renormalized() {
        let cfg = PasswordConfig::standard();
        let sum: Rational = cfg.prior().probs().iter().sum();
        assert_eq!(sum, Rational::one());
        // published weights sum to 10001/10000, so every entry is k/10001
        assert_eq!(cfg.prior().probs()[3], rat(4382, 10001));
    }

    #[test]
    fn prior_rejected_when_too_far_from_one() {
        let mut weights = published_prior_weights();
        weights[0] = rat(1, 2);
        assert!(matches!(
            PasswordConfig::new(3, all_orders(3), weights, false),
            Err(ScenarioError::BadPrior(_))
        ));
    }

    #[test]
    fn channel_123_101_matches_reference_matrix() {
        let cfg = PasswordConfig::standard();
        let c = password_channel(&cfg, &[1, 2, 3], "101").unwrap();
        // secrets 000..011 mismatch on bit 1, 100 on bit 3, 101 accepted,
        // 110 and 111 on bit 2
        let expected_cols = [0, 0, 0, 0, 2, 3, 1, 1];
        for (x, col) in expected_cols.iter().enumerate() {
            assert_eq!(c.entry(x, *col), &Rational::one(), "row {x}");
            assert_eq!(c.rows()[x].iter().cloned().sum::<Rational>(), Rational::one());
        }
    }

    #[test]
    fn constant_time_channel_has_two_columns() {
        let cfg = PasswordConfig::constant_time();
        let c = password_channel(&cfg, &[1, 2, 3], "101").unwrap();
        assert_eq!(c.outputs().len(), 2);
        for (x, secret) in cfg.secret_labels().iter().enumerate() {
            let col = if secret == "101" { 1 } else { 0 };
            assert_eq!(c.entry(x, col), &Rational::one());
        }
    }

    #[test]
    fn acceptance_column_has_single_nonzero_row() {
        let cfg = PasswordConfig::standard();
        for order in cfg.orders() {
            let c = password_channel(&cfg, order, "110").unwrap();
            let accept = c.outputs().len() - 1;
            let hits: Vec<usize> = (0..8)
                .filter(|&x| !c.entry(x, accept).is_zero())
                .collect();
            assert_eq!(hits, vec![6]); // only the secret equal to the guess
        }
    }

    #[test]
    fn order_permutes_timing_but_not_verdict() {
        let cfg = PasswordConfig::standard();
        for order in cfg.orders() {
            for guess in cfg.secret_labels() {
                for secret in cfg.secret_labels() {
                    let iters = checker_iterations(&cfg, order, &guess, &secret).unwrap();
                    assert!((1..=3).contains(&iters));
                    let accepted = iters == 3 && guess == secret;
                    assert_eq!(accepted, guess == secret);
                }
            }
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let cfg = PasswordConfig::standard();
        assert!(matches!(
            password_channel(&cfg, &[1, 2], "101"),
            Err(ScenarioError::BadOrder(_))
        ));
        assert!(matches!(
            password_channel(&cfg, &[1, 1, 3], "101"),
            Err(ScenarioError::BadOrder(_))
        ));
        assert!(matches!(
            password_channel(&cfg, &[1, 2, 3], "10"),
            Err(ScenarioError::BadGuess(_))
        ));
        assert!(matches!(
            password_channel(&cfg, &[1, 2, 3], "10x"),
            Err(ScenarioError::BadGuess(_))
        ));
    }

    #[test]
    fn vulnerability_values_for_the_study() {
        let cfg = PasswordConfig::standard();
        let pv = prior_vulnerability(&VulnerabilityMeasure::Bayes, cfg.prior()).unwrap();
        assert_eq!(pv, rat(4382, 10001));
        let c = password_channel(&cfg, &[1, 2, 3], "101").unwrap();
        let v = posterior_vulnerability(&VulnerabilityMeasure::Bayes, cfg.prior(), &c).unwrap();
        assert_eq!(v, rat(6577, 10001));
        let cons = PasswordConfig::constant_time();
        let c = password_channel(&cons, &[1, 2, 3], "101").unwrap();
        let v = posterior_vulnerability(&VulnerabilityMeasure::Bayes, cons.prior(), &c).unwrap();
        assert_eq!(v, rat(4384, 10001));
    }

    #[test]
    fn expected_iterations_point_and_constant() {
        let cfg = PasswordConfig::standard();
        let point = Mix::point(6, 0); // order 123
        let e = expected_iterations(&cfg, &point, "101").unwrap();
        // direct summation over the renormalized prior
        assert_eq!(e, rat(12748, 10001));
        let cons = PasswordConfig::constant_time();
        for guess in ["000", "101", "111"] {
            let e = expected_iterations(&cons, &Mix::uniform(6), guess).unwrap();
            assert_eq!(e, rat(3, 1));
        }
    }

    #[test]
    fn password_game_has_48_shared_type_channels() {
        let spec = password_game(&PasswordConfig::standard()).unwrap();
        assert_eq!(spec.defender_actions().len(), 6);
        assert_eq!(spec.attacker_actions().len(), 8);
        assert_eq!(spec.outputs().len(), 4);
    }
}
