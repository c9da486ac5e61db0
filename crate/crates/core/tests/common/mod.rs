//! Shared generators and oracles for the integration suites.
//!
//! Everything here produces exact rationals with small denominators so that
//! law checks are equality checks. The hidden-game oracle at the bottom
//! minimizes the piecewise-linear response envelope by enumerating candidate
//! points; it shares no code with the LP path it cross-checks.

use leakage_games::channel::{Channel, Label, Prior};
use leakage_games::choice::Mix;
use leakage_games::games::GameSpec;
use leakage_games::numerics::Rational;
use leakage_games::vulnerability::{GainFunction, VulnerabilityMeasure};
use rand::rngs::StdRng;
use rand::Rng;

/// A random composition of `den` into `cells` nonnegative parts, as exact
/// fractions summing to 1.
pub fn random_distribution(rng: &mut StdRng, cells: usize, max_den: i64) -> Vec<Rational> {
    let den = rng.gen_range(1..=max_den);
    let mut cuts: Vec<i64> = (0..cells - 1).map(|_| rng.gen_range(0..=den)).collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(cells);
    let mut prev = 0;
    for c in cuts {
        parts.push(Rational::new(c - prev, den));
        prev = c;
    }
    parts.push(Rational::new(den - prev, den));
    parts
}

/// A random probability with denominator at most `max_den`.
pub fn random_probability(rng: &mut StdRng, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(0..=den);
    Rational::new(num, den)
}

pub fn random_channel(rng: &mut StdRng, inputs: usize, outputs: usize) -> Channel {
    let labels_in: Vec<String> = (0..inputs).map(|i| i.to_string()).collect();
    let labels_out: Vec<Label> = (0..outputs).map(|i| Label::name(i.to_string())).collect();
    let rows = (0..inputs)
        .map(|_| random_distribution(rng, outputs, 6))
        .collect();
    Channel::new(labels_in, labels_out, rows).expect("generated rows are stochastic")
}

/// A channel sharing the type of `like`.
pub fn random_channel_like(rng: &mut StdRng, like: &Channel) -> Channel {
    let rows = (0..like.inputs().len())
        .map(|_| random_distribution(rng, like.outputs().len(), 6))
        .collect();
    Channel::new(like.inputs().to_vec(), like.outputs().to_vec(), rows).expect("stochastic")
}

pub fn random_prior(rng: &mut StdRng, labels: &[String]) -> Prior {
    Prior::new(
        labels.to_vec(),
        random_distribution(rng, labels.len(), 8),
    )
    .expect("generated prior sums to 1")
}

pub fn random_mix(rng: &mut StdRng, len: usize) -> Mix {
    Mix::new(random_distribution(rng, len, 8)).expect("generated mix sums to 1")
}

pub fn random_gain(rng: &mut StdRng, secrets: &[String]) -> GainFunction {
    let guesses = rng.gen_range(2..=3usize);
    let gains = (0..guesses)
        .map(|_| {
            (0..secrets.len())
                .map(|_| {
                    let den = rng.gen_range(1..=3);
                    let num = rng.gen_range(-3..=3);
                    Rational::new(num, den)
                })
                .collect()
        })
        .collect();
    GainFunction::new(
        (0..guesses).map(|w| format!("w{w}")).collect(),
        secrets.to_vec(),
        gains,
    )
    .expect("rectangular gain matrix")
}

/// A random Bayes game spec with action counts and channel dimensions drawn
/// from `2..=3`.
pub fn random_spec(rng: &mut StdRng) -> GameSpec {
    let num_d = rng.gen_range(2..=3usize);
    let num_a = rng.gen_range(2..=3usize);
    let inputs = rng.gen_range(2..=3usize);
    let outputs = rng.gen_range(2..=3usize);
    let template = random_channel(rng, inputs, outputs);
    let channels: Vec<Vec<Channel>> = (0..num_d)
        .map(|_| {
            (0..num_a)
                .map(|_| random_channel_like(rng, &template))
                .collect()
        })
        .collect();
    let prior = random_prior(rng, template.inputs());
    GameSpec::new(
        (0..num_d).map(|d| d.to_string()).collect(),
        (0..num_a).map(|a| a.to_string()).collect(),
        channels,
        prior,
        VulnerabilityMeasure::Bayes,
    )
    .expect("generated spec is valid")
}

/// One linear piece `intercept + slope * p` of a response envelope.
#[derive(Clone, Debug)]
pub struct Line {
    pub intercept: Rational,
    pub slope: Rational,
}

impl Line {
    pub fn at(&self, p: &Rational) -> Rational {
        &self.intercept + &(&self.slope * p)
    }
}

/// For a two-defender-action spec, the Bayes response value of attacker
/// action `a` as a function of the weight `p` on defender action 0:
/// `V_a(p) = sum_y max_x pi(x) (p C_0a(x,y) + (1-p) C_1a(x,y))`,
/// returned as the per-output bundles of lines whose upper envelopes sum up.
pub fn response_lines(spec: &GameSpec, a: usize) -> Vec<Vec<Line>> {
    assert_eq!(spec.defender_actions().len(), 2);
    let c0 = spec.channel(0, a);
    let c1 = spec.channel(1, a);
    let prior = spec.prior().probs();
    (0..spec.outputs().len())
        .map(|y| {
            (0..prior.len())
                .map(|x| {
                    // pi(x) * (C1 + p (C0 - C1))
                    let base = &prior[x] * c1.entry(x, y);
                    let slope = &prior[x] * &(c0.entry(x, y) - c1.entry(x, y));
                    Line {
                        intercept: base,
                        slope,
                    }
                })
                .collect()
        })
        .collect()
}

fn envelope_value(bundles: &[Vec<Line>], p: &Rational) -> Rational {
    bundles
        .iter()
        .map(|lines| lines.iter().map(|l| l.at(p)).max().expect("nonempty"))
        .sum()
}

/// Exact minimization of `max_a V_a(p)` over `p in [0,1]` for two defender
/// actions, by candidate enumeration: interval endpoints, crossings of lines
/// within one output bundle, and crossings of branch envelopes between
/// consecutive breakpoints. Returns `(value, argmin p)`.
pub fn hidden_two_action_oracle(spec: &GameSpec) -> (Rational, Rational) {
    let num_a = spec.attacker_actions().len();
    let branches: Vec<Vec<Vec<Line>>> = (0..num_a).map(|a| response_lines(spec, a)).collect();

    let inside = |p: &Rational| !p.is_negative() && p.is_probability();
    let mut candidates = vec![Rational::zero(), Rational::one()];
    // breakpoints: crossings of two lines in the same output bundle
    for branch in &branches {
        for bundle in branch {
            for (i, l1) in bundle.iter().enumerate() {
                for l2 in &bundle[i + 1..] {
                    let dslope = &l1.slope - &l2.slope;
                    if dslope.is_zero() {
                        continue;
                    }
                    let p = &(&l2.intercept - &l1.intercept) / &dslope;
                    if inside(&p) {
                        candidates.push(p);
                    }
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    // crossings of two branch envelopes between consecutive breakpoints,
    // where both branches are linear
    let mut crossings = Vec::new();
    for w in candidates.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                let f = |p: &Rational| {
                    &envelope_value(&branches[i], p) - &envelope_value(&branches[j], p)
                };
                let (flo, fhi) = (f(lo), f(hi));
                if flo.is_zero() || fhi.is_zero() {
                    continue; // endpoints are already candidates
                }
                if flo.is_negative() == fhi.is_negative() {
                    continue;
                }
                // linear interpolation is exact on this interval
                let width = hi - lo;
                let p = lo + &(&(&flo * &width) / &(&flo - &fhi));
                if inside(&p) {
                    crossings.push(p);
                }
            }
        }
    }
    candidates.extend(crossings);
    candidates.sort();
    candidates.dedup();

    let mut best: Option<(Rational, Rational)> = None;
    for p in candidates {
        let worst = branches
            .iter()
            .map(|b| envelope_value(b, &p))
            .max()
            .expect("nonempty");
        match &best {
            Some((v, _)) if &worst >= v => {}
            _ => best = Some((worst, p)),
        }
    }
    best.expect("candidates nonempty")
}
