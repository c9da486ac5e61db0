//! Solvers for the hidden-choice games.
//!
//! With hidden choice the attacker observes the output of the *mixture*
//! `(+)_delta C_da`, so the payoff `V[pi > (+)_delta C_da]` is convex, not
//! linear, in the defender's mix. For Bayes and finite gain functions it is a
//! pointwise maximum of linear functions of `delta`: per output `y` and guess
//! `w` the term `sum_x g(w,x) pi(x) (sum_d delta_d C_da(x,y))` is linear, and
//! the payoff is `sum_y max_w` of those terms. That makes both sides exactly
//! solvable:
//!
//! * defender: an epigraph LP with one auxiliary variable per `(a, y)` pair
//!   bounding the inner maximum from above;
//! * attacker: the extended matrix game whose pure strategies are pairs
//!   `(a, w)` of an action and a guess function `w : Y -> W`, which
//!   linearizes the payoff and whose value equals the epigraph optimum.
//!
//! Optimal defender mixes are generally not unique. Among the optimal set the
//! solvers return the mix maximizing its smallest weight (one more LP), which
//! is deterministic and picks the uniform mix whenever the uniform mix is
//! optimal.

use crate::choice::{hidden_choice, ChannelFamily, Mix};
use crate::games::{
    argmax, Certificates, ExtendedStrategyWeight, GameError, GameId, GameOptions, GameSpec,
    HiddenBranch, Solution, Strategy,
};
use crate::numerics::{lp_solve, LinearProgram, LpOutcome, Rational, Relation, Sense};
use crate::vulnerability::posterior_vulnerability;

/// One non-dominated guess at a fixed `(a, y)`: its linear coefficients over
/// the defender's mix, and a representative guess index realizing them.
#[derive(Clone, Debug)]
struct GuessTerm {
    guess: usize,
    coeffs: Vec<Rational>,
}

/// For a fixed attacker action, the candidate guess terms per output.
///
/// A guess whose coefficient vector is dominated entry-wise by another's can
/// never attain the inner maximum strictly, so it is dropped; equal vectors
/// keep their lowest guess index. This prunes the LP rows and the guess
/// function enumeration without changing any optimum.
fn guess_terms(spec: &GameSpec, a: usize) -> Vec<Vec<GuessTerm>> {
    let secrets = spec.secrets();
    let num_guesses = spec.measure().guess_count(secrets);
    let num_d = spec.defender_actions().len();
    let prior = spec.prior().probs();
    let mut stages = Vec::with_capacity(spec.outputs().len());
    for y in 0..spec.outputs().len() {
        let mut all: Vec<GuessTerm> = Vec::with_capacity(num_guesses);
        for w in 0..num_guesses {
            let coeffs: Vec<Rational> = (0..num_d)
                .map(|d| {
                    let channel = spec.channel(d, a);
                    (0..secrets.len())
                        .map(|x| {
                            let c = channel.entry(x, y);
                            if c.is_zero() {
                                Rational::zero()
                            } else {
                                spec.measure().gain(w, x) * &prior[x] * c
                            }
                        })
                        .sum()
                })
                .collect();
            all.push(GuessTerm { guess: w, coeffs });
        }
        let kept: Vec<GuessTerm> = all
            .iter()
            .enumerate()
            .filter(|(i, t)| {
                !all.iter().enumerate().any(|(j, o)| {
                    j != *i
                        && o.coeffs.iter().zip(&t.coeffs).all(|(a, b)| a >= b)
                        && (o.coeffs != t.coeffs || j < *i)
                })
            })
            .map(|(_, t)| t.clone())
            .collect();
        stages.push(kept);
    }
    stages
}

/// `V[pi > (+)_delta C_da]` for a concrete mix.
fn hidden_response_value(
    spec: &GameSpec,
    delta: &Mix,
    a: usize,
) -> Result<Rational, GameError> {
    let family = ChannelFamily::new(
        spec.defender_actions().to_vec(),
        (0..spec.defender_actions().len())
            .map(|d| spec.channel(d, a).clone())
            .collect(),
    )?;
    let mixed = hidden_choice(&family, delta)?;
    Ok(posterior_vulnerability(spec.measure(), spec.prior(), &mixed)?)
}

struct EpigraphSolution {
    value: Rational,
    delta: Mix,
}

/// Defender-side LP: minimize `t` subject to, for every attacker action,
/// `sum_y s_{a,y} <= t` with `s_{a,y}` above every guess term. When `cap` is
/// given the value is pinned to it and the smallest defender weight is
/// maximized instead, selecting a canonical point of the optimal face.
fn epigraph_lp(
    spec: &GameSpec,
    stages_per_action: &[Vec<Vec<GuessTerm>>],
    cap: Option<&Rational>,
) -> Result<EpigraphSolution, GameError> {
    let num_d = spec.defender_actions().len();
    let num_s: usize = stages_per_action.iter().map(|s| s.len()).sum();
    // variable layout: delta | s_{a,y} | t (or the min-weight variable)
    let num_vars = num_d + num_s + 1;
    let t_var = num_vars - 1;
    let minimizing = cap.is_none();
    let mut objective = vec![Rational::zero(); num_vars];
    objective[t_var] = Rational::one();
    let sense = if minimizing {
        Sense::Minimize
    } else {
        Sense::Maximize
    };
    let mut lp = LinearProgram::new(sense, objective);
    for d in 0..num_d {
        lp.set_nonneg(d);
    }

    let mut s_base = num_d;
    for stages in stages_per_action {
        for (y, terms) in stages.iter().enumerate() {
            for term in terms {
                // delta . coeffs - s_{a,y} <= 0
                let mut row = vec![Rational::zero(); num_vars];
                row[..num_d].clone_from_slice(&term.coeffs);
                row[s_base + y] = -Rational::one();
                lp.push_constraint(row, Relation::Le, Rational::zero());
            }
        }
        // sum_y s_{a,y} <= t   (or <= cap when refining)
        let mut row = vec![Rational::zero(); num_vars];
        for y in 0..stages.len() {
            row[s_base + y] = Rational::one();
        }
        match cap {
            None => {
                row[t_var] = -Rational::one();
                lp.push_constraint(row, Relation::Le, Rational::zero());
            }
            Some(v) => lp.push_constraint(row, Relation::Le, v.clone()),
        }
        s_base += stages.len();
    }
    if !minimizing {
        // t_var doubles as the lower bound on every defender weight
        for d in 0..num_d {
            let mut row = vec![Rational::zero(); num_vars];
            row[d] = Rational::one();
            row[t_var] = -Rational::one();
            lp.push_constraint(row, Relation::Ge, Rational::zero());
        }
    }
    let mut simplex_row = vec![Rational::zero(); num_vars];
    simplex_row[..num_d].fill(Rational::one());
    lp.push_constraint(simplex_row, Relation::Eq, Rational::one());

    match lp_solve(&lp)? {
        LpOutcome::Optimal { point, value } => Ok(EpigraphSolution {
            value,
            delta: Mix::new(point[..num_d].to_vec())?,
        }),
        other => Err(GameError::Internal(format!(
            "epigraph LP of a bounded game returned {other:?}"
        ))),
    }
}

fn check_budget(spec: &GameSpec, options: &GameOptions) -> Result<(), GameError> {
    let guesses = spec.measure().guess_count(spec.secrets()) as u128;
    let outputs = spec.outputs().len() as u32;
    let required = guesses
        .checked_pow(outputs)
        .unwrap_or(u128::MAX);
    if required > options.guess_enumeration_budget {
        return Err(GameError::EnumerationBudget {
            required,
            budget: options.guess_enumeration_budget,
        });
    }
    Ok(())
}

struct ExtendedGame {
    value: Rational,
    marginal: Vec<Rational>,
    support: Vec<ExtendedStrategyWeight>,
}

/// Builds and solves the extended zero-sum game. Attacker pure strategies
/// are `(a, w)` pairs; the payoff against defender action `d` is
/// `sum_y` the `(a, y)` guess term of `w(y)`. Only the attacker-side LP is
/// needed: the defender side is certified by the epigraph LP.
fn solve_extended_game(
    spec: &GameSpec,
    stages_per_action: &[Vec<Vec<GuessTerm>>],
) -> Result<ExtendedGame, GameError> {
    let num_d = spec.defender_actions().len();
    // enumerate the (pruned) guess functions of every action
    let mut columns: Vec<(usize, Vec<usize>, Vec<Rational>)> = Vec::new();
    for (a, stages) in stages_per_action.iter().enumerate() {
        let mut cursor = vec![0usize; stages.len()];
        loop {
            let mut col = vec![Rational::zero(); num_d];
            let mut guess_function = Vec::with_capacity(stages.len());
            for (y, &pick) in cursor.iter().enumerate() {
                let term = &stages[y][pick];
                guess_function.push(term.guess);
                for d in 0..num_d {
                    col[d] += &term.coeffs[d];
                }
            }
            columns.push((a, guess_function, col));
            // advance the mixed-radix cursor
            let mut y = 0;
            loop {
                if y == stages.len() {
                    break;
                }
                cursor[y] += 1;
                if cursor[y] < stages[y].len() {
                    break;
                }
                cursor[y] = 0;
                y += 1;
            }
            if y == stages.len() {
                break;
            }
        }
    }

    // attacker LP: max v with every defender row held at >= v
    let n = columns.len();
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = Rational::one();
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    for c in 0..n {
        lp.set_nonneg(c);
    }
    for d in 0..num_d {
        let mut row: Vec<Rational> = columns.iter().map(|(_, _, col)| col[d].clone()).collect();
        row.push(-Rational::one());
        lp.push_constraint(row, Relation::Ge, Rational::zero());
    }
    let mut simplex_row = vec![Rational::one(); n];
    simplex_row.push(Rational::zero());
    lp.push_constraint(simplex_row, Relation::Eq, Rational::one());
    let (point, value) = match lp_solve(&lp)? {
        LpOutcome::Optimal { point, value } => (point, value),
        other => {
            return Err(GameError::Internal(format!(
                "extended-game LP returned {other:?}"
            )))
        }
    };

    let mut marginal = vec![Rational::zero(); spec.attacker_actions().len()];
    let mut support = Vec::new();
    for (weight, (a, guess_function, _)) in point.iter().zip(&columns) {
        if weight.is_zero() {
            continue;
        }
        marginal[*a] += weight;
        support.push(ExtendedStrategyWeight {
            action: *a,
            guess_function: guess_function.clone(),
            weight: weight.clone(),
        });
    }
    Ok(ExtendedGame {
        value,
        marginal,
        support,
    })
}

fn solve_hidden_simultaneous(spec: &GameSpec, options: &GameOptions) -> Result<Solution, GameError> {
    check_budget(spec, options)?;
    let num_a = spec.attacker_actions().len();
    let stages_per_action: Vec<Vec<Vec<GuessTerm>>> =
        (0..num_a).map(|a| guess_terms(spec, a)).collect();

    let first = epigraph_lp(spec, &stages_per_action, None)?;
    let refined = epigraph_lp(spec, &stages_per_action, Some(&first.value))?;
    let delta = refined.delta;

    let response_values: Vec<Rational> = (0..num_a)
        .map(|a| hidden_response_value(spec, &delta, a))
        .collect::<Result<_, _>>()?;
    let best_response = response_values
        .iter()
        .cloned()
        .max()
        .expect("nonempty action set");
    if best_response != first.value {
        return Err(GameError::Internal(format!(
            "refined defender mix attains {best_response}, epigraph value is {}",
            first.value
        )));
    }

    let extended = solve_extended_game(spec, &stages_per_action)?;
    if extended.value != first.value {
        return Err(GameError::Internal(format!(
            "extended-game value {} differs from epigraph value {}",
            extended.value, first.value
        )));
    }

    Ok(Solution {
        game: GameId::IV,
        value: first.value.clone(),
        defender: Strategy::MixedDefender(delta),
        attacker: Strategy::MixedAttacker(Mix::new(extended.marginal)?),
        certificates: Certificates::HiddenSimultaneous {
            epigraph_value: first.value,
            extended_value: extended.value,
            response_values,
            extended_support: extended.support,
        },
    })
}

/// Game IV, simultaneous play with hidden choice.
pub fn solve_game_iv(spec: &GameSpec, options: &GameOptions) -> Result<Solution, GameError> {
    solve_hidden_simultaneous(spec, options)
}

/// Game V, defender commits first with hidden choice. The attacker learns
/// nothing before the attack, so the indistinguishability partition is total
/// and the game coincides with game IV; the solution is retagged only.
pub fn solve_game_v(spec: &GameSpec, options: &GameOptions) -> Result<Solution, GameError> {
    let mut solution = solve_hidden_simultaneous(spec, options)?;
    solution.game = GameId::V;
    Ok(solution)
}

/// Game VI, attacker commits first with hidden choice: for every attacker
/// action the defender minimizes the mixture's vulnerability (an epigraph LP
/// per action); the attacker commits to the best branch, ties to the lowest
/// index.
pub fn solve_game_vi(spec: &GameSpec) -> Result<Solution, GameError> {
    let mut branches = Vec::with_capacity(spec.attacker_actions().len());
    for a in 0..spec.attacker_actions().len() {
        let stages = vec![guess_terms(spec, a)];
        let first = epigraph_lp(spec, &stages, None)?;
        let refined = epigraph_lp(spec, &stages, Some(&first.value))?;
        let reached = hidden_response_value(spec, &refined.delta, a)?;
        if reached != first.value {
            return Err(GameError::Internal(format!(
                "per-action mix attains {reached}, expected {}",
                first.value
            )));
        }
        branches.push(HiddenBranch {
            action: a,
            value: first.value,
            defender: refined.delta,
        });
    }
    let (a_star, value) =
        argmax(branches.iter().map(|b| b.value.clone())).expect("nonempty action set");
    Ok(Solution {
        game: GameId::VI,
        value,
        defender: Strategy::MixedDefender(branches[a_star].defender.clone()),
        attacker: Strategy::PureAttacker(a_star),
        certificates: Certificates::HiddenAttackerFirst { branches },
    })
}
