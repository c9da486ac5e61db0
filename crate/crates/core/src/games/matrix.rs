//! Exact minimax solutions of finite zero-sum matrix games.
//!
//! The row player minimizes, the column player maximizes. Both sides are
//! solved as LPs over the mixing weights; exact LP duality makes the two
//! optimal values identical, which callers keep as a certificate.

use crate::games::GameError;
use crate::numerics::{lp_solve, LinearProgram, LpOutcome, Rational, Relation, Sense};

/// Mixed minimax solution of a payoff matrix.
#[derive(Clone, Debug)]
pub struct MatrixGameSolution {
    pub value: Rational,
    /// Minimizing row mix.
    pub defender: Vec<Rational>,
    /// Maximizing column mix.
    pub attacker: Vec<Rational>,
    pub defender_lp_value: Rational,
    pub attacker_lp_value: Rational,
}

/// Solves `min_delta max_alpha delta^T U alpha` exactly. Finite zero-sum
/// games always have a solution, so any other LP outcome is a solver bug.
pub fn solve_matrix_game(payoffs: &[Vec<Rational>]) -> Result<MatrixGameSolution, GameError> {
    let m = payoffs.len();
    if m == 0 || payoffs[0].is_empty() {
        return Err(GameError::InvalidSpec("empty payoff matrix".into()));
    }
    let k = payoffs[0].len();
    if payoffs.iter().any(|r| r.len() != k) {
        return Err(GameError::InvalidSpec("ragged payoff matrix".into()));
    }

    // Defender: min t  s.t.  sum_d delta_d u(d,a) <= t  for every column a.
    let mut lp = LinearProgram::new(
        Sense::Minimize,
        (0..m)
            .map(|_| Rational::zero())
            .chain([Rational::one()])
            .collect(),
    );
    for d in 0..m {
        lp.set_nonneg(d);
    }
    for a in 0..k {
        let coeffs = (0..m)
            .map(|d| payoffs[d][a].clone())
            .chain([-Rational::one()])
            .collect();
        lp.push_constraint(coeffs, Relation::Le, Rational::zero());
    }
    let mut simplex_row = vec![Rational::one(); m];
    simplex_row.push(Rational::zero());
    lp.push_constraint(simplex_row, Relation::Eq, Rational::one());
    let (mut defender, defender_lp_value) = match lp_solve(&lp)? {
        LpOutcome::Optimal { point, value } => (point, value),
        other => {
            return Err(GameError::Internal(format!(
                "defender LP of a finite game returned {other:?}"
            )))
        }
    };
    defender.truncate(m);

    // Attacker: max v  s.t.  sum_a alpha_a u(d,a) >= v  for every row d.
    let mut lp = LinearProgram::new(
        Sense::Maximize,
        (0..k)
            .map(|_| Rational::zero())
            .chain([Rational::one()])
            .collect(),
    );
    for a in 0..k {
        lp.set_nonneg(a);
    }
    for row in payoffs {
        let coeffs = row
            .iter()
            .cloned()
            .chain([-Rational::one()])
            .collect();
        lp.push_constraint(coeffs, Relation::Ge, Rational::zero());
    }
    let mut simplex_row = vec![Rational::one(); k];
    simplex_row.push(Rational::zero());
    lp.push_constraint(simplex_row, Relation::Eq, Rational::one());
    let (mut attacker, attacker_lp_value) = match lp_solve(&lp)? {
        LpOutcome::Optimal { point, value } => (point, value),
        other => {
            return Err(GameError::Internal(format!(
                "attacker LP of a finite game returned {other:?}"
            )))
        }
    };
    attacker.truncate(k);

    if defender_lp_value != attacker_lp_value {
        return Err(GameError::Internal(format!(
            "LP duality gap: {defender_lp_value} vs {attacker_lp_value}"
        )));
    }
    Ok(MatrixGameSolution {
        value: defender_lp_value.clone(),
        defender,
        attacker,
        defender_lp_value,
        attacker_lp_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn running_example_table_gives_four_fifths() {
        let payoffs = vec![
            vec![rat(1, 2), rat(1, 1)],
            vec![rat(1, 1), rat(2, 3)],
        ];
        let sol = solve_matrix_game(&payoffs).unwrap();
        assert_eq!(sol.value, rat(4, 5));
        assert_eq!(sol.defender, vec![rat(2, 5), rat(3, 5)]);
        assert_eq!(sol.attacker, vec![rat(2, 5), rat(3, 5)]);
    }

    #[test]
    fn matching_pennies() {
        let payoffs = vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ];
        let sol = solve_matrix_game(&payoffs).unwrap();
        assert_eq!(sol.value, rat(1, 2));
        assert_eq!(sol.defender, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn dominant_column_gives_pure_value() {
        // one column is uniformly best for the attacker
        let payoffs = vec![
            vec![rat(1, 4), rat(3, 4)],
            vec![rat(1, 2), rat(3, 4)],
        ];
        let sol = solve_matrix_game(&payoffs).unwrap();
        assert_eq!(sol.value, rat(3, 4));
    }

    #[test]
    fn saddle_point_inequalities_hold() {
        let payoffs = vec![
            vec![rat(1, 2), rat(1, 1), rat(1, 4)],
            vec![rat(1, 1), rat(2, 3), rat(1, 2)],
        ];
        let sol = solve_matrix_game(&payoffs).unwrap();
        // U(delta*, a) <= value for every pure column a
        for a in 0..3 {
            let u: Rational = (0..2).map(|d| &sol.defender[d] * &payoffs[d][a]).sum();
            assert!(u <= sol.value);
        }
        // U(d, alpha*) >= value for every pure row d
        for row in &payoffs {
            let u: Rational = (0..3).map(|a| &sol.attacker[a] * &row[a]).sum();
            assert!(u >= sol.value);
        }
    }

    #[test]
    fn ragged_matrix_rejected() {
        let payoffs = vec![vec![rat(1, 2)], vec![rat(1, 2), rat(1, 3)]];
        assert!(matches!(
            solve_matrix_game(&payoffs),
            Err(GameError::InvalidSpec(_))
        ));
    }
}
