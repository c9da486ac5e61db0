//! Two-phase dense simplex over exact rationals.
//!
//! Every pivot keeps the tableau in `Rational`, so the reported optimum is a
//! basic feasible solution that satisfies the constraints exactly. Pivoting
//! uses Bland's rule in both phases, which rules out cycling. Problem sizes
//! in this crate are small (at most a few hundred rows), so a dense tableau
//! beats anything cleverer.

use crate::numerics::rational::Rational;
use crate::numerics::NumericsError;

/// Optimization direction of a [`LinearProgram`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Relation of one constraint row.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// One constraint row: `coeffs · x  <relation>  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Optional per-variable bounds. Both `None` means the variable is free.
#[derive(Clone, Debug, Default)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBounds {
    pub fn free() -> Self {
        VarBounds::default()
    }

    pub fn nonneg() -> Self {
        VarBounds {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }
}

/// A linear program in inequality form.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBounds>,
}

impl LinearProgram {
    /// New program over `objective.len()` free variables.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBounds::free(); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.bounds[var] = VarBounds::nonneg();
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.bounds[var] = VarBounds { lower, upper };
    }
}

/// Result of [`lp_solve`] on a well-formed program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Vec<Rational>, Rational)> {
        match self {
            LpOutcome::Optimal { point, value } => Some((point, value)),
            _ => None,
        }
    }
}

// How one original variable maps onto standard-form columns.
enum VarMap {
    // x = lower + y[col]
    Shifted { col: usize, lower: Rational },
    // x = upper - y[col]
    Reflected { col: usize, upper: Rational },
    // x = y[pos] - y[neg]
    Split { pos: usize, neg: usize },
    Fixed(Rational),
}

/// Solves `lp` exactly. Structural defects (ragged rows, bound-list length)
/// are reported as errors, distinct from the `Infeasible` outcome.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome, NumericsError> {
    let n = lp.num_vars();
    if lp.bounds.len() != n {
        return Err(NumericsError::MalformedProgram(format!(
            "bounds list has {} entries for {} variables",
            lp.bounds.len(),
            n
        )));
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(NumericsError::MalformedProgram(format!(
                "constraint {} has width {}, objective has width {}",
                i,
                c.coeffs.len(),
                n
            )));
        }
    }

    // ---- compile to standard form: min c·y, A y ~ b, y >= 0 ----
    let mut maps = Vec::with_capacity(n);
    let mut num_cols = 0usize;
    let mut extra_rows: Vec<(usize, Rational)> = Vec::new(); // y[col] <= cap
    for b in &lp.bounds {
        match (&b.lower, &b.upper) {
            (Some(l), Some(u)) if l > u => return Ok(LpOutcome::Infeasible),
            (Some(l), Some(u)) if l == u => maps.push(VarMap::Fixed(l.clone())),
            (Some(l), u) => {
                if let Some(u) = u {
                    extra_rows.push((num_cols, u - l));
                }
                maps.push(VarMap::Shifted {
                    col: num_cols,
                    lower: l.clone(),
                });
                num_cols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Reflected {
                    col: num_cols,
                    upper: u.clone(),
                });
                num_cols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split {
                    pos: num_cols,
                    neg: num_cols + 1,
                });
                num_cols += 2;
            }
        }
    }

    let minimize = lp.sense == Sense::Minimize;
    let mut obj = vec![Rational::zero(); num_cols];
    for (j, m) in maps.iter().enumerate() {
        let c = if minimize {
            lp.objective[j].clone()
        } else {
            -&lp.objective[j]
        };
        if c.is_zero() {
            continue;
        }
        match m {
            VarMap::Shifted { col, .. } => obj[*col] += &c,
            VarMap::Reflected { col, .. } => obj[*col] -= &c,
            VarMap::Split { pos, neg } => {
                obj[*pos] += &c;
                obj[*neg] -= &c;
            }
            VarMap::Fixed(_) => {}
        }
    }

    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); num_cols];
        let mut rhs = c.rhs.clone();
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                VarMap::Shifted { col, lower } => {
                    row[*col] += a;
                    rhs -= &(a * lower);
                }
                VarMap::Reflected { col, upper } => {
                    row[*col] -= a;
                    rhs -= &(a * upper);
                }
                VarMap::Split { pos, neg } => {
                    row[*pos] += a;
                    row[*neg] -= a;
                }
                VarMap::Fixed(v) => rhs -= &(a * v),
            }
        }
        rows.push((row, c.relation, rhs));
    }
    for (col, cap) in extra_rows {
        let mut row = vec![Rational::zero(); num_cols];
        row[col] = Rational::one();
        rows.push((row, Relation::Le, cap));
    }
    // A row with no variables is either trivially satisfied or infeasible.
    let mut trivial_infeasible = false;
    rows.retain(|(row, rel, rhs)| {
        if row.iter().all(Rational::is_zero) {
            let ok = match rel {
                Relation::Le => !rhs.is_negative(),
                Relation::Eq => rhs.is_zero(),
                Relation::Ge => !rhs.is_positive(),
            };
            if !ok {
                trivial_infeasible = true;
            }
            false
        } else {
            true
        }
    });
    if trivial_infeasible {
        return Ok(LpOutcome::Infeasible);
    }

    let mut tab = Tableau::build(num_cols, rows, obj);
    match tab.solve() {
        TabOutcome::Infeasible => Ok(LpOutcome::Infeasible),
        TabOutcome::Unbounded => Ok(LpOutcome::Unbounded),
        TabOutcome::Optimal => {
            let y = tab.point();
            let mut point = Vec::with_capacity(n);
            for m in &maps {
                point.push(match m {
                    VarMap::Shifted { col, lower } => lower + &y[*col],
                    VarMap::Reflected { col, upper } => upper - &y[*col],
                    VarMap::Split { pos, neg } => &y[*pos] - &y[*neg],
                    VarMap::Fixed(v) => v.clone(),
                });
            }
            let value: Rational = lp
                .objective
                .iter()
                .zip(&point)
                .map(|(c, x)| c * x)
                .sum();
            check_point(lp, &point);
            Ok(LpOutcome::Optimal { point, value })
        }
    }
}

// The optimum must satisfy the program exactly; a violation is a solver bug.
fn check_point(lp: &LinearProgram, point: &[Rational]) {
    for (i, c) in lp.constraints.iter().enumerate() {
        let lhs: Rational = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Eq => lhs == c.rhs,
            Relation::Ge => lhs >= c.rhs,
        };
        assert!(ok, "simplex returned a point violating constraint {i}");
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if let Some(l) = &b.lower {
            assert!(&point[j] >= l, "simplex point violates lower bound {j}");
        }
        if let Some(u) = &b.upper {
            assert!(&point[j] <= u, "simplex point violates upper bound {j}");
        }
    }
}

enum TabOutcome {
    Optimal,
    Infeasible,
    Unbounded,
}

struct Tableau {
    // rows[r][0..width] are structural+slack+artificial coefficients,
    // rows[r][width] is the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cost: Vec<Rational>,       // phase-2 reduced costs, last entry = -objective
    phase1: Vec<Rational>,     // phase-1 reduced costs
    num_structural: usize,     // structural (original) column count
    first_artificial: usize,   // columns >= this are artificial
    width: usize,              // total column count (excluding rhs)
}

impl Tableau {
    fn build(
        num_structural: usize,
        mut constraint_rows: Vec<(Vec<Rational>, Relation, Rational)>,
        objective: Vec<Rational>,
    ) -> Tableau {
        // slack / surplus columns
        let m = constraint_rows.len();
        let mut slack_cols = Vec::with_capacity(m);
        let mut width = num_structural;
        for (_, rel, _) in &constraint_rows {
            match rel {
                Relation::Le | Relation::Ge => {
                    slack_cols.push(Some(width));
                    width += 1;
                }
                Relation::Eq => slack_cols.push(None),
            }
        }
        // sign of each slack before rhs normalization
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut rhs_col = Vec::with_capacity(m);
        let mut slack_sign = Vec::with_capacity(m);
        for (i, (row, rel, rhs)) in constraint_rows.drain(..).enumerate() {
            let mut full = row;
            full.resize(width, Rational::zero());
            let sign = match rel {
                Relation::Le => 1,
                Relation::Ge => -1,
                Relation::Eq => 0,
            };
            if let Some(c) = slack_cols[i] {
                full[c] = if sign > 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
            }
            let negate = rhs.is_negative();
            if negate {
                for v in full.iter_mut() {
                    if !v.is_zero() {
                        *v = -std::mem::take(v);
                    }
                }
                rhs_col.push(-rhs);
                slack_sign.push(-sign);
            } else {
                rhs_col.push(rhs);
                slack_sign.push(sign);
            }
            rows.push(full);
        }

        // initial basis: positive slack where available, artificial otherwise
        let first_artificial = width;
        let mut basis = Vec::with_capacity(m);
        let mut artificial_rows = Vec::new();
        for i in 0..m {
            if slack_sign[i] > 0 {
                basis.push(slack_cols[i].unwrap());
            } else {
                artificial_rows.push(i);
                basis.push(usize::MAX); // patched below
            }
        }
        for (k, &r) in artificial_rows.iter().enumerate() {
            basis[r] = first_artificial + k;
        }
        let num_artificial = artificial_rows.len();
        width += num_artificial;
        for (r, row) in rows.iter_mut().enumerate() {
            row.resize(width, Rational::zero());
            if basis[r] >= first_artificial {
                row[basis[r]] = Rational::one();
            }
            row.push(rhs_col[r].clone());
        }

        // phase-2 reduced costs: initial basic vars all have zero cost
        let mut cost = objective;
        cost.resize(width, Rational::zero());
        cost.push(Rational::zero());

        // phase-1 reduced costs: c1(j) - sum over artificial-basic rows,
        // with c1 = 1 on artificial columns and 0 elsewhere
        let mut phase1 = vec![Rational::zero(); width + 1];
        for j in first_artificial..width {
            phase1[j] = Rational::one();
        }
        for r in 0..m {
            if basis[r] >= first_artificial {
                for j in 0..=width {
                    if !rows[r][j].is_zero() {
                        phase1[j] -= &rows[r][j];
                    }
                }
            }
        }

        Tableau {
            rows,
            basis,
            cost,
            phase1,
            num_structural,
            first_artificial,
            width,
        }
    }

    fn pivot(&mut self, prow: usize, pcol: usize) {
        let pivot = self.rows[prow][pcol].clone();
        debug_assert!(!pivot.is_zero());
        if pivot != Rational::one() {
            let inv = pivot.recip();
            for v in self.rows[prow].iter_mut() {
                if !v.is_zero() {
                    *v = std::mem::take(v) * &inv;
                }
            }
        }
        let prow_vals = self.rows[prow].clone();
        for r in 0..self.rows.len() {
            if r == prow {
                continue;
            }
            let factor = self.rows[r][pcol].clone();
            if factor.is_zero() {
                continue;
            }
            for (j, pv) in prow_vals.iter().enumerate() {
                if !pv.is_zero() {
                    let delta = &factor * pv;
                    self.rows[r][j] -= &delta;
                }
            }
        }
        for costs in [&mut self.cost, &mut self.phase1] {
            let factor = costs[pcol].clone();
            if factor.is_zero() {
                continue;
            }
            for (j, pv) in prow_vals.iter().enumerate() {
                if !pv.is_zero() {
                    let delta = &factor * pv;
                    costs[j] -= &delta;
                }
            }
        }
        self.basis[prow] = pcol;
    }

    // Bland's leaving rule: minimum ratio, ties broken by smallest basis var.
    fn leaving_row(&self, pcol: usize) -> Option<usize> {
        let rhs = self.width;
        let mut best: Option<(Rational, usize)> = None;
        for r in 0..self.rows.len() {
            let a = &self.rows[r][pcol];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rows[r][rhs] / a;
            match &best {
                Some((b, br)) => {
                    if &ratio < b || (&ratio == b && self.basis[r] < self.basis[*br]) {
                        best = Some((ratio, r));
                    }
                }
                None => best = Some((ratio, r)),
            }
        }
        best.map(|(_, r)| r)
    }

    fn run_phase(&mut self, phase_one: bool) -> bool {
        loop {
            // Bland's entering rule: first column with negative reduced cost.
            // Artificial columns never enter (basic columns have reduced
            // cost zero, so they are skipped automatically).
            let costs = if phase_one { &self.phase1 } else { &self.cost };
            let entering = (0..self.first_artificial).find(|&j| costs[j].is_negative());
            let Some(pcol) = entering else { return true };
            match self.leaving_row(pcol) {
                Some(prow) => self.pivot(prow, pcol),
                None => return false, // unbounded in this phase
            }
        }
    }

    fn solve(&mut self) -> TabOutcome {
        let has_artificials = self.width > self.first_artificial;
        if has_artificials {
            // Phase 1 minimizes the artificial sum, which is bounded below,
            // so the phase cannot be unbounded.
            let finished = self.run_phase(true);
            debug_assert!(finished);
            let p1_value = -self.phase1[self.width].clone();
            if p1_value.is_positive() {
                return TabOutcome::Infeasible;
            }
            self.evict_artificials();
        }
        if self.run_phase(false) {
            TabOutcome::Optimal
        } else {
            TabOutcome::Unbounded
        }
    }

    // After phase 1 any artificial still basic sits at value zero. Pivot it
    // out on some real column, or drop its row as redundant.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                let col = (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero());
                match col {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    fn point(&self) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.num_structural];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_structural {
                y[b] = self.rows[r][self.width].clone();
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn zero_objective_with_nonneg_var() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(0)]);
        lp.push_constraint(vec![r(1)], Relation::Ge, r(0));
        let out = lp_solve(&lp).unwrap();
        let (point, value) = out.optimal().expect("optimal");
        assert_eq!(point, vec![r(0)]);
        assert_eq!(value, r(0));
    }

    #[test]
    fn empty_feasible_set_is_infeasible() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(0)]);
        lp.push_constraint(vec![r(1)], Relation::Ge, r(0));
        lp.push_constraint(vec![r(1)], Relation::Le, r(-1));
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn width_mismatch_is_structural_error() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![r(1), r(2)]);
        lp.push_constraint(vec![r(1)], Relation::Le, r(3));
        assert!(matches!(
            lp_solve(&lp),
            Err(NumericsError::MalformedProgram(_))
        ));
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18, x,y >= 0 -> 36 at (2,6)
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(3), r(5)]);
        lp.set_nonneg(0);
        lp.set_nonneg(1);
        lp.push_constraint(vec![r(1), r(0)], Relation::Le, r(4));
        lp.push_constraint(vec![r(0), r(2)], Relation::Le, r(12));
        lp.push_constraint(vec![r(3), r(2)], Relation::Le, r(18));
        let (point, value) = lp_solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(value, r(36));
        assert_eq!(point, vec![r(2), r(6)]);
    }

    #[test]
    fn equality_and_free_variables() {
        // min x + y s.t. x + y = 2, x - y >= -1, free vars -> value 2
        let mut lp = LinearProgram::new(Sense::Minimize, vec![r(1), r(1)]);
        lp.push_constraint(vec![r(1), r(1)], Relation::Eq, r(2));
        lp.push_constraint(vec![r(1), r(-1)], Relation::Ge, r(-1));
        let (point, value) = lp_solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(value, r(2));
        assert_eq!(&point[0] + &point[1], r(2));
    }

    #[test]
    fn unbounded_detection() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1)]);
        lp.set_nonneg(0);
        lp.push_constraint(vec![r(-1)], Relation::Le, r(1));
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Beale's classic cycling example; Bland's rule must terminate.
        let mut lp = LinearProgram::new(
            Sense::Minimize,
            vec![rat(-3, 4), r(150), rat(-1, 50), r(6)],
        );
        for v in 0..4 {
            lp.set_nonneg(v);
        }
        lp.push_constraint(
            vec![rat(1, 4), r(-60), rat(-1, 25), r(9)],
            Relation::Le,
            r(0),
        );
        lp.push_constraint(
            vec![rat(1, 2), r(-90), rat(-1, 50), r(3)],
            Relation::Le,
            r(0),
        );
        lp.push_constraint(vec![r(0), r(0), r(1), r(0)], Relation::Le, r(1));
        let (_, value) = lp_solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(value, rat(-1, 20));
    }

    #[test]
    fn bounded_variables_map_back() {
        // max x + 2y with 1 <= x <= 3, y <= 5 (free below? no: y in [-2, 5])
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1), r(2)]);
        lp.set_bounds(0, Some(r(1)), Some(r(3)));
        lp.set_bounds(1, Some(r(-2)), Some(r(5)));
        lp.push_constraint(vec![r(1), r(1)], Relation::Le, r(6));
        let (point, value) = lp_solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(point, vec![r(1), r(5)]);
        assert_eq!(value, r(11));
    }

    #[test]
    fn upper_bounded_only_variable() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1)]);
        lp.set_bounds(0, None, Some(r(7)));
        let (point, value) = lp_solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(point, vec![r(7)]);
        assert_eq!(value, r(7));
    }

    #[test]
    fn fixed_variable() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![r(1), r(1)]);
        lp.set_bounds(0, Some(r(2)), Some(r(2)));
        lp.set_nonneg(1);
        lp.push_constraint(vec![r(1), r(1)], Relation::Ge, r(5));
        let (point, value) = lp_solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(point, vec![r(2), r(3)]);
        assert_eq!(value, r(5));
    }

    #[test]
    fn crossed_bounds_infeasible() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![r(1)]);
        lp.set_bounds(0, Some(r(3)), Some(r(1)));
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Infeasible);
    }
}
