//! Channels, priors, posterior decomposition and channel equivalence.
//!
//! A channel is a row-stochastic matrix from secrets to observables. Pushing
//! a prior through a channel yields a hyper: the output distribution together
//! with the posterior over secrets for each observable that can actually
//! occur. Two compatible channels are equivalent when they induce the same
//! vulnerability for every prior and measure; that holds iff each is a
//! stochastic post-processing of the other, which we decide with one exact
//! LP feasibility problem per direction.

use std::fmt;

use thiserror::Error;

use crate::numerics::{lp_solve, LinearProgram, LpOutcome, Rational, Relation, Sense};

/// An output label. Visible choice tags outputs with the index of the chosen
/// channel, so labels form pairs, nested under repeated composition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Name(String),
    Pair(Box<Label>, String),
}

impl Label {
    pub fn name(s: impl Into<String>) -> Self {
        Label::Name(s.into())
    }

    pub fn tagged(inner: Label, tag: impl Into<String>) -> Self {
        Label::Pair(Box::new(inner), tag.into())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Name(s) => write!(f, "{s}"),
            Label::Pair(inner, tag) => write!(f, "({inner},{tag})"),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChannelError {
    #[error("matrix is not rectangular: row {row} has {got} entries, expected {expected}")]
    NotRectangular {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("negative entry at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize },
    #[error("row {row} sums to {sum}, expected 1")]
    RowSumNotOne { row: usize, sum: Rational },
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("channels have incompatible input spaces")]
    IncompatibleInputs,
    #[error("invalid prior: {0}")]
    BadPrior(String),
}

/// A probability distribution over secret labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prior {
    labels: Vec<String>,
    probs: Vec<Rational>,
}

impl Prior {
    /// Requires the probabilities to be nonnegative and to sum to exactly 1.
    pub fn new(labels: Vec<String>, probs: Vec<Rational>) -> Result<Self, ChannelError> {
        if labels.len() != probs.len() {
            return Err(ChannelError::BadPrior(format!(
                "{} labels but {} probabilities",
                labels.len(),
                probs.len()
            )));
        }
        if labels.is_empty() {
            return Err(ChannelError::BadPrior("empty support".into()));
        }
        if let Some(i) = probs.iter().position(Rational::is_negative) {
            return Err(ChannelError::BadPrior(format!(
                "negative probability for {:?}",
                labels[i]
            )));
        }
        let sum: Rational = probs.iter().sum();
        if sum != Rational::one() {
            return Err(ChannelError::BadPrior(format!("sums to {sum}, expected 1")));
        }
        Ok(Prior { labels, probs })
    }

    /// Scales nonnegative weights with positive total mass to sum exactly 1.
    pub fn normalized(labels: Vec<String>, weights: Vec<Rational>) -> Result<Self, ChannelError> {
        let total: Rational = weights.iter().sum();
        if !total.is_positive() {
            return Err(ChannelError::BadPrior("total mass is not positive".into()));
        }
        let probs = weights.into_iter().map(|w| w / total.clone()).collect();
        Prior::new(labels, probs)
    }

    pub fn uniform(labels: Vec<String>) -> Self {
        let n = labels.len();
        assert!(n > 0, "uniform prior over empty set");
        let p = Rational::new(1, n as i64);
        Prior {
            labels,
            probs: vec![p; n],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn prob(&self, label: &str) -> Option<&Rational> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.probs[i])
    }
}

/// A row-stochastic matrix with labeled inputs (secrets) and outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Channel {
    inputs: Vec<String>,
    outputs: Vec<Label>,
    rows: Vec<Vec<Rational>>,
}

impl Channel {
    /// Validates and builds a channel: rectangular, entries nonnegative,
    /// every row summing to exactly 1.
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<Label>,
        rows: Vec<Vec<Rational>>,
    ) -> Result<Self, ChannelError> {
        if inputs.is_empty() || outputs.is_empty() {
            return Err(ChannelError::Dimension(
                "channel needs at least one input and one output".into(),
            ));
        }
        if rows.len() != inputs.len() {
            return Err(ChannelError::Dimension(format!(
                "{} rows for {} inputs",
                rows.len(),
                inputs.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != outputs.len() {
                return Err(ChannelError::NotRectangular {
                    row: i,
                    got: row.len(),
                    expected: outputs.len(),
                });
            }
            if let Some(j) = row.iter().position(Rational::is_negative) {
                return Err(ChannelError::NegativeEntry { row: i, col: j });
            }
            let sum: Rational = row.iter().sum();
            if sum != Rational::one() {
                return Err(ChannelError::RowSumNotOne { row: i, sum });
            }
        }
        Ok(Channel {
            inputs,
            outputs,
            rows,
        })
    }

    /// Builds a channel from string labels and rational literals; test and
    /// scenario convenience.
    pub fn from_literals(
        inputs: &[&str],
        outputs: &[&str],
        rows: &[&[&str]],
    ) -> Result<Self, ChannelError> {
        let parse_row = |row: &&[&str]| -> Result<Vec<Rational>, ChannelError> {
            row.iter()
                .map(|s| {
                    crate::numerics::rational_parse(s)
                        .map_err(|e| ChannelError::Dimension(e.to_string()))
                })
                .collect()
        };
        Channel::new(
            inputs.iter().map(|s| s.to_string()).collect(),
            outputs.iter().map(|s| Label::name(*s)).collect(),
            rows.iter().map(parse_row).collect::<Result<_, _>>()?,
        )
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Label] {
        &self.outputs
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn entry(&self, x: usize, y: usize) -> &Rational {
        &self.rows[x][y]
    }

    pub fn column(&self, y: usize) -> Vec<Rational> {
        self.rows.iter().map(|r| r[y].clone()).collect()
    }

    /// Same input list, in the same order.
    pub fn compatible_with(&self, other: &Channel) -> bool {
        self.inputs == other.inputs
    }

    /// Same input and output lists: the two matrices have the same type.
    pub fn same_type_as(&self, other: &Channel) -> bool {
        self.inputs == other.inputs && self.outputs == other.outputs
    }

    /// Appends one fresh all-zero output column. Applying it again appends a
    /// second fresh label, so repeated extension keeps adding zero columns.
    pub fn zero_column_extension(&self) -> Channel {
        let mut k = 0usize;
        let fresh = loop {
            let candidate = Label::name(format!("zero#{k}"));
            if !self.outputs.contains(&candidate) {
                break candidate;
            }
            k += 1;
        };
        let mut outputs = self.outputs.clone();
        outputs.push(fresh);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(Rational::zero());
                r
            })
            .collect();
        Channel {
            inputs: self.inputs.clone(),
            outputs,
            rows,
        }
    }
}

/// The hyper-distribution induced by a prior and a channel: the distribution
/// on observables, and for each observable with positive probability the
/// posterior on secrets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyper {
    outputs: Vec<Label>,
    outer: Vec<Rational>,
    posteriors: Vec<Prior>,
}

impl Hyper {
    /// Observables with positive outer probability, aligned with
    /// [`Hyper::outer`] and [`Hyper::posteriors`].
    pub fn outputs(&self) -> &[Label] {
        &self.outputs
    }

    pub fn outer(&self) -> &[Rational] {
        &self.outer
    }

    pub fn posteriors(&self) -> &[Prior] {
        &self.posteriors
    }
}

/// Joint decomposition: outer probabilities `p(y)` and posteriors `p(x|y)`.
/// Observables that cannot occur (`p(y) = 0`) are dropped.
pub fn push_prior(prior: &Prior, channel: &Channel) -> Result<Hyper, ChannelError> {
    if prior.labels() != channel.inputs() {
        return Err(ChannelError::IndexMismatch(
            "prior labels do not match channel inputs".into(),
        ));
    }
    let mut outputs = Vec::new();
    let mut outer = Vec::new();
    let mut posteriors = Vec::new();
    for (y, label) in channel.outputs().iter().enumerate() {
        let joint: Vec<Rational> = prior
            .probs()
            .iter()
            .zip(channel.rows())
            .map(|(p, row)| p * &row[y])
            .collect();
        let mass: Rational = joint.iter().sum();
        if !mass.is_positive() {
            continue;
        }
        let posterior = Prior::new(
            prior.labels().to_vec(),
            joint.into_iter().map(|j| j / mass.clone()).collect(),
        )?;
        outputs.push(label.clone());
        outer.push(mass);
        posteriors.push(posterior);
    }
    Ok(Hyper {
        outputs,
        outer,
        posteriors,
    })
}

/// The witness of one direction of the equivalence test: a stochastic
/// splitting of the source channel's columns that reassembles the target.
#[derive(Clone, Debug)]
pub struct DirectionWitness {
    /// `coefficients[y][j]` is the nonnegative weight with which source
    /// column `j` contributes to target column `y`; for each `j` the weights
    /// across all targets sum to exactly 1 (every source column is fully
    /// spent), and the weighted source columns reproduce each target column
    /// exactly.
    pub coefficients: Vec<Vec<Rational>>,
}

/// Which direction of the two-sided test failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Expressing the first channel in terms of the second.
    Forward,
    /// Expressing the second channel in terms of the first.
    Backward,
}

/// Why one direction admits no splitting.
#[derive(Clone, Debug)]
pub enum EquivalenceFailure {
    /// A target column is not even a nonnegative combination of the source
    /// columns, so no splitting can reach it.
    Column { direction: Direction, column: usize },
    /// Every target column is reachable in isolation, but no splitting
    /// matches all column masses simultaneously.
    MassImbalance { direction: Direction },
}

/// Outcome of the full two-directional equivalence test.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Splitting of the second channel's columns into the first, if any.
    pub forward: Option<DirectionWitness>,
    /// Splitting of the first channel's columns into the second, if any.
    pub backward: Option<DirectionWitness>,
    pub failure: Option<EquivalenceFailure>,
}

// target = source . R for a row-stochastic R >= 0, as one LP feasibility
// problem; the witness columns are R[., y].
fn garbling_witness(target: &Channel, source: &Channel) -> Option<Vec<Vec<Rational>>> {
    let num_t = target.outputs().len();
    let num_s = source.outputs().len();
    let num_vars = num_s * num_t;
    let var = |j: usize, y: usize| j * num_t + y;
    let mut lp = LinearProgram::new(Sense::Minimize, vec![Rational::zero(); num_vars]);
    for v in 0..num_vars {
        lp.set_nonneg(v);
    }
    for y in 0..num_t {
        for x in 0..target.inputs().len() {
            let mut row = vec![Rational::zero(); num_vars];
            for j in 0..num_s {
                row[var(j, y)] = source.entry(x, j).clone();
            }
            lp.push_constraint(row, Relation::Eq, target.entry(x, y).clone());
        }
    }
    for j in 0..num_s {
        let mut row = vec![Rational::zero(); num_vars];
        for y in 0..num_t {
            row[var(j, y)] = Rational::one();
        }
        lp.push_constraint(row, Relation::Eq, Rational::one());
    }
    match lp_solve(&lp).expect("well-formed feasibility program") {
        LpOutcome::Optimal { point, .. } => Some(
            (0..num_t)
                .map(|y| (0..num_s).map(|j| point[var(j, y)].clone()).collect())
                .collect(),
        ),
        _ => None,
    }
}

// Is the column a nonnegative combination of the source's columns at all?
// Used only to localize failures to a single witness column.
fn conic_member(column: &[Rational], source: &Channel) -> bool {
    let k = source.outputs().len();
    let mut lp = LinearProgram::new(Sense::Minimize, vec![Rational::zero(); k]);
    for j in 0..k {
        lp.set_nonneg(j);
    }
    for (x, target) in column.iter().enumerate() {
        lp.push_constraint(source.rows()[x].clone(), Relation::Eq, target.clone());
    }
    matches!(
        lp_solve(&lp).expect("well-formed feasibility program"),
        LpOutcome::Optimal { .. }
    )
}

fn direction_failure(target: &Channel, source: &Channel, direction: Direction) -> EquivalenceFailure {
    for y in 0..target.outputs().len() {
        if !conic_member(&target.column(y), source) {
            return EquivalenceFailure::Column {
                direction,
                column: y,
            };
        }
    }
    EquivalenceFailure::MassImbalance { direction }
}

/// Full equivalence test with witnesses. Two compatible channels induce the
/// same vulnerability for every prior and measure iff each is a stochastic
/// post-processing (garbling) of the other; each direction is one exact LP
/// feasibility problem over the splitting weights.
pub fn equivalence_report(c1: &Channel, c2: &Channel) -> Result<EquivalenceReport, ChannelError> {
    if !c1.compatible_with(c2) {
        return Err(ChannelError::IncompatibleInputs);
    }
    let forward = garbling_witness(c1, c2).map(|coefficients| DirectionWitness { coefficients });
    let failure = if forward.is_none() {
        Some(direction_failure(c1, c2, Direction::Forward))
    } else {
        None
    };
    let (backward, failure) = if forward.is_some() {
        let backward =
            garbling_witness(c2, c1).map(|coefficients| DirectionWitness { coefficients });
        let failure = if backward.is_none() {
            Some(direction_failure(c2, c1, Direction::Backward))
        } else {
            None
        };
        (backward, failure)
    } else {
        (None, failure)
    };
    Ok(EquivalenceReport {
        equivalent: forward.is_some() && backward.is_some(),
        forward,
        backward,
        failure,
    })
}

/// Decision form of [`equivalence_report`].
pub fn channels_equivalent(c1: &Channel, c2: &Channel) -> Result<bool, ChannelError> {
    Ok(equivalence_report(c1, c2)?.equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn c11() -> Channel {
        Channel::from_literals(
            &["0", "1"],
            &["0", "1"],
            &[&["1/3", "2/3"], &["2/3", "1/3"]],
        )
        .unwrap()
    }

    fn c00() -> Channel {
        Channel::from_literals(&["0", "1"], &["0", "1"], &[&["1", "0"], &["1", "0"]]).unwrap()
    }

    fn c01() -> Channel {
        Channel::from_literals(&["0", "1"], &["0", "1"], &[&["1", "0"], &["0", "1"]]).unwrap()
    }

    fn c10() -> Channel {
        Channel::from_literals(&["0", "1"], &["0", "1"], &[&["0", "1"], &["1", "0"]]).unwrap()
    }

    #[test]
    fn validation_accepts_stochastic_matrices() {
        assert!(Channel::from_literals(
            &["0", "1"],
            &["0", "1"],
            &[&["1/3", "2/3"], &["2/3", "1/3"]]
        )
        .is_ok());
        assert!(Channel::from_literals(&["0", "1"], &["0", "1"], &[&["1", "0"], &["0", "1"]])
            .is_ok());
    }

    #[test]
    fn validation_rejects_bad_rows() {
        let bad_sum = Channel::from_literals(&["0"], &["0", "1"], &[&["1/2", "2/5"]]);
        assert!(matches!(bad_sum, Err(ChannelError::RowSumNotOne { .. })));
        let negative =
            Channel::from_literals(&["0"], &["0", "1"], &[&["3/2", "-1/2"]]);
        assert!(matches!(negative, Err(ChannelError::NegativeEntry { .. })));
        let ragged = Channel::new(
            vec!["0".into()],
            vec![Label::name("0"), Label::name("1")],
            vec![vec![Rational::one()]],
        );
        assert!(matches!(ragged, Err(ChannelError::NotRectangular { .. })));
    }

    #[test]
    fn push_prior_identity_gives_point_posteriors() {
        let pi = Prior::uniform(vec!["0".into(), "1".into()]);
        let hyper = push_prior(&pi, &c01()).unwrap();
        assert_eq!(hyper.outer(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(hyper.posteriors()[0].probs(), &[rat(1, 1), rat(0, 1)]);
        assert_eq!(hyper.posteriors()[1].probs(), &[rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn push_prior_drops_impossible_outputs() {
        let pi = Prior::uniform(vec!["0".into(), "1".into()]);
        let hyper = push_prior(&pi, &c00()).unwrap();
        assert_eq!(hyper.outputs().len(), 1);
        assert_eq!(hyper.outer(), &[rat(1, 1)]);
        // a non-interferent channel leaves the prior untouched
        assert_eq!(hyper.posteriors()[0], pi);
    }

    #[test]
    fn push_prior_conserves_marginals() {
        let pi = Prior::new(
            vec!["0".into(), "1".into()],
            vec![rat(1, 4), rat(3, 4)],
        )
        .unwrap();
        let hyper = push_prior(&pi, &c11()).unwrap();
        for (x, want) in pi.probs().iter().enumerate() {
            let got: Rational = hyper
                .outer()
                .iter()
                .zip(hyper.posteriors())
                .map(|(p, post)| p * &post.probs()[x])
                .sum();
            assert_eq!(&got, want);
        }
    }

    #[test]
    fn push_prior_checks_indexing() {
        let pi = Prior::uniform(vec!["a".into(), "b".into()]);
        assert!(matches!(
            push_prior(&pi, &c11()),
            Err(ChannelError::IndexMismatch(_))
        ));
    }

    #[test]
    fn zero_column_extension_appends_fresh_zero() {
        let ext = c01().zero_column_extension();
        assert_eq!(ext.outputs().len(), 3);
        assert_eq!(ext.column(2), vec![rat(0, 1), rat(0, 1)]);
        let ext2 = ext.zero_column_extension();
        assert_eq!(ext2.outputs().len(), 4);
        assert_eq!(ext2.column(3), vec![rat(0, 1), rat(0, 1)]);
        assert_ne!(ext2.outputs()[2], ext2.outputs()[3]);
    }

    #[test]
    fn equivalence_is_reflexive() {
        for c in [c00(), c01(), c10(), c11()] {
            assert!(channels_equivalent(&c, &c).unwrap());
        }
    }

    #[test]
    fn noninterferent_differs_from_identity() {
        let report = equivalence_report(&c00(), &c01()).unwrap();
        assert!(!report.equivalent);
        // the constant channel is a garbling of the identity, not vice versa
        assert!(report.forward.is_some());
        assert!(report.backward.is_none());
        match report.failure {
            Some(EquivalenceFailure::Column {
                direction: Direction::Backward,
                column: 0,
            }) => {}
            other => panic!("unexpected failure report: {other:?}"),
        }
    }

    #[test]
    fn column_permutation_is_equivalent() {
        let report = equivalence_report(&c01(), &c10()).unwrap();
        assert!(report.equivalent);
        // the splitting is the pure permutation: point-mass weights
        let w = report.forward.unwrap().coefficients;
        for row in &w {
            assert_eq!(row.iter().cloned().sum::<Rational>(), Rational::one());
            assert!(row.iter().all(|x| x.is_zero() || x == &Rational::one()));
        }
        assert_eq!(w[0][1], Rational::one());
        assert_eq!(w[1][0], Rational::one());
    }

    #[test]
    fn self_mixing_is_equivalent_to_the_channel() {
        // the halved duplicate-column channel defeats any per-column convex
        // test but is a mutual garbling of the original
        let c = c01();
        let doubled = Channel::from_literals(
            &["0", "1"],
            &["a", "b", "c", "d"],
            &[&["1/2", "0", "1/2", "0"], &["0", "1/2", "0", "1/2"]],
        )
        .unwrap();
        assert!(channels_equivalent(&c, &doubled).unwrap());
    }

    #[test]
    fn mass_mismatch_is_not_equivalent() {
        // same posterior directions, different weights
        let c1 = c01();
        let c2 = Channel::from_literals(
            &["0", "1"],
            &["a", "b", "c"],
            &[&["1/2", "0", "1/2"], &["0", "1/2", "1/2"]],
        )
        .unwrap();
        let report = equivalence_report(&c1, &c2).unwrap();
        assert!(!report.equivalent);
    }

    #[test]
    fn equivalence_requires_compatibility() {
        let other = Channel::from_literals(&["a", "b"], &["0", "1"], &[&["1", "0"], &["0", "1"]])
            .unwrap();
        assert!(matches!(
            channels_equivalent(&c01(), &other),
            Err(ChannelError::IncompatibleInputs)
        ));
    }

    #[test]
    fn prior_construction_rules() {
        assert!(Prior::new(vec!["x".into()], vec![rat(1, 1)]).is_ok());
        assert!(Prior::new(vec!["x".into(), "y".into()], vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(Prior::new(vec!["x".into()], vec![rat(-1, 1)]).is_err());
        let p = Prior::normalized(
            vec!["x".into(), "y".into()],
            vec![rat(2, 1), rat(6, 1)],
        )
        .unwrap();
        assert_eq!(p.probs(), &[rat(1, 4), rat(3, 4)]);
    }
}
