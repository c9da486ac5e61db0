//! Hidden and visible probabilistic choice over channel families.
//!
//! Hidden choice mixes channels entry-wise: the observer does not learn which
//! channel ran, so the matrices are summed with the mixing weights. Visible
//! choice reveals the chosen index: each matrix is scaled by its weight and
//! the results are concatenated over a disjoint-union output space whose
//! labels are `(y, i)` pairs.
//!
//! Scaled, non-stochastic matrices show up as intermediate terms inside the
//! associativity laws; [`WeightedMatrix`] carries those, and only the final
//! composed object has to validate as a channel again.

use thiserror::Error;

use crate::channel::{Channel, ChannelError, Label};
use crate::numerics::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChoiceError {
    #[error("family members do not all share the same channel type")]
    TypeMismatch,
    #[error("family members do not share the same input space")]
    IncompatibleInputs,
    #[error("mix has {got} weights for a family of {expected}")]
    IndexMismatch { expected: usize, got: usize },
    #[error("invalid mix: {0}")]
    InvalidMix(String),
    #[error("choice probability {0} is outside [0,1]")]
    ProbabilityOutOfRange(Rational),
    #[error("duplicate index label {0:?}")]
    DuplicateIndexLabel(String),
    #[error("empty channel family")]
    EmptyFamily,
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Whether every member shares the full type or only the input space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Shared inputs and shared outputs.
    SameType,
    /// Shared inputs only.
    Compatible,
}

/// An indexed family of channels over a common input space.
#[derive(Clone, Debug)]
pub struct ChannelFamily {
    index: Vec<String>,
    channels: Vec<Channel>,
    kind: FamilyKind,
}

impl ChannelFamily {
    /// Builds a family; members must at least share the input space. The
    /// kind is derived: it is [`FamilyKind::SameType`] when the outputs also
    /// agree.
    pub fn new(index: Vec<String>, channels: Vec<Channel>) -> Result<Self, ChoiceError> {
        if channels.is_empty() {
            return Err(ChoiceError::EmptyFamily);
        }
        if index.len() != channels.len() {
            return Err(ChoiceError::IndexMismatch {
                expected: channels.len(),
                got: index.len(),
            });
        }
        for (i, label) in index.iter().enumerate() {
            if index[..i].contains(label) {
                return Err(ChoiceError::DuplicateIndexLabel(label.clone()));
            }
        }
        let first = &channels[0];
        if !channels.iter().all(|c| c.compatible_with(first)) {
            return Err(ChoiceError::IncompatibleInputs);
        }
        let kind = if channels.iter().all(|c| c.same_type_as(first)) {
            FamilyKind::SameType
        } else {
            FamilyKind::Compatible
        };
        Ok(ChannelFamily {
            index,
            channels,
            kind,
        })
    }

    /// Family indexed `"1"`, `"2"`, ... in member order.
    pub fn numbered(channels: Vec<Channel>) -> Result<Self, ChoiceError> {
        let index = (1..=channels.len()).map(|i| i.to_string()).collect();
        ChannelFamily::new(index, channels)
    }

    pub fn index(&self) -> &[String] {
        &self.index
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }
}

/// Convex mixing coefficients, aligned positionally with a family's index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mix {
    weights: Vec<Rational>,
}

impl Mix {
    pub fn new(weights: Vec<Rational>) -> Result<Self, ChoiceError> {
        if weights.is_empty() {
            return Err(ChoiceError::InvalidMix("no weights".into()));
        }
        if weights.iter().any(Rational::is_negative) {
            return Err(ChoiceError::InvalidMix("negative weight".into()));
        }
        let sum: Rational = weights.iter().sum();
        if sum != Rational::one() {
            return Err(ChoiceError::InvalidMix(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Mix { weights })
    }

    /// The two-point mix `(p, 1-p)`; `p` must lie in `[0,1]`.
    pub fn binary(p: Rational) -> Result<Self, ChoiceError> {
        if !p.is_probability() {
            return Err(ChoiceError::ProbabilityOutOfRange(p));
        }
        let q = Rational::one() - &p;
        Ok(Mix {
            weights: vec![p, q],
        })
    }

    pub fn point(len: usize, at: usize) -> Self {
        assert!(at < len);
        let mut weights = vec![Rational::zero(); len];
        weights[at] = Rational::one();
        Mix { weights }
    }

    pub fn uniform(len: usize) -> Self {
        assert!(len > 0);
        Mix {
            weights: vec![Rational::new(1, len as i64); len],
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Product distribution on the index product, row-major in `self`.
    pub fn product(&self, other: &Mix) -> Mix {
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for a in &self.weights {
            for b in &other.weights {
                weights.push(a * b);
            }
        }
        Mix { weights }
    }
}

fn check_mix(family: &ChannelFamily, mix: &Mix) -> Result<(), ChoiceError> {
    if mix.len() != family.len() {
        return Err(ChoiceError::IndexMismatch {
            expected: family.len(),
            got: mix.len(),
        });
    }
    Ok(())
}

/// Hidden choice: the entry-wise mixture `sum_i mu(i) C_i`. Requires a family
/// whose members all share one type; the result has that type.
pub fn hidden_choice(family: &ChannelFamily, mix: &Mix) -> Result<Channel, ChoiceError> {
    if family.kind() != FamilyKind::SameType {
        return Err(ChoiceError::TypeMismatch);
    }
    check_mix(family, mix)?;
    let first = &family.channels()[0];
    let n_in = first.inputs().len();
    let n_out = first.outputs().len();
    let mut rows = vec![vec![Rational::zero(); n_out]; n_in];
    for (w, c) in mix.weights().iter().zip(family.channels()) {
        if w.is_zero() {
            continue;
        }
        for (x, row) in c.rows().iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    rows[x][y] += &(w * v);
                }
            }
        }
    }
    Ok(Channel::new(
        first.inputs().to_vec(),
        first.outputs().to_vec(),
        rows,
    )?)
}

/// Visible choice: scale each member by its weight and concatenate over the
/// disjoint union of output spaces; the output labels become `(y, i)` pairs.
pub fn visible_choice(family: &ChannelFamily, mix: &Mix) -> Result<Channel, ChoiceError> {
    check_mix(family, mix)?;
    let first = &family.channels()[0];
    let n_in = first.inputs().len();
    let mut outputs = Vec::new();
    let mut rows = vec![Vec::new(); n_in];
    for ((w, c), tag) in mix
        .weights()
        .iter()
        .zip(family.channels())
        .zip(family.index())
    {
        for y in c.outputs() {
            outputs.push(Label::tagged(y.clone(), tag.clone()));
        }
        for (x, row) in c.rows().iter().enumerate() {
            for v in row {
                rows[x].push(w * v);
            }
        }
    }
    Ok(Channel::new(first.inputs().to_vec(), outputs, rows)?)
}

/// Binary hidden choice `C1 (+)_p C2`.
pub fn binary_hidden(c1: &Channel, c2: &Channel, p: Rational) -> Result<Channel, ChoiceError> {
    let mix = Mix::binary(p)?;
    let family = ChannelFamily::numbered(vec![c1.clone(), c2.clone()])?;
    hidden_choice(&family, &mix)
}

/// Binary visible choice `C1 [+]_p C2`.
pub fn binary_visible(c1: &Channel, c2: &Channel, p: Rational) -> Result<Channel, ChoiceError> {
    let mix = Mix::binary(p)?;
    let family = ChannelFamily::numbered(vec![c1.clone(), c2.clone()])?;
    visible_choice(&family, &mix)
}

/// A scaled matrix over labeled spaces; rows need not sum to 1. These appear
/// as intermediate terms of the reassociation laws (for instance `1/q * C`),
/// and convert back to a [`Channel`] once the composition is complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMatrix {
    inputs: Vec<String>,
    outputs: Vec<Label>,
    rows: Vec<Vec<Rational>>,
}

impl WeightedMatrix {
    pub fn from_channel(c: &Channel) -> Self {
        WeightedMatrix {
            inputs: c.inputs().to_vec(),
            outputs: c.outputs().to_vec(),
            rows: c.rows().to_vec(),
        }
    }

    pub fn scale(&self, w: &Rational) -> Self {
        WeightedMatrix {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| w * v).collect())
                .collect(),
        }
    }

    /// Entry-wise `p * self + (1-p) * other`; both operands must share a type.
    pub fn hidden_with(&self, other: &WeightedMatrix, p: &Rational) -> Result<Self, ChoiceError> {
        if self.inputs != other.inputs || self.outputs != other.outputs {
            return Err(ChoiceError::TypeMismatch);
        }
        let q = Rational::one() - p;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(va, vb)| &(p * va) + &(&q * vb))
                    .collect()
            })
            .collect();
        Ok(WeightedMatrix {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            rows,
        })
    }

    /// Tagged concatenation `(p * self) <> ((1-p) * other)`.
    pub fn visible_with(&self, other: &WeightedMatrix, p: &Rational) -> Result<Self, ChoiceError> {
        if self.inputs != other.inputs {
            return Err(ChoiceError::IncompatibleInputs);
        }
        let q = Rational::one() - p;
        let left = self.scale(p);
        let right = other.scale(&q);
        let mut outputs: Vec<Label> = left
            .outputs
            .iter()
            .map(|y| Label::tagged(y.clone(), "1"))
            .collect();
        outputs.extend(right.outputs.iter().map(|y| Label::tagged(y.clone(), "2")));
        let rows = left
            .rows
            .iter()
            .zip(&right.rows)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Ok(WeightedMatrix {
            inputs: self.inputs.clone(),
            outputs,
            rows,
        })
    }

    /// Validates the accumulated composition as a channel.
    pub fn try_into_channel(self) -> Result<Channel, ChannelError> {
        Channel::new(self.inputs, self.outputs, self.rows)
    }
}
