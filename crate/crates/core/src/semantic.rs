//! Truth functions, their Bayesian inversion against a prior, and the
//! generalized information they convey.
//!
//! A message `y_j` is represented by its truth function `Q(A_j | x)`, the
//! membership degree of each event in the fuzzy set `A_j`. Inverting it against
//! a prior `P(x)` gives the semantic posterior
//!
//! ```text
//! Q(x_i | A_j) = Q(A_j | x_i) P(x_i) / Q(A_j),    Q(A_j) = Σ_i P(x_i) Q(A_j | x_i)
//! ```
//!
//! and the generalized information `I(x_i; y_j) = log2[Q(A_j | x_i) / Q(A_j)]`.
//!
//! Pointwise values are reported unclamped: a zero degree yields
//! `f64::NEG_INFINITY`, i.e. the message is falsified by that event. Averaged
//! quantities go through a [`Clamp`] that floors degrees at a small epsilon so
//! that they stay finite.

use crate::error::{Error, Result};
use crate::prob::{log2, Alphabet, Distribution};

/// Default floor applied to truth degrees inside averaged formulas.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Parameters of a Gaussian truth function `exp(-(v - center)^2 / (2 width^2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub center: f64,
    pub width: f64,
    positions: Vec<f64>,
}

impl Gaussian {
    /// Alphabet positions the degrees were evaluated at.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Natural-log exponent `-(v_i - center)^2 / (2 width^2)` at event `i`.
    pub fn exponent(&self, i: usize) -> f64 {
        let z = self.positions[i] - self.center;
        -z * z / (2.0 * self.width * self.width)
    }
}

/// Membership degrees `Q(A_j | x_i) ∈ [0, 1]` of one message.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthFunction {
    degrees: Vec<f64>,
    gaussian: Option<Gaussian>,
}

impl TruthFunction {
    pub fn new(degrees: Vec<f64>) -> Result<Self> {
        for (index, &value) in degrees.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidDegree { index, value });
            }
        }
        if !degrees.iter().any(|&d| d > 0.0) {
            return Err(Error::EmptyTruthFunction);
        }
        Ok(Self {
            degrees,
            gaussian: None,
        })
    }

    /// Every event has the same degree `c`; a tautology when `c = 1`.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn gaussian(&self) -> Option<&Gaussian> {
        self.gaussian.as_ref()
    }
}

/// Gaussian truth function over the numeric values of `alphabet`.
///
/// Degrees that underflow to zero are floored at the smallest normal `f64`, so
/// a center far outside the alphabet still yields a valid (if nearly empty)
/// truth function.
pub fn gaussian_truth(alphabet: &Alphabet, center: f64, width: f64) -> Result<TruthFunction> {
    let values = alphabet.values().ok_or(Error::MissingValues)?;
    gaussian_over(values, center, width)
}

pub(crate) fn gaussian_over(values: &[f64], center: f64, width: f64) -> Result<TruthFunction> {
    if width <= 0.0 || !width.is_finite() {
        return Err(Error::InvalidWidth(width));
    }
    if !center.is_finite() {
        return Err(Error::InvalidParameter(format!("center {center}")));
    }
    let gaussian = Gaussian {
        center,
        width,
        positions: values.to_vec(),
    };
    let degrees = (0..values.len())
        .map(|i| gaussian.exponent(i).exp().max(f64::MIN_POSITIVE))
        .collect();
    Ok(TruthFunction {
        degrees,
        gaussian: Some(gaussian),
    })
}

/// Ordered message set sharing one event alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticChannel {
    messages: Vec<TruthFunction>,
}

impl SemanticChannel {
    pub fn new(messages: Vec<TruthFunction>) -> Result<Self> {
        let first = messages.first().ok_or(Error::EmptyCandidates)?;
        let n = first.len();
        if let Some(bad) = messages.iter().find(|t| t.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self { messages })
    }

    pub fn messages(&self) -> &[TruthFunction] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Size of the shared event alphabet.
    pub fn events(&self) -> usize {
        self.messages[0].len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TruthFunction> {
        self.messages.iter()
    }
}

fn check_shared(prior: &Distribution, truth: &TruthFunction) -> Result<()> {
    if prior.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: prior.len(),
            found: truth.len(),
        });
    }
    Ok(())
}

fn weighted_degree(prior: &Distribution, degrees: impl Iterator<Item = f64>) -> f64 {
    prior.iter().zip(degrees).map(|(p, d)| p * d).sum()
}

/// Logical probability `Q(A_j) = Σ_i P(x_i) Q(A_j | x_i)`.
pub fn logical_probability(prior: &Distribution, truth: &TruthFunction) -> Result<f64> {
    check_shared(prior, truth)?;
    let q = weighted_degree(prior, truth.degrees.iter().copied());
    if q > 0.0 {
        Ok(q)
    } else {
        Err(Error::NullLogicalProbability { message: None })
    }
}

/// Semantic posterior `Q(x | A_j)`.
pub fn semantic_posterior(prior: &Distribution, truth: &TruthFunction) -> Result<Distribution> {
    let q = logical_probability(prior, truth)?;
    posterior_with(prior, truth.degrees.iter().copied(), q)
}

fn posterior_with(
    prior: &Distribution,
    degrees: impl Iterator<Item = f64>,
    logical: f64,
) -> Result<Distribution> {
    let probs: Vec<f64> = prior
        .iter()
        .zip(degrees)
        .map(|(p, d)| d * p / logical)
        .collect();
    crate::prob::normalize(&probs)
}

/// Generalized information `log2[Q(A_j | x_i) / Q(A_j)]` of message `truth`
/// about event `event`.
///
/// Returns `f64::NEG_INFINITY` when the message is false of the event.
pub fn semantic_info(prior: &Distribution, truth: &TruthFunction, event: usize) -> Result<f64> {
    check_event(prior, event)?;
    let q = logical_probability(prior, truth)?;
    Ok(log2(truth.degrees[event] / q))
}

fn check_event(prior: &Distribution, event: usize) -> Result<()> {
    if event >= prior.len() {
        return Err(Error::IndexOutOfRange {
            index: event,
            size: prior.len(),
        });
    }
    if prior[event].is_nan() || prior[event] <= 0.0 {
        return Err(Error::UndefinedPrior);
    }
    Ok(())
}

/// Closed form of [`semantic_info`] for a Gaussian truth function: the
/// squared-error term in bits minus `log2 Q(A_j)`.
pub fn semantic_info_gaussian(
    prior: &Distribution,
    truth: &TruthFunction,
    event: usize,
) -> Result<f64> {
    let gaussian = truth.gaussian().ok_or(Error::ClosedFormUnavailable)?;
    check_event(prior, event)?;
    let q = logical_probability(prior, truth)?;
    Ok(gaussian.exponent(event) / std::f64::consts::LN_2 - log2(q))
}

/// Outcome of a sentence selection: the winning index and every candidate's
/// score in bits. Inadmissible candidates score `f64::NEG_INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub scores: Vec<f64>,
}

/// Degree floor used by every averaged formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clamp {
    epsilon: f64,
}

impl Default for Clamp {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl Clamp {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn degree(&self, d: f64) -> f64 {
        d.clamp(self.epsilon, 1.0)
    }

    pub fn degrees<'a>(&'a self, truth: &'a TruthFunction) -> impl Iterator<Item = f64> + 'a {
        truth.degrees.iter().map(move |&d| self.degree(d))
    }

    /// Logical probability computed from clamped degrees.
    pub fn logical_probability(&self, prior: &Distribution, truth: &TruthFunction) -> Result<f64> {
        check_shared(prior, truth)?;
        let q = weighted_degree(prior, self.degrees(truth));
        if q > 0.0 {
            Ok(q)
        } else {
            Err(Error::NullLogicalProbability { message: None })
        }
    }

    /// Semantic posterior computed from clamped degrees.
    pub fn posterior(&self, prior: &Distribution, truth: &TruthFunction) -> Result<Distribution> {
        let q = self.logical_probability(prior, truth)?;
        posterior_with(prior, self.degrees(truth), q)
    }

    /// Generalized Kullback score `Σ_i P(x_i | z) log2[Q(A_j | x_i) / Q(A_j)]`
    /// of one message against an evidence distribution `P(x | z)`.
    pub fn generalized_kullback(
        &self,
        evidence: &Distribution,
        prior: &Distribution,
        truth: &TruthFunction,
    ) -> Result<f64> {
        evidence.check_len(prior.len())?;
        let q = self.logical_probability(prior, truth)?;
        Ok(evidence
            .iter()
            .zip(self.degrees(truth))
            .filter(|&(e, _)| e > 0.0)
            .map(|(e, d)| e * log2(d / q))
            .sum())
    }

    /// Cross-entropy of the evidence against the semantic posterior,
    /// `-Σ_i P(x_i | z) log2 Q(x_i | A_j)`.
    pub fn generalized_cond_entropy(
        &self,
        evidence: &Distribution,
        prior: &Distribution,
        truth: &TruthFunction,
    ) -> Result<f64> {
        evidence.check_len(prior.len())?;
        let posterior = self.posterior(prior, truth)?;
        crate::prob::cross_entropy(evidence, &posterior)
    }

    /// Picks the candidate with the largest generalized Kullback score; ties
    /// go to the lowest index.
    pub fn select_best(
        &self,
        candidates: &SemanticChannel,
        evidence: &Distribution,
        prior: &Distribution,
    ) -> Result<Selection> {
        let mut scores = Vec::with_capacity(candidates.len());
        let mut best: Option<(usize, f64)> = None;
        for (j, truth) in candidates.iter().enumerate() {
            let score = match self.generalized_kullback(evidence, prior, truth) {
                Ok(score) => score,
                Err(Error::NullLogicalProbability { .. }) => f64::NEG_INFINITY,
                Err(e) => return Err(e),
            };
            if score.is_finite() && best.is_none_or(|(_, b)| score > b) {
                best = Some((j, score));
            }
            scores.push(score);
        }
        let (index, _) = best.ok_or(Error::NoAdmissibleCandidate)?;
        Ok(Selection { index, scores })
    }

    /// Selection where the evidence is the semantic posterior of a source
    /// message, as when translating one sentence into another language.
    pub fn translate_select(
        &self,
        source_truth: &TruthFunction,
        prior: &Distribution,
        candidates: &SemanticChannel,
    ) -> Result<Selection> {
        let evidence = semantic_posterior(prior, source_truth)?;
        self.select_best(candidates, &evidence, prior)
    }
}

/// [`Clamp::generalized_kullback`] with the default epsilon.
pub fn generalized_kullback(
    evidence: &Distribution,
    prior: &Distribution,
    truth: &TruthFunction,
) -> Result<f64> {
    Clamp::default().generalized_kullback(evidence, prior, truth)
}

/// [`Clamp::generalized_cond_entropy`] with the default epsilon.
pub fn generalized_cond_entropy(
    evidence: &Distribution,
    prior: &Distribution,
    truth: &TruthFunction,
) -> Result<f64> {
    Clamp::default().generalized_cond_entropy(evidence, prior, truth)
}

/// [`Clamp::select_best`] with the default epsilon.
pub fn select_best(
    candidates: &SemanticChannel,
    evidence: &Distribution,
    prior: &Distribution,
) -> Result<Selection> {
    Clamp::default().select_best(candidates, evidence, prior)
}

/// [`Clamp::translate_select`] with the default epsilon.
pub fn translate_select(
    source_truth: &TruthFunction,
    prior: &Distribution,
    candidates: &SemanticChannel,
) -> Result<Selection> {
    Clamp::default().translate_select(source_truth, prior, candidates)
}
