//! Finite-alphabet probability types and the classical information quantities.
//!
//! Everything is measured in bits. `0 · log(0 / q)` is taken as zero; a
//! positive mass against a zero reference is an [`Error::AbsoluteContinuity`]
//! rather than an infinite value.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Tolerance used when validating that a probability vector sums to one.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// `log2(x)`, with `log2(0) = -inf`.
#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    x.log2()
}

/// Ordered set of events, optionally carrying a numeric position per event.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    labels: Vec<String>,
    values: Option<Vec<f64>>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        Self::build(labels, None)
    }

    pub fn with_values(labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        Self::build(labels, Some(values))
    }

    /// Alphabet labelled by the decimal rendering of each value.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let labels = values.iter().map(|v| format!("{v}")).collect();
        Self::build(labels, Some(values))
    }

    /// Integer positions `0..n`, labelled `"0"`, `"1"`, ...
    pub fn integers(n: usize) -> Result<Self> {
        Self::from_values((0..n).map(|i| i as f64).collect())
    }

    fn build(labels: Vec<String>, values: Option<Vec<f64>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must not be empty".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate label {label:?}")));
            }
        }
        if let Some(values) = &values {
            if values.len() != labels.len() {
                return Err(Error::DimensionMismatch {
                    expected: labels.len(),
                    found: values.len(),
                });
            }
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidAlphabet(format!("non-finite value {v}")));
            }
        }
        Ok(Self { labels, values })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> Option<&[f64]> {
        self.values.as_deref()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Probability vector over an ordered alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates nonnegativity and unit sum (within [`SUM_TOLERANCE`]), then
    /// renormalizes exactly.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_weights(&probs)?;
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self::renormalized(probs, sum))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegenerateWeights);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// Point mass on `index`.
    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, size: n });
        }
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Ok(Self { probs })
    }

    fn renormalized(mut probs: Vec<f64>, sum: f64) -> Self {
        if sum != 1.0 {
            probs.iter_mut().for_each(|p| *p /= sum);
        }
        Self { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.probs.iter().copied()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        -self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * log2(p))
            .sum::<f64>()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.probs[index]
    }
}

/// Conditional distribution `P(y | x)`, one row per input symbol, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    inputs: usize,
    outputs: usize,
    data: Vec<f64>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let inputs = rows.len();
        if inputs == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let outputs = rows[0].len();
        let mut data = Vec::with_capacity(inputs * outputs);
        for row in rows {
            if row.len() != outputs {
                return Err(Error::DimensionMismatch {
                    expected: outputs,
                    found: row.len(),
                });
            }
            data.extend(Distribution::new(row)?.into_vec());
        }
        Ok(Self {
            inputs,
            outputs,
            data,
        })
    }

    /// Every input maps to the same output distribution.
    pub fn constant(inputs: usize, output: &Distribution) -> Self {
        let data = (0..inputs).flat_map(|_| output.iter()).collect();
        Self {
            inputs,
            outputs: output.len(),
            data,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            inputs: n,
            outputs: n,
            data,
        }
    }

    /// Rows already known to be valid distributions (within rounding); each is
    /// renormalized exactly.
    pub(crate) fn from_raw(inputs: usize, outputs: usize, mut data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), inputs * outputs);
        for row in data.chunks_mut(outputs) {
            let sum: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= sum);
        }
        Self {
            inputs,
            outputs,
            data,
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.outputs..(i + 1) * self.outputs]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.outputs)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.outputs + j]
    }

    /// Output marginal `P(y_j) = Σ_i P(x_i) P(y_j | x_i)`.
    pub fn output_marginal(&self, source: &Distribution) -> Result<Distribution> {
        source.check_len(self.inputs)?;
        let mut out = vec![0.0; self.outputs];
        for (p, row) in source.iter().zip(self.rows()) {
            for (o, w) in out.iter_mut().zip(row) {
                *o += p * w;
            }
        }
        let sum = out.iter().sum();
        Ok(Distribution::renormalized(out, sum))
    }

    /// Joint `P(x_i, y_j)` as a row-major matrix.
    pub fn joint(&self, source: &Distribution) -> Result<Vec<Vec<f64>>> {
        source.check_len(self.inputs)?;
        Ok(source
            .iter()
            .zip(self.rows())
            .map(|(p, row)| row.iter().map(|w| p * w).collect())
            .collect())
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    for (index, &value) in weights.iter().enumerate() {
        if value < 0.0 || !value.is_finite() {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    Ok(())
}

/// Scales nonnegative weights to a probability vector.
pub fn normalize(weights: &[f64]) -> Result<Distribution> {
    check_weights(weights)?;
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return Err(Error::DegenerateWeights);
    }
    Ok(Distribution::renormalized(weights.to_vec(), sum))
}

/// Classical pointwise information `log2(posterior / prior)`.
///
/// Returns `f64::NEG_INFINITY` when the posterior is zero.
pub fn shannon_info(prior: f64, posterior: f64) -> Result<f64> {
    if prior.is_nan() || prior <= 0.0 {
        return Err(Error::UndefinedPrior);
    }
    if posterior.is_nan() || posterior < 0.0 {
        return Err(Error::InvalidWeight {
            index: 0,
            value: posterior,
        });
    }
    Ok(log2(posterior / prior))
}

/// `KL(p ‖ q)` in bits.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<f64> {
    q.check_len(p.len())?;
    let mut total = 0.0;
    for (index, (pi, qi)) in p.iter().zip(q.iter()).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::AbsoluteContinuity { index, mass: pi });
        }
        total += pi * log2(pi / qi);
    }
    Ok(total.max(0.0))
}

/// Cross-entropy `-Σ p log2 q` in bits.
pub fn cross_entropy(p: &Distribution, q: &Distribution) -> Result<f64> {
    q.check_len(p.len())?;
    let mut total = 0.0;
    for (index, (pi, qi)) in p.iter().zip(q.iter()).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::AbsoluteContinuity { index, mass: pi });
        }
        total -= pi * log2(qi);
    }
    Ok(total)
}

/// Shannon mutual information `I(X; Y)` of `source` through `channel`.
pub fn shannon_mutual_info(source: &Distribution, channel: &Channel) -> Result<f64> {
    let output = channel.output_marginal(source)?;
    let mut total = 0.0;
    for (p, row) in source.iter().zip(channel.rows()) {
        if p == 0.0 {
            continue;
        }
        for (&w, &py) in row.iter().zip(output.probs()) {
            if w > 0.0 {
                total += p * w * log2(w / py);
            }
        }
    }
    Ok(total.max(0.0))
}
