//! Generalized mutual information and the four generalized entropies of a
//! communication system whose receiver interprets messages through truth
//! functions and forecasts events with a subjective prior.
//!
//! ```text
//! H(X)   = -Σ_i P(x_i) log2 Q(x_i)                    forecasting entropy
//! H(X|Y) = -Σ_ij P(x_i, y_j) log2 Q(x_i | A_j)        posterior forecasting entropy
//! H(Y)   = -Σ_j P(y_j) log2 Q(A_j)                    generalized entropy
//! H(Y|X) = -Σ_ij P(x_i, y_j) log2 Q(A_j | x_i)        fuzzy entropy
//! I(X;Y) =  Σ_ij P(x_i, y_j) log2[Q(x_i | A_j) / Q(x_i)]
//! ```
//!
//! Semantic posteriors and logical probabilities are taken against the
//! objective source `P`, while the forecasting terms use `Q`. As a result
//! `[H(X) - H(X|Y)] - [H(Y) - H(Y|X)] = KL(P ‖ Q)`, and the two differences
//! coincide only when the forecast matches the source.

use crate::error::{Error, Result};
use crate::prob::{log2, Channel, Distribution};
use crate::semantic::{Clamp, SemanticChannel};

/// Objective source, subjective forecast, Shannon channel and message meanings.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticSystem {
    source: Distribution,
    forecast: Distribution,
    channel: Channel,
    semantics: SemanticChannel,
    clamp: Clamp,
}

/// All generalized quantities of one system, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedEntropies {
    pub forecasting: f64,
    pub posterior_forecasting: f64,
    pub generalized: f64,
    pub fuzzy: f64,
    pub mutual_info: f64,
}

impl GeneralizedEntropies {
    /// `[H(X) - H(X|Y)] - [H(Y) - H(Y|X)]`.
    pub fn kl_gap(&self) -> f64 {
        (self.forecasting - self.posterior_forecasting) - (self.generalized - self.fuzzy)
    }
}

impl SemanticSystem {
    pub fn new(
        source: Distribution,
        forecast: Distribution,
        channel: Channel,
        semantics: SemanticChannel,
    ) -> Result<Self> {
        let n = source.len();
        forecast.check_len(n)?;
        if channel.inputs() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: channel.inputs(),
            });
        }
        if semantics.events() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: semantics.events(),
            });
        }
        if channel.outputs() != semantics.len() {
            return Err(Error::DimensionMismatch {
                expected: semantics.len(),
                found: channel.outputs(),
            });
        }
        for (index, (p, q)) in source.iter().zip(forecast.iter()).enumerate() {
            if p > 0.0 && q == 0.0 {
                return Err(Error::AbsoluteContinuity { index, mass: p });
            }
        }
        Ok(Self {
            source,
            forecast,
            channel,
            semantics,
            clamp: Clamp::default(),
        })
    }

    /// Same system with the forecast equal to the source.
    pub fn objective(
        source: Distribution,
        channel: Channel,
        semantics: SemanticChannel,
    ) -> Result<Self> {
        Self::new(source.clone(), source, channel, semantics)
    }

    pub fn with_clamp(mut self, clamp: Clamp) -> Self {
        self.clamp = clamp;
        self
    }

    pub fn source(&self) -> &Distribution {
        &self.source
    }

    pub fn forecast(&self) -> &Distribution {
        &self.forecast
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn semantics(&self) -> &SemanticChannel {
        &self.semantics
    }

    /// Output marginal `P(y_j)`, always derived from source and channel.
    pub fn output(&self) -> Distribution {
        self.channel
            .output_marginal(&self.source)
            .expect("dimensions checked on construction")
    }

    fn logical_probabilities(&self) -> Result<Vec<f64>> {
        self.semantics
            .iter()
            .enumerate()
            .map(|(j, t)| {
                self.clamp
                    .logical_probability(&self.source, t)
                    .map_err(|e| with_message(e, j))
            })
            .collect()
    }

    /// Sums `P(x_i, y_j) · term(i, j)` over the joint support.
    fn joint_sum(&self, mut term: impl FnMut(usize, usize) -> f64) -> f64 {
        let mut total = 0.0;
        for (i, (p, row)) in self.source.iter().zip(self.channel.rows()).enumerate() {
            for (j, &w) in row.iter().enumerate() {
                let pxy = p * w;
                if pxy > 0.0 {
                    total += pxy * term(i, j);
                }
            }
        }
        total
    }

    /// `-Σ_i P(x_i) log2 Q(x_i)`.
    pub fn forecasting_entropy(&self) -> Result<f64> {
        crate::prob::cross_entropy(&self.source, &self.forecast)
    }

    /// `-Σ_ij P(x_i, y_j) log2 Q(x_i | A_j)`.
    pub fn posterior_forecasting_entropy(&self) -> Result<f64> {
        let logical = self.logical_probabilities()?;
        let log_post = self.log_posteriors(&logical);
        Ok(-self.joint_sum(|i, j| log_post[j][i]))
    }

    /// `-Σ_j P(y_j) log2 Q(A_j)`.
    pub fn generalized_entropy_y(&self) -> Result<f64> {
        let logical = self.logical_probabilities()?;
        Ok(-self
            .output()
            .iter()
            .zip(&logical)
            .filter(|&(p, _)| p > 0.0)
            .map(|(p, q)| p * log2(*q))
            .sum::<f64>())
    }

    /// `-Σ_ij P(x_i, y_j) log2 Q(A_j | x_i)` with clamped degrees.
    pub fn fuzzy_entropy(&self) -> Result<f64> {
        let clamp = self.clamp;
        let messages = self.semantics.messages();
        Ok(-self.joint_sum(|i, j| log2(clamp.degree(messages[j].degrees()[i]))))
    }

    /// `Σ_ij P(x_i, y_j) log2[Q(x_i | A_j) / Q(x_i)]`.
    pub fn generalized_mutual_info(&self) -> Result<f64> {
        let logical = self.logical_probabilities()?;
        let log_post = self.log_posteriors(&logical);
        let forecast = self.forecast.probs();
        Ok(self.joint_sum(|i, j| log_post[j][i] - log2(forecast[i])))
    }

    /// All five quantities at once.
    pub fn entropies(&self) -> Result<GeneralizedEntropies> {
        Ok(GeneralizedEntropies {
            forecasting: self.forecasting_entropy()?,
            posterior_forecasting: self.posterior_forecasting_entropy()?,
            generalized: self.generalized_entropy_y()?,
            fuzzy: self.fuzzy_entropy()?,
            mutual_info: self.generalized_mutual_info()?,
        })
    }

    /// `log2 Q(x_i | A_j)` indexed `[j][i]`, from clamped degrees against `P`.
    fn log_posteriors(&self, logical: &[f64]) -> Vec<Vec<f64>> {
        self.semantics
            .iter()
            .zip(logical)
            .map(|(t, &q)| {
                self.source
                    .iter()
                    .zip(self.clamp.degrees(t))
                    .map(|(p, d)| log2(d * p / q))
                    .collect()
            })
            .collect()
    }
}

fn with_message(e: Error, j: usize) -> Error {
    match e {
        Error::NullLogicalProbability { .. } => Error::NullLogicalProbability { message: Some(j) },
        other => other,
    }
}
