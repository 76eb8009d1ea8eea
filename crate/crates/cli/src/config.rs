//! TOML config documents and their conversion into validated domain objects.
//!
//! Malformed documents (syntax, unknown keys, wrong types, missing sections)
//! are parse errors; well-formed documents that break a domain invariant are
//! validation errors naming the offending field.

use std::path::Path;

use geninfo_core::experiments::{
    discrimination_semantics, graylevel_source, Prediction, StockConfig,
};
use geninfo_core::{
    gaussian_truth, Alphabet, Channel, Clamp, DistortionMatrix, Distribution, PayoffMatrix,
    SemanticChannel, TruthFunction,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// Slope grid, either explicit or as `"start:stop:count"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Range(String),
    Values(Vec<f64>),
}

impl GridSpec {
    pub fn resolve(&self) -> Result<Vec<f64>, CliError> {
        match self {
            GridSpec::Range(text) => parse_range(text),
            GridSpec::Values(values) => Ok(values.clone()),
        }
    }
}

/// Parses `"start:stop:count"` into `count` evenly spaced values.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Parse(format!("grid {text:?}: expected \"start:stop:count\""));
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect())
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetSpec {
    pub labels: Option<Vec<String>>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    pub center: f64,
    pub width: f64,
}

/// A truth function: explicit degrees or a Gaussian over the alphabet values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthSpec {
    pub label: Option<String>,
    pub degrees: Option<Vec<f64>>,
    pub gaussian: Option<GaussianSpec>,
}

impl TruthSpec {
    fn build(&self, alphabet: &Alphabet, path: &str) -> Result<TruthFunction, CliError> {
        let truth = match (&self.degrees, self.gaussian) {
            (Some(d), None) => TruthFunction::new(d.clone()),
            (None, Some(g)) => gaussian_truth(alphabet, g.center, g.width),
            _ => {
                return Err(CliError::Parse(format!(
                    "{path}: exactly one of `degrees` or `gaussian` is required"
                )))
            }
        }
        .map_err(|e| CliError::field(path, e))?;
        if truth.len() != alphabet.len() {
            return Err(CliError::field(
                path,
                format!(
                    "{} degrees for an alphabet of {}",
                    truth.len(),
                    alphabet.len()
                ),
            ));
        }
        Ok(truth)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrayLevelSpec {
    pub k: u32,
    pub d: f64,
}

/// Document read by every subcommand except `experiment`. Each subcommand
/// uses the keys it needs and reports the first missing one.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub alphabet: Option<AlphabetSpec>,
    pub prior: Option<Vec<f64>>,
    pub evidence: Option<Vec<f64>>,
    pub forecast: Option<Vec<f64>>,
    pub channel: Option<Vec<Vec<f64>>>,
    pub messages: Option<Vec<TruthSpec>>,
    pub source_truth: Option<TruthSpec>,
    /// Label of a single event for `info`.
    pub event: Option<String>,
    pub payoff: Option<Vec<Vec<f64>>>,
    pub distortion: Option<Vec<Vec<f64>>>,
    pub graylevel: Option<GrayLevelSpec>,
    pub s_grid: Option<GridSpec>,
    pub epsilon: Option<f64>,
    pub max_iter: Option<usize>,
}

fn required<'a, T>(value: &'a Option<T>, key: &str) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Parse(format!("missing required key `{key}`")))
}

pub fn distribution(values: &[f64], path: &str) -> Result<Distribution, CliError> {
    Distribution::new(values.to_vec()).map_err(|e| CliError::field(path, e))
}

impl Document {
    /// Event alphabet; integer positions `0..n` when the document has none.
    pub fn alphabet(&self, n: usize) -> Result<Alphabet, CliError> {
        let spec = self.alphabet.clone().unwrap_or_default();
        let alphabet = match (spec.labels, spec.values) {
            (Some(labels), Some(values)) => Alphabet::with_values(labels, values),
            (Some(labels), None) => Alphabet::new(labels),
            (None, Some(values)) => Alphabet::from_values(values),
            (None, None) => Alphabet::integers(n),
        }
        .map_err(|e| CliError::field("alphabet", e))?;
        if alphabet.len() != n {
            return Err(CliError::field(
                "alphabet",
                format!("{} events but distributions have {n}", alphabet.len()),
            ));
        }
        Ok(alphabet)
    }

    pub fn prior(&self) -> Result<Distribution, CliError> {
        distribution(required(&self.prior, "prior")?, "prior")
    }

    pub fn evidence(&self, n: usize) -> Result<Distribution, CliError> {
        let evidence = distribution(required(&self.evidence, "evidence")?, "evidence")?;
        same_len(evidence, n, "evidence")
    }

    /// Subjective forecast, the prior when absent.
    pub fn forecast(&self, prior: &Distribution) -> Result<Distribution, CliError> {
        match &self.forecast {
            Some(f) => same_len(distribution(f, "forecast")?, prior.len(), "forecast"),
            None => Ok(prior.clone()),
        }
    }

    pub fn channel(&self) -> Result<Channel, CliError> {
        Channel::new(required(&self.channel, "channel")?.clone())
            .map_err(|e| CliError::field("channel", e))
    }

    /// Messages with their labels (`y0`, `y1`, ... when unlabelled).
    pub fn messages(
        &self,
        alphabet: &Alphabet,
    ) -> Result<(Vec<String>, SemanticChannel), CliError> {
        let specs = required(&self.messages, "messages")?;
        let mut labels = Vec::with_capacity(specs.len());
        let mut truths = Vec::with_capacity(specs.len());
        for (j, spec) in specs.iter().enumerate() {
            labels.push(spec.label.clone().unwrap_or_else(|| format!("y{j}")));
            truths.push(spec.build(alphabet, &format!("messages[{j}]"))?);
        }
        let channel = SemanticChannel::new(truths).map_err(|e| CliError::field("messages", e))?;
        Ok((labels, channel))
    }

    pub fn source_truth(&self, alphabet: &Alphabet) -> Result<TruthFunction, CliError> {
        required(&self.source_truth, "source_truth")?.build(alphabet, "source_truth")
    }

    /// Source and payoff for `rate-fidelity`: a gray-level instance, an
    /// explicit payoff matrix, or the payoff induced by `messages`.
    pub fn payoff_instance(&self, clamp: Clamp) -> Result<(Distribution, PayoffMatrix), CliError> {
        if let Some(g) = self.graylevel {
            if self.prior.is_some() || self.messages.is_some() || self.payoff.is_some() {
                return Err(CliError::Parse(
                    "`graylevel` excludes `prior`, `messages` and `payoff`".into(),
                ));
            }
            let (alphabet, source) =
                graylevel_source(g.k).map_err(|e| CliError::field("graylevel.k", e))?;
            let semantics = discrimination_semantics(&alphabet, g.d)
                .map_err(|e| CliError::field("graylevel.d", e))?;
            let payoff = PayoffMatrix::from_semantics(&source, &semantics, clamp)?;
            return Ok((source, payoff));
        }
        let source = self.prior()?;
        let payoff = match (&self.payoff, &self.messages) {
            (Some(rows), None) => {
                PayoffMatrix::new(rows.clone()).map_err(|e| CliError::field("payoff", e))?
            }
            (None, Some(_)) => {
                let alphabet = self.alphabet(source.len())?;
                let (_, semantics) = self.messages(&alphabet)?;
                PayoffMatrix::from_semantics(&source, &semantics, clamp)
                    .map_err(|e| CliError::field("messages", e))?
            }
            _ => {
                return Err(CliError::Parse(
                    "exactly one of `graylevel`, `payoff` or `messages` is required".into(),
                ))
            }
        };
        if payoff.events() != source.len() {
            return Err(CliError::field(
                "payoff",
                format!("{} rows for {} events", payoff.events(), source.len()),
            ));
        }
        Ok((source, payoff))
    }

    pub fn distortion(&self, n: usize) -> Result<DistortionMatrix, CliError> {
        let d = DistortionMatrix::new(required(&self.distortion, "distortion")?.clone())
            .map_err(|e| CliError::field("distortion", e))?;
        if d.events() != n {
            return Err(CliError::field(
                "distortion",
                format!("{} rows for {n} events", d.events()),
            ));
        }
        Ok(d)
    }
}

fn same_len(d: Distribution, n: usize, path: &str) -> Result<Distribution, CliError> {
    if d.len() == n {
        Ok(d)
    } else {
        Err(CliError::field(
            path,
            format!("{} entries, expected {n}", d.len()),
        ))
    }
}

/// One prediction of the stock scenario: `{center, width}` or `{flat = true}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionSpec {
    pub center: Option<f64>,
    pub width: Option<f64>,
    #[serde(default)]
    pub flat: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StockDocument {
    pub x0: f64,
    pub d0: f64,
    pub value_grid: GridSpec,
    pub predictions: Vec<PredictionSpec>,
}

impl StockDocument {
    pub fn build(&self) -> Result<StockConfig, CliError> {
        let predictions = self
            .predictions
            .iter()
            .enumerate()
            .map(|(j, p)| match (p.flat, p.center, p.width) {
                (true, None, None) => Ok(Prediction::Flat),
                (false, Some(center), Some(width)) => Ok(Prediction::Gaussian { center, width }),
                _ => Err(CliError::Parse(format!(
                    "predictions[{j}]: give `center` and `width`, or `flat = true`"
                ))),
            })
            .collect::<Result<_, _>>()?;
        Ok(StockConfig {
            x0: self.x0,
            d0: self.d0,
            predictions,
            value_grid: self.value_grid.resolve()?,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig4Document {
    pub k: u32,
    pub ds: Vec<f64>,
    pub s_grid: GridSpec,
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig5Document {
    pub ds: Vec<f64>,
    pub kmin: u32,
    pub kmax: u32,
    /// Bit depth whose gray levels measure `d`.
    pub reference_bits: u32,
    pub s_grid: GridSpec,
    pub max_iter: Option<usize>,
}
