//! Rate-fidelity function `R(G)`: the least Shannon mutual information a
//! channel needs so that the receiver's generalized mutual information is at
//! least `G`. The classical rate-distortion function is the special case where
//! the payoff is a negated error measure.
//!
//! Curves are traced parametrically in the slope `s = dR/dG`, warm-starting
//! each point from the previous output distribution.

mod oracle;
mod solver;

pub use oracle::brute_force_r_of_g;
pub use solver::{solve_point, solve_point_with, SolverOptions, OUTPUT_FLOOR};

use crate::error::{Error, Result};
use crate::prob::{log2, Channel, Distribution};
use crate::semantic::{Clamp, SemanticChannel};

/// Generalized information `I_ij` in bits; rows are events, columns messages.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    events: usize,
    messages: usize,
    data: Vec<f64>,
}

impl PayoffMatrix {
    /// Raw payoffs. Entries must be finite.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let (events, messages, data) = flatten(rows)?;
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite payoff {v}")));
        }
        Ok(Self {
            events,
            messages,
            data,
        })
    }

    /// `I_ij = log2[Q(A_j | x_i) / Q(A_j)]` with degrees floored by `clamp`.
    pub fn from_semantics(
        prior: &Distribution,
        semantics: &SemanticChannel,
        clamp: Clamp,
    ) -> Result<Self> {
        let events = semantics.events();
        prior.check_len(events)?;
        let messages = semantics.len();
        let mut data = vec![0.0; events * messages];
        for (j, truth) in semantics.iter().enumerate() {
            let q = clamp
                .logical_probability(prior, truth)
                .map_err(|_| Error::NullLogicalProbability { message: Some(j) })?;
            for (i, d) in clamp.degrees(truth).enumerate() {
                data[i * messages + j] = log2(d / q);
            }
        }
        Ok(Self {
            events,
            messages,
            data,
        })
    }

    /// Payoff `-d_ij`, which turns the fidelity solver into a rate-distortion solver.
    pub fn from_distortion(d: &DistortionMatrix) -> Self {
        Self {
            events: d.events,
            messages: d.messages,
            data: d.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn events(&self) -> usize {
        self.events
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.messages..(i + 1) * self.messages]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.messages + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.messages)
    }

    /// `Σ_ij P(x_i) P(y_j | x_i) I_ij`.
    pub fn expected(&self, source: &Distribution, channel: &Channel) -> Result<f64> {
        check_shapes(source, channel, self.events, self.messages)?;
        Ok(expectation(source, channel, &self.data, self.messages))
    }

    /// Largest achievable `G`: every event sent to its best message.
    pub fn max_fidelity(&self, source: &Distribution) -> f64 {
        self.rows()
            .zip(source.iter())
            .filter(|&(_, p)| p > 0.0)
            .map(|(row, p)| p * row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .sum()
    }

    /// Fidelity at zero rate: the best single message for every event.
    pub fn zero_rate_fidelity(&self, source: &Distribution) -> f64 {
        solver::best_column(source, self).1
    }
}

/// [`PayoffMatrix::from_semantics`] with the default clamp.
pub fn payoff_matrix(prior: &Distribution, semantics: &SemanticChannel) -> Result<PayoffMatrix> {
    PayoffMatrix::from_semantics(prior, semantics, Clamp::default())
}

/// Nonnegative error measure `d(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMatrix {
    events: usize,
    messages: usize,
    data: Vec<f64>,
}

impl DistortionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let (events, messages, data) = flatten(rows)?;
        if let Some(v) = data.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "distortion entry {v} must be finite and nonnegative"
            )));
        }
        Ok(Self {
            events,
            messages,
            data,
        })
    }

    /// `d_ij = (x_i - y_j)^2`.
    pub fn squared_error(inputs: &[f64], outputs: &[f64]) -> Result<Self> {
        Self::new(
            inputs
                .iter()
                .map(|x| outputs.iter().map(|y| (x - y) * (x - y)).collect())
                .collect(),
        )
    }

    /// `d_ij = [i != j]`.
    pub fn hamming(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
                .collect(),
        )
    }

    pub fn events(&self) -> usize {
        self.events
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.messages + j]
    }
}

/// Average distortion `Σ_ij P(x_i) P(y_j | x_i) d_ij`.
pub fn average_distortion(
    source: &Distribution,
    channel: &Channel,
    d: &DistortionMatrix,
) -> Result<f64> {
    check_shapes(source, channel, d.events, d.messages)?;
    Ok(expectation(source, channel, &d.data, d.messages).max(0.0))
}

fn expectation(source: &Distribution, channel: &Channel, data: &[f64], messages: usize) -> f64 {
    source
        .iter()
        .zip(channel.rows())
        .zip(data.chunks(messages))
        .filter(|((p, _), _)| *p > 0.0)
        .map(|((p, row), vals)| p * row.iter().zip(vals).map(|(w, v)| w * v).sum::<f64>())
        .sum()
}

fn check_shapes(
    source: &Distribution,
    channel: &Channel,
    events: usize,
    messages: usize,
) -> Result<()> {
    source.check_len(events)?;
    if channel.inputs() != events {
        return Err(Error::DimensionMismatch {
            expected: events,
            found: channel.inputs(),
        });
    }
    if channel.outputs() != messages {
        return Err(Error::DimensionMismatch {
            expected: messages,
            found: channel.outputs(),
        });
    }
    Ok(())
}

fn flatten(rows: Vec<Vec<f64>>) -> Result<(usize, usize, Vec<f64>)> {
    let events = rows.len();
    let messages = rows.first().map(Vec::len).unwrap_or(0);
    if events == 0 || messages == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let mut data = Vec::with_capacity(events * messages);
    for row in rows {
        if row.len() != messages {
            return Err(Error::DimensionMismatch {
                expected: messages,
                found: row.len(),
            });
        }
        data.extend(row);
    }
    Ok((events, messages, data))
}

/// One solved point of the parametric family.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFidelityPoint {
    /// Slope `dR/dG`.
    pub s: f64,
    /// Shannon mutual information of `channel`, bits.
    pub rate: f64,
    /// Generalized mutual information, bits.
    pub fidelity: f64,
    pub channel: Channel,
    pub output: Distribution,
    /// `λ_i`, one per event.
    pub multipliers: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// One point of the classical rate-distortion curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionPoint {
    pub s: f64,
    pub rate: f64,
    pub distortion: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn check_grid(s_grid: &[f64]) -> Result<()> {
    let ok =
        s_grid.iter().all(|s| *s >= 0.0 && s.is_finite()) && s_grid.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidGrid)
    }
}

/// Traces `R(G)` over a nonnegative, strictly increasing slope grid.
///
/// Non-converged points are kept and flagged.
pub fn rate_fidelity_curve(
    source: &Distribution,
    payoff: &PayoffMatrix,
    s_grid: &[f64],
) -> Result<Vec<RateFidelityPoint>> {
    rate_fidelity_curve_with(source, payoff, s_grid, &SolverOptions::default())
}

pub fn rate_fidelity_curve_with(
    source: &Distribution,
    payoff: &PayoffMatrix,
    s_grid: &[f64],
    options: &SolverOptions,
) -> Result<Vec<RateFidelityPoint>> {
    check_grid(s_grid)?;
    let mut points: Vec<RateFidelityPoint> = Vec::with_capacity(s_grid.len());
    let mut warm: Option<Distribution> = None;
    for &s in s_grid {
        let point = solve_point_with(source, payoff, s, warm.as_ref(), options)?;
        // The s = 0 point mass would pin later iterates to one message.
        if s > 0.0 {
            warm = Some(point.output.clone());
        }
        points.push(point);
    }
    Ok(points)
}

/// Classical rate-distortion curve traced with the same solver on payoff `-d`.
pub fn rate_distortion_curve(
    source: &Distribution,
    d: &DistortionMatrix,
    s_grid: &[f64],
) -> Result<Vec<DistortionPoint>> {
    rate_distortion_curve_with(source, d, s_grid, &SolverOptions::default())
}

pub fn rate_distortion_curve_with(
    source: &Distribution,
    d: &DistortionMatrix,
    s_grid: &[f64],
    options: &SolverOptions,
) -> Result<Vec<DistortionPoint>> {
    let payoff = PayoffMatrix::from_distortion(d);
    Ok(rate_fidelity_curve_with(source, &payoff, s_grid, options)?
        .into_iter()
        .map(|p| DistortionPoint {
            s: p.s,
            rate: p.rate,
            distortion: (-p.fidelity).max(0.0),
            iterations: p.iterations,
            converged: p.converged,
        })
        .collect())
}
