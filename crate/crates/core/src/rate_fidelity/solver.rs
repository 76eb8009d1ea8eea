//! Parametric solver for one slope `s`.
//!
//! For fixed `s` the optimal test channel has the Gibbs form
//! `P(y_j | x_i) = P(y_j) 2^{s I_ij} λ_i` with `λ_i = 1 / Σ_j P(y_j) 2^{s I_ij}`,
//! and the output distribution is the maximizer of `Σ_i P(x_i) log Σ_j P(y_j) 2^{s I_ij}`
//! over the simplex. Blahut's alternating updates climb that objective
//! multiplicatively. They stall when the kernel `2^{s I}` is ill-conditioned
//! (wide Gaussian meanings over many levels), so after a fixed budget the
//! iterate is handed to a log-barrier Newton method on the same objective and
//! the alternating updates resume from its result.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::prob::{log2, Channel, Distribution};

use super::{PayoffMatrix, RateFidelityPoint};

/// Floor kept on output probabilities during iteration.
pub const OUTPUT_FLOOR: f64 = 1e-14;

/// Largest `c_j - 1` accepted at convergence; bounds the objective gap in nats.
/// Ill-conditioned kernels stall around 1e-8 even at the optimum, while a
/// truncated support shows up well above 1e-3.
const OPTIMALITY_TOLERANCE: f64 = 1e-6;
const MAX_POLISHES: usize = 4;

/// Knobs of [`solve_point_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Stop when the L1 change of the output distribution drops below this.
    pub tolerance: f64,
    /// Cap on alternating updates plus Newton steps.
    pub max_iterations: usize,
    /// Alternating updates tried before the Newton polish kicks in.
    /// `None` disables the polish.
    pub polish_after: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 10_000,
            polish_after: Some(500),
        }
    }
}

/// Row-shifted kernel `2^{s (I_ij - max_j I_ij)}` over the support of the source.
struct Kernel {
    rows: usize,
    cols: usize,
    /// row-major, every row has a maximum of exactly 1
    data: Vec<f64>,
    weights: Vec<f64>,
}

impl Kernel {
    fn new(weights: Vec<f64>, payoff: &[&[f64]], s: f64) -> Self {
        let rows = payoff.len();
        let cols = payoff[0].len();
        let mut data = Vec::with_capacity(rows * cols);
        for row in payoff {
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            data.extend(row.iter().map(|&v| (s * (v - max)).exp2()));
        }
        Self {
            rows,
            cols,
            data,
            weights,
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `m_i = Σ_j q_j K_ij`.
    fn mix(&self, q: &[f64], out: &mut [f64]) {
        for (i, m) in out.iter_mut().enumerate() {
            *m = self.row(i).iter().zip(q).map(|(k, q)| k * q).sum();
        }
    }

    /// One alternating update. Returns the L1 change and `max_j c_j - 1`,
    /// where `c_j = Σ_i p_i K_ij / m_i` is the update factor at the old iterate;
    /// the iterate is optimal exactly when every `c_j <= 1`.
    fn blahut_step(&self, q: &mut [f64], mix: &mut [f64], next: &mut [f64]) -> (f64, f64) {
        self.mix(q, mix);
        next.iter_mut().for_each(|v| *v = 0.0);
        for (i, (&p, &m)) in self.weights.iter().zip(mix.iter()).enumerate() {
            let r = p / m;
            for (n, k) in next.iter_mut().zip(self.row(i)) {
                *n += r * k;
            }
        }
        let excess = next.iter().copied().fold(f64::NEG_INFINITY, f64::max) - 1.0;
        for (n, &qj) in next.iter_mut().zip(q.iter()) {
            *n = (*n * qj).max(OUTPUT_FLOOR);
        }
        let sum: f64 = next.iter().sum();
        let mut change = 0.0;
        for (qj, &n) in q.iter_mut().zip(next.iter()) {
            let v = n / sum;
            change += (v - *qj).abs();
            *qj = v;
        }
        (change, excess)
    }

    /// `-Σ_i p_i ln m_i - μ Σ_j ln q_j`, infinite outside the open simplex.
    fn barrier(&self, q: &[f64], mu: f64, mix: &mut [f64]) -> f64 {
        if q.iter().any(|&v| v <= 0.0) {
            return f64::INFINITY;
        }
        self.mix(q, mix);
        let f: f64 = self
            .weights
            .iter()
            .zip(mix.iter())
            .map(|(p, m)| -p * m.ln())
            .sum();
        f - mu * q.iter().map(|v| v.ln()).sum::<f64>()
    }

    /// Log-barrier Newton on the output distribution. Returns the polished
    /// iterate and the number of Newton steps, or `None` on numerical failure.
    fn polish(&self, start: &[f64]) -> Option<(Vec<f64>, usize)> {
        let m = self.cols;
        let uniform = 1.0 / m as f64;
        let kernel = DMatrix::from_row_slice(self.rows, m, &self.data);
        let mut q: Vec<f64> = start.iter().map(|v| 0.5 * v + 0.5 * uniform).collect();
        let mut mix = vec![0.0; self.rows];
        let mut scratch = vec![0.0; self.rows];
        let mut trial = vec![0.0; m];
        let mut mu = 1e-3 / m as f64;
        let mut steps = 0;
        loop {
            for _ in 0..100 {
                self.mix(&q, &mut mix);
                // gradient -K^T (p / m) - mu / q, Hessian K^T diag(p / m^2) K + diag(mu / q^2)
                let scaled = DMatrix::from_fn(self.rows, m, |i, j| {
                    kernel[(i, j)] * self.weights[i].sqrt() / mix[i]
                });
                let r = DVector::from_fn(self.rows, |i, _| self.weights[i] / mix[i]);
                let grad = -kernel.tr_mul(&r) - DVector::from_fn(m, |j, _| mu / q[j]);
                let mut hess = scaled.tr_mul(&scaled);
                for j in 0..m {
                    hess[(j, j)] += mu / (q[j] * q[j]);
                }
                let chol = hess.cholesky()?;
                let hg = chol.solve(&grad);
                let h1 = chol.solve(&DVector::from_element(m, 1.0));
                let nu = -hg.sum() / h1.sum();
                let dx = -(hg + h1 * nu);
                let decrement = -grad.dot(&dx);
                if !decrement.is_finite() {
                    return None;
                }
                // Centrality is measured on the 1/mu scale of the barrier problem.
                if decrement < (1e-8 * mu).max(1e-24) {
                    break;
                }
                let mut t: f64 = 1.0;
                for (qj, dj) in q.iter().zip(dx.iter()) {
                    if *dj < 0.0 {
                        t = t.min(0.99 * qj / -dj);
                    }
                }
                // Close to the centre the Armijo test drowns in rounding, and
                // full steps converge quadratically anyway.
                let quadratic = decrement < 1e-8;
                let f0 = self.barrier(&q, mu, &mut scratch);
                loop {
                    for ((x, qj), dj) in trial.iter_mut().zip(&q).zip(dx.iter()) {
                        *x = qj + t * dj;
                    }
                    let f = self.barrier(&trial, mu, &mut scratch);
                    if f <= f0 - 0.25 * t * decrement || (quadratic && f.is_finite()) {
                        break;
                    }
                    t *= 0.5;
                    if t < 1e-16 {
                        break;
                    }
                }
                steps += 1;
                if t < 1e-16 {
                    break;
                }
                let sum: f64 = trial.iter().sum();
                q.iter_mut().zip(&trial).for_each(|(qj, x)| *qj = x / sum);
            }
            if m as f64 * mu < 1e-13 {
                break;
            }
            mu *= 0.1;
        }
        Some((q, steps))
    }
}

/// Solves one point of the rate-fidelity curve from a uniform start.
pub fn solve_point(
    source: &Distribution,
    payoff: &PayoffMatrix,
    s: f64,
) -> Result<RateFidelityPoint> {
    solve_point_with(source, payoff, s, None, &SolverOptions::default())
}

/// Solves one point, optionally warm-started from an output distribution.
pub fn solve_point_with(
    source: &Distribution,
    payoff: &PayoffMatrix,
    s: f64,
    warm_start: Option<&Distribution>,
    options: &SolverOptions,
) -> Result<RateFidelityPoint> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::InvalidSlope(s));
    }
    source.check_len(payoff.events())?;
    if let Some(w) = warm_start {
        w.check_len(payoff.messages())?;
    }
    if s == 0.0 {
        return Ok(zero_slope_point(source, payoff));
    }

    let support: Vec<usize> = (0..source.len()).filter(|&i| source[i] > 0.0).collect();
    let rows: Vec<&[f64]> = support.iter().map(|&i| payoff.row(i)).collect();
    let weights: Vec<f64> = support.iter().map(|&i| source[i]).collect();
    let kernel = Kernel::new(weights, &rows, s);

    let m = payoff.messages();
    let mut q: Vec<f64> = match warm_start {
        Some(w) => {
            let floored: Vec<f64> = w.iter().map(|v| v.max(OUTPUT_FLOOR)).collect();
            let sum: f64 = floored.iter().sum();
            floored.into_iter().map(|v| v / sum).collect()
        }
        None => vec![1.0 / m as f64; m],
    };
    let mut mix = vec![0.0; kernel.rows];
    let mut next = vec![0.0; m];
    let mut iterations = 0;
    let mut converged = false;
    let mut polishes = 0;
    while iterations < options.max_iterations {
        let (change, excess) = kernel.blahut_step(&mut q, &mut mix, &mut next);
        iterations += 1;
        // A small step alone is not enough: messages held near the floor move
        // too slowly to register while still having c_j > 1.
        let stalled = change < options.tolerance;
        if stalled && excess <= OPTIMALITY_TOLERANCE {
            converged = true;
            break;
        }
        let Some(after) = options.polish_after else {
            continue;
        };
        let due = if polishes == 0 {
            iterations >= after
        } else {
            stalled
        };
        if due && polishes < MAX_POLISHES {
            polishes += 1;
            if let Some((polished_q, steps)) = kernel.polish(&q) {
                iterations += steps;
                q = polished_q
                    .into_iter()
                    .map(|v| v.max(OUTPUT_FLOOR))
                    .collect();
                let sum: f64 = q.iter().sum();
                q.iter_mut().for_each(|v| *v /= sum);
            }
        }
    }

    Ok(assemble(
        source, payoff, s, &kernel, &support, &q, iterations, converged,
    ))
}

/// Builds the reported point from the final output iterate.
#[allow(clippy::too_many_arguments)]
fn assemble(
    source: &Distribution,
    payoff: &PayoffMatrix,
    s: f64,
    kernel: &Kernel,
    support: &[usize],
    q: &[f64],
    iterations: usize,
    converged: bool,
) -> RateFidelityPoint {
    let n = payoff.events();
    let m = payoff.messages();

    // Gibbs rows are defined for every event, including zero-mass ones.
    let mut log2_lambda = vec![0.0; n];
    let mut data = vec![0.0; n * m];
    for i in 0..n {
        let row = payoff.row(i);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for j in 0..m {
            let w = q[j] * (s * (row[j] - max)).exp2();
            data[i * m + j] = w;
            total += w;
        }
        log2_lambda[i] = -s * max - log2(total);
        data[i * m..(i + 1) * m]
            .iter_mut()
            .for_each(|w| *w /= total);
    }

    let mut fidelity = 0.0;
    let mut tilt = 0.0;
    for (k, &i) in support.iter().enumerate() {
        let p = kernel.weights[k];
        let row = &data[i * m..(i + 1) * m];
        fidelity += p * row
            .iter()
            .zip(payoff.row(i))
            .map(|(w, v)| w * v)
            .sum::<f64>();
        tilt += p * log2_lambda[i];
    }
    let rate = (s * fidelity + tilt).max(0.0);

    // Messages the channel never uses are reported with zero probability.
    let mut output = vec![0.0; m];
    for &i in support {
        for j in 0..m {
            output[j] += source[i] * data[i * m + j];
        }
    }
    let dead: Vec<usize> = (0..m).filter(|&j| output[j] < OUTPUT_FLOOR).collect();
    if !dead.is_empty() && dead.len() < m {
        for row in data.chunks_mut(m) {
            for &j in &dead {
                row[j] = 0.0;
            }
        }
    }
    let channel = Channel::from_raw(n, m, data);
    let output = channel
        .output_marginal(source)
        .expect("channel built over the source alphabet");

    RateFidelityPoint {
        s,
        rate,
        fidelity,
        channel,
        output,
        multipliers: log2_lambda.iter().map(|l| l.exp2()).collect(),
        iterations,
        converged,
    }
}

/// `s = 0`: every event goes to the message with the best average payoff.
fn zero_slope_point(source: &Distribution, payoff: &PayoffMatrix) -> RateFidelityPoint {
    let (best, fidelity) = best_column(source, payoff);
    let n = payoff.events();
    let m = payoff.messages();
    let output = Distribution::point_mass(m, best).expect("index within range");
    RateFidelityPoint {
        s: 0.0,
        rate: 0.0,
        fidelity,
        channel: Channel::constant(n, &output),
        output,
        multipliers: vec![1.0; n],
        iterations: 0,
        converged: true,
    }
}

/// Column maximizing `Σ_i P(x_i) I_ij`, lowest index on ties, with its value.
pub(crate) fn best_column(source: &Distribution, payoff: &PayoffMatrix) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for j in 0..payoff.messages() {
        let avg: f64 = (0..payoff.events())
            .filter(|&i| source[i] > 0.0)
            .map(|i| source[i] * payoff.get(i, j))
            .sum();
        if avg > best.1 {
            best = (j, avg);
        }
    }
    best
}
