use crate::error::{Error, Result};
use crate::prob::Distribution;

use super::PayoffMatrix;

/// Enumeration budget; a 4x3 instance at resolution 25 needs about 1.5e10.
const MAX_CHANNELS: f64 = 2e10;
/// Slack on the fidelity constraint so grid channels hitting the target exactly count.
const FEASIBILITY_SLACK: f64 = 1e-12;

/// Exhaustive search over channels whose rows lie on the simplex grid
/// `{k / resolution}`: the least Shannon mutual information among those with
/// generalized mutual information at least `g_target`.
///
/// The result upper-bounds `R(g_target)`; the gap is `O(1 / resolution)`.
/// Cost grows as `C(resolution + m - 1, m - 1)^n` channels before pruning,
/// which must stay within a budget of 2e10.
pub fn brute_force_r_of_g(
    source: &Distribution,
    payoff: &PayoffMatrix,
    g_target: f64,
    resolution: usize,
) -> Result<f64> {
    let n = payoff.events();
    let m = payoff.messages();
    let row_count = (1..m).fold(1.0, |c, j| c * (resolution + j) as f64 / j as f64);
    if resolution == 0 || row_count.powi(n as i32) > MAX_CHANNELS {
        return Err(Error::OracleTooLarge {
            events: n,
            messages: m,
            resolution,
        });
    }
    source.check_len(n)?;
    let max = payoff.max_fidelity(source);
    if g_target > max + FEASIBILITY_SLACK {
        return Err(Error::InfeasibleTarget {
            target: g_target,
            max,
        });
    }

    let grid = simplex_grid(m, resolution);
    let rows: Vec<Vec<RowOption>> = (0..n)
        .filter(|&i| source[i] > 0.0)
        .map(|i| {
            let p = source[i];
            grid.iter()
                .map(|w| RowOption {
                    mass: w.iter().map(|v| p * v).collect(),
                    fidelity: p * w.iter().zip(payoff.row(i)).map(|(a, b)| a * b).sum::<f64>(),
                    neg_entropy: p * w
                        .iter()
                        .filter(|&&v| v > 0.0)
                        .map(|v| v * v.log2())
                        .sum::<f64>(),
                })
                .collect()
        })
        .collect();
    // Best fidelity still reachable from rows k.. onwards.
    let mut reach = vec![0.0; rows.len() + 1];
    for k in (0..rows.len()).rev() {
        let best = rows[k]
            .iter()
            .map(|o| o.fidelity)
            .fold(f64::NEG_INFINITY, f64::max);
        reach[k] = reach[k + 1] + best;
    }

    let mut search = Search {
        rows: &rows,
        reach: &reach,
        target: g_target - FEASIBILITY_SLACK,
        best: f64::INFINITY,
        output: vec![0.0; m],
    };
    search.descend(0, 0.0, 0.0);
    Ok(search.best.max(0.0))
}

struct RowOption {
    mass: Vec<f64>,
    fidelity: f64,
    neg_entropy: f64,
}

struct Search<'a> {
    rows: &'a [Vec<RowOption>],
    reach: &'a [f64],
    target: f64,
    best: f64,
    output: Vec<f64>,
}

impl Search<'_> {
    fn descend(&mut self, k: usize, fidelity: f64, neg_entropy: f64) {
        if k == self.rows.len() {
            if fidelity >= self.target {
                // I(X;Y) = -H(Y|X) + H(Y)
                let h_y: f64 = self
                    .output
                    .iter()
                    .filter(|&&v| v > 0.0)
                    .map(|v| -v * v.log2())
                    .sum();
                let rate = neg_entropy + h_y;
                if rate < self.best {
                    self.best = rate;
                }
            }
            return;
        }
        if fidelity + self.reach[k] < self.target {
            return;
        }
        for option in &self.rows[k] {
            for (o, v) in self.output.iter_mut().zip(&option.mass) {
                *o += v;
            }
            self.descend(
                k + 1,
                fidelity + option.fidelity,
                neg_entropy + option.neg_entropy,
            );
            for (o, v) in self.output.iter_mut().zip(&option.mass) {
                *o -= v;
            }
        }
    }
}

/// All `w` with `w_j = c_j / resolution`, `Σ c_j = resolution`.
fn simplex_grid(m: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn fill(prefix: &mut Vec<usize>, m: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            fill(prefix, m, left - c, out);
            prefix.pop();
        }
    }
    let mut counts = Vec::new();
    fill(&mut Vec::with_capacity(m), m, resolution, &mut counts);
    counts
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|v| v as f64 / resolution as f64)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(simplex_grid(2, 25).len(), 26);
        assert_eq!(simplex_grid(3, 25).len(), 351);
        assert!(simplex_grid(3, 4)
            .iter()
            .all(|w| (w.iter().sum::<f64>() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn limits_are_enforced() {
        let p = Distribution::uniform(5).unwrap();
        let payoff = PayoffMatrix::new(vec![vec![0.0, 1.0, 0.5]; 5]).unwrap();
        assert!(matches!(
            brute_force_r_of_g(&p, &payoff, 0.0, 25),
            Err(Error::OracleTooLarge { .. })
        ));
        let p = Distribution::uniform(2).unwrap();
        let payoff = PayoffMatrix::new(vec![vec![0.0, 1.0]; 2]).unwrap();
        assert!(matches!(
            brute_force_r_of_g(&p, &payoff, 0.0, 0),
            Err(Error::OracleTooLarge { .. })
        ));
        assert!(matches!(
            brute_force_r_of_g(&p, &payoff, 0.0, 200_000),
            Err(Error::OracleTooLarge { .. })
        ));
        assert!(matches!(
            brute_force_r_of_g(&p, &payoff, 1.5, 10),
            Err(Error::InfeasibleTarget { .. })
        ));
    }
}
