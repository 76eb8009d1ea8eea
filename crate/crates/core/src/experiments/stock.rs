//! Information carried by "the index will be about x_j" predictions, against a
//! Gaussian prior over the index value.

use crate::error::{Error, Result};
use crate::prob::{normalize, Distribution};
use crate::semantic::{gaussian_over, semantic_info, TruthFunction};

/// A prediction about the index value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    /// "about `center`", with spread `width`.
    Gaussian { center: f64, width: f64 },
    /// True of every value, such as "the index will go up or not".
    Flat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StockConfig {
    /// Prior center.
    pub x0: f64,
    /// Prior spread.
    pub d0: f64,
    pub predictions: Vec<Prediction>,
    /// Index values the prior is discretized on and the curves evaluated at.
    pub value_grid: Vec<f64>,
}

impl StockConfig {
    fn prior(&self) -> Result<Distribution> {
        if self.d0 <= 0.0 || !self.d0.is_finite() {
            return Err(Error::InvalidWidth(self.d0));
        }
        if self.value_grid.is_empty() || self.value_grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "value grid must be non-empty and finite".into(),
            ));
        }
        let density: Vec<f64> = self
            .value_grid
            .iter()
            .map(|x| (-(x - self.x0).powi(2) / (2.0 * self.d0 * self.d0)).exp())
            .collect();
        normalize(&density)
    }

    fn truth(&self, prediction: &Prediction) -> Result<TruthFunction> {
        match *prediction {
            Prediction::Gaussian { center, width } => {
                gaussian_over(&self.value_grid, center, width)
            }
            Prediction::Flat => TruthFunction::constant(self.value_grid.len(), 1.0),
        }
    }
}

/// One sample of an information curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StockRow {
    pub x: f64,
    pub prediction: usize,
    pub info_bits: f64,
}

/// Information each prediction conveys if the index turns out to be `X`, for
/// every `X` on the grid. Rows are grouped by prediction, grid order within.
pub fn stock_info_curves(config: &StockConfig) -> Result<Vec<StockRow>> {
    let prior = config.prior()?;
    let mut rows = Vec::with_capacity(config.predictions.len() * config.value_grid.len());
    for (prediction, p) in config.predictions.iter().enumerate() {
        let truth = config.truth(p)?;
        for (i, &x) in config.value_grid.iter().enumerate() {
            rows.push(StockRow {
                x,
                prediction,
                info_bits: semantic_info(&prior, &truth, i)?,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::semantic::logical_probability;

    fn config(predictions: Vec<Prediction>) -> StockConfig {
        StockConfig {
            x0: 100.0,
            d0: 10.0,
            predictions,
            value_grid: (0..=160).map(|i| 60.0 + 0.5 * i as f64).collect(),
        }
    }

    fn curve(rows: &[StockRow], prediction: usize) -> Vec<(f64, f64)> {
        rows.iter()
            .filter(|r| r.prediction == prediction)
            .map(|r| (r.x, r.info_bits))
            .collect()
    }

    #[test]
    fn peaks_at_center_with_self_information() {
        let c = config(vec![
            Prediction::Gaussian {
                center: 105.0,
                width: 3.0,
            },
            Prediction::Gaussian {
                center: 90.0,
                width: 5.0,
            },
        ]);
        let rows = stock_info_curves(&c).unwrap();
        let prior = c.prior().unwrap();
        for (j, center) in [(0, 105.0), (1, 90.0)] {
            let pts = curve(&rows, j);
            let (x_max, i_max) =
                pts.iter().copied().fold(
                    (0.0, f64::NEG_INFINITY),
                    |a, b| if b.1 > a.1 { b } else { a },
                );
            assert_eq!(x_max, center);
            let q = logical_probability(&prior, &c.truth(&c.predictions[j]).unwrap()).unwrap();
            assert_abs_diff_eq!(i_max, -q.log2(), epsilon = 1e-12);
            assert!(i_max > 0.0);
            // concave in X: second differences nonpositive
            for w in pts.windows(3) {
                assert!(w[2].1 - 2.0 * w[1].1 + w[0].1 <= 1e-9);
            }
        }
    }

    #[test]
    fn sharper_prediction_gains_at_center_and_loses_in_tails() {
        let c = config(vec![
            Prediction::Gaussian {
                center: 105.0,
                width: 4.0,
            },
            Prediction::Gaussian {
                center: 105.0,
                width: 2.0,
            },
        ]);
        let rows = stock_info_curves(&c).unwrap();
        let wide = curve(&rows, 0);
        let sharp = curve(&rows, 1);
        let at = |pts: &[(f64, f64)], x: f64| pts.iter().find(|p| p.0 == x).unwrap().1;
        assert!(at(&sharp, 105.0) > at(&wide, 105.0));
        for x in [60.0, 80.0, 125.0, 140.0] {
            assert!(at(&sharp, x) < at(&wide, x));
        }
    }

    #[test]
    fn flat_prediction_conveys_nothing() {
        let rows = stock_info_curves(&config(vec![Prediction::Flat])).unwrap();
        assert_eq!(rows.len(), 161);
        assert!(rows.iter().all(|r| r.info_bits.abs() <= 1e-12));
    }

    #[test]
    fn invalid_configs() {
        let mut c = config(vec![Prediction::Gaussian {
            center: 100.0,
            width: 0.0,
        }]);
        assert!(matches!(stock_info_curves(&c), Err(Error::InvalidWidth(_))));
        c.predictions.clear();
        c.d0 = -1.0;
        assert!(stock_info_curves(&c).is_err());
    }
}
