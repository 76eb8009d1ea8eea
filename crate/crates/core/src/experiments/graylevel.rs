//! Gray-level image source: `b + 1 = 2^k` levels with a discretized normal
//! distribution, read through Gaussian "about level j" meanings of width `d`.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prob::{normalize, Alphabet, Distribution};
use crate::rate_fidelity::{
    payoff_matrix, rate_fidelity_curve_with, solve_point_with, PayoffMatrix, RateFidelityPoint,
    SolverOptions,
};
use crate::semantic::{gaussian_truth, SemanticChannel};

/// Bits of matching information below which a step in `k` counts as flat.
pub const PLATEAU_TOLERANCE: f64 = 1e-3;

const MAX_BITS: u32 = 16;
/// Below this spread `R - G` is treated as identically zero along a curve.
const DEGENERATE_GAP: f64 = 1e-12;
const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// One gray-level sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayLevelConfig {
    /// Bit depth; levels are `0..=2^k - 1`.
    pub k: u32,
    /// Width of every meaning, in gray levels.
    pub d: f64,
    pub s_grid: Vec<f64>,
}

impl GrayLevelConfig {
    pub fn validate(&self) -> Result<()> {
        check_bits(self.k)?;
        check_width(self.d)
    }
}

fn check_bits(k: u32) -> Result<()> {
    if (1..=MAX_BITS).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidBitDepth(k))
    }
}

fn check_width(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidWidth(d))
    }
}

/// Levels `0..=b` with `P(i) ∝ exp(-(i - b/2)^2 / (2 (b/8)^2))`, `b = 2^k - 1`.
pub fn graylevel_source(k: u32) -> Result<(Alphabet, Distribution)> {
    check_bits(k)?;
    let b = ((1u64 << k) - 1) as f64;
    let mean = b / 2.0;
    let sd = b / 8.0;
    let values: Vec<f64> = (0..=b as u64).map(|i| i as f64).collect();
    let density: Vec<f64> = values
        .iter()
        .map(|x| (-(x - mean).powi(2) / (2.0 * sd * sd)).exp())
        .collect();
    Ok((Alphabet::from_values(values)?, normalize(&density)?))
}

/// One Gaussian meaning per level `j`, centered at `j` with width `d`.
pub fn discrimination_semantics(alphabet: &Alphabet, d: f64) -> Result<SemanticChannel> {
    check_width(d)?;
    let values = alphabet.values().ok_or(Error::MissingValues)?;
    SemanticChannel::new(
        values
            .iter()
            .map(|&c| gaussian_truth(alphabet, c, d))
            .collect::<Result<_>>()?,
    )
}

/// Source and payoff matrix of the gray-level instance `(k, d)`.
pub fn graylevel_instance(k: u32, d: f64) -> Result<(Distribution, PayoffMatrix)> {
    let (alphabet, source) = graylevel_source(k)?;
    let semantics = discrimination_semantics(&alphabet, d)?;
    let payoff = payoff_matrix(&source, &semantics)?;
    Ok((source, payoff))
}

/// A traced curve together with its configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayLevelCurve {
    pub k: u32,
    pub d: f64,
    pub points: Vec<RateFidelityPoint>,
}

/// Traces one curve per configuration. Configurations run in parallel; the
/// result order follows `configs`.
pub fn fig4_family(
    configs: &[GrayLevelConfig],
    options: &SolverOptions,
) -> Result<Vec<GrayLevelCurve>> {
    configs.iter().try_for_each(GrayLevelConfig::validate)?;
    configs
        .par_iter()
        .map(|c| {
            let (source, payoff) = graylevel_instance(c.k, c.d)?;
            Ok(GrayLevelCurve {
                k: c.k,
                d: c.d,
                points: rate_fidelity_curve_with(&source, &payoff, &c.s_grid, options)?,
            })
        })
        .collect()
}

/// Where the curve touches `R = G`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingPoint {
    pub s: f64,
    pub rate: f64,
    /// Matching information `G*`.
    pub fidelity: f64,
    pub converged: bool,
}

impl MatchingPoint {
    /// `R - G`, nonnegative up to solver accuracy.
    pub fn gap(&self) -> f64 {
        self.rate - self.fidelity
    }

    fn from_point(p: &RateFidelityPoint) -> Self {
        Self {
            s: p.s,
            rate: p.rate,
            fidelity: p.fidelity,
            converged: p.converged,
        }
    }
}

/// Locates the minimum of `|R - G|` along `curve` and refines it by a
/// golden-section search in `s` between the neighbouring grid points.
///
/// A curve with `R = G` everywhere (uninformative meanings) returns its
/// closest grid point unrefined.
pub fn matching_point(
    source: &Distribution,
    payoff: &PayoffMatrix,
    curve: &[RateFidelityPoint],
    options: &SolverOptions,
) -> Result<MatchingPoint> {
    let gap = |p: &RateFidelityPoint| (p.rate - p.fidelity).abs();
    let (best, closest) = curve
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, f64)>, (i, p)| match acc {
            Some((_, g)) if g <= gap(p) => acc,
            _ => Some((i, gap(p))),
        })
        .ok_or(Error::InvalidGrid)?;
    let spread = curve.iter().map(gap).fold(0.0, f64::max);
    if spread < DEGENERATE_GAP {
        return Ok(MatchingPoint::from_point(&curve[best]));
    }
    if best == 0 || best + 1 == curve.len() {
        return Err(Error::MatchingOutsideSweep {
            closest_s: curve[best].s,
            closest_gap: closest,
        });
    }

    let warm = curve[best].output.clone();
    let solve = |s: f64| solve_point_with(source, payoff, s, Some(&warm), options);
    let mut incumbent = MatchingPoint::from_point(&curve[best]);
    let mut consider = |p: &RateFidelityPoint| {
        if gap(p) < incumbent.gap().abs() {
            incumbent = MatchingPoint::from_point(p);
        }
        gap(p)
    };

    let (mut a, mut b) = (curve[best - 1].s, curve[best + 1].s);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = consider(&solve(x1)?);
    let mut f2 = consider(&solve(x2)?);
    while b - a > 1e-8 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = consider(&solve(x1)?);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = consider(&solve(x2)?);
        }
    }
    Ok(incumbent)
}

/// One row of the matching-information study.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig5Row {
    pub k: u32,
    /// Meaning width in levels of this bit depth.
    pub width: f64,
    pub s_star: f64,
    pub g_star: f64,
    pub converged: bool,
}

/// Matching information per bit depth at one discrimination.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig5Table {
    pub d: f64,
    pub reference_bits: u32,
    pub rows: Vec<Fig5Row>,
    /// Smallest depth after which `G*` grows by at most [`PLATEAU_TOLERANCE`]
    /// per extra bit.
    pub k_prime: u32,
}

/// Matching information `G*` for every depth in `ks`.
///
/// `d` is measured in levels of a `reference_bits` image, so the meanings keep
/// the same width relative to the gray range as `k` varies: at depth `k` the
/// width is `d (2^k - 1) / (2^reference_bits - 1)`.
pub fn fig5_study(d: f64, ks: RangeInclusive<u32>, reference_bits: u32) -> Result<Fig5Table> {
    let s_grid: Vec<f64> = (0..=10).map(|i| 0.5 + 0.1 * i as f64).collect();
    fig5_study_with(d, ks, reference_bits, &s_grid, &SolverOptions::default())
}

/// [`fig5_study`] with an explicit sweep, which must bracket the matching slope.
pub fn fig5_study_with(
    d: f64,
    ks: RangeInclusive<u32>,
    reference_bits: u32,
    s_grid: &[f64],
    options: &SolverOptions,
) -> Result<Fig5Table> {
    check_width(d)?;
    check_bits(reference_bits)?;
    let ks: Vec<u32> = ks.collect();
    if ks.is_empty() {
        return Err(Error::InvalidParameter("empty bit-depth range".into()));
    }
    ks.iter().copied().try_for_each(check_bits)?;
    let reference = ((1u64 << reference_bits) - 1) as f64;
    let rows = ks
        .par_iter()
        .map(|&k| {
            let width = d * ((1u64 << k) - 1) as f64 / reference;
            let (source, payoff) = graylevel_instance(k, width)?;
            let curve = rate_fidelity_curve_with(&source, &payoff, s_grid, options)?;
            let m = matching_point(&source, &payoff, &curve, options)?;
            Ok(Fig5Row {
                k,
                width,
                s_star: m.s,
                g_star: m.fidelity,
                converged: m.converged && curve.iter().all(|p| p.converged),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k_prime = plateau_start(&rows);
    Ok(Fig5Table {
        d,
        reference_bits,
        rows,
        k_prime,
    })
}

fn plateau_start(rows: &[Fig5Row]) -> u32 {
    let mut start = rows.len() - 1;
    while start > 0 && rows[start].g_star - rows[start - 1].g_star <= PLATEAU_TOLERANCE {
        start -= 1;
    }
    rows[start].k
}
