//! Perceptual privacy criterion.
//!
//! Geometric distances in the unit-volume feature space are converted to
//! just-noticeable differences (JND) by the mean observer discriminability
//! `d'`. A synthetic sample is at risk of coincidental resemblance when
//! `d' * <r_1(N)> < c`, with `N` the number of entities it could be mistaken
//! for and `c` the likeness threshold in JND.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::nn_stats::{large_n_coefficient, nn_mean_exact, NNQuery};
use crate::special::log_gamma;

/// Default feature-space dimensionality for faces; empirical estimates place
/// it between 7 and 12.
pub const DEFAULT_DIM: u32 = 10;
pub const DIM_RANGE: std::ops::RangeInclusive<u32> = 7..=12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerceptualParams {
    /// Mean observer discriminability, in JND per unit feature-space distance.
    pub d_prime: f64,
    /// Likeness threshold in JND.
    pub threshold: f64,
}

impl Default for PerceptualParams {
    fn default() -> Self {
        Self { d_prime: 1.0, threshold: 1.0 }
    }
}

impl PerceptualParams {
    pub fn new(d_prime: f64, threshold: f64) -> Result<Self> {
        let p = Self { d_prime, threshold };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.d_prime.is_finite() || self.d_prime < 0.0 {
            return Err(domain(format!("d' must be finite and non-negative, got {}", self.d_prime)));
        }
        if !self.threshold.is_finite() || self.threshold <= 0.0 {
            return Err(domain(format!("c must be finite and positive, got {}", self.threshold)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskAssessment {
    /// Exact mean nearest-neighbour distance, feature-space units.
    pub mean_nn_distance: f64,
    /// `d' * mean_nn_distance`.
    pub mean_nn_jnd: f64,
    pub threshold_jnd: f64,
    /// `mean_nn_jnd < threshold_jnd`; equality is not at risk.
    pub at_risk: bool,
    pub confusion_probability: f64,
    /// Population beyond which the criterion holds. `None` when `d' = 0`,
    /// where every population size is at risk.
    pub critical_population: Option<f64>,
}

/// Evaluates the criterion for `N` entities in `D` dimensions.
pub fn risk_verdict(params: &PerceptualParams, count: f64, dim: u32) -> Result<RiskAssessment> {
    params.validate()?;
    let mean = nn_mean_exact(&NNQuery::new(dim, 1, count)?)?;
    let jnd = params.d_prime * mean;
    let critical = if params.d_prime > 0.0 { Some(critical_population(params, dim, 1)?) } else { None };
    Ok(RiskAssessment {
        mean_nn_distance: mean,
        mean_nn_jnd: jnd,
        threshold_jnd: params.threshold,
        at_risk: jnd < params.threshold,
        confusion_probability: confusion_probability(params, count, dim)?,
        critical_population: critical,
    })
}

/// `ln` of the volume of a `D`-ball of radius `r`.
fn ln_ball_volume(dim: u32, radius: f64) -> Result<f64> {
    let d = f64::from(dim);
    Ok(0.5 * d * PI.ln() + d * radius.ln() - log_gamma(0.5 * d + 1.0)?)
}

/// Probability that at least one of `N` uniform entities lies within `c`
/// JND of a given point: `1 - (1 - min(1, V_D(c / d')))^N`.
///
/// The ball fraction ignores boundaries, so this is only meaningful while the
/// ball is small relative to the unit volume.
pub fn confusion_probability(params: &PerceptualParams, count: f64, dim: u32) -> Result<f64> {
    params.validate()?;
    if dim == 0 {
        return Err(domain("dimensionality D must be at least 1"));
    }
    if !count.is_finite() || count < 0.0 {
        return Err(domain(format!("N must be finite and non-negative, got {count}")));
    }
    if count == 0.0 {
        return Ok(0.0);
    }
    if params.d_prime == 0.0 {
        return Ok(1.0);
    }
    let ln_v = ln_ball_volume(dim, params.threshold / params.d_prime)?;
    if ln_v >= 0.0 {
        return Ok(1.0);
    }
    let v = ln_v.exp();
    // 1 - (1 - v)^N
    let p = -(count * (-v).ln_1p()).exp_m1();
    Ok(p.clamp(0.0, 1.0))
}

/// The population size at which `d' * C(D, n) * N^(-1/D) = c`, i.e.
/// `(C(D, n) d' / c)^D`, using the large-`N` form of the mean distance.
pub fn critical_population(params: &PerceptualParams, dim: u32, rank: u64) -> Result<f64> {
    params.validate()?;
    if params.d_prime == 0.0 {
        return Err(domain("d' = 0: the criterion holds for every population size (critical population is infinite)"));
    }
    let coef = large_n_coefficient(dim, rank)?;
    Ok((f64::from(dim) * (coef.ln() + params.d_prime.ln() - params.threshold.ln())).exp())
}
