//! Mean n-th nearest-neighbour distance among `N` uniform points in a
//! `D`-dimensional unit volume.
//!
//! The exact mean is
//!
//! ```text
//! <r_n(N)> = [Gamma(D/2 + 1)]^(1/D) / sqrt(pi) * Gamma(n + 1/D) / Gamma(n) * Gamma(N) / Gamma(N + 1/D)
//! ```
//!
//! and for `N >> n` it behaves like `(n / N)^(1/D)` up to a constant that
//! depends only on `D` and `n` (see [`approximation_ratio`]). Every product of
//! gamma functions is formed in log space so that `N` up to `1e15` is safe.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special::{gamma_ratio_log, log_gamma};

/// Largest point count accepted by [`NNQuery`].
pub const MAX_COUNT: f64 = 1e15;

/// A `(D, n, N)` triple: dimensionality, neighbour rank and point count.
///
/// `N` is real-valued so that population estimates such as `2e11` can be
/// used directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NNQuery {
    pub dim: u32,
    pub rank: u64,
    pub count: f64,
}

impl NNQuery {
    /// Builds a query, checking `D >= 1`, `n >= 1` and `n + 1 <= N <= 1e15`.
    pub fn new(dim: u32, rank: u64, count: f64) -> Result<Self> {
        let q = Self { dim, rank, count };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_base()?;
        if self.count < self.rank as f64 + 1.0 {
            return Err(domain(format!("N must be at least n + 1 = {} (got N = {})", self.rank + 1, self.count)));
        }
        Ok(())
    }

    fn validate_base(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(domain("dimensionality D must be at least 1"));
        }
        if self.rank == 0 {
            return Err(domain("neighbour rank n must be at least 1"));
        }
        if !self.count.is_finite() || self.count <= 0.0 {
            return Err(domain(format!("N must be finite and positive, got {}", self.count)));
        }
        if self.count > MAX_COUNT {
            return Err(domain(format!("N = {} exceeds the supported maximum 1e15", self.count)));
        }
        Ok(())
    }
}

/// `ln` of the `N`-independent prefactor `C(D, n)`.
fn ln_prefactor(dim: u32, rank: u64) -> Result<f64> {
    let d = f64::from(dim);
    let s = 1.0 / d;
    let ln_ball = log_gamma(d / 2.0 + 1.0)? / d - 0.5 * PI.ln();
    // ln Gamma(n + 1/D) - ln Gamma(n), formed without cancellation.
    let ln_rank = -gamma_ratio_log(rank as f64, s)?;
    Ok(ln_ball + ln_rank)
}

/// Exact mean n-th nearest-neighbour distance.
pub fn nn_mean_exact(q: &NNQuery) -> Result<f64> {
    q.validate()?;
    let s = 1.0 / f64::from(q.dim);
    let ln = ln_prefactor(q.dim, q.rank)? + gamma_ratio_log(q.count, s)?;
    Ok(ln.exp())
}

/// The approximation `(n / N)^(1/D)`.
pub fn nn_mean_approx(q: &NNQuery) -> Result<f64> {
    q.validate_base()?;
    if q.count < q.rank as f64 {
        return Err(domain(format!("N must be at least n = {} (got N = {})", q.rank, q.count)));
    }
    let s = 1.0 / f64::from(q.dim);
    Ok((s * ((q.rank as f64).ln() - q.count.ln())).exp())
}

/// `C(D, n)`, the large-`N` coefficient in `<r_n(N)> ~ C(D, n) N^(-1/D)`.
pub fn large_n_coefficient(dim: u32, rank: u64) -> Result<f64> {
    check_dim_rank(dim, rank)?;
    Ok(ln_prefactor(dim, rank)?.exp())
}

/// Limit of `nn_mean_exact / nn_mean_approx` as `N -> infinity`, equal to
/// `C(D, n) / n^(1/D)`.
pub fn approximation_ratio(dim: u32, rank: u64) -> Result<f64> {
    check_dim_rank(dim, rank)?;
    let s = 1.0 / f64::from(dim);
    Ok((ln_prefactor(dim, rank)? - s * (rank as f64).ln()).exp())
}

fn check_dim_rank(dim: u32, rank: u64) -> Result<()> {
    if dim == 0 {
        return Err(domain("dimensionality D must be at least 1"));
    }
    if rank == 0 {
        return Err(domain("neighbour rank n must be at least 1"));
    }
    Ok(())
}
