//! Monte Carlo oracle for nearest-neighbour statistics of uniform points.
//!
//! Points live in the unit cube `[0, 1)^D`, either with hard walls
//! ([`Topology::Cube`]) or with periodic wrap-around ([`Topology::Torus`]).
//! The torus is the boundary-free unit volume and is what the analytic mean
//! in [`crate::nn_stats`] describes; the cube is kept to show the boundary
//! bias.

mod search;
mod sim;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use search::{nn_distances_accelerated, nn_distances_bruteforce, KdTree, NeighborDistances};
pub use sim::{nn_to_random_ratio, run_simulation, RankStat, SimConfig, SimResult, MAX_DIM, MAX_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Torus,
    Cube,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Torus => "torus",
            Topology::Cube => "cube",
        })
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(Topology::Torus),
            "cube" => Ok(Topology::Cube),
            other => Err(domain(format!("unknown topology '{other}' (expected torus or cube)"))),
        }
    }
}

/// `N` points of dimension `D` stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(domain("points must have at least one coordinate"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(domain(format!("{} coordinates do not divide into points of dimension {dim}", coords.len())));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

#[inline]
pub(crate) fn axis_gap(a: f64, b: f64, topology: Topology) -> f64 {
    let d = (a - b).abs();
    match topology {
        Topology::Cube => d,
        Topology::Torus => d.min(1.0 - d),
    }
}

/// Squared distance, summed over coordinates in index order. Every search
/// routine goes through this so that equal pairs give bit-identical values.
#[inline]
pub(crate) fn distance_sq(a: &[f64], b: &[f64], topology: Topology) -> f64 {
    let mut acc = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let g = axis_gap(x, y, topology);
        acc += g * g;
    }
    acc
}

/// As [`distance_sq`], but gives up with `None` once the running sum exceeds
/// `limit`. When it returns a value, that value equals `distance_sq`.
#[inline]
pub(crate) fn distance_sq_within(a: &[f64], b: &[f64], topology: Topology, limit: f64) -> Option<f64> {
    let mut acc = 0.0;
    let mut ca = a.chunks(4);
    let mut cb = b.chunks(4);
    while let (Some(xa), Some(xb)) = (ca.next(), cb.next()) {
        for (&x, &y) in xa.iter().zip(xb) {
            let g = axis_gap(x, y, topology);
            acc += g * g;
        }
        if acc > limit {
            return None;
        }
    }
    Some(acc)
}

/// Euclidean distance; under the torus each coordinate difference `d` is
/// replaced by `min(|d|, 1 - |d|)`.
pub fn pair_distance(a: &[f64], b: &[f64], topology: Topology) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    Ok(distance_sq(a, b, topology).sqrt())
}

/// Uniform points for one trial. The stream is a pure function of
/// `(seed, trial_index)`: ChaCha8 keyed by the seed, with the trial index as
/// the stream id.
pub fn sample_points(config: &SimConfig, trial_index: usize) -> Result<PointSet> {
    if trial_index >= config.trials {
        return Err(domain(format!("trial index {trial_index} out of range for {} trials", config.trials)));
    }
    Ok(sample_uniform(config.dim, config.points, config.seed, trial_index as u64))
}

pub(crate) fn sample_uniform(dim: usize, points: usize, seed: u64, stream: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let coords = (0..dim * points).map(|_| rng.random::<f64>()).collect();
    PointSet { dim, coords }
}
