use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::search::nn_distances_accelerated;
use super::{distance_sq, sample_uniform, Topology};
use crate::error::{domain, Result};

pub const MAX_DIM: usize = 32;
pub const MAX_POINTS: usize = 100_000;

/// Monte Carlo experiment configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dim: usize,
    pub points: usize,
    pub trials: usize,
    pub seed: u64,
    pub topology: Topology,
    pub max_rank: usize,
}

impl SimConfig {
    pub fn new(
        dim: usize,
        points: usize,
        trials: usize,
        seed: u64,
        topology: Topology,
        max_rank: usize,
    ) -> Result<Self> {
        let cfg = Self { dim, points, trials, seed, topology, max_rank };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(domain(format!("D must be in 1..={MAX_DIM}, got {}", self.dim)));
        }
        if self.points < 2 || self.points > MAX_POINTS {
            return Err(domain(format!("N must be in 2..={MAX_POINTS}, got {}", self.points)));
        }
        if self.trials == 0 {
            return Err(domain("trials must be at least 1"));
        }
        if self.max_rank == 0 || self.max_rank >= self.points {
            return Err(domain(format!(
                "max_rank must satisfy 1 <= max_rank < N (max_rank = {}, N = {})",
                self.max_rank, self.points
            )));
        }
        Ok(())
    }
}

/// Empirical statistics for one neighbour rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankStat {
    pub rank: usize,
    pub mean: f64,
    pub se: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub config: SimConfig,
    pub ranks: Vec<RankStat>,
}

impl SimResult {
    pub fn rank(&self, rank: usize) -> Option<&RankStat> {
        self.ranks.get(rank.checked_sub(1)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,mean,se,count\n");
        for r in &self.ranks {
            out.push_str(&format!("{},{},{},{}\n", r.rank, r.mean, r.se, r.count));
        }
        out
    }
}

/// Running mean and sum of squared deviations (Welford), mergeable with
/// Chan's pairwise update.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let wa = self.count as f64;
        let wb = other.count as f64;
        self.mean += delta * wb / n;
        self.m2 += other.m2 + delta * delta * wa * wb / n;
        self.count += other.count;
    }

    fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
    }
}

fn trial_moments(config: &SimConfig, trial: usize) -> Result<Vec<Moments>> {
    let points = sample_uniform(config.dim, config.points, config.seed, trial as u64);
    let nn = nn_distances_accelerated(&points, config.max_rank, config.topology)?;
    let mut moments = vec![Moments::default(); config.max_rank];
    for row in nn.rows() {
        for (m, &d) in moments.iter_mut().zip(row) {
            m.push(d);
        }
    }
    Ok(moments)
}

/// Runs every trial and aggregates per-rank distance statistics over all
/// `N * trials` per-point observations.
///
/// Trials run in parallel; their partial moments are merged in trial order,
/// so the result does not depend on the thread count. The standard error
/// treats all observations as independent, which ignores the mild
/// within-trial correlation.
pub fn run_simulation(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let per_trial: Vec<Vec<Moments>> =
        (0..config.trials).into_par_iter().map(|t| trial_moments(config, t)).collect::<Result<_>>()?;

    let mut total = vec![Moments::default(); config.max_rank];
    for trial in &per_trial {
        for (acc, m) in total.iter_mut().zip(trial) {
            acc.merge(m);
        }
    }
    let ranks = total
        .iter()
        .enumerate()
        .map(|(i, m)| RankStat { rank: i + 1, mean: m.mean, se: m.standard_error(), count: m.count })
        .collect();
    Ok(SimResult { config: *config, ranks })
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Ratio of the mean rank-1 neighbour distance to the mean distance between
/// distinct pairs, on the unit torus.
///
/// Low dimensions give a ratio far below one; as `D` grows the nearest
/// neighbour is barely closer than an arbitrary point.
pub fn nn_to_random_ratio(dim: usize, points: usize, trials: usize, seed: u64) -> Result<f64> {
    let cfg = SimConfig::new(dim, points, trials, seed, Topology::Torus, 1)?;
    let partial: Vec<(CompensatedSum, CompensatedSum)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let p = sample_uniform(cfg.dim, cfg.points, cfg.seed, t as u64);
            let nn = nn_distances_accelerated(&p, 1, cfg.topology)?;
            let mut near = CompensatedSum::default();
            for row in nn.rows() {
                near.add(row[0]);
            }
            let mut pairs = CompensatedSum::default();
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    pairs.add(distance_sq(p.point(i), p.point(j), cfg.topology).sqrt());
                }
            }
            Ok((near, pairs))
        })
        .collect::<Result<_>>()?;

    let (mut near, mut pairs) = (CompensatedSum::default(), CompensatedSum::default());
    for (a, b) in &partial {
        near.add(a.value());
        pairs.add(b.value());
    }
    let n = cfg.points as f64;
    let t = cfg.trials as f64;
    let mean_near = near.value() / (n * t);
    let mean_pair = pairs.value() / (n * (n - 1.0) / 2.0 * t);
    Ok(mean_near / mean_pair)
}
