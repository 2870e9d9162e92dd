//! Candidate values for the number of entities a synthetic face could be
//! mistaken for, plus the training-set sizes they are compared against.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationEstimate {
    pub label: &'static str,
    pub count: f64,
    pub provenance: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetInfo {
    pub name: &'static str,
    pub image_count: Option<u64>,
    pub identity_count_upper_bound: Option<u64>,
    /// The identity count is an order-of-magnitude figure.
    pub approximate: bool,
}

pub const LIVING: f64 = 7.8e9;
pub const EVER_LIVED: f64 = 1.0e11;
pub const EVER_WILL_LIVE_MEDIAN: f64 = 2.0e11;

/// Average number of faces a person knows.
pub const KNOWN_FACES: f64 = 5000.0;

const ESTIMATES: [PopulationEstimate; 3] = [
    PopulationEstimate {
        label: "living",
        count: LIVING,
        provenance: "global demographic estimate of currently living humans (7.8 billion)",
    },
    PopulationEstimate {
        label: "ever_lived",
        count: EVER_LIVED,
        provenance: "demographic estimate of humans who have ever lived (roughly 100 billion)",
    },
    PopulationEstimate {
        label: "ever_will_live_median",
        count: EVER_WILL_LIVE_MEDIAN,
        provenance: "median Copernican extrapolation of everyone who will ever live (ever_lived / 0.5, uniform birth-rank prior)",
    },
];

const DATASETS: [DatasetInfo; 3] = [
    DatasetInfo {
        name: "FFHQ",
        image_count: Some(70_000),
        identity_count_upper_bound: Some(70_000),
        approximate: false,
    },
    DatasetInfo { name: "CelebA", image_count: None, identity_count_upper_bound: Some(10_177), approximate: false },
    DatasetInfo { name: "LFW", image_count: None, identity_count_upper_bound: Some(10_000), approximate: true },
];

pub fn builtin_estimates() -> Vec<PopulationEstimate> {
    ESTIMATES.to_vec()
}

pub fn lookup_estimate(label: &str) -> Result<PopulationEstimate> {
    ESTIMATES.iter().find(|e| e.label == label).cloned().ok_or_else(|| {
        let known: Vec<_> = ESTIMATES.iter().map(|e| e.label).collect();
        domain(format!("unknown population label '{label}' (known: {})", known.join(", ")))
    })
}

pub fn builtin_datasets() -> Vec<DatasetInfo> {
    DATASETS.to_vec()
}

impl DatasetInfo {
    /// Identity count if known, else the image count.
    pub fn reference_count(&self) -> Option<u64> {
        self.identity_count_upper_bound.or(self.image_count)
    }
}

/// Total number of people who will ever exist, assuming our birth rank among
/// them is uniform: the value exceeded with probability `rank_quantile`.
pub fn copernican_total(past_count: f64, rank_quantile: f64) -> Result<f64> {
    if !past_count.is_finite() || past_count <= 0.0 {
        return Err(domain(format!("past count must be finite and positive, got {past_count}")));
    }
    if !(rank_quantile > 0.0 && rank_quantile <= 1.0) {
        return Err(domain(format!("rank quantile must lie in (0, 1], got {rank_quantile}")));
    }
    Ok(past_count / rank_quantile)
}

pub fn fold_ratio(population: f64, dataset_count: f64) -> Result<f64> {
    if !population.is_finite() || population <= 0.0 {
        return Err(domain(format!("population must be finite and positive, got {population}")));
    }
    if !dataset_count.is_finite() || dataset_count <= 0.0 {
        return Err(domain(format!("dataset count must be finite and positive, got {dataset_count}")));
    }
    Ok(population / dataset_count)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamiliarityStats {
    pub known_count: f64,
    pub familiar_fraction: f64,
    /// `1 / familiar_fraction`: one familiar face in this many.
    pub one_in: f64,
}

pub fn familiarity_stats(known_faces: f64, population: f64) -> Result<FamiliarityStats> {
    if !known_faces.is_finite() || known_faces <= 0.0 {
        return Err(domain(format!("known faces must be finite and positive, got {known_faces}")));
    }
    if !population.is_finite() || population <= 0.0 {
        return Err(domain(format!("population must be finite and positive, got {population}")));
    }
    let fraction = known_faces / population;
    Ok(FamiliarityStats { known_count: known_faces, familiar_fraction: fraction, one_in: 1.0 / fraction })
}
