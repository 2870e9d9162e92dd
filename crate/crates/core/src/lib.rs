//! Quantifies the risk that a synthetic artifact, such as a generated face,
//! is perceptually confusable with some real person outside the generator's
//! training set.
//!
//! The model treats appearances as points distributed uniformly in a
//! low-dimensional perceptual space scaled to unit volume. With `N` real
//! entities in `D` dimensions the mean distance from a random point to its
//! nearest entity shrinks like `N^(-1/D)`; once that distance, measured in
//! just-noticeable differences, falls under a likeness threshold, every
//! sample resembles someone.
//!
//! ## Modules
//!
//! - [`special`]: log-gamma and gamma-ratio evaluation that stays accurate up
//!   to `N = 1e15`
//! - [`nn_stats`]: exact and approximate mean n-th neighbour distances
//! - [`geometry`]: Monte Carlo oracle on the unit torus or cube, with brute
//!   force and k-d tree neighbour search
//! - [`perception`]: the privacy criterion, confusion probability and
//!   critical population
//! - [`population`]: population estimates, dataset sizes and fold ratios
//! - [`audit`]: false-alarm analysis of recognizer output
//! - [`cli`]: the `coincidental` command-line tool
//!
//! ## Examples
//!
//! ```text
//! examples/
//! ├── nn_distances.rs          # exact vs approximate mean distance
//! ├── risk_verdict.rs          # the criterion across D = 7..12
//! ├── monte_carlo_validation.rs# simulation vs closed form, with z-scores
//! ├── dimensional_contrast.rs  # nearest vs random pair distance ratio
//! ├── neighbor_search.rs       # brute force vs k-d tree timing
//! ├── population_figures.rs    # N estimates and fold ratios
//! └── audit_report.rs          # false-alarm report from CSV fixtures
//! ```
//!
//! ```bash
//! cargo run --release --example risk_verdict
//! cargo run --release --example monte_carlo_validation -- 8 1024 100
//! ```

pub mod audit;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod nn_stats;
pub mod perception;
pub mod population;
pub mod report;
pub mod special;

pub use error::{Error, Result};
pub use geometry::{PointSet, SimConfig, SimResult, Topology};
pub use nn_stats::NNQuery;
pub use perception::{PerceptualParams, RiskAssessment};
