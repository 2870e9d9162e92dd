//! Exact versus power-law mean nearest-neighbour distance, and how slowly
//! the ratio between them approaches its limit.
//!
//! ```bash
//! cargo run --example nn_distances -- 10
//! ```

use coincidental::nn_stats::{approximation_ratio, nn_mean_approx, nn_mean_exact};
use coincidental::NNQuery;

fn main() -> coincidental::Result<()> {
    let dim: u32 = std::env::args().nth(1).map_or(10, |s| s.parse().expect("D must be an integer"));

    println!("D = {dim}");
    println!("{:>10} {:>8} {:>14} {:>14} {:>10}", "N", "rank", "exact", "approx", "ratio");
    for count in [10.0, 1e3, 1e6, 7.8e9, 2e11, 1e15] {
        for rank in [1, 2, 5] {
            let q = NNQuery::new(dim, rank, count)?;
            let exact = nn_mean_exact(&q)?;
            let approx = nn_mean_approx(&q)?;
            println!("{count:>10.1e} {rank:>8} {exact:>14.6e} {approx:>14.6e} {:>10.6}", exact / approx);
        }
    }
    for rank in [1, 2, 5] {
        println!("limit of the ratio for rank {rank}: {:.6}", approximation_ratio(dim, rank)?);
    }
    Ok(())
}
