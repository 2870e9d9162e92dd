//! Times brute-force and k-d tree neighbour search on one random instance
//! and checks that both return the same distances.
//!
//! ```bash
//! cargo run --release --example neighbor_search -- 8 10000
//! ```

use std::time::Instant;

use coincidental::geometry::{nn_distances_accelerated, nn_distances_bruteforce, sample_points};
use coincidental::{SimConfig, Topology};

fn main() -> coincidental::Result<()> {
    let mut args = std::env::args().skip(1);
    let dim: usize = args.next().map_or(8, |s| s.parse().expect("D"));
    let points: usize = args.next().map_or(10_000, |s| s.parse().expect("N"));

    for topology in [Topology::Torus, Topology::Cube] {
        let cfg = SimConfig::new(dim, points, 1, 42, topology, 1)?;
        let pts = sample_points(&cfg, 0)?;

        let t0 = Instant::now();
        let brute = nn_distances_bruteforce(&pts, 1, topology)?;
        let brute_time = t0.elapsed();

        let t1 = Instant::now();
        let fast = nn_distances_accelerated(&pts, 1, topology)?;
        let fast_time = t1.elapsed();

        println!(
            "{topology:<5} D={dim} N={points}: brute {:>9.1} ms, k-d tree {:>8.1} ms, speedup {:>5.1}x, identical: {}",
            brute_time.as_secs_f64() * 1e3,
            fast_time.as_secs_f64() * 1e3,
            brute_time.as_secs_f64() / fast_time.as_secs_f64(),
            brute == fast
        );
    }
    Ok(())
}
