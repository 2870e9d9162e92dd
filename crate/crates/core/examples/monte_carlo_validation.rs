//! Monte Carlo means on the unit torus against the closed form.
//!
//! ```bash
//! cargo run --release --example monte_carlo_validation -- 8 1024 100
//! ```

use coincidental::geometry::run_simulation;
use coincidental::nn_stats::nn_mean_exact;
use coincidental::{NNQuery, SimConfig, Topology};

fn main() -> coincidental::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().expect("arguments are D N trials"));
    let dim = args.next().unwrap_or(3);
    let points = args.next().unwrap_or(1024);
    let trials = args.next().unwrap_or(100);

    for topology in [Topology::Torus, Topology::Cube] {
        let cfg = SimConfig::new(dim, points, trials, 1, topology, 4)?;
        let sim = run_simulation(&cfg)?;
        println!("{topology}: D = {dim}, N = {points}, {trials} trials");
        for r in &sim.ranks {
            let theory = nn_mean_exact(&NNQuery::new(dim as u32, r.rank as u64, points as f64)?)?;
            println!(
                "  rank {}  empirical {:.6} +- {:.6}  theory {:.6}  z {:+.2}",
                r.rank,
                r.mean,
                r.se,
                theory,
                (r.mean - theory) / r.se
            );
        }
    }
    println!("the cube's walls push neighbours away; only the torus should match");
    Ok(())
}
