//! Neighbour search and Monte Carlo checks against the closed form.

use coincidental::geometry::{
    nn_distances_accelerated, nn_distances_bruteforce, nn_to_random_ratio, run_simulation, sample_points, PointSet,
    SimConfig, Topology,
};
use coincidental::nn_stats::{nn_mean_exact, NNQuery};
use proptest::prelude::*;

fn theory(dim: usize, rank: u64, n: usize) -> f64 {
    nn_mean_exact(&NNQuery::new(dim as u32, rank, n as f64).unwrap()).unwrap()
}

fn coordinate() -> impl Strategy<Value = f64> {
    // A coarse lattice mixed in with continuous values forces exact ties and
    // duplicate points.
    prop_oneof![
        3 => 0.0..1.0f64,
        1 => (0u8..8).prop_map(|k| f64::from(k) / 8.0),
    ]
}

fn instance() -> impl Strategy<Value = (PointSet, usize, Topology)> {
    (prop::sample::select(vec![1usize, 2, 3, 8]), 2usize..=500, any::<bool>())
        .prop_flat_map(|(dim, n, torus)| {
            let topo = if torus { Topology::Torus } else { Topology::Cube };
            (prop::collection::vec(coordinate(), dim * n), 1..n.min(6), Just(dim), Just(topo))
        })
        .prop_map(|(coords, rank, dim, topo)| (PointSet::new(dim, coords).unwrap(), rank, topo))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn accelerated_equals_bruteforce((points, rank, topo) in instance()) {
        let brute = nn_distances_bruteforce(&points, rank, topo).unwrap();
        let fast = nn_distances_accelerated(&points, rank, topo).unwrap();
        prop_assert_eq!(brute, fast);
    }
}

#[test]
fn accelerated_equals_bruteforce_on_sampled_grid() {
    let mut checked = 0;
    for dim in [1, 2, 3, 8] {
        for n in [2, 3, 17, 100, 257, 500] {
            for topo in [Topology::Torus, Topology::Cube] {
                let cfg = SimConfig::new(dim, n, 1, 1234 + n as u64, topo, 1).unwrap();
                let p = sample_points(&cfg, 0).unwrap();
                let rank = (n - 1).min(4);
                assert_eq!(
                    nn_distances_bruteforce(&p, rank, topo).unwrap(),
                    nn_distances_accelerated(&p, rank, topo).unwrap(),
                    "D={dim} N={n} {topo}"
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 48);
}

#[test]
fn simulation_matches_theory_within_three_se() {
    for dim in [1, 2, 3, 8] {
        for n in [256, 1024] {
            let cfg = SimConfig::new(dim, n, 100, 20_240_901, Topology::Torus, 2).unwrap();
            let res = run_simulation(&cfg).unwrap();
            for rank in [1, 2] {
                let stat = res.rank(rank).unwrap();
                let want = theory(dim, rank as u64, n);
                let z = (stat.mean - want) / stat.se;
                assert!(z.abs() <= 3.0, "D={dim} N={n} rank {rank}: {} vs {want} (z = {z:.2})", stat.mean);
                assert_eq!(stat.count, (n * 100) as u64);
            }
        }
    }
}

#[test]
fn one_dimensional_simulation_hits_closed_form() {
    let cfg = SimConfig::new(1, 1024, 100, 7, Topology::Torus, 1).unwrap();
    let r1 = run_simulation(&cfg).unwrap().ranks[0];
    assert!((r1.mean - 1.0 / 2048.0).abs() <= 3.0 * r1.se, "{r1:?}");
}

#[test]
fn means_increase_with_rank() {
    for (dim, topo) in [(1, Topology::Torus), (3, Topology::Cube), (8, Topology::Torus)] {
        let cfg = SimConfig::new(dim, 300, 10, 3, topo, 6).unwrap();
        let res = run_simulation(&cfg).unwrap();
        for w in res.ranks.windows(2) {
            assert!(w[1].mean > w[0].mean, "D={dim} {topo}: {:?}", res.ranks);
        }
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let cfg = SimConfig::new(3, 400, 24, 99, Topology::Torus, 3).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| run_simulation(&cfg).unwrap())
    };
    let one = run(1);
    for threads in [2, 4, 7] {
        let other = run(threads);
        assert_eq!(one, other, "{threads} threads");
        // bitwise, not just numerically equal
        for (a, b) in one.ranks.iter().zip(&other.ranks) {
            assert_eq!(a.mean.to_bits(), b.mean.to_bits());
            assert_eq!(a.se.to_bits(), b.se.to_bits());
        }
    }
    assert_eq!(one.to_csv(), run(3).to_csv());
}

#[test]
fn cube_walls_inflate_neighbour_distance() {
    for dim in [2, 3, 8] {
        let mean = |topo| {
            let cfg = SimConfig::new(dim, 256, 40, 5, topo, 1).unwrap();
            run_simulation(&cfg).unwrap().ranks[0].mean
        };
        let (torus, cube) = (mean(Topology::Torus), mean(Topology::Cube));
        assert!(cube > torus, "D={dim}: cube {cube} torus {torus}");
    }
}

#[test]
fn neighbour_to_random_ratio() {
    let low = nn_to_random_ratio(1, 1000, 20, 1).unwrap();
    assert!((low - 0.002).abs() < 2e-4, "{low}");
    let high = nn_to_random_ratio(16, 1000, 4, 1).unwrap();
    assert!(high > 0.5 && high < 1.0, "{high}");
    assert_eq!(nn_to_random_ratio(5, 2, 3, 8).unwrap(), 1.0);
}

#[test]
fn serialized_forms() {
    let cfg = SimConfig::new(2, 64, 3, 11, Topology::Cube, 2).unwrap();
    let res = run_simulation(&cfg).unwrap();
    let csv = res.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("rank,mean,se,count"));
    assert_eq!(lines.count(), 2);
    let v: serde_json::Value = serde_json::from_str(&res.to_json().unwrap()).unwrap();
    assert_eq!(v["config"]["topology"], "cube");
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["ranks"][1]["rank"], 2);
    assert_eq!(v["ranks"][0]["count"], 192);
}
