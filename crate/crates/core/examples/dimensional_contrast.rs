//! In high dimensions the nearest neighbour is barely closer than a random
//! point: the ratio of the two mean distances climbs towards one.

use coincidental::geometry::nn_to_random_ratio;

fn main() -> coincidental::Result<()> {
    let points = 1000;
    println!("N = {points} points on the unit torus");
    for dim in [1, 2, 3, 5, 8, 12, 16, 24, 32] {
        let ratio = nn_to_random_ratio(dim, points, 4, 7)?;
        let bar = "#".repeat((ratio * 50.0).round() as usize);
        println!("D = {dim:>2}  ratio {ratio:.4}  {bar}");
    }
    Ok(())
}
