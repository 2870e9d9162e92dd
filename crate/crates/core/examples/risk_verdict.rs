//! The privacy criterion across the plausible range of face-space
//! dimensionality, for each builtin population estimate.

use coincidental::perception::{critical_population, risk_verdict, DIM_RANGE};
use coincidental::population::builtin_estimates;
use coincidental::PerceptualParams;

fn main() -> coincidental::Result<()> {
    let params = PerceptualParams::default();
    println!("d' = {}, c = {} JND", params.d_prime, params.threshold);
    println!("{:<24} {:>3} {:>12} {:>9} {:>12}", "population", "D", "d'<r_1>", "at risk", "P(confuse)");
    for est in builtin_estimates() {
        for dim in DIM_RANGE {
            let r = risk_verdict(&params, est.count, dim)?;
            println!(
                "{:<24} {dim:>3} {:>12.6} {:>9} {:>12.6}",
                est.label, r.mean_nn_jnd, r.at_risk, r.confusion_probability
            );
        }
    }

    // A stricter likeness threshold pushes the critical population up fast.
    println!("\ncritical population at D = 10");
    for c in [1.0, 0.5, 0.1, 0.05] {
        let p = PerceptualParams::new(1.0, c)?;
        println!("  c = {c:<5} N* = {:.4e}", critical_population(&p, 10, 1)?);
    }
    Ok(())
}
