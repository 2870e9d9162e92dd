//! Population estimates, the Copernican extrapolation and how many times
//! larger each population is than common face datasets.

use coincidental::population::{
    builtin_datasets, builtin_estimates, copernican_total, familiarity_stats, fold_ratio, EVER_LIVED, KNOWN_FACES,
};

fn main() -> coincidental::Result<()> {
    for e in builtin_estimates() {
        println!("{:<24} {:>8.1e}  {}", e.label, e.count, e.provenance);
    }

    println!("\ntotal ever born, given {EVER_LIVED:e} so far");
    for q in [1.0, 0.5, 0.25, 0.05] {
        println!("  exceeded with probability {q:<4}: {:.2e}", copernican_total(EVER_LIVED, q)?);
    }

    println!("\nfold ratios");
    for d in builtin_datasets() {
        let Some(count) = d.reference_count() else { continue };
        for e in builtin_estimates() {
            println!("  {:<24} / {:<6} = {:>12.1}", e.label, d.name, fold_ratio(e.count, count as f64)?);
        }
    }

    println!("\nfamiliar faces ({KNOWN_FACES})");
    for e in builtin_estimates() {
        let f = familiarity_stats(KNOWN_FACES, e.count)?;
        println!("  {:<24} 1 in {:.0}", e.label, f.one_in);
    }
    Ok(())
}
