//! Builds the false-alarm report from the bundled CSV fixtures, or from
//! paths given on the command line.
//!
//! ```bash
//! cargo run --example audit_report -- records.csv pairs.csv
//! ```

use std::fs::File;
use std::path::PathBuf;

use coincidental::audit::{criteria_grid, parse_audit_csv, parse_paired_csv, AuditOptions, AuditReport};
use coincidental::population::{lookup_estimate, EVER_LIVED, LIVING};

fn main() -> coincidental::Result<()> {
    let fixtures: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures"].iter().collect();
    let mut args = std::env::args().skip(1).map(PathBuf::from);
    let records_path = args.next().unwrap_or_else(|| fixtures.join("synthetic_audit.csv"));
    let pairs_path = args.next().unwrap_or_else(|| fixtures.join("synthetic_pairs.csv"));

    let records = parse_audit_csv(File::open(&records_path)?)?;
    let pairs = parse_paired_csv(File::open(&pairs_path)?)?;
    let target = lookup_estimate("ever_lived")?;
    let opts = AuditOptions {
        criteria: criteria_grid(11)?,
        gallery_size: 8e6,
        target: (target.label.into(), target.count),
        coverage: vec![("living".into(), LIVING), ("ever_lived".into(), EVER_LIVED)],
    };
    let report = AuditReport::build(&records, Some(&pairs), &opts)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
