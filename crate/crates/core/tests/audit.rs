//! Audit statistics on the recorded fixtures plus property checks.

use std::fs::File;
use std::path::PathBuf;

use coincidental::audit::{
    criteria_grid, curve_to_csv, extrapolate_jnd_fraction, false_alarm_rate, far_curve, jnd_fraction,
    paired_discrimination, parse_audit_csv, parse_paired_csv, write_audit_csv, AuditOptions, AuditRecord, AuditReport,
    PairedRecord,
};
use coincidental::Error;
use proptest::prelude::*;

fn fixture(name: &str) -> File {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    File::open(path).unwrap()
}

fn records() -> Vec<AuditRecord> {
    parse_audit_csv(fixture("synthetic_audit.csv")).unwrap()
}

fn pairs() -> Vec<PairedRecord> {
    parse_paired_csv(fixture("synthetic_pairs.csv")).unwrap()
}

#[test]
fn fixture_false_alarm_rate() {
    let far = false_alarm_rate(&records()).unwrap();
    assert_eq!((far.k, far.n), (144, 1000));
    assert_eq!(far.rate, 0.144);
    assert!((far.se - 0.0111).abs() < 5e-5, "{}", far.se);
}

#[test]
fn fixture_discrimination_and_jnd() {
    let d = paired_discrimination(&pairs()).unwrap();
    assert_eq!(d.n_pairs, 20);
    assert_eq!(d.proportion_real_wins, 0.85);

    // 0.14 * 0.15 is 0.021000000000000005 in binary floating point
    let j = jnd_fraction(0.14, 0.85).unwrap();
    assert!((j - 0.021).abs() <= 1e-15, "{j}");
    let j = jnd_fraction(0.144, d.proportion_real_wins).unwrap();
    assert!((j - 0.0216).abs() <= 1e-15, "{j}");
    assert_eq!(jnd_fraction(0.3, 1.0).unwrap(), 0.0);
}

#[test]
fn extrapolation_examples() {
    assert_eq!(extrapolate_jnd_fraction(0.021, 8e6, 8e6).unwrap(), 0.021);
    assert_eq!(extrapolate_jnd_fraction(0.021, 8e6, 7.8e9).unwrap(), 1.0);
    assert!((extrapolate_jnd_fraction(1e-6, 1e6, 2e6).unwrap() - 2e-6).abs() < 1e-20);
    assert!(extrapolate_jnd_fraction(1.5, 1e6, 2e6).is_err());
    assert!(extrapolate_jnd_fraction(0.1, 0.0, 2e6).is_err());
}

#[test]
fn curve_counts() {
    let mut recs: Vec<AuditRecord> = (0..72).map(|i| AuditRecord::matched(format!("a{i}"), "X", 0.6)).collect();
    recs.extend((0..72).map(|i| AuditRecord::matched(format!("b{i}"), "Y", 0.8)));
    recs.extend((0..856).map(|i| AuditRecord::unmatched(format!("c{i}"))));
    let curve = far_curve(&recs, &[0.0, 0.5, 0.7, 0.8, 1.0]).unwrap();
    let rates: Vec<f64> = curve.iter().map(|p| p.rate).collect();
    assert_eq!(rates, [0.144, 0.144, 0.072, 0.072, 0.0]);

    let fixture = records();
    let ones = fixture.iter().filter(|r| r.confidence == Some(1.0)).count() as f64;
    let top = far_curve(&fixture, &[1.0]).unwrap()[0].rate;
    assert_eq!(top, ones / 1000.0);
    assert!(ones > 0.0);
}

#[test]
fn curve_rejects_bad_criteria() {
    let recs = records();
    assert!(far_curve(&recs, &[0.7, 0.6]).is_err());
    assert!(far_curve(&recs, &[1.2]).is_err());
    assert!(far_curve(&recs, &[]).is_err());
    assert!(far_curve(&[], &[0.5]).is_err());
    let grid = criteria_grid(11).unwrap();
    assert_eq!(grid.first(), Some(&0.5));
    assert_eq!(grid.last(), Some(&1.0));
    let csv = curve_to_csv(&far_curve(&recs, &grid).unwrap());
    assert!(csv.starts_with("criterion,rate,standard_error\n"));
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn row_level_validation() {
    let input = "image_id,matched,identity,confidence\n\
                 s001,true,CelebX,0.83\n\
                 s002,false,,\n\
                 s003,true,CelebY,0.40\n\
                 s004,maybe,,\n\
                 s005,true,,0.9\n";
    match parse_audit_csv(input.as_bytes()) {
        Err(Error::InvalidRows(rows)) => {
            let numbers: Vec<usize> = rows.iter().map(|r| r.row).collect();
            assert_eq!(numbers, [3, 4, 5]);
            assert!(rows[0].message.contains("0.5"), "{}", rows[0].message);
        }
        other => panic!("expected row errors, got {other:?}"),
    }
    let ok = parse_audit_csv("image_id,matched,identity,confidence\ns001,true,CelebX,0.83\ns002,false,,\n".as_bytes())
        .unwrap();
    assert_eq!(ok[0], AuditRecord::matched("s001", "CelebX", 0.83));
    assert_eq!(ok[1], AuditRecord::unmatched("s002"));
}

#[test]
fn header_and_empty_files() {
    assert!(matches!(parse_audit_csv("".as_bytes()), Err(Error::Input(_))));
    assert!(matches!(parse_audit_csv("image_id,matched,identity,confidence\n".as_bytes()), Err(Error::Input(_))));
    assert!(matches!(parse_audit_csv("id,matched,identity,confidence\nx,false,,\n".as_bytes()), Err(Error::Input(_))));
    assert!(matches!(
        parse_paired_csv("identity,real_confidence,synthetic_confidence\nA,0.5,0.6\n".as_bytes()),
        Err(Error::Input(_))
    ));
}

#[test]
fn report_from_fixtures() {
    let opts = AuditOptions {
        criteria: criteria_grid(11).unwrap(),
        gallery_size: 8e6,
        target: ("living".into(), 7.8e9),
        coverage: vec![("living".into(), 7.8e9), ("ever_lived".into(), 1e11)],
    };
    let recs = records();
    let p = pairs();
    let full = AuditReport::build(&recs, Some(&p), &opts).unwrap();
    assert_eq!(full.far.rate, 0.144);
    assert_eq!(full.extrapolation.as_ref().unwrap().fraction, 1.0);
    assert!(!full.extrapolation.as_ref().unwrap().linear_regime);
    assert!((full.gallery_coverage[1].gallery_share - 8e-5).abs() < 1e-18);
    assert!((full.gallery_coverage[0].gallery_share - 8e6 / 7.8e9).abs() < 1e-18);

    let bare = AuditReport::build(&recs, None, &opts).unwrap();
    let json = serde_json::to_value(&bare).unwrap();
    assert!(json.get("discrimination").is_none());
    assert!(json.get("jnd_fraction").is_none());
    assert!(json.get("extrapolation").is_none());
    assert_eq!(json["far"]["k"], 144);
}

fn record_set() -> impl Strategy<Value = Vec<AuditRecord>> {
    let confidence = prop_oneof![0.5..=1.0f64, (0u8..=10).prop_map(|k| 0.5 + f64::from(k) / 20.0)];
    prop::collection::vec((any::<bool>(), confidence), 1..300).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (m, c))| {
                if m {
                    AuditRecord::matched(format!("s{i}"), format!("id{}", i % 7), c)
                } else {
                    AuditRecord::unmatched(format!("s{i}"))
                }
            })
            .collect()
    })
}

fn pair_set() -> impl Strategy<Value = Vec<(f64, f64)>> {
    let conf = prop_oneof![0.0..=1.0f64, (0u8..=4).prop_map(|k| f64::from(k) / 4.0)];
    prop::collection::vec((conf.clone(), conf), 1..100)
}

fn to_pairs(raw: &[(f64, f64)], f: impl Fn(f64) -> f64) -> Vec<PairedRecord> {
    raw.iter()
        .map(|&(s, r)| PairedRecord { identity: "id".into(), synthetic_confidence: f(s), real_confidence: f(r) })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn far_curve_is_non_increasing(recs in record_set(), mut criteria in prop::collection::vec(0.0..=1.0f64, 1..40)) {
        criteria.sort_by(f64::total_cmp);
        let curve = far_curve(&recs, &criteria).unwrap();
        for w in curve.windows(2) {
            prop_assert!(w[1].rate <= w[0].rate);
        }
        let at_floor = far_curve(&recs, &[0.5]).unwrap()[0].rate;
        prop_assert_eq!(at_floor, false_alarm_rate(&recs).unwrap().rate);
    }

    #[test]
    fn discrimination_depends_only_on_order(raw in pair_set(), scale in 0.1..10.0f64, shift in -5.0..5.0f64) {
        let base = paired_discrimination(&to_pairs(&raw, |x| x)).unwrap();
        // strictly increasing transforms, applied to both confidences
        let transforms: [Box<dyn Fn(f64) -> f64>; 3] = [
            Box::new(move |x| scale * x + shift),
            Box::new(|x| x * x * x),
            Box::new(|x: f64| x.exp()),
        ];
        for f in transforms {
            let moved = paired_discrimination(&to_pairs(&raw, f)).unwrap();
            prop_assert_eq!(moved, base);
        }
    }

    #[test]
    fn jnd_partition(far in 0.0..=1.0f64, d in 0.0..=1.0f64) {
        let sum = jnd_fraction(far, d).unwrap() + jnd_fraction(far, 1.0 - d).unwrap();
        prop_assert!((sum - far).abs() <= 4.0 * f64::EPSILON * far.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn csv_round_trip(recs in record_set()) {
        let mut buf = Vec::new();
        write_audit_csv(&recs, &mut buf).unwrap();
        let back = parse_audit_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, recs);
    }
}
