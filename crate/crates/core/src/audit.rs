//! False-alarm analysis of face-recognizer output on synthetic portraits.
//!
//! Every positive match a recognizer reports for a synthetic image is a false
//! alarm. From a table of match decisions this module computes the false
//! alarm rate and its dependence on the confidence criterion; from paired
//! confidences (real photo vs. synthetic false alarm of the same identity) it
//! computes how often the recognizer prefers the real photo, and from both the
//! fraction of synthetic samples within one JND of a real identity.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result, RowError};

/// Recognizers report a positive match only above this confidence.
pub const MATCH_FLOOR: f64 = 0.5;

pub const AUDIT_HEADER: [&str; 4] = ["image_id", "matched", "identity", "confidence"];
pub const PAIRED_HEADER: [&str; 3] = ["identity", "synthetic_confidence", "real_confidence"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub image_id: String,
    pub matched: bool,
    pub identity: Option<String>,
    pub confidence: Option<f64>,
}

impl AuditRecord {
    pub fn matched(image_id: impl Into<String>, identity: impl Into<String>, confidence: f64) -> Self {
        Self { image_id: image_id.into(), matched: true, identity: Some(identity.into()), confidence: Some(confidence) }
    }

    pub fn unmatched(image_id: impl Into<String>) -> Self {
        Self { image_id: image_id.into(), matched: false, identity: None, confidence: None }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.image_id.is_empty() {
            return Err("image_id is empty".into());
        }
        if let Some(c) = self.confidence {
            if !(0.0..=1.0).contains(&c) {
                return Err(format!("confidence {c} outside [0, 1]"));
            }
        }
        if self.matched {
            if self.identity.as_deref().is_none_or(str::is_empty) {
                return Err("matched row has no identity".into());
            }
            match self.confidence {
                None => return Err("matched row has no confidence".into()),
                Some(c) if c < MATCH_FLOOR => {
                    return Err(format!("matched row has confidence {c} below the {MATCH_FLOOR} match floor"))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedRecord {
    pub identity: String,
    pub synthetic_confidence: f64,
    pub real_confidence: f64,
}

fn read_table<R: Read>(input: R, header: &[&str]) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut rows = reader.records();
    let head = match rows.next() {
        None => return Err(Error::Input("empty file".into())),
        Some(r) => r?,
    };
    if head.iter().ne(header.iter().copied()) {
        return Err(Error::Input(format!(
            "expected header '{}', found '{}'",
            header.join(","),
            head.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, row) in rows.enumerate() {
        out.push((i + 1, row?));
    }
    if out.is_empty() {
        return Err(Error::Input("file has a header but no data rows".into()));
    }
    Ok(out)
}

fn parse_unit(field: &str, name: &str) -> std::result::Result<f64, String> {
    let v: f64 = field.trim().parse().map_err(|_| format!("{name} '{field}' is not a number"))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("{name} {v} outside [0, 1]"));
    }
    Ok(v)
}

fn audit_row(row: &csv::StringRecord) -> std::result::Result<AuditRecord, String> {
    if row.len() != AUDIT_HEADER.len() {
        return Err(format!("expected {} fields, found {}", AUDIT_HEADER.len(), row.len()));
    }
    let matched = match &row[1] {
        "true" => true,
        "false" => false,
        other => return Err(format!("matched must be 'true' or 'false', found '{other}'")),
    };
    let identity = (!row[2].is_empty()).then(|| row[2].to_string());
    let confidence = if row[3].is_empty() { None } else { Some(parse_unit(&row[3], "confidence")?) };
    let rec = AuditRecord { image_id: row[0].to_string(), matched, identity, confidence };
    rec.validate()?;
    Ok(rec)
}

/// Parses an audit CSV with header `image_id,matched,identity,confidence`.
///
/// All invalid rows are collected and reported together.
pub fn parse_audit_csv<R: Read>(input: R) -> Result<Vec<AuditRecord>> {
    let rows = read_table(input, &AUDIT_HEADER)?;
    let mut records = Vec::with_capacity(rows.len());
    let mut errors = Vec::new();
    for (n, row) in rows {
        match audit_row(&row) {
            Ok(r) => records.push(r),
            Err(message) => errors.push(RowError { row: n, message }),
        }
    }
    if errors.is_empty() {
        Ok(records)
    } else {
        Err(Error::InvalidRows(errors))
    }
}

pub fn write_audit_csv<W: Write>(records: &[AuditRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AUDIT_HEADER)?;
    for r in records {
        let confidence = r.confidence.map(|c| c.to_string()).unwrap_or_default();
        w.write_record([
            r.image_id.as_str(),
            if r.matched { "true" } else { "false" },
            r.identity.as_deref().unwrap_or(""),
            confidence.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a paired CSV with header `identity,synthetic_confidence,real_confidence`.
pub fn parse_paired_csv<R: Read>(input: R) -> Result<Vec<PairedRecord>> {
    let rows = read_table(input, &PAIRED_HEADER)?;
    let mut pairs = Vec::with_capacity(rows.len());
    let mut errors = Vec::new();
    for (n, row) in rows {
        let parsed = (|| {
            if row.len() != PAIRED_HEADER.len() {
                return Err(format!("expected {} fields, found {}", PAIRED_HEADER.len(), row.len()));
            }
            if row[0].is_empty() {
                return Err("identity is empty".to_string());
            }
            Ok(PairedRecord {
                identity: row[0].to_string(),
                synthetic_confidence: parse_unit(&row[1], "synthetic_confidence")?,
                real_confidence: parse_unit(&row[2], "real_confidence")?,
            })
        })();
        match parsed {
            Ok(p) => pairs.push(p),
            Err(message) => errors.push(RowError { row: n, message }),
        }
    }
    if errors.is_empty() {
        Ok(pairs)
    } else {
        Err(Error::InvalidRows(errors))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalseAlarmRate {
    pub rate: f64,
    /// Binomial (Wald) standard error `sqrt(rate (1 - rate) / n)`.
    pub se: f64,
    pub k: u64,
    pub n: u64,
}

fn wald(k: u64, n: u64) -> (f64, f64) {
    let rate = k as f64 / n as f64;
    (rate, (rate * (1.0 - rate) / n as f64).sqrt())
}

pub fn false_alarm_rate(records: &[AuditRecord]) -> Result<FalseAlarmRate> {
    if records.is_empty() {
        return Err(domain("false alarm rate needs at least one record"));
    }
    let k = records.iter().filter(|r| r.matched).count() as u64;
    let n = records.len() as u64;
    let (rate, se) = wald(k, n);
    Ok(FalseAlarmRate { rate, se, k, n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarCurvePoint {
    pub criterion: f64,
    pub rate: f64,
    pub standard_error: f64,
}

/// False-alarm rate when only matches with confidence `>= t` count, for each
/// criterion `t` in ascending order.
pub fn far_curve(records: &[AuditRecord], criteria: &[f64]) -> Result<Vec<FarCurvePoint>> {
    if records.is_empty() {
        return Err(domain("FAR curve needs at least one record"));
    }
    if criteria.is_empty() {
        return Err(domain("FAR curve needs at least one criterion"));
    }
    if let Some(c) = criteria.iter().find(|c| !(0.0..=1.0).contains(*c)) {
        return Err(domain(format!("criterion {c} outside [0, 1]")));
    }
    if criteria.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("criteria must be sorted in ascending order"));
    }
    let mut confidences: Vec<f64> = records.iter().filter(|r| r.matched).filter_map(|r| r.confidence).collect();
    confidences.sort_by(f64::total_cmp);
    let n = records.len() as u64;
    Ok(criteria
        .iter()
        .map(|&t| {
            let below = confidences.partition_point(|&c| c < t);
            let (rate, se) = wald((confidences.len() - below) as u64, n);
            FarCurvePoint { criterion: t, rate, standard_error: se }
        })
        .collect())
}

/// `steps` evenly spaced criteria over `[0.5, 1.0]`.
pub fn criteria_grid(steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => Err(domain("curve needs at least one step")),
        1 => Ok(vec![MATCH_FLOOR]),
        k => Ok((0..k)
            .map(|i| if i == k - 1 { 1.0 } else { MATCH_FLOOR + (1.0 - MATCH_FLOOR) * i as f64 / (k - 1) as f64 })
            .collect()),
    }
}

pub fn curve_to_csv(curve: &[FarCurvePoint]) -> String {
    let mut out = String::from("criterion,rate,standard_error\n");
    for p in curve {
        out.push_str(&format!("{},{},{}\n", p.criterion, p.rate, p.standard_error));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrimination {
    pub proportion_real_wins: f64,
    pub n_pairs: u64,
}

/// Share of pairs in which the recognizer is more confident in the real photo
/// than in the synthetic false alarm. Ties count one half.
pub fn paired_discrimination(pairs: &[PairedRecord]) -> Result<Discrimination> {
    if pairs.is_empty() {
        return Err(domain("paired discrimination needs at least one pair"));
    }
    let score: f64 = pairs
        .iter()
        .map(|p| match p.real_confidence.total_cmp(&p.synthetic_confidence) {
            std::cmp::Ordering::Greater => 1.0,
            std::cmp::Ordering::Equal => 0.5,
            std::cmp::Ordering::Less => 0.0,
        })
        .sum();
    Ok(Discrimination { proportion_real_wins: score / pairs.len() as f64, n_pairs: pairs.len() as u64 })
}

fn check_unit(x: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// Fraction of synthetic samples that are both falsely matched and preferred
/// over the real photo: `far * (1 - discrimination)`.
pub fn jnd_fraction(far: f64, discrimination: f64) -> Result<f64> {
    check_unit(far, "false alarm rate")?;
    check_unit(discrimination, "discrimination")?;
    Ok(far * (1.0 - discrimination))
}

/// Scales a gallery-level fraction to a larger population, linearly:
/// `min(1, fraction * target / gallery)`. Only sound while the result is
/// small.
pub fn extrapolate_jnd_fraction(jnd_frac: f64, gallery_size: f64, target_population: f64) -> Result<f64> {
    check_unit(jnd_frac, "JND fraction")?;
    for (v, name) in [(gallery_size, "gallery size"), (target_population, "target population")] {
        if !v.is_finite() || v <= 0.0 {
            return Err(domain(format!("{name} must be finite and positive, got {v}")));
        }
    }
    Ok((jnd_frac * target_population / gallery_size).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub gallery_size: f64,
    pub target_label: String,
    pub target_population: f64,
    pub fraction: f64,
    /// `false` when the linear scaling was clamped at 1.
    pub linear_regime: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryCoverage {
    pub label: String,
    pub population: f64,
    /// `gallery_size / population`.
    pub gallery_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub far: FalseAlarmRate,
    pub curve: Vec<FarCurvePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrimination: Option<Discrimination>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jnd_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extrapolation: Option<Extrapolation>,
    pub gallery_coverage: Vec<GalleryCoverage>,
    pub notes: Vec<String>,
}

/// Inputs to [`AuditReport::build`] beyond the records themselves.
#[derive(Debug, Clone)]
pub struct AuditOptions {
    pub criteria: Vec<f64>,
    pub gallery_size: f64,
    /// `(label, count)` of the population to extrapolate to.
    pub target: (String, f64),
    /// Populations against which the gallery share is reported.
    pub coverage: Vec<(String, f64)>,
}

impl AuditReport {
    pub fn build(records: &[AuditRecord], pairs: Option<&[PairedRecord]>, opts: &AuditOptions) -> Result<Self> {
        let far = false_alarm_rate(records)?;
        let curve = far_curve(records, &opts.criteria)?;
        let mut notes = vec![format!("standard error is the binomial Wald estimate sqrt(p(1-p)/n) = {:.4}", far.se)];

        let (discrimination, jnd, extrapolation) = match pairs {
            None => (None, None, None),
            Some(pairs) => {
                let d = paired_discrimination(pairs)?;
                let j = jnd_fraction(far.rate, d.proportion_real_wins)?;
                let (label, target) = &opts.target;
                let raw = j * target / opts.gallery_size;
                let fraction = extrapolate_jnd_fraction(j, opts.gallery_size, *target)?;
                let rounded = (far.rate * 100.0).round() / 100.0;
                notes.push(format!(
                    "jnd_fraction uses the unrounded false alarm rate {}; with the rate rounded to {rounded} it is {:.4}",
                    far.rate,
                    jnd_fraction(rounded, d.proportion_real_wins)?
                ));
                if raw > 1.0 {
                    notes.push(format!("linear extrapolation to '{label}' gives {raw:.3} and is clamped to 1"));
                }
                let ex = Extrapolation {
                    gallery_size: opts.gallery_size,
                    target_label: label.clone(),
                    target_population: *target,
                    fraction,
                    linear_regime: raw <= 1.0,
                };
                (Some(d), Some(j), Some(ex))
            }
        };

        let gallery_coverage = opts
            .coverage
            .iter()
            .map(|(label, pop)| GalleryCoverage {
                label: label.clone(),
                population: *pop,
                gallery_share: opts.gallery_size / pop,
            })
            .collect();

        Ok(Self { far, curve, discrimination, jnd_fraction: jnd, extrapolation, gallery_coverage, notes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "image_id,matched,identity,confidence\n\
                       s001,true,CelebX,0.83\n\
                       s002,false,,\n";

    #[test]
    fn parses_rows() {
        let recs = parse_audit_csv(CSV.as_bytes()).unwrap();
        assert_eq!(recs[0], AuditRecord::matched("s001", "CelebX", 0.83));
        assert_eq!(recs[1], AuditRecord::unmatched("s002"));
    }

    #[test]
    fn rejects_match_below_floor_with_row_number() {
        let csv = format!("{CSV}s003,true,CelebY,0.40\ns004,maybe,,\n");
        match parse_audit_csv(csv.as_bytes()).unwrap_err() {
            Error::InvalidRows(rows) => {
                assert_eq!(rows.len(), 2);
                assert_eq!(rows[0].row, 3);
                assert!(rows[0].message.contains("match floor"));
                assert_eq!(rows[1].row, 4);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse_audit_csv("".as_bytes()), Err(Error::Input(_))));
        assert!(matches!(parse_audit_csv("image_id,matched,identity,confidence\n".as_bytes()), Err(Error::Input(_))));
        assert!(matches!(
            parse_audit_csv("id,matched,identity,confidence\na,false,,\n".as_bytes()),
            Err(Error::Input(_))
        ));
        let short = "image_id,matched,identity,confidence\na,true,X\n";
        assert!(matches!(parse_audit_csv(short.as_bytes()), Err(Error::InvalidRows(_))));
        let missing = "image_id,matched,identity,confidence\na,true,,0.9\n";
        assert!(matches!(parse_audit_csv(missing.as_bytes()), Err(Error::InvalidRows(_))));
    }

    #[test]
    fn rate_and_se() {
        let recs: Vec<_> = (0..100).map(|i| AuditRecord::unmatched(format!("s{i}"))).collect();
        let far = false_alarm_rate(&recs).unwrap();
        assert_eq!((far.rate, far.se, far.k, far.n), (0.0, 0.0, 0, 100));
        assert!(false_alarm_rate(&[]).is_err());
    }

    #[test]
    fn curve_boundaries() {
        let mut recs = vec![
            AuditRecord::matched("a", "X", 1.0),
            AuditRecord::matched("b", "Y", 0.7),
            AuditRecord::matched("c", "Z", 0.5),
        ];
        recs.push(AuditRecord::unmatched("d"));
        let curve = far_curve(&recs, &[0.0, 0.5, 0.7, 1.0]).unwrap();
        let rates: Vec<f64> = curve.iter().map(|p| p.rate).collect();
        assert_eq!(rates, vec![0.75, 0.75, 0.5, 0.25]);
        assert!(far_curve(&recs, &[0.7, 0.6]).is_err());
        assert!(far_curve(&recs, &[1.5]).is_err());
        assert!(far_curve(&recs, &[]).is_err());
    }

    #[test]
    fn grid() {
        assert_eq!(criteria_grid(3).unwrap(), vec![0.5, 0.75, 1.0]);
        assert_eq!(criteria_grid(1).unwrap(), vec![0.5]);
        assert!(criteria_grid(0).is_err());
        let g = criteria_grid(11).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(*g.last().unwrap(), 1.0);
    }

    #[test]
    fn discrimination_ties_and_wins() {
        let tie = |s: f64, r: f64| PairedRecord { identity: "X".into(), synthetic_confidence: s, real_confidence: r };
        let d = paired_discrimination(&[tie(0.7, 0.7), tie(0.9, 0.9)]).unwrap();
        assert_eq!(d.proportion_real_wins, 0.5);
        let eps = 1e-9;
        let d = paired_discrimination(&[tie(0.6, 0.6 + eps), tie(0.8, 0.8 + eps)]).unwrap();
        assert_eq!(d.proportion_real_wins, 1.0);
        assert!(paired_discrimination(&[]).is_err());
    }

    #[test]
    fn jnd_and_extrapolation() {
        assert!((jnd_fraction(0.14, 0.85).unwrap() - 0.021).abs() < 1e-15);
        assert!((jnd_fraction(0.144, 0.85).unwrap() - 0.0216).abs() < 1e-15);
        assert_eq!(jnd_fraction(0.3, 1.0).unwrap(), 0.0);
        assert!(jnd_fraction(1.2, 0.5).is_err());
        assert_eq!(extrapolate_jnd_fraction(0.021, 8e6, 8e6).unwrap(), 0.021);
        assert_eq!(extrapolate_jnd_fraction(0.021, 8e6, 7.8e9).unwrap(), 1.0);
        assert!((extrapolate_jnd_fraction(1e-6, 1e6, 2e6).unwrap() - 2e-6).abs() < 1e-21);
        assert!(extrapolate_jnd_fraction(0.1, 0.0, 1.0).is_err());
    }

    #[test]
    fn paired_parse() {
        let csv = "identity,synthetic_confidence,real_confidence\nX,0.7,0.9\nY,1.2,0.5\n";
        match parse_paired_csv(csv.as_bytes()).unwrap_err() {
            Error::InvalidRows(rows) => assert_eq!(rows[0].row, 2),
            e => panic!("unexpected {e}"),
        }
    }
}
