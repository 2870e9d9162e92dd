//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for domain or data errors.
//! Every subcommand accepts `--json`, which prints a [`ReportBundle`] with
//! the full input echo.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::audit::{self, AuditOptions, AuditReport};
use crate::error::{domain, Result};
use crate::geometry::{run_simulation, SimConfig, SimResult, Topology};
use crate::nn_stats::{approximation_ratio, nn_mean_approx, nn_mean_exact, NNQuery};
use crate::perception::{risk_verdict, PerceptualParams, RiskAssessment, DEFAULT_DIM};
use crate::population::{self, DatasetInfo, FamiliarityStats, PopulationEstimate, KNOWN_FACES};
use crate::report::ReportBundle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "coincidental", version, about = "Nearest-neighbour risk model for coincidental resemblance")]
pub struct Cli {
    /// Print a JSON report bundle instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean n-th nearest-neighbour distance among N uniform points.
    Nn(NnArgs),
    /// Evaluate the perceptual privacy criterion.
    Risk(RiskArgs),
    /// Monte Carlo check of the nearest-neighbour formula.
    Simulate(SimulateArgs),
    /// False-alarm analysis of recognizer output.
    Audit(AuditArgs),
    /// Population estimates, datasets and fold ratios.
    Population,
}

/// Accepts plain or scientific notation (`2e11`).
fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !v.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(v)
}

/// Non-negative integer in plain or scientific notation (`1e4`).
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let v = parse_real(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("'{s}' is not a non-negative integer"));
    }
    Ok(v as u64)
}

fn parse_usize(s: &str) -> std::result::Result<usize, String> {
    parse_count(s).and_then(|v| usize::try_from(v).map_err(|e| e.to_string()))
}

fn parse_u32(s: &str) -> std::result::Result<u32, String> {
    parse_count(s).and_then(|v| u32::try_from(v).map_err(|e| e.to_string()))
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").args(["exact", "approx", "both"])))]
pub struct NnArgs {
    #[arg(short = 'D', long = "D", value_parser = parse_u32)]
    pub dim: u32,
    #[arg(short = 'n', long = "n", default_value = "1", value_parser = parse_count)]
    pub rank: u64,
    #[arg(short = 'N', long = "N", value_parser = parse_real)]
    pub count: f64,
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub approx: bool,
    /// Default when no mode is given.
    #[arg(long)]
    pub both: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("population_size").required(true).args(["count", "population"])))]
pub struct RiskArgs {
    #[arg(short = 'D', long = "D", default_value_t = DEFAULT_DIM, value_parser = parse_u32)]
    pub dim: u32,
    #[arg(short = 'N', long = "N", value_parser = parse_real)]
    pub count: Option<f64>,
    /// Builtin population label (living, ever_lived, ever_will_live_median).
    #[arg(long)]
    pub population: Option<String>,
    #[arg(long = "dprime", default_value_t = 1.0, value_parser = parse_real)]
    pub d_prime: f64,
    #[arg(long = "c", default_value_t = 1.0, value_parser = parse_real)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Json,
}

fn parse_format(s: &str) -> std::result::Result<OutFormat, String> {
    match s {
        "csv" => Ok(OutFormat::Csv),
        "json" => Ok(OutFormat::Json),
        _ => Err(format!("unknown format '{s}' (expected csv or json)")),
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(short = 'D', long = "D", value_parser = parse_usize)]
    pub dim: usize,
    #[arg(short = 'N', long = "N", value_parser = parse_usize)]
    pub points: usize,
    #[arg(long, default_value = "100", value_parser = parse_usize)]
    pub trials: usize,
    #[arg(long, default_value = "0", value_parser = parse_count)]
    pub seed: u64,
    #[arg(long, default_value = "torus", value_parser = parse_topology)]
    pub topology: Topology,
    #[arg(long = "max-rank", default_value = "2", value_parser = parse_usize)]
    pub max_rank: usize,
    /// Write the simulation result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File format for --out; inferred from the extension when omitted.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<OutFormat>,
}

fn parse_topology(s: &str) -> std::result::Result<Topology, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// CSV with header image_id,matched,identity,confidence.
    #[arg(long)]
    pub records: PathBuf,
    /// CSV with header identity,synthetic_confidence,real_confidence.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// Number of identities the recognizer knows.
    #[arg(long, default_value = "8e6", value_parser = parse_real)]
    pub gallery: f64,
    /// Population label the JND fraction is extrapolated to.
    #[arg(long, default_value = "living")]
    pub population: String,
    /// Number of evenly spaced criteria over [0.5, 1.0].
    #[arg(long = "curve-steps", default_value = "11", value_parser = parse_usize)]
    pub curve_steps: usize,
    /// Write the FAR curve as CSV to this file.
    #[arg(long = "curve-out")]
    pub curve_out: Option<PathBuf>,
}

/// Parses `std::env::args`, runs the command and returns the exit code.
pub fn run_from_env() -> i32 {
    run_args(std::env::args_os())
}

pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

/// Runs a parsed command and returns what it would print to stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Nn(a) => cmd_nn(a, cli.json),
        Command::Risk(a) => cmd_risk(a, cli.json),
        Command::Simulate(a) => cmd_simulate(a, cli.json),
        Command::Audit(a) => cmd_audit(a, cli.json),
        Command::Population => cmd_population(cli.json),
    }
}

/// Rounds to 15 significant digits for tables, hiding last-ulp noise.
/// JSON output keeps full precision.
fn sig(v: f64) -> f64 {
    format!("{v:.14e}").parse().unwrap_or(v)
}

fn bundle<T: Serialize>(scenario: &str, inputs: serde_json::Value, results: T) -> Result<String> {
    Ok(ReportBundle::new(scenario, inputs, results).to_json()? + "\n")
}

#[derive(Debug, Serialize)]
struct NnOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    approx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptotic_ratio: Option<f64>,
}

fn cmd_nn(a: &NnArgs, json: bool) -> Result<String> {
    let q = NNQuery { dim: a.dim, rank: a.rank, count: a.count };
    let (want_exact, want_approx) = match (a.exact, a.approx) {
        (true, _) => (true, false),
        (_, true) => (false, true),
        _ => (true, true),
    };
    let exact = want_exact.then(|| nn_mean_exact(&q)).transpose()?;
    let approx = want_approx.then(|| nn_mean_approx(&q)).transpose()?;
    let (ratio, asymptotic_ratio) = match (exact, approx) {
        (Some(e), Some(p)) => (Some(e / p), Some(approximation_ratio(q.dim, q.rank)?)),
        _ => (None, None),
    };
    let out = NnOutput { exact, approx, ratio, asymptotic_ratio };
    if json {
        return bundle(
            "nn",
            json!({ "D": q.dim, "n": q.rank, "N": q.count, "exact": want_exact, "approx": want_approx }),
            out,
        );
    }
    let mut s = format!("D = {}, n = {}, N = {:e}\n", q.dim, q.rank, q.count);
    if let Some(v) = exact {
        s += &format!("exact   {}\n", sig(v));
    }
    if let Some(v) = approx {
        s += &format!("approx  {}\n", sig(v));
    }
    if let (Some(r), Some(lim)) = (ratio, asymptotic_ratio) {
        s += &format!("ratio   {}\nlimit   {}\n", sig(r), sig(lim));
    }
    Ok(s)
}

fn cmd_risk(a: &RiskArgs, json: bool) -> Result<String> {
    let (label, count) = match (&a.population, a.count) {
        (Some(label), _) => {
            let e = population::lookup_estimate(label)?;
            (Some(e.label), e.count)
        }
        (None, Some(n)) => (None, n),
        (None, None) => return Err(domain("one of --N or --population is required")),
    };
    let params = PerceptualParams::new(a.d_prime, a.threshold)?;
    let r: RiskAssessment = risk_verdict(&params, count, a.dim)?;
    if json {
        let inputs = json!({ "D": a.dim, "N": count, "population": label, "dprime": a.d_prime, "c": a.threshold });
        return bundle("risk", inputs, r);
    }
    let verdict = if r.at_risk { "AT RISK" } else { "not at risk" };
    let mut s = format!(
        "{verdict}: d' <r_1> = {:.6} JND {} c = {} JND (D = {}, N = {:e})\n",
        r.mean_nn_jnd,
        if r.at_risk { "<" } else { ">=" },
        r.threshold_jnd,
        a.dim,
        count
    );
    s += &format!("mean nearest-neighbour distance  {}\n", sig(r.mean_nn_distance));
    s += &format!("confusion probability            {}\n", sig(r.confusion_probability));
    match r.critical_population {
        Some(n) => s += &format!("critical population              {n:e}\n"),
        None => s += "critical population              none (every N is at risk)\n",
    }
    Ok(s)
}

#[derive(Debug, Serialize)]
struct RankComparison {
    rank: usize,
    empirical: f64,
    se: f64,
    theory: f64,
    z: f64,
}

#[derive(Debug, Serialize)]
struct SimulateOutput {
    simulation: SimResult,
    comparison: Vec<RankComparison>,
}

fn cmd_simulate(a: &SimulateArgs, json: bool) -> Result<String> {
    let cfg = SimConfig::new(a.dim, a.points, a.trials, a.seed, a.topology, a.max_rank)?;
    let sim = run_simulation(&cfg)?;
    let mut comparison = Vec::with_capacity(sim.ranks.len());
    for r in &sim.ranks {
        let q = NNQuery::new(cfg.dim as u32, r.rank as u64, cfg.points as f64)?;
        let theory = nn_mean_exact(&q)?;
        comparison.push(RankComparison {
            rank: r.rank,
            empirical: r.mean,
            se: r.se,
            theory,
            z: (r.mean - theory) / r.se,
        });
    }
    if let Some(path) = &a.out {
        let format = a.format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => OutFormat::Csv,
            _ => OutFormat::Json,
        });
        let body = match format {
            OutFormat::Csv => sim.to_csv(),
            OutFormat::Json => sim.to_json()? + "\n",
        };
        fs::write(path, body)?;
    }
    if json {
        let inputs = serde_json::to_value(cfg)?;
        let out = SimulateOutput { simulation: sim, comparison };
        return Ok(ReportBundle::new("simulate", inputs, out).with_seed(cfg.seed).to_json()? + "\n");
    }
    let mut s = format!(
        "D = {}, N = {}, trials = {}, seed = {}, topology = {}\n",
        cfg.dim, cfg.points, cfg.trials, cfg.seed, cfg.topology
    );
    s += "rank  empirical            se                   theory               z\n";
    for c in &comparison {
        s += &format!("{:<5} {:<20.12} {:<20.12} {:<20.12} {:+.3}\n", c.rank, c.empirical, c.se, c.theory, c.z);
    }
    Ok(s)
}

fn cmd_audit(a: &AuditArgs, json: bool) -> Result<String> {
    let records = audit::parse_audit_csv(fs::File::open(&a.records)?)?;
    let pairs = match &a.pairs {
        Some(p) => Some(audit::parse_paired_csv(fs::File::open(p)?)?),
        None => None,
    };
    let target = population::lookup_estimate(&a.population)?;
    let coverage = population::builtin_estimates()
        .into_iter()
        .filter(|e| e.label != "ever_will_live_median")
        .map(|e| (e.label.to_string(), e.count))
        .collect();
    let opts = AuditOptions {
        criteria: audit::criteria_grid(a.curve_steps)?,
        gallery_size: a.gallery,
        target: (target.label.to_string(), target.count),
        coverage,
    };
    let report = AuditReport::build(&records, pairs.as_deref(), &opts)?;
    if let Some(path) = &a.curve_out {
        fs::write(path, audit::curve_to_csv(&report.curve))?;
    }
    if json {
        let inputs = json!({
            "records": a.records,
            "pairs": a.pairs,
            "gallery": a.gallery,
            "population": a.population,
            "curve_steps": a.curve_steps,
        });
        return bundle("audit", inputs, report);
    }
    let mut s = format!(
        "false alarm rate   {}/{} = {} (se {:.4})\n",
        report.far.k, report.far.n, report.far.rate, report.far.se
    );
    if let (Some(d), Some(j)) = (report.discrimination, report.jnd_fraction) {
        s += &format!("discrimination     {} over {} pairs\n", d.proportion_real_wins, d.n_pairs);
        s += &format!("within 1 JND       {}\n", sig(j));
    }
    if let Some(e) = &report.extrapolation {
        s += &format!("extrapolated to {} ({:e})  {}\n", e.target_label, e.target_population, e.fraction);
    }
    s += "criterion  rate\n";
    for p in &report.curve {
        s += &format!("{:<10.4} {:.4}\n", p.criterion, p.rate);
    }
    for n in &report.notes {
        s += &format!("note: {n}\n");
    }
    Ok(s)
}

#[derive(Debug, Serialize)]
struct FoldRatio {
    population: &'static str,
    dataset: &'static str,
    dataset_count: u64,
    ratio: f64,
}

#[derive(Debug, Serialize)]
struct Familiarity {
    population: &'static str,
    #[serde(flatten)]
    stats: FamiliarityStats,
}

#[derive(Debug, Serialize)]
struct PopulationOutput {
    estimates: Vec<PopulationEstimate>,
    datasets: Vec<DatasetInfo>,
    fold_ratios: Vec<FoldRatio>,
    familiarity: Vec<Familiarity>,
    notes: Vec<String>,
}

fn population_table() -> Result<PopulationOutput> {
    let estimates = population::builtin_estimates();
    let datasets = population::builtin_datasets();
    let mut fold_ratios = Vec::new();
    for e in &estimates {
        for d in &datasets {
            if let Some(c) = d.reference_count() {
                fold_ratios.push(FoldRatio {
                    population: e.label,
                    dataset: d.name,
                    dataset_count: c,
                    ratio: population::fold_ratio(e.count, c as f64)?,
                });
            }
        }
    }
    let familiarity = estimates
        .iter()
        .map(|e| Ok(Familiarity { population: e.label, stats: population::familiarity_stats(KNOWN_FACES, e.count)? }))
        .collect::<Result<_>>()?;
    let notes = vec!["familiarity is known_faces / population; 5000 / 7.8e9 is 1 in 1.56 million".to_string()];
    Ok(PopulationOutput { estimates, datasets, fold_ratios, familiarity, notes })
}

fn cmd_population(json: bool) -> Result<String> {
    let t = population_table()?;
    if json {
        return bundle("population", json!({ "known_faces": KNOWN_FACES }), t);
    }
    let mut s = String::from("estimate                 count\n");
    for e in &t.estimates {
        s += &format!("{:<24} {:e}\n", e.label, e.count);
    }
    s += "\ndataset   identities  images  approximate\n";
    for d in &t.datasets {
        let show = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        s += &format!(
            "{:<9} {:<11} {:<7} {}\n",
            d.name,
            show(d.identity_count_upper_bound),
            show(d.image_count),
            d.approximate
        );
    }
    s += "\nfold ratio (population / dataset)\n";
    for f in &t.fold_ratios {
        s += &format!("{:<24} {:<7} {:.1}\n", f.population, f.dataset, f.ratio);
    }
    s += &format!("\nfamiliarity ({KNOWN_FACES} known faces)\n");
    for f in &t.familiarity {
        s += &format!("{:<24} {:e} (1 in {:.0})\n", f.population, f.stats.familiar_fraction, f.stats.one_in);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_parsing() {
        assert_eq!(parse_count("2e3"), Ok(2000));
        assert_eq!(parse_count("1024"), Ok(1024));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("abc").is_err());
        assert_eq!(parse_real("2e11"), Ok(2e11));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(["coincidental", "nn", "-D", "x", "-N", "10"]), EXIT_USAGE);
        assert_eq!(run_args(["coincidental", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run_args(["coincidental", "risk", "--N", "10", "--population", "living"]), EXIT_USAGE);
    }
}
