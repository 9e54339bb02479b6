use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;
use clap::Args;
use serde::Serialize;
use tc_core::instability::{global_order, pair_record, validate as run_audits, GlobalConfig, PairRecord, SampleConfig, ValidateConfig, ValidationReport};
use tc_core::planners::{build_planner, Planner, DEFAULT_SAMPLES};
use tc_core::spaces::SpaceSpec;

use crate::manifest::{emit, print_rows, RunManifest};
use crate::{parse_coords, read_input, GlobalOpts, Status};

#[derive(Debug, Args)]
pub struct PlannerSource {
    /// Space file (JSON).
    #[arg(long)]
    space: PathBuf,
    /// Planner name; `auto` picks the default for the space.
    #[arg(long, default_value = "auto")]
    planner: String,
}

impl PlannerSource {
    fn load(&self, g: &GlobalOpts) -> anyhow::Result<(Arc<dyn Planner>, String)> {
        let text = read_input(&self.space)?;
        let space = SpaceSpec::from_json(&text).with_context(|| format!("loading {}", self.space.display()))?;
        Ok((build_planner(&self.planner, &space, g.tolerances()?)?, text))
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    source: PlannerSource,
    /// Random pairs audited after the designed ones.
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    /// Points sampled on each path.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    passed: bool,
    report: &'a ValidationReport,
}

pub fn validate(args: &ValidateArgs, g: &GlobalOpts) -> anyhow::Result<Status> {
    anyhow::ensure!(args.samples >= 2, "--samples must be at least 2");
    let (planner, text) = args.source.load(g)?;
    let cfg = ValidateConfig { pairs: args.pairs, seed: g.seed, samples: args.samples, ..ValidateConfig::default() };
    let report = run_audits(planner.as_ref(), &cfg);
    let manifest = RunManifest::new("validate", g).input("space", &text);
    let body = ValidateOutput { passed: report.passed(), report: &report };
    emit(g, &manifest, &body, |b| {
        let r = b.report;
        outln!("planner {} on {} pairs (seed {})", r.planner, r.pairs, r.seed);
        let rows: Vec<(&str, String)> = r
            .audits
            .iter()
            .map(|a| (a.name, format!("passed {:>6}  failed {:>6}  skipped {:>6}", a.passed, a.failed, a.skipped)))
            .collect();
        print_rows(&rows);
        for a in r.audits.iter().filter(|a| a.failed > 0) {
            let c = a.first_failure.as_ref().unwrap();
            outln!("{} counterexample #{}: {:?} -> {:?}: {}", a.name, c.index, c.a, c.b, c.detail);
        }
        outln!("{}", if b.passed { "PASS" } else { "FAIL" });
    })?;
    Ok(if report.passed() { Status::Ok } else { Status::Failed })
}

#[derive(Debug, Args)]
pub struct InstabilityArgs {
    #[command(flatten)]
    source: PlannerSource,
    /// A single pair `x1,..;y1,..` to examine.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "global")]
    pair: Option<String>,
    /// Global order over designed and random pairs (the default).
    #[arg(long)]
    global: bool,
    /// Random pairs for the global order.
    #[arg(long, default_value_t = 1000)]
    random_pairs: usize,
    /// Perturbation radii, strictly decreasing.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6])]
    radii: Vec<f64>,
    /// Perturbed pairs per radius.
    #[arg(long, default_value_t = 200)]
    per_radius: usize,
}

#[derive(Serialize)]
struct PairOutput<'a> {
    planner: String,
    consistent: bool,
    record: &'a PairRecord,
}

#[derive(Serialize)]
struct GlobalOutput<'a> {
    planner: &'a str,
    rule_count: usize,
    global_order: usize,
    witness: &'a Option<(Vec<f64>, Vec<f64>)>,
    consistent: bool,
    /// Random pairs per analytic order.
    random_orders: BTreeMap<usize, usize>,
    designed: Vec<&'a PairRecord>,
}

/// Sampled counts can only undercount the analytic order.
fn consistent(r: &PairRecord) -> bool {
    r.sampled.as_ref().is_none_or(|s| s.per_radius.iter().all(|c| c.count <= r.analytic))
}

fn record_text(r: &PairRecord) {
    let mut rows = vec![
        ("pair", format!("{:?} -> {:?}", r.a, r.b)),
        ("rule", format!("{:?}", r.rules)),
        ("closures", format!("{:?}", r.closures)),
        ("analytic", r.analytic.to_string()),
    ];
    if let Some(s) = &r.sampled {
        let counts: Vec<String> = s.per_radius.iter().map(|c| format!("{:e}:{}", c.radius, c.count)).collect();
        rows.push(("sampled", format!("{} (radius:count {})", s.order, counts.join(" "))));
    }
    print_rows(&rows);
}

pub fn instability(args: &InstabilityArgs, g: &GlobalOpts) -> anyhow::Result<Status> {
    let (planner, text) = args.source.load(g)?;
    let mut manifest = RunManifest::new("instability", g).input("space", &text);
    let sampled = SampleConfig { radii: args.radii.clone(), per_radius: args.per_radius, seed: g.seed };
    if let Some(pair) = &args.pair {
        manifest = manifest.input("pair", pair);
        let (x, y) = pair.split_once(';').context("--pair takes `x1,..;y1,..`")?;
        let record = pair_record(planner.as_ref(), &parse_coords(x)?, &parse_coords(y)?, false, Some(&sampled))?;
        let body = PairOutput { planner: planner.name(), consistent: consistent(&record), record: &record };
        emit(g, &manifest, &body, |b| {
            outln!("planner {}", b.planner);
            record_text(b.record);
        })?;
        return Ok(if body.consistent { Status::Ok } else { Status::Failed });
    }
    let cfg = GlobalConfig { random_pairs: args.random_pairs, seed: g.seed, sampled: Some(sampled) };
    let report = global_order(planner.as_ref(), &cfg)?;
    let mut random_orders = BTreeMap::new();
    for r in report.records.iter().filter(|r| !r.designed) {
        *random_orders.entry(r.analytic).or_insert(0) += 1;
    }
    let designed: Vec<&PairRecord> = report.records.iter().filter(|r| r.designed).collect();
    let body = GlobalOutput {
        planner: &report.planner,
        rule_count: report.rule_count,
        global_order: report.global_order,
        witness: &report.witness,
        consistent: designed.iter().all(|r| consistent(r)),
        random_orders,
        designed,
    };
    emit(g, &manifest, &body, |b| {
        print_rows(&[
            ("planner", b.planner.to_string()),
            ("rules", b.rule_count.to_string()),
            ("global order", b.global_order.to_string()),
            ("witness", b.witness.as_ref().map_or("-".into(), |(x, y)| format!("{x:?} -> {y:?}"))),
            ("random pairs", format!("{:?} (order: count)", b.random_orders)),
        ]);
        for r in &b.designed {
            outln!();
            record_text(r);
        }
    })?;
    Ok(if body.consistent { Status::Ok } else { Status::Failed })
}
