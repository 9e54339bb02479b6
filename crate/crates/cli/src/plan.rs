use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use serde::Serialize;
use tc_core::planners::{build_planner, query};
use tc_core::spaces::SpaceSpec;

use crate::manifest::{print_json, RunManifest};
use crate::{parse_coords, read_input, Format, GlobalOpts, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Out {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Space file (JSON).
    #[arg(long)]
    space: PathBuf,
    /// Planner name; `auto` picks the default for the space.
    #[arg(long, default_value = "auto")]
    planner: String,
    /// Start configuration, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    /// Goal configuration, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    /// Points sampled on the path, endpoints included.
    #[arg(long, default_value_t = tc_core::planners::DEFAULT_SAMPLES, value_parser = clap::value_parser!(usize))]
    samples: usize,
    /// Path output; defaults to CSV for text format and JSON otherwise.
    #[arg(long)]
    out: Option<Out>,
    /// Start the CSV output with a `t,x1,..` header row.
    #[arg(long)]
    header: bool,
}

#[derive(Serialize)]
struct Output {
    planner: String,
    space: String,
    rule: usize,
    rule_count: usize,
    epsilon: Option<f64>,
    from: Vec<f64>,
    to: Vec<f64>,
    ts: Vec<f64>,
    points: Vec<Vec<f64>>,
}

pub fn run(args: &PlanArgs, g: &GlobalOpts) -> anyhow::Result<Status> {
    anyhow::ensure!(args.samples >= 2, "--samples must be at least 2");
    let text = read_input(&args.space)?;
    let space = SpaceSpec::from_json(&text).with_context(|| format!("loading {}", args.space.display()))?;
    let planner = build_planner(&args.planner, &space, g.tolerances()?)?;
    let (a, b) = (parse_coords(&args.from)?, parse_coords(&args.to)?);
    let q = query(planner.as_ref(), &a, &b)?;
    let sampled = q.path.sample(args.samples);
    let out = args.out.unwrap_or(if g.format == Format::Json { Out::Json } else { Out::Csv });
    match out {
        Out::Csv => {
            if args.header {
                let names: Vec<String> = (1..=space.dim()).map(|i| format!("x{i}")).collect();
                outln!("t,{}", names.join(","));
            }
            for (t, x) in sampled.ts.iter().zip(&sampled.points) {
                let coords: Vec<String> = x.iter().map(|v| v.to_string()).collect();
                outln!("{t},{}", coords.join(","));
            }
            let eps = q.path.epsilon.map_or(String::new(), |e| format!(", epsilon {e}"));
            eprintln!("rule {} of {}{eps}", q.rule, planner.rule_count());
        }
        Out::Json => {
            let manifest = RunManifest::new("plan", g).input("space", &text);
            let body = Output {
                planner: planner.name(),
                space: space.kind().to_string(),
                rule: q.rule,
                rule_count: planner.rule_count(),
                epsilon: q.path.epsilon,
                from: a,
                to: b,
                ts: sampled.ts,
                points: sampled.points,
            };
            print_json(&manifest, &body)?;
        }
    }
    Ok(Status::Ok)
}
