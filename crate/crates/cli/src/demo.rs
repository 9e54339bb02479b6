//! Registry of reference computations. Each demo carries the claim it checks
//! so a failure prints the statement that was violated.

use clap::Args;
use serde::Serialize;
use tc_core::bounds::{bracket, SpaceDescriptor};
use tc_core::instability::{global_order, GlobalConfig};
use tc_core::planners::{Planner, ProductPlanner};

use crate::manifest::{emit, print_rows, RunManifest};
use crate::{GlobalOpts, Status};

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Demo name; `tc presets` lists them.
    name: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

fn check(label: impl Into<String>, expected: impl ToString, computed: impl ToString) -> Check {
    let (expected, computed) = (expected.to_string(), computed.to_string());
    Check { label: label.into(), pass: expected == computed, expected, computed }
}

pub struct Demo {
    pub name: &'static str,
    pub claim: &'static str,
    run: fn(&GlobalOpts) -> anyhow::Result<Vec<Check>>,
}

pub const DEMOS: &[Demo] = &[
    Demo { name: "graphs", claim: "TC of a connected graph is 1 if b1 = 0, 2 if b1 = 1 and 3 if b1 >= 2", run: graphs },
    Demo { name: "even-sphere", claim: "TC(S^2) = 3, with zero-divisor cup-length 2", run: even_sphere },
    Demo { name: "se3", claim: "TC(SE(3)) = 4", run: se3 },
    Demo { name: "robot-arm", claim: "TC((S^2)^n) = 2n + 1", run: robot_arm },
    Demo { name: "bouquets", claim: "TC of a wedge of n m-spheres is 2 if n = 1 and m is odd, 3 otherwise", run: bouquets },
    Demo { name: "surface-power-2", claim: "TC(X^n) = 4n + 1 for the genus-3 surface X; zdcl 8 and TC 9 at n = 2", run: surface_power },
    Demo { name: "torus-3", claim: "TC(T^n) = n + 1; the product planner on T^3 has 4 rules and order of instability 4", run: torus3 },
];

fn bracket_of(space: &str) -> anyhow::Result<tc_core::bounds::BoundReport> {
    let d: SpaceDescriptor = space.parse()?;
    let alg = d.default_algebra().map(|p| p.build()).transpose()?;
    Ok(bracket(&d, alg.as_ref())?)
}

fn show(r: &tc_core::bounds::BoundReport) -> String {
    format!("[{}, {}]", r.lower.value, r.upper.value)
}

fn zdcl_len(r: &tc_core::bounds::BoundReport) -> u32 {
    r.zdcl.as_ref().map_or(0, |z| z.length)
}

fn graphs(_: &GlobalOpts) -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    for (b1, tc, z) in [(0, 1, 0), (1, 2, 1), (2, 3, 2), (5, 3, 2)] {
        let r = bracket_of(&format!("graph:{b1}"))?;
        out.push(check(format!("b1 = {b1}: TC"), format!("[{tc}, {tc}]"), show(&r)));
        out.push(check(format!("b1 = {b1}: zdcl"), z, zdcl_len(&r)));
    }
    Ok(out)
}

fn even_sphere(_: &GlobalOpts) -> anyhow::Result<Vec<Check>> {
    let r = bracket_of("sphere:2")?;
    let z = r.zdcl.as_ref().unwrap();
    Ok(vec![check("TC", "[3, 3]", show(&r)), check("zdcl", 2, z.length), check("witness product", "-2*u⊗u", &z.product)])
}

fn se3(_: &GlobalOpts) -> anyhow::Result<Vec<Check>> {
    let r = bracket_of("se3")?;
    Ok(vec![
        check("zdcl over F2", 3, zdcl_len(&r)),
        check("lower bound", 4, r.lower.value),
        check("TC", "[4, 4]", show(&r)),
    ])
}

fn robot_arm(_: &GlobalOpts) -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let r = bracket_of(&format!("sphere:2^{n}"))?;
        out.push(check(format!("n = {n}: zdcl"), 2 * n, zdcl_len(&r)));
        out.push(check(format!("n = {n}: TC"), format!("[{0}, {0}]", 2 * n + 1), show(&r)));
    }
    Ok(out)
}

fn bouquets(_: &GlobalOpts) -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=2 {
        for m in 1..=4 {
            let tc = if n == 1 && m % 2 == 1 { 2 } else { 3 };
            let r = bracket_of(&format!("wedge_spheres:{n},{m}"))?;
            out.push(check(format!("n = {n}, m = {m}: TC"), format!("[{tc}, {tc}]"), show(&r)));
        }
    }
    Ok(out)
}

fn surface_power(_: &GlobalOpts) -> anyhow::Result<Vec<Check>> {
    let r = bracket_of("surface:3^2")?;
    let z = r.zdcl.as_ref().unwrap();
    Ok(vec![
        check("zdcl", 8, z.length),
        check("witness product", "4*A.A⊗A.A", &z.product),
        check("TC", "[9, 9]", show(&r)),
    ])
}

fn torus3(g: &GlobalOpts) -> anyhow::Result<Vec<Check>> {
    let p = ProductPlanner::torus(3, g.tolerances()?)?;
    let report = global_order(&p, &GlobalConfig { random_pairs: 1000, seed: g.seed, sampled: None })?;
    let pi = std::f64::consts::PI;
    Ok(vec![
        check("rules", 4, p.rule_count()),
        check("global order", 4, report.global_order),
        check("witness", format!("{:?}", (vec![0.0; 3], vec![pi; 3])), format!("{:?}", report.witness.unwrap_or_default())),
    ])
}

#[derive(Serialize)]
struct Output<'a> {
    demo: &'static str,
    claim: &'static str,
    passed: bool,
    checks: &'a [Check],
}

pub fn run(args: &DemoArgs, g: &GlobalOpts) -> anyhow::Result<Status> {
    let Some(demo) = DEMOS.iter().find(|d| d.name == args.name) else {
        let names: Vec<&str> = DEMOS.iter().map(|d| d.name).collect();
        anyhow::bail!("unknown demo {:?}; available: {}", args.name, names.join(", "));
    };
    let checks = (demo.run)(g)?;
    let passed = checks.iter().all(|c| c.pass);
    let manifest = RunManifest::new("demo", g).input("name", demo.name);
    let body = Output { demo: demo.name, claim: demo.claim, passed, checks: &checks };
    emit(g, &manifest, &body, |b| {
        outln!("{}: {}", b.demo, b.claim);
        let rows: Vec<(&str, String)> = b
            .checks
            .iter()
            .map(|c| {
                let verdict = if c.pass { "ok" } else { "VIOLATED" };
                (c.label.as_str(), format!("expected {:<12} computed {:<12} {verdict}", c.expected, c.computed))
            })
            .collect();
        print_rows(&rows);
        outln!("{}", if b.passed { "PASS" } else { "FAIL" });
    })?;
    Ok(if passed { Status::Ok } else { Status::Failed })
}
