//! `tc`: TC brackets, motion planning and planner audits from the command line.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when an audit or
//! a demo claim fails (the report is still printed).

/// Appends a line to the stdout buffer, flushed once when the command ends.
macro_rules! outln {
    () => {
        $crate::push_line(String::new())
    };
    ($($arg:tt)*) => {
        $crate::push_line(format!($($arg)*))
    };
}

mod audit;
mod bound;
mod demo;
mod manifest;
mod plan;
mod presets;

use std::cell::RefCell;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tc_core::spaces::Tolerances;

#[derive(Debug, Parser)]
#[command(name = "tc", version, about = "Topological complexity bounds and executable motion planners")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Seed for every random operation.
    #[arg(long, env = "TC_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Distance below which a point counts as lying on a segment.
    #[arg(long, global = true)]
    pub tol_collinear: Option<f64>,
    /// Circle pairs within this of antipodal count as antipodal.
    #[arg(long, global = true)]
    pub tol_antipodal: Option<f64>,
}

impl GlobalOpts {
    pub fn tolerances(&self) -> anyhow::Result<Tolerances> {
        let mut tol = Tolerances::default();
        for (flag, value, slot) in [
            ("--tol-collinear", self.tol_collinear, &mut tol.collinear),
            ("--tol-antipodal", self.tol_antipodal, &mut tol.antipodal),
        ] {
            if let Some(v) = value {
                anyhow::ensure!(v.is_finite() && v >= 0.0, "{flag} must be a finite non-negative number");
                *slot = v;
            }
        }
        Ok(tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower and upper bounds for TC of a space.
    Bound(bound::BoundArgs),
    /// Run a planner on one pair of configurations.
    Plan(plan::PlanArgs),
    /// Audit a planner's axioms on designed and random pairs.
    Validate(audit::ValidateArgs),
    /// Order of instability at a pair or over the whole space.
    Instability(audit::InstabilityArgs),
    /// List algebra presets, space files, planners and demos.
    Presets,
    /// Reproduce a reference computation and check it.
    Demo(demo::DemoArgs),
}

/// What a successful run concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let g = &cli.global;
    match cli.command {
        Command::Bound(a) => bound::run(&a, g),
        Command::Plan(a) => plan::run(&a, g),
        Command::Validate(a) => audit::validate(&a, g),
        Command::Instability(a) => audit::instability(&a, g),
        Command::Presets => presets::run(g),
        Command::Demo(a) => demo::run(&a, g),
    }
}

thread_local! {
    static STDOUT: RefCell<String> = const { RefCell::new(String::new()) };
}

pub fn push_line(line: String) {
    STDOUT.with(|b| {
        let mut b = b.borrow_mut();
        b.push_str(&line);
        b.push('\n');
    });
}

/// Writes the buffered output. A closed pipe (`tc ... | head`) is not an error.
fn flush_stdout() -> std::io::Result<()> {
    let text = STDOUT.with(|b| std::mem::take(&mut *b.borrow_mut()));
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}

/// Reads a UTF-8 input file.
pub fn read_input(path: &PathBuf) -> anyhow::Result<String> {
    use anyhow::Context;
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Parses `x1,x2,...` into a point.
pub fn parse_coords(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            let v: f64 = x.trim().parse().map_err(|_| anyhow::anyhow!("bad coordinate {x:?} in {s:?}"))?;
            anyhow::ensure!(v.is_finite(), "coordinate {x:?} is not finite");
            Ok(v)
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(cli);
    if let Err(e) = flush_stdout() {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
