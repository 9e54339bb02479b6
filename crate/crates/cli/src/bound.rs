use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use serde::Serialize;
use tc_core::algebra::{make_algebra, Presentation};
use tc_core::bounds::{bracket, Bound, BoundReport, BoundsError, SpaceDescriptor, SpaceKind};

use crate::manifest::{emit, print_rows, RunManifest};
use crate::{read_input, GlobalOpts, Status};

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Space expression, e.g. `surface:3`, `wedge_spheres:2,1`, `se3`, `sphere:2^3`.
    #[arg(long)]
    preset: Option<String>,
    /// Cohomology presentation file; replaces the preset's algebra.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Dimension of the space; required without --preset.
    #[arg(long)]
    dim: Option<u32>,
    /// The space is r-connected.
    #[arg(long)]
    conn: Option<u32>,
}

#[derive(Serialize)]
struct Provenances<'a> {
    lower: &'a Bound,
    upper: &'a Bound,
}

#[derive(Serialize)]
struct Output<'a> {
    space: String,
    algebra: Option<String>,
    lower: u32,
    upper: u32,
    exact: Option<u32>,
    witness: Option<&'a [String]>,
    provenance: Provenances<'a>,
    convention: &'static str,
    report: &'a BoundReport,
}

#[derive(Serialize)]
struct Failure {
    space: String,
    error: String,
}

fn descriptor(args: &BoundArgs) -> anyhow::Result<SpaceDescriptor> {
    let mut desc = match (&args.preset, args.dim) {
        (Some(p), _) => p.parse::<SpaceDescriptor>()?,
        (None, Some(dim)) => SpaceDescriptor::new(SpaceKind::Custom { dim, connectivity: args.conn.unwrap_or(0) }),
        (None, None) => anyhow::bail!("give --preset, or --dim (with optional --algebra and --conn)"),
    };
    if let Some(d) = args.dim {
        desc = desc.with_dim(d);
    }
    if let Some(r) = args.conn {
        desc = desc.with_connectivity(r);
    }
    Ok(desc)
}

pub fn run(args: &BoundArgs, g: &GlobalOpts) -> anyhow::Result<Status> {
    let desc = descriptor(args)?;
    let mut manifest = RunManifest::new("bound", g);
    if let Some(p) = &args.preset {
        manifest = manifest.input("preset", p);
    }
    let alg = match &args.algebra {
        Some(path) => {
            let text = read_input(path)?;
            manifest = manifest.input("algebra", &text);
            let pres: Presentation = text.parse().with_context(|| format!("parsing {}", path.display()))?;
            Some(make_algebra(&pres)?)
        }
        None => desc.default_algebra().map(|p| p.build()).transpose()?,
    };
    let space = desc.to_string();
    let report = match bracket(&desc, alg.as_ref()) {
        Ok(r) => r,
        Err(e @ (BoundsError::Contradiction { .. } | BoundsError::KnownValueOutside { .. })) => {
            let body = Failure { space, error: e.to_string() };
            emit(g, &manifest, &body, |b| print_rows(&[("space", b.space.clone()), ("error", b.error.clone())]))?;
            return Ok(Status::Failed);
        }
        Err(e) => return Err(e.into()),
    };
    let body = Output {
        space,
        algebra: alg.as_ref().map(|a| format!("{} basis elements over {}", a.dim(), a.field_name())),
        lower: report.lower.value,
        upper: report.upper.value,
        exact: report.exact,
        witness: report.zdcl.as_ref().map(|z| z.witness.as_slice()),
        provenance: Provenances { lower: &report.lower, upper: &report.upper },
        convention: report.convention,
        report: &report,
    };
    emit(g, &manifest, &body, print_text)?;
    Ok(Status::Ok)
}

fn print_text(b: &Output) {
    let describe = |x: &Bound| format!("{}  ({}: {})", x.value, x.provenance, x.detail);
    let mut rows = vec![("space", b.space.clone())];
    if let Some(a) = &b.algebra {
        rows.push(("algebra", a.clone()));
    }
    rows.push(("lower", describe(b.provenance.lower)));
    rows.push(("upper", describe(b.provenance.upper)));
    rows.push(("exact", b.exact.map_or("-".into(), |v| v.to_string())));
    if let Some(z) = &b.report.zdcl {
        rows.push(("zdcl", z.length.to_string()));
        rows.push(("witness", if z.witness.is_empty() { "-".into() } else { z.witness.join(" * ") }));
        rows.push(("product", z.product.clone()));
    }
    if let Some(k) = &b.report.known {
        rows.push(("known", format!("{} ({}: {})", k.value, k.family, k.claim)));
    }
    rows.push(("convention", b.convention.to_string()));
    print_rows(&rows);
}
