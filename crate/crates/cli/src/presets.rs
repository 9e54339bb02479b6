use serde::Serialize;
use tc_core::bounds::KNOWN_VALUES;
use tc_core::planners::PLANNER_NAMES;

use crate::demo::DEMOS;
use crate::manifest::{emit, print_rows, RunManifest};
use crate::{GlobalOpts, Status};

#[derive(Serialize)]
struct Entry {
    name: &'static str,
    description: &'static str,
}

#[derive(Serialize)]
struct Output {
    spaces: Vec<Entry>,
    algebras: Vec<Entry>,
    space_files: Vec<Entry>,
    planners: Vec<&'static str>,
    known_values: Vec<Entry>,
    demos: Vec<Entry>,
}

const SPACES: &[(&str, &str)] = &[
    ("point", "a point"),
    ("sphere:m", "the m-sphere"),
    ("wedge_spheres:n,m", "wedge of n copies of the m-sphere"),
    ("surface:g", "closed orientable surface of genus g"),
    ("torus:n", "the n-torus"),
    ("projective:n", "real projective n-space, mod 2 cohomology"),
    ("se3", "rigid motions of 3-space"),
    ("graph:b1", "connected graph with first Betti number b1"),
    ("custom:d,r", "r-connected space of dimension d"),
    ("A*B, A^k", "products and powers of the above"),
];

const ALGEBRAS: &[(&str, &str)] = &[
    ("point", "the ground field"),
    ("sphere:m", "k[u]/(u^2), |u| = m"),
    ("wedge_spheres:n,m", "n classes in degree m, all products zero"),
    ("surface:g", "symplectic basis a_i, b_i with a_i b_i = A"),
    ("torus:n", "exterior algebra on n degree-one classes"),
    ("projective_mod2:n", "F2[a]/(a^(n+1))"),
    ("X@F3, X@Q", "change the coefficient field"),
];

const SPACE_FILES: &[(&str, &str)] = &[
    (r#"{"type":"convex","dim":2,"box":[[0,1],[0,1]]}"#, "axis-aligned box"),
    (r#"{"type":"circle"}"#, "angles in (-pi, pi]"),
    (r#"{"type":"torus","n":3}"#, "product of n circles"),
    (r#"{"type":"punctured_r3","obstacles":[[0,0,0]]}"#, "3-space minus finitely many points"),
    (r#"{"type":"complex","vertices":[[0,0],[1,0],[0,1]],"simplices":[[0,1,2]]}"#, "geometric simplicial complex"),
    (r#"{"type":"product","left":{..},"right":{..}}"#, "product of two spaces"),
];

pub fn run(g: &GlobalOpts) -> anyhow::Result<Status> {
    let entries = |list: &[(&'static str, &'static str)]| list.iter().map(|&(name, description)| Entry { name, description }).collect();
    let body = Output {
        spaces: entries(SPACES),
        algebras: entries(ALGEBRAS),
        space_files: entries(SPACE_FILES),
        planners: PLANNER_NAMES.to_vec(),
        known_values: KNOWN_VALUES.iter().map(|r| Entry { name: r.family, description: r.formula }).collect(),
        demos: DEMOS.iter().map(|d| Entry { name: d.name, description: d.claim }).collect(),
    };
    emit(g, &RunManifest::new("presets", g), &body, |b| {
        let section = |title: &str, list: &[Entry]| {
            outln!("{title}:");
            let rows: Vec<(&str, String)> = list.iter().map(|e| (e.name, e.description.to_string())).collect();
            print_rows(&rows);
            outln!();
        };
        section("spaces (bound --preset)", &b.spaces);
        section("algebras", &b.algebras);
        section("space files (--space)", &b.space_files);
        outln!("planners:\n{}\n", b.planners.join(", "));
        section("known values", &b.known_values);
        section("demos", &b.demos);
    })?;
    Ok(Status::Ok)
}
