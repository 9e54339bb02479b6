use criterion::{black_box, criterion_group, criterion_main, Criterion};
use tc_core::instability::{pair_rng, validate, ValidateConfig};
use tc_core::planners::{build_planner, query};
use tc_core::spaces::{SpaceSpec, Tolerances};

const SPACES: &[(&str, &str)] = &[
    ("circle", r#"{"type": "circle"}"#),
    ("torus3", r#"{"type": "torus", "n": 3}"#),
    ("punctured", r#"{"type": "punctured_r3", "obstacles": [[0, 0, 0], [1, 0.5, -0.3], [-0.7, 1.2, 0.4]]}"#),
    (
        "disk",
        r#"{"type": "complex", "vertices": [[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1]],
            "simplices": [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]]}"#,
    ),
];

fn queries(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("query_and_sample");
    for (name, json) in SPACES {
        let planner = build_planner("auto", &SpaceSpec::from_json(json).unwrap(), tol).unwrap();
        let mut rng = pair_rng(1, 0);
        let pairs: Vec<_> = (0..64).map(|_| (planner.space().sample(&mut rng, &tol), planner.space().sample(&mut rng, &tol))).collect();
        group.bench_function(*name, |b| {
            b.iter(|| {
                for (a, x) in &pairs {
                    let q = query(planner.as_ref(), a, x).unwrap();
                    black_box(q.path.sample(257));
                }
            })
        });
    }
    group.finish();
}

fn audits(c: &mut Criterion) {
    let mut group = c.benchmark_group("validate_1000_pairs");
    group.sample_size(10);
    for (name, json) in SPACES {
        let planner = build_planner("auto", &SpaceSpec::from_json(json).unwrap(), Tolerances::default()).unwrap();
        let cfg = ValidateConfig { pairs: 1000, seed: 2, ..ValidateConfig::default() };
        group.bench_function(*name, |b| b.iter(|| black_box(validate(planner.as_ref(), &cfg).passed())));
    }
    group.finish();
}

criterion_group!(benches, queries, audits);
criterion_main!(benches);
