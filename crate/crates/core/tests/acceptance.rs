//! End-to-end acceptance suite. Runs every criterion with its tolerance and
//! time limit, prints one PASS/FAIL line each, and exits nonzero on failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tc_core::algebra::{AnyAlgebra, GradedAlgebra, Preset, TensorElement};
use tc_core::bounds::{barred, bracket, product_upper, tc_upper_conn, zdcl, witness_is_sound, Provenance, SpaceDescriptor};
use tc_core::field::{Field, Rationals};
use tc_core::instability::{
    cover_reduce_classify, cover_reduce_partition, global_order, order_sampled, validate, GlobalConfig, SampleConfig,
    ValidateConfig, WeightVector,
};
use tc_core::planners::fixtures::{oversized_epsilon, oversized_epsilon_pair, EndpointOffset, Overlap};
use tc_core::planners::{Planner, PolyhedralPlanner, ProductPlanner, PuncturedPlanner};
use tc_core::spaces::{ObstacleSet, SimplicialComplex, Tolerances};

type Outcome = Result<String, String>;

/// Id, name, time limit in seconds, check.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rational(p: &Preset) -> GradedAlgebra<Rationals> {
    match p.build().unwrap() {
        AnyAlgebra::Rational(a) => a,
        _ => panic!("expected a rational algebra"),
    }
}

fn top_index<F: Field>(alg: &GradedAlgebra<F>) -> usize {
    let top = alg.basis().iter().map(|b| b.degree).max().unwrap();
    alg.basis().iter().position(|b| b.degree == top).unwrap()
}

fn report(space: &str) -> tc_core::bounds::BoundReport {
    let d: SpaceDescriptor = space.parse().unwrap();
    let alg = d.default_algebra().map(|p| p.build().unwrap());
    bracket(&d, alg.as_ref()).unwrap()
}

fn graph_formula() -> Outcome {
    let mut parts = Vec::new();
    for (b1, tc, z) in [(0, 1, 0), (1, 2, 1), (2, 3, 2), (5, 3, 2)] {
        let r = report(&format!("graph:{b1}"));
        let zl = r.zdcl.as_ref().unwrap().length;
        ensure(r.exact == Some(tc) && zl == z, format!("b1={b1}: bracket [{}, {}], zdcl {zl}", r.lower.value, r.upper.value))?;
        parts.push(format!("b1={b1}: TC={tc}, zdcl={zl}"));
    }
    Ok(parts.join("; "))
}

fn even_sphere() -> Outcome {
    let s = rational(&Preset::Sphere(2));
    let r = zdcl(&s);
    let f = Rationals;
    let u = top_index(&s);
    ensure(r.length == 2, "zdcl != 2")?;
    ensure(r.product == TensorElement::pure(&f, u, u).scale(&f, &f.from_i64(-2)), "witness is not -2 u⊗u")?;
    let b = report("sphere:2");
    ensure(b.exact == Some(3), format!("bracket [{}, {}]", b.lower.value, b.upper.value))?;
    ensure(b.lower.provenance == Provenance::Zdcl && b.upper.provenance == Provenance::Connectivity, "wrong provenance")?;
    ensure(tc_upper_conn(2, 1) == 3, "connectivity bound")?;
    Ok(format!("zdcl=2, witness {}, bracket [3,3]", s.format_tensor(&r.product)))
}

fn se3() -> Outcome {
    let b = report("se3");
    let z = b.zdcl.as_ref().unwrap();
    ensure(z.length == 3 && z.witness_sound, "zdcl of projective_mod2(3) != 3")?;
    ensure(b.lower_candidates[0].value == 4 && b.lower_candidates[0].provenance == Provenance::Zdcl, "zdcl lower bound != 4")?;
    let k = b.known.as_ref().ok_or("no known value")?;
    ensure(k.value == 4 && b.exact == Some(4), "not exact 4")?;
    Ok(format!("zdcl=3 over F2, lower 4, known value {} -> exact 4", k.value))
}

fn robot_arm() -> Outcome {
    let f = Rationals;
    let mut parts = Vec::new();
    for n in 1..=3u32 {
        let mut p = Preset::Sphere(2);
        for _ in 1..n {
            p = Preset::Product(Box::new(p), Box::new(Preset::Sphere(2)));
        }
        let a = rational(&p);
        let r = zdcl(&a);
        let u = top_index(&a);
        ensure(r.length == 2 * n as usize, format!("n={n}: zdcl {}", r.length))?;
        let expected = TensorElement::pure(&f, u, u).scale(&f, &f.from_i64((-2i64).pow(n)));
        ensure(r.product == expected && witness_is_sound(&a, &r), format!("n={n}: product {}", a.format_tensor(&r.product)))?;
        let b = report(&format!("sphere:2^{n}"));
        ensure(b.exact == Some(2 * n + 1), format!("n={n}: bracket [{}, {}]", b.lower.value, b.upper.value))?;
        ensure(b.upper.provenance == Provenance::Connectivity && tc_upper_conn(2 * n, 1) == 2 * n + 1, "upper not from connectivity")?;
        parts.push(format!("n={n}: {}", a.format_tensor(&r.product)));
    }
    Ok(parts.join("; "))
}

fn surfaces() -> Outcome {
    let f = Rationals;
    let s = rational(&Preset::Surface(3));
    let r = zdcl(&s);
    let top = s.index_of("A").unwrap();
    ensure(r.length == 4 && witness_is_sound(&s, &r), "surface(3) zdcl != 4")?;
    let sign = r.product.coeff(&f, top, top);
    ensure(r.product.len() == 1 && (sign == f.from_i64(2) || sign == f.from_i64(-2)), "witness is not ±2 A⊗A")?;
    let bar = |n: &str| barred(&s, &s.element(n).unwrap()).unwrap();
    let chain = |names: [&str; 4]| names.iter().fold(TensorElement::pure(&f, 0, 0), |acc, n| s.tensor_mul(&acc, &bar(n)));
    let aa = TensorElement::pure(&f, top, top);
    ensure(chain(["a1", "b1", "a2", "b2"]) == aa.scale(&f, &f.from_i64(2)), "bar(a1)bar(b1)bar(a2)bar(b2) != 2 A⊗A")?;
    ensure(chain(["b1", "a1", "a2", "b2"]) == aa.scale(&f, &f.from_i64(-2)), "bar(b1)bar(a1)bar(a2)bar(b2) != -2 A⊗A")?;

    let p2 = rational(&Preset::Product(Box::new(Preset::Surface(3)), Box::new(Preset::Surface(3))));
    let r2 = zdcl(&p2);
    let u = p2.index_of("A.A").unwrap();
    ensure(r2.length == 8 && witness_is_sound(&p2, &r2), format!("power zdcl {}", r2.length))?;
    ensure(r2.product == TensorElement::pure(&f, u, u).scale(&f, &f.from_i64(4)), "power witness != 4 U⊗U")?;
    let b = report("surface:3^2");
    ensure(b.exact == Some(9) && product_upper(5, 5) == 9, format!("bracket [{}, {}]", b.lower.value, b.upper.value))?;
    ensure(b.upper_candidates.iter().any(|c| c.provenance == Provenance::ProductComposition && c.value == 9), "no product bound 9")?;
    Ok(format!(
        "surface(3): zdcl=4, greedy witness {} (sign {}), a-b-a-b order +2, b-a-a-b order -2; power: zdcl=8, {}, bracket [9,9]",
        s.format_tensor(&r.product),
        if sign == f.from_i64(2) { "+" } else { "-" },
        p2.format_tensor(&r2.product)
    ))
}

fn bouquets() -> Outcome {
    let mut count = 0;
    let mut cases: Vec<(u32, u32, u32)> = [1, 3, 5].iter().map(|&m| (1, m, 2)).collect();
    cases.extend([2, 4].iter().map(|&m| (1, m, 3)));
    for n in 2..=3 {
        for m in 1..=5 {
            cases.push((n, m, 3));
        }
    }
    for (n, m, tc) in cases {
        let t = Instant::now();
        let b = report(&format!("wedge_spheres:{n},{m}"));
        let z = b.zdcl.as_ref().unwrap().length;
        let expected_z = if n == 1 && m % 2 == 1 { 1 } else { 2 };
        ensure(b.exact == Some(tc) && z == expected_z, format!("({n},{m}): bracket [{}, {}]", b.lower.value, b.upper.value))?;
        ensure(tc_upper_conn(m, m - 1) == 3, "connectivity bound != 3")?;
        ensure(t.elapsed() < Duration::from_secs(1), format!("({n},{m}) took {:?}", t.elapsed()))?;
        count += 1;
    }
    Ok(format!("{count} wedges: TC 2 for one odd sphere, 3 otherwise"))
}

fn seeded_obstacles(seed: u64) -> ObstacleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..5).map(|_| [0; 3].map(|_: i32| rng.gen_range(-2.0..2.0))).collect();
    ObstacleSet::new(pts).unwrap()
}

fn audits_clean(r: &tc_core::instability::ValidationReport, names: &[&str]) -> Result<(), String> {
    for name in names {
        let a = r.audit(name).unwrap();
        if a.failed > 0 {
            return Err(format!("{} audit: {} failures, first {:?}", name, a.failed, a.first_failure));
        }
    }
    Ok(())
}

fn punctured() -> Outcome {
    let p = PuncturedPlanner::new(seeded_obstacles(2024), Tolerances::default());
    let r = validate(&p, &ValidateConfig { pairs: 10_000, seed: 11, ..ValidateConfig::default() });
    audits_clean(&r, &["endpoint", "partition", "validity", "continuity", "nested-closure"])?;
    let g = global_order(&p, &GlobalConfig { random_pairs: 2000, seed: 11, sampled: None }).map_err(|e| e.to_string())?;
    ensure(g.global_order == 3, format!("global order {}", g.global_order))?;
    let (a, b) = p.degenerate_pairs()[0].clone();
    ensure(p.z_parallel(&a, &b) && !p.hits(&a, &b).is_empty(), "first designed pair is not z-parallel")?;
    let s = order_sampled(&p, &a, &b, &SampleConfig { per_radius: 500, seed: 11, ..SampleConfig::default() }).map_err(|e| e.to_string())?;
    ensure(s.order == 3, format!("sampled order {} at the z-parallel pair", s.order))?;
    Ok(format!("{} pairs audited clean; global order 3; sampled order 3 at radius 1e-6", r.pairs))
}

fn polyhedral() -> Outcome {
    let circle = SimplicialComplex::new(
        vec![vec![1.0, 0.0], vec![-0.5, 0.8], vec![-0.5, -0.8]],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    )
    .unwrap();
    let mut verts = vec![vec![0.0, 0.0]];
    verts.extend((0..7).map(|k| {
        let t = 2.0 * PI * k as f64 / 7.0;
        vec![t.cos(), t.sin()]
    }));
    let disk = SimplicialComplex::new(verts, (0..7).map(|k| vec![0, k + 1, (k + 1) % 7 + 1]).collect()).unwrap();
    let mut parts = Vec::new();
    for (name, c, rules) in [("circle", circle, 3), ("disk", disk, 5)] {
        let p = PolyhedralPlanner::new(c, Tolerances::default());
        ensure(p.rule_count() == rules, format!("{name}: {} rules", p.rule_count()))?;
        let r = validate(&p, &ValidateConfig { pairs: 10_000, seed: 5, ..ValidateConfig::default() });
        audits_clean(&r, &["endpoint", "partition", "validity", "continuity", "nested-closure"])?;
        let g = global_order(&p, &GlobalConfig { random_pairs: 1000, seed: 5, sampled: None }).map_err(|e| e.to_string())?;
        ensure(g.global_order <= rules, format!("{name}: order {}", g.global_order))?;
        parts.push(format!("{name}: {rules} rules, validated, global order {}", g.global_order));
    }
    Ok(parts.join("; "))
}

fn products() -> Outcome {
    let mut parts = Vec::new();
    for n in 2..=4 {
        let p = ProductPlanner::torus(n, Tolerances::default()).map_err(|e| e.to_string())?;
        ensure(p.rule_count() == n + 1, format!("T^{n}: {} rules", p.rule_count()))?;
        let r = validate(&p, &ValidateConfig { pairs: 10_000, seed: 9, ..ValidateConfig::default() });
        audits_clean(&r, &["endpoint", "partition", "validity", "continuity", "nested-closure"])?;
        let g = global_order(&p, &GlobalConfig { random_pairs: 1000, seed: 9, sampled: None }).map_err(|e| e.to_string())?;
        ensure(g.global_order == n + 1, format!("T^{n}: global order {}", g.global_order))?;
        ensure(g.witness == Some((vec![0.0; n], vec![PI; n])), format!("T^{n}: witness {:?}", g.witness))?;
        parts.push(format!("T^{n}: {} rules, order {}", n + 1, n + 1));
    }
    Ok(parts.join("; ") + " (witness: all-antipodal pair)")
}

/// Admissible sets by direct enumeration of all subsets.
fn brute_force(w: &[f64]) -> Vec<Vec<usize>> {
    let k = w.len();
    let mut out: Vec<Vec<usize>> = (1u32..1 << k)
        .filter(|mask| {
            let inside: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            inside.iter().all(|&i| w[i] > 0.0 && (0..k).filter(|j| mask >> j & 1 == 0).all(|j| w[i] > w[j]))
        })
        .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    out.sort_by_key(|s: &Vec<usize>| s.len());
    out
}

fn random_weights(rng: &mut ChaCha8Rng) -> WeightVector {
    let k = rng.gen_range(1..=6);
    loop {
        // Small integer weights force ties and zeros.
        let raw: Vec<u32> = (0..k).map(|_| rng.gen_range(0..4)).collect();
        let total: u32 = raw.iter().sum();
        if total > 0 {
            return WeightVector::new(raw.iter().map(|&x| x as f64 / total as f64).collect()).unwrap();
        }
    }
}

fn cover_combinatorics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(65);
    let mut vectors = Vec::new();
    for i in 0..10_000 {
        let w = if i % 2 == 0 {
            random_weights(&mut rng)
        } else {
            let k = rng.gen_range(1..=6);
            let raw: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let t: f64 = raw.iter().sum();
            WeightVector::new(raw.iter().map(|x| x / t).collect()).unwrap()
        };
        let got: Vec<Vec<usize>> = cover_reduce_classify(&w).into_iter().map(|s| s.into_iter().collect()).collect();
        ensure(got == brute_force(w.weights()), format!("mismatch at {:?}", w.weights()))?;
        vectors.push(w);
    }
    let r = 4;
    let eligible: Vec<WeightVector> = vectors.into_iter().filter(|w| w.argmax().len() < r).collect();
    let rep = cover_reduce_partition(&eligible, r).map_err(|e| e.to_string())?;
    ensure(rep.assignment.iter().zip(&eligible).all(|(j, w)| *j == w.argmax().len()), "assignment != argmax size")?;
    ensure(rep.equal_size_exclusive, "equal-size admissible sets share a vector")?;
    Ok(format!("10000 vectors, 0 mismatches; {} vectors partitioned with r = {r}", eligible.len()))
}

fn negative_fixtures() -> Outcome {
    let cfg = ValidateConfig { pairs: 500, seed: 3, ..ValidateConfig::default() };
    let overlap = validate(&Overlap::new(), &cfg);
    let p = overlap.audit("partition").unwrap().first_failure.clone().ok_or("overlap not detected")?;
    let endpoint = validate(&EndpointOffset::new(), &cfg);
    let e = endpoint.audit("endpoint").unwrap().first_failure.clone().ok_or("endpoint offset not detected")?;
    let (a, b) = oversized_epsilon_pair();
    let clearance = validate(&oversized_epsilon(), &ValidateConfig { extra: vec![(a.clone(), b.clone())], ..cfg });
    let c = clearance.audit("validity").unwrap().first_failure.clone().ok_or("clearance violation not detected")?;
    ensure(c.a == a && c.b == b, "clearance counterexample is not the designed pair")?;
    Ok(format!(
        "overlap at {:?} -> {:?}; endpoint at {:?} -> {:?}; clearance at {:?} -> {:?} ({})",
        p.a, p.b, e.a, e.b, c.a, c.b, c.detail
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "graph formula", 1, graph_formula),
        (2, "even sphere", 1, even_sphere),
        (3, "SE(3)", 1, se3),
        (4, "spatial robot arm", 10, robot_arm),
        (5, "surfaces and powers", 120, surfaces),
        (6, "bouquets", 15, bouquets),
        (7, "punctured-space planner", 30, punctured),
        (8, "polyhedral planner", 30, polyhedral),
        (9, "product composer", 60, products),
        (10, "cover-reduction combinatorics", 10, cover_combinatorics),
        (11, "negative fixtures", 5, negative_fixtures),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= Duration::from_secs(limit) {
                Ok(msg)
            } else {
                Err(format!("exceeded {limit} s"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS  criterion {id:>2} {name} ({:.2} s, limit {limit} s): {msg}", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {id:>2} {name} ({:.2} s, limit {limit} s): {msg}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
