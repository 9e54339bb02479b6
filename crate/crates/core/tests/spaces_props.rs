use std::collections::BTreeSet;
use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tc_core::planners::{classify, CirclePlanner, Planner, ProductPlanner, PuncturedPlanner};
use tc_core::spaces::{ConfigSpace, ObstacleSet, SimplicialComplex, Tolerances};

fn coord() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn point3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(coord(), 3)
}

fn disk() -> SimplicialComplex {
    let mut verts = vec![vec![0.0, 0.0]];
    verts.extend((0..5).map(|k| {
        let t = 2.0 * PI * k as f64 / 5.0;
        vec![t.cos(), t.sin()]
    }));
    SimplicialComplex::new(verts, (0..5).map(|k| vec![0, k + 1, (k + 1) % 5 + 1]).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn torus_metric_axioms(x in point3(), y in point3(), z in point3()) {
        let t = ConfigSpace::torus(3).unwrap();
        let d = |a: &[f64], b: &[f64]| t.distance_unchecked(a, b);
        prop_assert_eq!(d(&x, &x), 0.0);
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() < 1e-12);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12);
        prop_assert!(d(&x, &y) <= PI + 1e-12);
    }

    #[test]
    fn convex_metric_axioms(x in point3(), y in point3(), z in point3()) {
        let c = ConfigSpace::convex(vec![-3.0; 3], vec![3.0; 3]).unwrap();
        let d = |a: &[f64], b: &[f64]| c.distance(a, b).unwrap();
        prop_assert_eq!(d(&x, &x), 0.0);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12);
    }

    #[test]
    fn segment_hits_are_symmetric(
        obs in prop::collection::vec(prop::array::uniform3(-2i32..=2), 1..6),
        a in point3(),
        b in point3(),
    ) {
        // Integer obstacles keep the set free of coincident points.
        let pts: BTreeSet<[i32; 3]> = obs.into_iter().collect();
        let set = ObstacleSet::new(pts.iter().map(|p| p.map(f64::from)).collect()).unwrap();
        let tol = Tolerances::default().collinear;
        let fwd: BTreeSet<usize> = set.segment_hits(&a, &b, tol).into_iter().collect();
        let back: BTreeSet<usize> = set.segment_hits(&b, &a, tol).into_iter().collect();
        prop_assert_eq!(fwd, back);
    }

    #[test]
    fn segments_through_an_obstacle_hit_it(p in prop::array::uniform3(-2i32..=2), a in point3()) {
        let set = ObstacleSet::new(vec![p.map(f64::from)]).unwrap();
        let c = p.map(f64::from);
        let b: Vec<f64> = a.iter().zip(&c).map(|(x, o)| 2.0 * o - x).collect();
        prop_assume!(set.clearance(&a) > 1e-3);
        prop_assert_eq!(set.segment_hits(&a, &b, 1e-9), vec![0]);
        prop_assert_eq!(set.segment_hits(&b, &a, 1e-9), vec![0]);
    }

    #[test]
    fn carriers_partition_the_complex(seed in any::<u64>()) {
        let c = disk();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for id in 0..c.simplices().len() {
            let x = c.interior_point(id, &mut rng);
            prop_assert_eq!(c.carrier(&x).unwrap(), id);
        }
    }

    #[test]
    fn circle_pairs_have_one_rule(a in -PI..PI, b in -PI..PI) {
        let p = CirclePlanner::new(Tolerances::default());
        let rules = classify(&p, &[a], &[b]);
        prop_assert_eq!(rules.len(), 1);
        let path = p.path(rules[0], &[a], &[b]);
        prop_assert_eq!(path.at(0.0), vec![a]);
        prop_assert_eq!(path.at(1.0), vec![b]);
    }

    #[test]
    fn torus_pairs_have_one_rule(a in prop::collection::vec(-PI..PI, 3), b in prop::collection::vec(-PI..PI, 3)) {
        let p = ProductPlanner::torus(3, Tolerances::default()).unwrap();
        let rules = classify(&p, &a, &b);
        prop_assert_eq!(rules.len(), 1);
        prop_assert!(p.in_closure(rules[0], &a, &b));
    }

    #[test]
    fn punctured_paths_keep_clear(a in point3(), b in point3()) {
        let obs = ObstacleSet::new(vec![[0.0, 0.0, 0.0], [1.0, 1.0, 0.5], [-1.0, 0.5, 1.5]]).unwrap();
        let p = PuncturedPlanner::new(obs.clone(), Tolerances::default());
        prop_assume!(obs.clearance(&a) > 1e-3 && obs.clearance(&b) > 1e-3);
        let rules = classify(&p, &a, &b);
        prop_assert_eq!(rules.len(), 1);
        let sampled = p.path(rules[0], &a, &b).sample(257);
        prop_assert!(sampled.points.iter().all(|x| obs.clearance(x) > 0.0));
        prop_assert!(p.check_path(rules[0], &a, &b, &sampled).is_ok());
    }
}
