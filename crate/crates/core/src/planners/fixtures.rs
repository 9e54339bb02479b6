//! Deliberately broken planners. The audits must catch each of them.

use std::f64::consts::PI;

use rand::RngCore;

use super::{CirclePlanner, ConvexPlanner, EpsilonPolicy, Path, Planner, PuncturedPlanner};
use crate::spaces::{arc_distance, ConfigSpace, ObstacleSet, Point, Tolerances};

/// Circle planner whose first rule also claims pairs with arc distance at
/// least `pi - 0.5`, overlapping the second rule.
pub struct Overlap {
    inner: CirclePlanner,
}

impl Overlap {
    pub fn new() -> Self {
        Overlap { inner: CirclePlanner::new(Tolerances::default()) }
    }
}

impl Default for Overlap {
    fn default() -> Self {
        Self::new()
    }
}

impl Planner for Overlap {
    fn name(&self) -> String {
        "fixture:overlap".into()
    }
    fn space(&self) -> &ConfigSpace {
        self.inner.space()
    }
    fn rule_count(&self) -> usize {
        2
    }
    fn nested_closure(&self) -> bool {
        true
    }
    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        match rule {
            1 => arc_distance(a[0], b[0]) >= PI - 0.5,
            _ => self.inner.member(rule, a, b),
        }
    }
    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        self.member(rule, a, b) || self.inner.in_closure(rule, a, b)
    }
    fn path(&self, rule: usize, a: &[f64], b: &[f64]) -> Path {
        self.inner.path(rule, a, b)
    }
    fn continuity_constant(&self, rule: usize, a: &[f64], b: &[f64]) -> f64 {
        self.inner.continuity_constant(rule, a, b)
    }
    fn perturb_within(&self, _rule: usize, _a: &[f64], _b: &[f64], _delta: f64, _rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        None
    }
    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        vec![(vec![0.0], vec![PI - 0.25])]
    }
    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        self.inner.sample_in_rule(rule, rng)
    }
    fn tolerances(&self) -> Tolerances {
        self.inner.tolerances()
    }
}

/// Straight-line planner whose paths stop short of `B`.
pub struct EndpointOffset {
    inner: ConvexPlanner,
}

impl EndpointOffset {
    pub fn new() -> Self {
        let space = ConfigSpace::convex(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        EndpointOffset { inner: ConvexPlanner::new(space).unwrap() }
    }
}

impl Default for EndpointOffset {
    fn default() -> Self {
        Self::new()
    }
}

impl Planner for EndpointOffset {
    fn name(&self) -> String {
        "fixture:endpoint-offset".into()
    }
    fn space(&self) -> &ConfigSpace {
        self.inner.space()
    }
    fn rule_count(&self) -> usize {
        1
    }
    fn nested_closure(&self) -> bool {
        true
    }
    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        self.inner.member(rule, a, b)
    }
    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        self.inner.in_closure(rule, a, b)
    }
    fn path(&self, _rule: usize, a: &[f64], b: &[f64]) -> Path {
        let short: Point = a.iter().zip(b).map(|(x, y)| x + 0.999 * (y - x)).collect();
        Path::segment(a, &short)
    }
    fn continuity_constant(&self, rule: usize, a: &[f64], b: &[f64]) -> f64 {
        self.inner.continuity_constant(rule, a, b)
    }
    fn perturb_within(&self, rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        self.inner.perturb_within(rule, a, b, delta, rng)
    }
    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        vec![(vec![0.0, 0.0], vec![1.0, 1.0])]
    }
    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        self.inner.sample_in_rule(rule, rng)
    }
    fn tolerances(&self) -> Tolerances {
        self.inner.tolerances()
    }
}

/// Obstacles at the origin and at `(0, 0, 1)` with a fixed detour radius
/// of 1. The detour around the origin passes through the second obstacle.
pub fn oversized_epsilon() -> PuncturedPlanner {
    let obstacles = ObstacleSet::new(vec![[0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
    PuncturedPlanner::new(obstacles, Tolerances::default()).with_policy(EpsilonPolicy::Fixed(1.0))
}

/// The pair whose detour collides in [`oversized_epsilon`].
pub fn oversized_epsilon_pair() -> (Point, Point) {
    (vec![-1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0])
}

/// Circle planner with its rules swapped: the open domain comes first, so
/// its closure is not contained in it.
pub struct NotNested {
    inner: CirclePlanner,
}

impl NotNested {
    pub fn new() -> Self {
        NotNested { inner: CirclePlanner::new(Tolerances::default()) }
    }
}

impl Default for NotNested {
    fn default() -> Self {
        Self::new()
    }
}

impl Planner for NotNested {
    fn name(&self) -> String {
        "fixture:not-nested".into()
    }
    fn space(&self) -> &ConfigSpace {
        self.inner.space()
    }
    fn rule_count(&self) -> usize {
        2
    }
    fn nested_closure(&self) -> bool {
        false
    }
    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        self.inner.member(3 - rule, a, b)
    }
    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        self.inner.in_closure(3 - rule, a, b)
    }
    fn path(&self, rule: usize, a: &[f64], b: &[f64]) -> Path {
        self.inner.path(3 - rule, a, b)
    }
    fn continuity_constant(&self, rule: usize, a: &[f64], b: &[f64]) -> f64 {
        self.inner.continuity_constant(3 - rule, a, b)
    }
    fn chart_margin(&self, rule: usize, a: &[f64], b: &[f64]) -> f64 {
        self.inner.chart_margin(3 - rule, a, b)
    }
    fn perturb_within(&self, rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        self.inner.perturb_within(3 - rule, a, b, delta, rng)
    }
    fn families(&self) -> usize {
        self.inner.families()
    }
    fn perturb_family(&self, family: usize, a: &[f64], b: &[f64], radius: f64, rng: &mut dyn RngCore) -> (Point, Point) {
        self.inner.perturb_family(family, a, b, radius, rng)
    }
    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        self.inner.degenerate_pairs()
    }
    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        self.inner.sample_in_rule(3 - rule, rng)
    }
    fn tolerances(&self) -> Tolerances {
        self.inner.tolerances()
    }
}
