//! Two planners on the circle. Both put the closed antipodal (or
//! `A B^-1 = pi`) set first so the nested-closure condition holds: that set
//! is its own closure, and the open complement closes up to everything.

use std::f64::consts::{PI, TAU};

use rand::{Rng, RngCore};

use super::{Path, Planner};
use crate::spaces::{arc_distance, signed_arc, wrap_angle, ConfigSpace, Point, Tolerances};

static CIRCLE: ConfigSpace = ConfigSpace::Circle;

/// Rule 1: antipodal pairs, counterclockwise half-turn.
/// Rule 2: all other pairs, shorter geodesic.
#[derive(Debug, Clone)]
pub struct CirclePlanner {
    tol: Tolerances,
}

impl CirclePlanner {
    pub fn new(tol: Tolerances) -> Self {
        CirclePlanner { tol }
    }

    pub fn antipodal(&self, a: f64, b: f64) -> bool {
        (arc_distance(a, b) - PI).abs() <= self.tol.antipodal
    }
}

fn arc_path(a: f64, b: f64, sweep: f64) -> Path {
    Path::new(vec![a], vec![b], move |t| vec![wrap_angle(a + t * sweep)])
}

/// Shift both angles by the same amount; keeps `b - a` fixed.
fn slide(a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> (Point, Point) {
    let s = rng.gen_range(-delta..=delta);
    (vec![wrap_angle(a[0] + s)], vec![wrap_angle(b[0] + s)])
}

fn jiggle(a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> (Point, Point) {
    (vec![wrap_angle(a[0] + rng.gen_range(-delta..=delta))], vec![wrap_angle(b[0] + rng.gen_range(-delta..=delta))])
}

fn circle_degenerate_pairs() -> Vec<(Point, Point)> {
    vec![(vec![0.0], vec![PI]), (vec![1.3], vec![1.3 + PI]), (vec![1.3], vec![1.3])]
}

impl Planner for CirclePlanner {
    fn name(&self) -> String {
        "circle".into()
    }

    fn space(&self) -> &ConfigSpace {
        &CIRCLE
    }

    fn rule_count(&self) -> usize {
        2
    }

    fn nested_closure(&self) -> bool {
        true
    }

    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        match rule {
            1 => self.antipodal(a[0], b[0]),
            2 => !self.antipodal(a[0], b[0]),
            _ => false,
        }
    }

    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        match rule {
            1 => self.antipodal(a[0], b[0]),
            2 => true,
            _ => false,
        }
    }

    fn path(&self, rule: usize, a: &[f64], b: &[f64]) -> Path {
        let sweep = if rule == 1 { wrap_angle(b[0] - a[0]) } else { signed_arc(a[0], b[0]) };
        arc_path(a[0], b[0], sweep)
    }

    fn continuity_constant(&self, _rule: usize, _a: &[f64], _b: &[f64]) -> f64 {
        4.0
    }

    fn chart_margin(&self, rule: usize, a: &[f64], b: &[f64]) -> f64 {
        if rule == 1 {
            f64::INFINITY
        } else {
            (PI - self.tol.antipodal - arc_distance(a[0], b[0])) / 2.0
        }
    }

    fn perturb_within(&self, rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        Some(if rule == 1 { slide(a, b, delta, rng) } else { jiggle(a, b, delta, rng) })
    }

    fn families(&self) -> usize {
        2
    }

    fn perturb_family(&self, family: usize, a: &[f64], b: &[f64], radius: f64, rng: &mut dyn RngCore) -> (Point, Point) {
        if family == 1 {
            slide(a, b, radius, rng)
        } else {
            jiggle(a, b, radius, rng)
        }
    }

    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        circle_degenerate_pairs()
    }

    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        let a = rng.gen_range(0.0..TAU);
        Some(if rule == 1 { (vec![a], vec![wrap_angle(a + PI)]) } else { (vec![a], vec![rng.gen_range(0.0..TAU)]) })
    }

    fn tolerances(&self) -> Tolerances {
        self.tol
    }
}

/// The circle as a rotation group: paths `h_i(A B^-1, t) B` with `h_i` a
/// contraction of a cut circle to the identity.
///
/// Rule 1 is `A B^-1 = pi`, handled by the chart on the circle minus the
/// identity, contracted through increasing angle. Rule 2 is the rest, on the
/// circle minus `pi`, contracted linearly in `(-pi, pi)`.
#[derive(Debug, Clone)]
pub struct LieCirclePlanner {
    tol: Tolerances,
}

impl LieCirclePlanner {
    pub fn new(tol: Tolerances) -> Self {
        LieCirclePlanner { tol }
    }

    /// `A B^-1` as an angle in `[0, 2pi)`.
    fn quotient(a: f64, b: f64) -> f64 {
        wrap_angle(a - b)
    }

    fn at_pi(&self, a: f64, b: f64) -> bool {
        (Self::quotient(a, b) - PI).abs() <= self.tol.antipodal
    }

    /// Contraction on the circle minus `pi`, with `x` in `(-pi, pi)`.
    pub fn h1(x: f64, t: f64) -> f64 {
        (1.0 - t) * x
    }

    /// Contraction on the circle minus the identity, with `y` in `(0, 2pi)`.
    pub fn h2(y: f64, t: f64) -> f64 {
        (1.0 - t) * y + t * TAU
    }
}

impl Planner for LieCirclePlanner {
    fn name(&self) -> String {
        "lie_circle".into()
    }

    fn space(&self) -> &ConfigSpace {
        &CIRCLE
    }

    fn rule_count(&self) -> usize {
        2
    }

    fn nested_closure(&self) -> bool {
        true
    }

    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        match rule {
            1 => self.at_pi(a[0], b[0]),
            2 => !self.at_pi(a[0], b[0]),
            _ => false,
        }
    }

    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        match rule {
            1 => self.at_pi(a[0], b[0]),
            2 => true,
            _ => false,
        }
    }

    fn path(&self, rule: usize, a: &[f64], b: &[f64]) -> Path {
        let (a0, b0) = (a[0], b[0]);
        let g = Self::quotient(a0, b0);
        if rule == 1 {
            Path::new(vec![a0], vec![b0], move |t| vec![wrap_angle(Self::h2(g, t) + b0)])
        } else {
            let x = if g > PI { g - TAU } else { g };
            Path::new(vec![a0], vec![b0], move |t| vec![wrap_angle(Self::h1(x, t) + b0)])
        }
    }

    fn continuity_constant(&self, _rule: usize, _a: &[f64], _b: &[f64]) -> f64 {
        4.0
    }

    fn chart_margin(&self, rule: usize, a: &[f64], b: &[f64]) -> f64 {
        if rule == 1 {
            f64::INFINITY
        } else {
            (PI - self.tol.antipodal - arc_distance(a[0], b[0])) / 2.0
        }
    }

    fn perturb_within(&self, rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        Some(if rule == 1 { slide(a, b, delta, rng) } else { jiggle(a, b, delta, rng) })
    }

    fn families(&self) -> usize {
        2
    }

    fn perturb_family(&self, family: usize, a: &[f64], b: &[f64], radius: f64, rng: &mut dyn RngCore) -> (Point, Point) {
        if family == 1 {
            slide(a, b, radius, rng)
        } else {
            jiggle(a, b, radius, rng)
        }
    }

    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        circle_degenerate_pairs()
    }

    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        CirclePlanner::new(self.tol).sample_in_rule(rule, rng)
    }

    fn tolerances(&self) -> Tolerances {
        self.tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planners::query;

    fn close(x: f64, y: f64) -> bool {
        arc_distance(x, y) < 1e-12
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn circle_examples() {
        let p = CirclePlanner::new(Tolerances::default());
        let q = query(&p, &[0.0], &[PI]).unwrap();
        assert_eq!(q.rule, 1);
        assert!(close(q.path.at(0.5)[0], PI / 2.0));
        let q = query(&p, &[0.0], &[PI / 2.0]).unwrap();
        assert_eq!(q.rule, 2);
        assert!(close(q.path.at(0.5)[0], PI / 4.0));
        let q = query(&p, &[1.3], &[1.3]).unwrap();
        assert_eq!(q.rule, 2);
        assert!(q.path.sample(17).points.iter().all(|x| close(x[0], 1.3)));
        // Text-entered pi is antipodal within tolerance.
        assert_eq!(query(&p, &[0.0], &[3.14159265]).unwrap().rule, 1);
        // Shorter arc crosses zero going clockwise.
        let q = query(&p, &[0.2], &[TAU - 0.2]).unwrap();
        assert!(close(q.path.at(0.5)[0], 0.0));
    }

    #[test]
    fn lie_examples() {
        let p = LieCirclePlanner::new(Tolerances::default());
        let q = query(&p, &[PI / 2.0], &[0.0]).unwrap();
        assert_eq!(q.rule, 2);
        // h1(pi/2, t) * B = (1 - t) pi/2.
        for t in [0.25, 0.5, 0.75] {
            assert!(close(q.path.at(t)[0], (1.0 - t) * PI / 2.0));
        }
        let q = query(&p, &[0.7], &[0.7]).unwrap();
        assert!(q.path.sample(9).points.iter().all(|x| close(x[0], 0.7)));
        let q = query(&p, &[PI + 0.5], &[0.5]).unwrap();
        assert_eq!(q.rule, 1);
        assert!(close(q.path.at(0.5)[0], 0.5 + 1.5 * PI));
        assert_eq!(LieCirclePlanner::h1(1.1, 0.0), 1.1);
        assert_eq!(LieCirclePlanner::h2(1.1, 0.0), 1.1);
        assert_eq!(LieCirclePlanner::h2(1.1, 1.0), TAU);
    }
}
