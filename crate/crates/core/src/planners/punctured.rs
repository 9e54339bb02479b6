//! Planner for 3-space minus finitely many points.
//!
//! Rule 1: the segment hits obstacles and is parallel to the z-axis. Each
//! hit obstacle is bypassed by a semicircle bulging toward +x.
//! Rule 2: the segment hits obstacles and is not z-parallel. The semicircles
//! lie in the vertical plane through the segment, bulging upward.
//! Rule 3: the segment misses every obstacle; go straight.
//!
//! Closures: rule 1 is closed; rule 2 closes up to all hitting pairs; rule 3
//! is dense. This order makes the closures nested.

use rand::{Rng, RngCore};

use super::{Path, Planner, SampledPath};
use crate::spaces::{ball_point, euclidean, norm, sub, ConfigSpace, ObstacleSet, Point, Tolerances};

/// How the detour radius is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy {
    /// `min(min_gap / 3, clearance(A) / 2, clearance(B) / 2)`.
    Adaptive,
    /// A fixed radius. Unsafe in general; used by negative fixtures.
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct PuncturedPlanner {
    space: ConfigSpace,
    obstacles: ObstacleSet,
    tol: Tolerances,
    policy: EpsilonPolicy,
}

fn unit(v: &[f64]) -> [f64; 3] {
    let n = norm(v);
    [v[0] / n, v[1] / n, v[2] / n]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One piece of a detour path, parametrized by arclength.
#[derive(Debug, Clone)]
enum Piece {
    Line { from: [f64; 3], dir: [f64; 3], len: f64 },
    /// `c - eps cos(phi) u + eps sin(phi) w` for `phi` in `[0, pi]`.
    Arc { c: [f64; 3], u: [f64; 3], w: [f64; 3], eps: f64 },
}

impl Piece {
    fn len(&self) -> f64 {
        match self {
            Piece::Line { len, .. } => *len,
            Piece::Arc { eps, .. } => std::f64::consts::PI * eps,
        }
    }

    fn at(&self, s: f64) -> Point {
        match self {
            Piece::Line { from, dir, .. } => (0..3).map(|k| from[k] + s * dir[k]).collect(),
            Piece::Arc { c, u, w, eps } => {
                let phi = s / eps;
                (0..3).map(|k| c[k] - eps * phi.cos() * u[k] + eps * phi.sin() * w[k]).collect()
            }
        }
    }
}

impl PuncturedPlanner {
    pub fn new(obstacles: ObstacleSet, tol: Tolerances) -> Self {
        PuncturedPlanner { space: ConfigSpace::Punctured(obstacles.clone()), obstacles, tol, policy: EpsilonPolicy::Adaptive }
    }

    pub fn with_policy(mut self, policy: EpsilonPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn obstacles(&self) -> &ObstacleSet {
        &self.obstacles
    }

    /// Obstacles on the closed segment, ordered from `a`.
    pub fn hits(&self, a: &[f64], b: &[f64]) -> Vec<usize> {
        if a == b {
            return Vec::new();
        }
        self.obstacles.segment_hits(a, b, self.tol.collinear)
    }

    /// Length of the horizontal part of `b - a`.
    fn horizontal(a: &[f64], b: &[f64]) -> f64 {
        (b[0] - a[0]).hypot(b[1] - a[1])
    }

    pub fn z_parallel(&self, a: &[f64], b: &[f64]) -> bool {
        Self::horizontal(a, b) <= self.tol.collinear * euclidean(a, b)
    }

    /// Rule claiming the pair.
    pub fn rule_of(&self, a: &[f64], b: &[f64]) -> usize {
        if self.hits(a, b).is_empty() {
            3
        } else if self.z_parallel(a, b) {
            1
        } else {
            2
        }
    }

    /// Detour radius for the pair.
    pub fn epsilon(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.policy {
            EpsilonPolicy::Fixed(e) => e,
            EpsilonPolicy::Adaptive => (self.obstacles.min_gap() / 3.0)
                .min(self.obstacles.clearance(a) / 2.0)
                .min(self.obstacles.clearance(b) / 2.0),
        }
    }

    fn detour(&self, rule: usize, a: &[f64], b: &[f64]) -> Path {
        let eps = self.epsilon(a, b);
        let u = unit(&sub(b, a));
        let w = if rule == 1 {
            [1.0, 0.0, 0.0]
        } else {
            let lift = [-u[2] * u[0], -u[2] * u[1], 1.0 - u[2] * u[2]];
            unit(&lift)
        };
        let total = euclidean(a, b);
        let mut pieces = Vec::new();
        let mut pos = 0.0;
        for i in self.hits(a, b) {
            let s = dot(&sub(&self.obstacles.points()[i], a), &u);
            let c = [a[0] + s * u[0], a[1] + s * u[1], a[2] + s * u[2]];
            let start = s - eps;
            pieces.push(Piece::Line { from: [a[0] + pos * u[0], a[1] + pos * u[1], a[2] + pos * u[2]], dir: u, len: (start - pos).max(0.0) });
            pieces.push(Piece::Arc { c, u, w, eps });
            pos = s + eps;
        }
        pieces.push(Piece::Line { from: [a[0] + pos * u[0], a[1] + pos * u[1], a[2] + pos * u[2]], dir: u, len: (total - pos).max(0.0) });
        let length: f64 = pieces.iter().map(Piece::len).sum();
        Path::new(a.to_vec(), b.to_vec(), move |t| {
            let mut s = t * length;
            for (k, p) in pieces.iter().enumerate() {
                if s <= p.len() || k == pieces.len() - 1 {
                    return p.at(s.min(p.len()));
                }
                s -= p.len();
            }
            unreachable!()
        })
        .with_epsilon(eps)
    }

    /// Perturbation keeping every hit obstacle on the segment: slide the
    /// endpoints along the line, or swing the line about the single hit
    /// obstacle when `swing` is set and exactly one is hit.
    fn keep_hits(&self, a: &[f64], b: &[f64], delta: f64, swing: bool, rng: &mut dyn RngCore) -> (Point, Point) {
        let hits = self.hits(a, b);
        let u = unit(&sub(b, a));
        if swing && hits.len() == 1 {
            let p = self.obstacles.points()[hits[0]];
            let ratio = euclidean(b, &p) / euclidean(a, &p);
            let a2 = ball_point(a, delta / ratio.max(1.0), rng);
            let r = euclidean(b, &p) / euclidean(&a2, &p);
            let b2 = (0..3).map(|k| p[k] + r * (p[k] - a2[k])).collect();
            return (a2, b2);
        }
        // Slide inward only, so no endpoint can pass an obstacle.
        let room = |x: &[f64]| self.obstacles.clearance(x) / 2.0;
        let s1 = rng.gen_range(0.0..=delta.min(room(a)));
        let s2 = rng.gen_range(0.0..=delta.min(room(b)));
        (
            (0..3).map(|k| a[k] + s1 * u[k]).collect(),
            (0..3).map(|k| b[k] - s2 * u[k]).collect(),
        )
    }

    /// A point at distance `s` from obstacle `p` along `-dir`, and one at
    /// distance `t` along `dir`, if both respect the clearance floor.
    fn through(&self, p: [f64; 3], dir: [f64; 3], s: f64, t: f64) -> Option<(Point, Point)> {
        let a: Point = (0..3).map(|k| p[k] - s * dir[k]).collect();
        let b: Point = (0..3).map(|k| p[k] + t * dir[k]).collect();
        let ok = |x: &[f64]| self.obstacles.clearance(x) >= self.tol.clearance_floor;
        (ok(&a) && ok(&b)).then_some((a, b))
    }

    fn random_unit(rng: &mut dyn RngCore) -> [f64; 3] {
        loop {
            let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let n = norm(&v);
            if n > 1e-3 && n <= 1.0 {
                return unit(&v);
            }
        }
    }

    /// Span of the obstacles and the pair.
    fn diameter(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut pts: Vec<&[f64]> = self.obstacles.points().iter().map(|p| &p[..]).collect();
        pts.push(a);
        pts.push(b);
        let mut d: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d = d.max(euclidean(pts[i], pts[j]));
            }
        }
        d
    }
}

impl Planner for PuncturedPlanner {
    fn name(&self) -> String {
        "punctured".into()
    }

    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn rule_count(&self) -> usize {
        3
    }

    fn nested_closure(&self) -> bool {
        true
    }

    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        self.rule_of(a, b) == rule
    }

    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        match rule {
            1 => self.rule_of(a, b) == 1,
            2 => !self.hits(a, b).is_empty(),
            3 => true,
            _ => false,
        }
    }

    fn path(&self, rule: usize, a: &[f64], b: &[f64]) -> Path {
        if rule == 3 {
            Path::segment(a, b)
        } else {
            self.detour(rule, a, b)
        }
    }

    /// `8 * diameter / eps`, plus a tilt term for rule 2: the detour plane
    /// turns at rate `1 / |horizontal part of B - A|` as the pair moves.
    fn continuity_constant(&self, rule: usize, a: &[f64], b: &[f64]) -> f64 {
        let eps = self.epsilon(a, b);
        let base = 8.0 * self.diameter(a, b).max(eps) / eps;
        if rule == 2 {
            base + 4.0 * eps / Self::horizontal(a, b)
        } else {
            base
        }
    }

    fn chart_margin(&self, rule: usize, a: &[f64], b: &[f64]) -> f64 {
        let hits = self.hits(a, b);
        let others = self.obstacles.segment_clearance(a, b, &hits) / 2.0;
        let ends = self.obstacles.clearance(a).min(self.obstacles.clearance(b)) / 2.0;
        match rule {
            3 => others,
            2 => others.min(ends).min(Self::horizontal(a, b) / 4.0),
            _ => others.min(ends),
        }
    }

    fn perturb_within(&self, rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        Some(match rule {
            3 => (ball_point(a, delta, rng), ball_point(b, delta, rng)),
            2 => self.keep_hits(a, b, delta, true, rng),
            _ => self.keep_hits(a, b, delta, false, rng),
        })
    }

    /// Families: 0 generic, 1 swing about the hit obstacle (tilted),
    /// 2 slide along the line (keeps a z-parallel segment z-parallel).
    fn families(&self) -> usize {
        3
    }

    fn perturb_family(&self, family: usize, a: &[f64], b: &[f64], radius: f64, rng: &mut dyn RngCore) -> (Point, Point) {
        match family {
            1 if !self.hits(a, b).is_empty() => self.keep_hits(a, b, radius, true, rng),
            2 if !self.hits(a, b).is_empty() => self.keep_hits(a, b, radius, false, rng),
            _ => (self.space.perturb(a, radius, rng, &self.tol), self.space.perturb(b, radius, rng, &self.tol)),
        }
    }

    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        let pts = self.obstacles.points();
        let Some(&p) = pts.first() else { return Vec::new() };
        let r = (self.obstacles.min_gap() / 3.0).min(1.0);
        let mut out = Vec::new();
        out.extend(self.through(p, [0.0, 0.0, 1.0], r, r));
        let d = 1.0 / 3f64.sqrt();
        out.extend(self.through(p, [d, d, d], r, 2.0 * r));
        if let Some(&q) = pts.get(1) {
            let dir = unit(&sub(&q, &p));
            let gap = euclidean(&p, &q);
            out.extend(self.through(p, dir, gap / 4.0, gap * 1.25));
        }
        out
    }

    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        if rule == 3 || self.obstacles.is_empty() {
            return Some((self.space.sample(rng, &self.tol), self.space.sample(rng, &self.tol)));
        }
        let pts = self.obstacles.points();
        for _ in 0..64 {
            let p = pts[rng.gen_range(0..pts.len())];
            let dir = if rule == 1 { [0.0, 0.0, 1.0] } else { Self::random_unit(rng) };
            let (s, t) = (rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0));
            if let Some(pair) = self.through(p, dir, s, t) {
                if self.rule_of(&pair.0, &pair.1) == rule {
                    return Some(pair);
                }
            }
        }
        None
    }

    /// Clearance along the path must reach `min(eps, straight-segment
    /// clearance to the obstacles not on the segment)` up to `1e-9`.
    fn check_path(&self, _rule: usize, a: &[f64], b: &[f64], path: &SampledPath) -> Result<(), String> {
        let hits = self.hits(a, b);
        let floor = self.epsilon(a, b).min(self.obstacles.segment_clearance(a, b, &hits)) - 1e-9;
        for (t, x) in path.ts.iter().zip(&path.points) {
            let c = self.obstacles.clearance(x);
            if c <= 0.0 || c < floor {
                return Err(format!("clearance {c:.3e} at t = {t} (required {floor:.3e})"));
            }
        }
        Ok(())
    }

    fn tolerances(&self) -> Tolerances {
        self.tol
    }
}
