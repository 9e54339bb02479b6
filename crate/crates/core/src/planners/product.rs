use std::sync::Arc;

use rand::{Rng, RngCore};

use super::{CirclePlanner, Path, Planner, PlannerError, SampledPath};
use crate::spaces::{ConfigSpace, Point, Tolerances};

/// Product of two planners with nested closures. For factor rule counts
/// `k` and `l` it has `k + l - 1` rules: rule `r - 1` is
/// `W_r = union over j + i = r of F_j x G_i`, for `r = 2 ..= k + l`.
pub struct ProductPlanner {
    left: Arc<dyn Planner>,
    right: Arc<dyn Planner>,
    space: ConfigSpace,
    split: usize,
}

impl ProductPlanner {
    pub fn new(left: Arc<dyn Planner>, right: Arc<dyn Planner>) -> Result<Self, PlannerError> {
        for p in [&left, &right] {
            if !p.nested_closure() {
                return Err(PlannerError::NotNested(p.name()));
            }
        }
        let space = ConfigSpace::product(left.space().clone(), right.space().clone());
        let split = left.space().dim();
        Ok(ProductPlanner { left, right, space, split })
    }

    /// Iterated product of `n` circle planners on the torus `T^n`.
    pub fn torus(n: usize, tol: Tolerances) -> Result<Self, PlannerError> {
        let space = ConfigSpace::torus(n)?;
        let circle = || -> Arc<dyn Planner> { Arc::new(CirclePlanner::new(tol)) };
        if n == 1 {
            return Err(PlannerError::Unsupported { planner: "product".into(), space: "torus with one factor".into() });
        }
        let mut acc: Arc<dyn Planner> = circle();
        for _ in 1..n - 1 {
            acc = Arc::new(ProductPlanner::new(circle(), acc)?);
        }
        let mut p = ProductPlanner::new(circle(), acc)?;
        p.space = space;
        Ok(p)
    }

    fn halves<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        x.split_at(self.split)
    }

    /// Factor rule pairs `(j, i)` with `j + i = rule + 1`.
    fn splits(&self, rule: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (k, l) = (self.left.rule_count(), self.right.rule_count());
        (1..=k).filter_map(move |j| {
            let i = (rule + 1).checked_sub(j)?;
            (1..=l).contains(&i).then_some((j, i))
        })
    }

    fn factor_rules(&self, a: &[f64], b: &[f64]) -> Option<(usize, usize)> {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        let j = (1..=self.left.rule_count()).find(|&j| self.left.member(j, a1, b1))?;
        let i = (1..=self.right.rule_count()).find(|&i| self.right.member(i, a2, b2))?;
        Some((j, i))
    }

    fn join(x: Point, y: Point) -> Point {
        let mut v = x;
        v.extend(y);
        v
    }
}

impl Planner for ProductPlanner {
    fn name(&self) -> String {
        format!("product({}, {})", self.left.name(), self.right.name())
    }

    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn rule_count(&self) -> usize {
        self.left.rule_count() + self.right.rule_count() - 1
    }

    fn nested_closure(&self) -> bool {
        true
    }

    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        self.splits(rule).any(|(j, i)| self.left.member(j, a1, b1) && self.right.member(i, a2, b2))
    }

    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        self.splits(rule).any(|(j, i)| self.left.in_closure(j, a1, b1) && self.right.in_closure(i, a2, b2))
    }

    fn path(&self, rule: usize, a: &[f64], b: &[f64]) -> Path {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        let (j, i) = self.factor_rules(a, b).unwrap_or_else(|| self.splits(rule).next().unwrap());
        Path::concat(&self.left.path(j, a1, b1), &self.right.path(i, a2, b2))
    }

    fn continuity_constant(&self, _rule: usize, a: &[f64], b: &[f64]) -> f64 {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        let Some((j, i)) = self.factor_rules(a, b) else { return f64::INFINITY };
        self.left.continuity_constant(j, a1, b1).max(self.right.continuity_constant(i, a2, b2))
    }

    fn chart_margin(&self, _rule: usize, a: &[f64], b: &[f64]) -> f64 {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        let Some((j, i)) = self.factor_rules(a, b) else { return 0.0 };
        self.left.chart_margin(j, a1, b1).min(self.right.chart_margin(i, a2, b2))
    }

    fn perturb_within(&self, _rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        let (j, i) = self.factor_rules(a, b)?;
        let (x1, y1) = self.left.perturb_within(j, a1, b1, delta, rng)?;
        let (x2, y2) = self.right.perturb_within(i, a2, b2, delta, rng)?;
        Some((Self::join(x1, x2), Self::join(y1, y2)))
    }

    /// Mixed-radix combinations of the factor families.
    fn families(&self) -> usize {
        self.left.families() * self.right.families()
    }

    fn perturb_family(&self, family: usize, a: &[f64], b: &[f64], radius: f64, rng: &mut dyn RngCore) -> (Point, Point) {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        let nl = self.left.families();
        let (x1, y1) = self.left.perturb_family(family % nl, a1, b1, radius, rng);
        let (x2, y2) = self.right.perturb_family(family / nl, a2, b2, radius, rng);
        (Self::join(x1, x2), Self::join(y1, y2))
    }

    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        let (l, r) = (self.left.degenerate_pairs(), self.right.degenerate_pairs());
        let mut out = Vec::new();
        for (a1, b1) in l.iter().take(4) {
            for (a2, b2) in r.iter().take(4) {
                out.push((Self::join(a1.clone(), a2.clone()), Self::join(b1.clone(), b2.clone())));
            }
        }
        out
    }

    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        let splits: Vec<(usize, usize)> = self.splits(rule).collect();
        if splits.is_empty() {
            return None;
        }
        let (j, i) = splits[rng.gen_range(0..splits.len())];
        let (a1, b1) = self.left.sample_in_rule(j, rng)?;
        let (a2, b2) = self.right.sample_in_rule(i, rng)?;
        Some((Self::join(a1, a2), Self::join(b1, b2)))
    }

    fn check_path(&self, _rule: usize, a: &[f64], b: &[f64], path: &SampledPath) -> Result<(), String> {
        let ((a1, a2), (b1, b2)) = (self.halves(a), self.halves(b));
        let (j, i) = self.factor_rules(a, b).ok_or("no factor rule")?;
        let (p1, p2) = path.split(self.split);
        self.left.check_path(j, a1, b1, &p1)?;
        self.right.check_path(i, a2, b2, &p2)
    }

    fn tolerances(&self) -> Tolerances {
        self.left.tolerances()
    }
}
