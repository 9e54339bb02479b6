use rand::RngCore;

use super::{Path, Planner, PlannerError};
use crate::spaces::{ConfigSpace, Point, Tolerances};

/// One global rule: the straight segment at constant speed.
#[derive(Debug, Clone)]
pub struct ConvexPlanner {
    space: ConfigSpace,
}

impl ConvexPlanner {
    pub fn new(space: ConfigSpace) -> Result<Self, PlannerError> {
        match space {
            ConfigSpace::Convex { .. } => Ok(ConvexPlanner { space }),
            other => Err(PlannerError::Unsupported { planner: "convex".into(), space: other.kind().into() }),
        }
    }

    fn corners(&self) -> (Point, Point) {
        match &self.space {
            ConfigSpace::Convex { lo, hi } => (lo.clone(), hi.clone()),
            _ => unreachable!(),
        }
    }
}

impl Planner for ConvexPlanner {
    fn name(&self) -> String {
        "convex".into()
    }

    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn rule_count(&self) -> usize {
        1
    }

    fn nested_closure(&self) -> bool {
        true
    }

    fn member(&self, rule: usize, _a: &[f64], _b: &[f64]) -> bool {
        rule == 1
    }

    fn in_closure(&self, rule: usize, _a: &[f64], _b: &[f64]) -> bool {
        rule == 1
    }

    fn path(&self, _rule: usize, a: &[f64], b: &[f64]) -> Path {
        Path::segment(a, b)
    }

    fn continuity_constant(&self, _rule: usize, _a: &[f64], _b: &[f64]) -> f64 {
        1.0
    }

    fn perturb_within(&self, _rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        Some(self.perturb_family(0, a, b, delta, rng))
    }

    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        let (lo, hi) = self.corners();
        vec![(lo.clone(), hi.clone()), (lo.clone(), lo)]
    }

    fn sample_in_rule(&self, _rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        let tol = self.tolerances();
        Some((self.space.sample(rng, &tol), self.space.sample(rng, &tol)))
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances::default()
    }
}
