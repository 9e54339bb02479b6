//! Executable motion planners: partitions of `X x X` into local domains,
//! each with a continuous rule producing a path.
//!
//! Rules are indexed from 1. Every planner supplies closed-form closure
//! predicates so instability can be computed analytically, plus the hooks
//! the audits need: a continuity constant, a chart margin inside which that
//! constant applies, perturbations that stay in a domain, and a list of
//! designed degenerate pairs.

mod circle;
mod convex;
pub mod fixtures;
mod path;
mod polyhedral;
mod product;
mod punctured;

use std::sync::Arc;

use rand::RngCore;
use thiserror::Error;

use crate::spaces::{ConfigSpace, Point, SpaceError, Tolerances};

pub use circle::{CirclePlanner, LieCirclePlanner};
pub use convex::ConvexPlanner;
pub use path::{Path, SampledPath, DEFAULT_SAMPLES};
pub use polyhedral::PolyhedralPlanner;
pub use product::ProductPlanner;
pub use punctured::{EpsilonPolicy, PuncturedPlanner};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlannerError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("no rule claims the pair {a:?} -> {b:?}")]
    NoRule { a: Point, b: Point },
    #[error("rules {rules:?} all claim the pair {a:?} -> {b:?}")]
    MultipleRules { rules: Vec<usize>, a: Point, b: Point },
    #[error("product composition needs nested closures; {0} does not have them")]
    NotNested(String),
    #[error("planner {planner} does not apply to a {space} space")]
    Unsupported { planner: String, space: String },
    #[error("unknown planner {0:?}")]
    UnknownPlanner(String),
}

pub trait Planner: Send + Sync {
    fn name(&self) -> String;
    fn space(&self) -> &ConfigSpace;
    fn rule_count(&self) -> usize;
    /// Whether `closure(F_j)` lies in `F_1 u ... u F_j` for every `j`.
    fn nested_closure(&self) -> bool;

    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool;
    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool;
    /// The rule's path. Only meaningful when `member(rule, a, b)` holds.
    fn path(&self, rule: usize, a: &[f64], b: &[f64]) -> Path;

    /// Lipschitz-style constant `C` with `rho <= C * delta` for nearby pairs
    /// of the same domain.
    fn continuity_constant(&self, rule: usize, a: &[f64], b: &[f64]) -> f64;
    /// Radius around `(a, b)` within which pairs of the same domain obey the
    /// continuity constant.
    fn chart_margin(&self, _rule: usize, _a: &[f64], _b: &[f64]) -> f64 {
        f64::INFINITY
    }
    /// A pair within `delta` of `(a, b)` in the same domain, when one can be
    /// constructed.
    fn perturb_within(&self, rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)>;

    /// Number of perturbation families used by sampled instability.
    /// Family 0 is always the generic metric-ball perturbation.
    fn families(&self) -> usize {
        1
    }
    fn perturb_family(&self, _family: usize, a: &[f64], b: &[f64], radius: f64, rng: &mut dyn RngCore) -> (Point, Point) {
        let tol = self.tolerances();
        (self.space().perturb(a, radius, rng, &tol), self.space().perturb(b, radius, rng, &tol))
    }

    /// Pairs where several domain closures meet.
    fn degenerate_pairs(&self) -> Vec<(Point, Point)>;
    /// A random pair in the domain of `rule`, for audits of thin domains.
    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)>;

    /// Planner-specific validity of a sampled path beyond space membership.
    fn check_path(&self, _rule: usize, _a: &[f64], _b: &[f64], _path: &SampledPath) -> Result<(), String> {
        Ok(())
    }

    fn tolerances(&self) -> Tolerances;
}

/// All rules whose member predicate holds.
pub fn classify(planner: &dyn Planner, a: &[f64], b: &[f64]) -> Vec<usize> {
    (1..=planner.rule_count()).filter(|&r| planner.member(r, a, b)).collect()
}

/// Answer of a planner query.
#[derive(Clone)]
pub struct Query {
    pub rule: usize,
    pub path: Path,
}

/// Finds the unique rule claiming `(a, b)` and returns its path.
pub fn query(planner: &dyn Planner, a: &[f64], b: &[f64]) -> Result<Query, PlannerError> {
    planner.space().check(a)?;
    planner.space().check(b)?;
    let rules = classify(planner, a, b);
    match rules.as_slice() {
        [rule] => Ok(Query { rule: *rule, path: planner.path(*rule, a, b) }),
        [] => Err(PlannerError::NoRule { a: a.to_vec(), b: b.to_vec() }),
        _ => Err(PlannerError::MultipleRules { rules, a: a.to_vec(), b: b.to_vec() }),
    }
}

/// Names accepted by [`build_planner`].
pub const PLANNER_NAMES: &[&str] = &["auto", "convex", "circle", "lie_circle", "punctured", "polyhedral", "product"];

/// Builds a planner by name. `auto` picks the default for the space; for
/// tori and products it composes factor planners.
pub fn build_planner(name: &str, space: &ConfigSpace, tol: Tolerances) -> Result<Arc<dyn Planner>, PlannerError> {
    let unsupported = || PlannerError::Unsupported { planner: name.to_string(), space: space.kind().to_string() };
    Ok(match (name, space) {
        ("auto" | "convex", ConfigSpace::Convex { .. }) => Arc::new(ConvexPlanner::new(space.clone())?),
        ("auto" | "circle", ConfigSpace::Circle) => Arc::new(CirclePlanner::new(tol)),
        ("lie_circle", ConfigSpace::Circle) => Arc::new(LieCirclePlanner::new(tol)),
        ("auto" | "punctured", ConfigSpace::Punctured(obs)) => Arc::new(PuncturedPlanner::new(obs.clone(), tol)),
        ("auto" | "polyhedral", ConfigSpace::Complex(c)) => Arc::new(PolyhedralPlanner::new(c.clone(), tol)),
        ("auto" | "product" | "circle", ConfigSpace::Torus { n }) => Arc::new(ProductPlanner::torus(*n, tol)?),
        ("auto" | "product", ConfigSpace::Product(l, r)) => {
            Arc::new(ProductPlanner::new(build_planner("auto", l, tol)?, build_planner("auto", r, tol)?)?)
        }
        (n, _) if !PLANNER_NAMES.contains(&n) => return Err(PlannerError::UnknownPlanner(n.to_string())),
        _ => return Err(unsupported()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceSpec;

    #[test]
    fn registry() {
        let tol = Tolerances::default();
        let t3 = build_planner("auto", &ConfigSpace::torus(3).unwrap(), tol).unwrap();
        assert_eq!(t3.rule_count(), 4);
        let space = SpaceSpec::from_json(r#"{"type":"product","left":{"type":"circle"},"right":{"type":"convex","dim":1,"box":[[0,1]]}}"#).unwrap();
        let p = build_planner("auto", &space, tol).unwrap();
        assert_eq!(p.rule_count(), 2);
        assert!(matches!(build_planner("convex", &ConfigSpace::Circle, tol), Err(PlannerError::Unsupported { .. })));
        assert!(matches!(build_planner("rrt", &ConfigSpace::Circle, tol), Err(PlannerError::UnknownPlanner(_))));
        assert_eq!(build_planner("lie_circle", &ConfigSpace::Circle, tol).unwrap().rule_count(), 2);
    }

    #[test]
    fn query_rejects_points_outside() {
        let p = build_planner("auto", &ConfigSpace::convex(vec![0.0], vec![1.0]).unwrap(), Tolerances::default()).unwrap();
        assert!(matches!(query(&*p, &[2.0], &[0.5]), Err(PlannerError::Space(_))));
        assert_eq!(query(&*p, &[0.0], &[1.0]).unwrap().rule, 1);
    }
}
