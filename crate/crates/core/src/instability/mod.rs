//! Order of instability of planners, statistical audits of the planner
//! axioms, and the cover-reduction combinatorics on weight vectors.
//!
//! The analytic order at a pair counts the rules whose closure predicate
//! holds there. The sampled order counts the rules hit by perturbed pairs
//! in shrinking balls; it can only undercount, so the analytic value is
//! authoritative.

mod cover;
mod validate;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::planners::{classify, Planner, PlannerError, SampledPath};
use crate::spaces::{ConfigSpace, Point};

pub use cover::{cover_reduce_classify, cover_reduce_partition, PartitionReport, WeightVector};
pub use validate::{validate, AuditSummary, Counterexample, ValidateConfig, ValidationReport, AUDITS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstabilityError {
    #[error("paths are sampled on different grids")]
    GridMismatch,
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("vector {index} has an argmax set of size {size}, not below r = {r}")]
    ArgmaxTooLarge { index: usize, size: usize, r: usize },
    #[error("radius schedule must be positive and decreasing")]
    BadRadii,
}

/// Per-pair deterministic generator: the seed fixes the key, the index the stream.
pub fn pair_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sup distance between two paths over a shared sample grid.
pub fn rho(space: &ConfigSpace, p: &SampledPath, q: &SampledPath) -> Result<f64, InstabilityError> {
    if p.ts != q.ts {
        return Err(InstabilityError::GridMismatch);
    }
    Ok(p.points.iter().zip(&q.points).map(|(x, y)| space.distance_unchecked(x, y)).fold(0.0, f64::max))
}

/// Rules whose closure contains the pair.
pub fn closures_at(planner: &dyn Planner, a: &[f64], b: &[f64]) -> Vec<usize> {
    (1..=planner.rule_count()).filter(|&r| planner.in_closure(r, a, b)).collect()
}

/// Analytic order of instability at a pair.
pub fn order_at(planner: &dyn Planner, a: &[f64], b: &[f64]) -> Result<usize, InstabilityError> {
    planner.space().check(a).map_err(PlannerError::from)?;
    planner.space().check(b).map_err(PlannerError::from)?;
    Ok(closures_at(planner, a, b).len())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleConfig {
    /// Strictly decreasing positive radii.
    pub radii: Vec<f64>,
    pub per_radius: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { radii: (1..=6).map(|k| 10f64.powi(-k)).collect(), per_radius: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusCount {
    pub radius: f64,
    pub count: usize,
    pub rules: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledOrder {
    pub per_radius: Vec<RadiusCount>,
    /// Count at the smallest radius.
    pub order: usize,
}

/// Sampled order: distinct rules met by the pair and by perturbed pairs at
/// each radius. Perturbation families are used round-robin.
pub fn order_sampled(planner: &dyn Planner, a: &[f64], b: &[f64], cfg: &SampleConfig) -> Result<SampledOrder, InstabilityError> {
    if cfg.radii.is_empty() || cfg.radii.iter().any(|r| r.is_nan() || *r <= 0.0) || cfg.radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(InstabilityError::BadRadii);
    }
    let own = classify(planner, a, b);
    let families = planner.families().max(1);
    let space = planner.space();
    let per_radius: Vec<RadiusCount> = cfg
        .radii
        .iter()
        .enumerate()
        .map(|(k, &radius)| {
            let mut rng = pair_rng(cfg.seed, k as u64);
            let mut seen: BTreeSet<usize> = own.iter().copied().collect();
            for i in 0..cfg.per_radius {
                let (x, y) = planner.perturb_family(i % families, a, b, radius, &mut rng);
                if space.contains(&x) && space.contains(&y) {
                    if let [r] = classify(planner, &x, &y)[..] {
                        seen.insert(r);
                    }
                }
            }
            RadiusCount { radius, count: seen.len(), rules: seen.into_iter().collect() }
        })
        .collect();
    let order = per_radius.last().map_or(0, |r| r.count);
    Ok(SampledOrder { per_radius, order })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalConfig {
    pub random_pairs: usize,
    pub seed: u64,
    /// Sampled order is computed at designed pairs when set.
    pub sampled: Option<SampleConfig>,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        GlobalConfig { random_pairs: 1000, seed: 0, sampled: Some(SampleConfig::default()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub a: Point,
    pub b: Point,
    pub designed: bool,
    pub rules: Vec<usize>,
    pub closures: Vec<usize>,
    pub analytic: usize,
    pub sampled: Option<SampledOrder>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstabilityReport {
    pub planner: String,
    pub rule_count: usize,
    pub global_order: usize,
    pub witness: Option<(Point, Point)>,
    pub records: Vec<PairRecord>,
}

/// Record for one pair.
pub fn pair_record(planner: &dyn Planner, a: &[f64], b: &[f64], designed: bool, sampled: Option<&SampleConfig>) -> Result<PairRecord, InstabilityError> {
    let analytic = order_at(planner, a, b)?;
    Ok(PairRecord {
        a: a.to_vec(),
        b: b.to_vec(),
        designed,
        rules: classify(planner, a, b),
        closures: closures_at(planner, a, b),
        analytic,
        sampled: sampled.map(|c| order_sampled(planner, a, b, c)).transpose()?,
    })
}

/// Maximum analytic order over the designed degenerate pairs and random
/// pairs. The witness is the first pair attaining it, designed pairs first.
pub fn global_order(planner: &dyn Planner, cfg: &GlobalConfig) -> Result<InstabilityReport, InstabilityError> {
    let tol = planner.tolerances();
    let mut records = Vec::new();
    for (a, b) in planner.degenerate_pairs() {
        records.push(pair_record(planner, &a, &b, true, cfg.sampled.as_ref())?);
    }
    let mut rng = pair_rng(cfg.seed, u64::MAX);
    for _ in 0..cfg.random_pairs {
        let a = planner.space().sample(&mut rng, &tol);
        let b = planner.space().sample(&mut rng, &tol);
        records.push(pair_record(planner, &a, &b, false, None)?);
    }
    let global = records.iter().map(|r| r.analytic).max().unwrap_or(0);
    let witness = records.iter().find(|r| r.analytic == global).map(|r| (r.a.clone(), r.b.clone()));
    Ok(InstabilityReport { planner: planner.name(), rule_count: planner.rule_count(), global_order: global, witness, records })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::planners::{CirclePlanner, ConvexPlanner, Path, PuncturedPlanner};
    use crate::spaces::{ObstacleSet, Tolerances};

    #[test]
    fn rho_examples() {
        let space = ConfigSpace::convex(vec![0.0, 0.0], vec![2.0, 2.0]).unwrap();
        let p = Path::segment(&[0.0, 0.0], &[2.0, 0.0]).sample(257);
        assert_eq!(rho(&space, &p, &p).unwrap(), 0.0);
        let (x, y) = (vec![0.0, 0.0], vec![1.0, 1.0]);
        let cx = Path::constant(x.clone()).sample(9);
        let cy = Path::constant(y.clone()).sample(9);
        assert_eq!(rho(&space, &cx, &cy).unwrap(), 2f64.sqrt());
        // Quadratic reparametrization: gap |t - t^2| * |B - A|, largest at t = 1/2.
        let q = Path::new(vec![0.0, 0.0], vec![2.0, 0.0], |t| vec![2.0 * t * t, 0.0]).sample(257);
        assert!((rho(&space, &p, &q).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(rho(&space, &p, &cx), Err(InstabilityError::GridMismatch));
    }

    #[test]
    fn analytic_orders() {
        let convex = ConvexPlanner::new(ConfigSpace::convex(vec![0.0], vec![1.0]).unwrap()).unwrap();
        assert_eq!(order_at(&convex, &[0.2], &[0.9]).unwrap(), 1);
        let circle = CirclePlanner::new(Tolerances::default());
        assert_eq!(order_at(&circle, &[0.0], &[PI]).unwrap(), 2);
        assert_eq!(order_at(&circle, &[0.0], &[1.0]).unwrap(), 1);
        let p = PuncturedPlanner::new(ObstacleSet::new(vec![[0.0; 3]]).unwrap(), Tolerances::default());
        assert_eq!(order_at(&p, &[0.0, 0.0, -1.0], &[0.0, 0.0, 1.0]).unwrap(), 3);
    }

    #[test]
    fn sampled_orders_at_designed_pairs() {
        let circle = CirclePlanner::new(Tolerances::default());
        let s = order_sampled(&circle, &[0.0], &[PI], &SampleConfig::default()).unwrap();
        assert_eq!(s.order, 2);
        assert_eq!(s.per_radius.len(), 6);
        let convex = ConvexPlanner::new(ConfigSpace::convex(vec![0.0], vec![1.0]).unwrap()).unwrap();
        let s = order_sampled(&convex, &[0.5], &[0.5], &SampleConfig::default()).unwrap();
        assert!(s.per_radius.iter().all(|r| r.count == 1));
        let bad = SampleConfig { radii: vec![1e-3, 1e-2], ..SampleConfig::default() };
        assert_eq!(order_sampled(&circle, &[0.0], &[PI], &bad), Err(InstabilityError::BadRadii));
    }

    #[test]
    fn circle_global_order() {
        let circle = CirclePlanner::new(Tolerances::default());
        let r = global_order(&circle, &GlobalConfig { random_pairs: 50, ..GlobalConfig::default() }).unwrap();
        assert_eq!(r.global_order, 2);
        assert_eq!(r.witness, Some((vec![0.0], vec![PI])));
    }
}
