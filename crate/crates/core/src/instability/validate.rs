use rayon::prelude::*;
use serde::Serialize;

use super::{closures_at, pair_rng, rho};
use crate::planners::{classify, Planner, DEFAULT_SAMPLES};
use crate::spaces::Point;

/// Audit names in report order.
pub const AUDITS: [&str; 5] = ["endpoint", "partition", "validity", "continuity", "nested-closure"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateConfig {
    pub pairs: usize,
    pub seed: u64,
    /// Points on each sampled path.
    pub samples: usize,
    /// Pairs audited before the designed and random ones.
    pub extra: Vec<(Point, Point)>,
    /// Every fourth random pair is drawn inside one rule's domain.
    pub targeted: bool,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig { pairs: 10_000, seed: 0, samples: DEFAULT_SAMPLES, extra: Vec::new(), targeted: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub a: Point,
    pub b: Point,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSummary {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_failure: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub planner: String,
    pub pairs: usize,
    pub seed: u64,
    pub audits: Vec<AuditSummary>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.audits.iter().all(|a| a.failed == 0)
    }

    pub fn audit(&self, name: &str) -> Option<&AuditSummary> {
        self.audits.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone)]
enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

fn check(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(detail())
    }
}

/// Runs the five audits on one pair.
fn audit_pair(planner: &dyn Planner, a: &[f64], b: &[f64], designed: bool, cfg: &ValidateConfig, index: usize) -> [Outcome; 5] {
    let space = planner.space();
    if !(space.contains(a) && space.contains(b)) {
        let o = Outcome::Fail(format!("pair not in the space: {a:?} -> {b:?}"));
        return [o.clone(), o.clone(), o.clone(), o.clone(), o];
    }
    let rules = classify(planner, a, b);
    let partition = check(rules.len() == 1, || format!("rules claiming the pair: {rules:?}"));
    let Some(&rule) = rules.first() else {
        return [Outcome::Skip, partition, Outcome::Skip, Outcome::Skip, Outcome::Skip];
    };

    let path = planner.path(rule, a, b);
    let (p0, p1) = (path.at(0.0), path.at(1.0));
    let endpoint = check(space.distance_unchecked(&p0, a) == 0.0 && space.distance_unchecked(&p1, b) == 0.0, || {
        format!("rule {rule}: path(0) = {p0:?}, path(1) = {p1:?}")
    });

    let sampled = path.sample(cfg.samples);
    let validity = match sampled.points.iter().position(|x| !space.contains(x)) {
        Some(k) => Outcome::Fail(format!("rule {rule}: sample {k} at t = {} leaves the space", sampled.ts[k])),
        None => match planner.check_path(rule, a, b, &sampled) {
            Ok(()) => Outcome::Pass,
            Err(e) => Outcome::Fail(format!("rule {rule}: {e}")),
        },
    };

    let mut rng = pair_rng(cfg.seed, index as u64 ^ 0x5eed_0000_0000_0000);
    let margin = planner.chart_margin(rule, a, b);
    let continuity = if margin > 0.0 {
        let delta = (margin / 2.0).min(1e-3);
        match planner.perturb_within(rule, a, b, delta, &mut rng) {
            Some((a2, b2)) if space.contains(&a2) && space.contains(&b2) && classify(planner, &a2, &b2) == [rule] => {
                let moved = space.distance_unchecked(a, &a2).max(space.distance_unchecked(b, &b2));
                let other = planner.path(rule, &a2, &b2).sample(cfg.samples);
                let gap = rho(space, &sampled, &other).unwrap_or(f64::INFINITY);
                let c = planner.continuity_constant(rule, a, b).max(planner.continuity_constant(rule, &a2, &b2));
                check(gap <= c * moved + 1e-12, || {
                    format!("rule {rule}: rho = {gap:.3e} > C * delta = {c:.3e} * {moved:.3e} for {a2:?} -> {b2:?}")
                })
            }
            _ => Outcome::Skip,
        }
    } else {
        Outcome::Skip
    };

    let closures = closures_at(planner, a, b);
    let mut nested = if !closures.contains(&rule) {
        Outcome::Fail(format!("rule {rule} claims the pair but its closure predicate fails"))
    } else if let Some(&j) = closures.iter().find(|&&j| j < rule) {
        Outcome::Fail(format!("pair lies in the closure of rule {j} but belongs to rule {rule}"))
    } else {
        Outcome::Pass
    };
    if designed && matches!(nested, Outcome::Pass) {
        // Nearby pairs of rule j have (a, b) as a limit point, so (a, b)
        // must lie in closure j and be claimed by a rule <= j.
        let families = planner.families().max(1);
        for i in 0..8 * families {
            let (x, y) = planner.perturb_family(i % families, a, b, 1e-7, &mut rng);
            if !(space.contains(&x) && space.contains(&y)) {
                continue;
            }
            if let [j] = classify(planner, &x, &y)[..] {
                if !closures.contains(&j) || rule > j {
                    nested = Outcome::Fail(format!(
                        "nearby pair {x:?} -> {y:?} in rule {j}, but the pair is in rule {rule} with closures {closures:?}"
                    ));
                    break;
                }
            }
        }
    }
    [endpoint, partition, validity, continuity, nested]
}

/// Audits the planner axioms on extra pairs, the planner's degenerate
/// pairs and `cfg.pairs` random pairs. Pairs are processed in parallel
/// with per-pair seeds; results are merged in pair order.
pub fn validate(planner: &dyn Planner, cfg: &ValidateConfig) -> ValidationReport {
    let tol = planner.tolerances();
    let mut fixed: Vec<(Point, Point, bool)> = cfg.extra.iter().map(|(a, b)| (a.clone(), b.clone(), true)).collect();
    fixed.extend(planner.degenerate_pairs().into_iter().map(|(a, b)| (a, b, true)));
    let offset = fixed.len();
    let rules = planner.rule_count();

    let outcomes: Vec<(Point, Point, [Outcome; 5])> = (0..offset + cfg.pairs)
        .into_par_iter()
        .map(|index| {
            let (a, b, designed) = if index < offset {
                fixed[index].clone()
            } else {
                let k = index - offset;
                let mut rng = pair_rng(cfg.seed, k as u64);
                let targeted = if cfg.targeted && k % 4 == 3 { planner.sample_in_rule((k / 4) % rules + 1, &mut rng) } else { None };
                let (a, b) = targeted.unwrap_or_else(|| (planner.space().sample(&mut rng, &tol), planner.space().sample(&mut rng, &tol)));
                (a, b, false)
            };
            let o = audit_pair(planner, &a, &b, designed, cfg, index);
            (a, b, o)
        })
        .collect();

    let audits = AUDITS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mut s = AuditSummary { name, passed: 0, failed: 0, skipped: 0, first_failure: None };
            for (index, (a, b, o)) in outcomes.iter().enumerate() {
                match &o[k] {
                    Outcome::Pass => s.passed += 1,
                    Outcome::Skip => s.skipped += 1,
                    Outcome::Fail(detail) => {
                        s.failed += 1;
                        if s.first_failure.is_none() {
                            s.first_failure = Some(Counterexample { index, a: a.clone(), b: b.clone(), detail: detail.clone() });
                        }
                    }
                }
            }
            s
        })
        .collect();
    ValidationReport { planner: planner.name(), pairs: outcomes.len(), seed: cfg.seed, audits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planners::fixtures::{oversized_epsilon, oversized_epsilon_pair, EndpointOffset, NotNested, Overlap};
    use crate::planners::{CirclePlanner, LieCirclePlanner, PuncturedPlanner};
    use crate::spaces::{ObstacleSet, Tolerances};

    fn small() -> ValidateConfig {
        ValidateConfig { pairs: 400, seed: 7, ..ValidateConfig::default() }
    }

    #[test]
    fn circle_planners_pass() {
        for p in [&CirclePlanner::new(Tolerances::default()) as &dyn Planner, &LieCirclePlanner::new(Tolerances::default())] {
            let r = validate(p, &small());
            assert!(r.passed(), "{r:#?}");
            assert!(r.audit("continuity").unwrap().passed > 300);
        }
    }

    #[test]
    fn punctured_passes() {
        let obs = ObstacleSet::new(vec![[0.0; 3], [1.0, 0.5, -0.3], [-0.7, 1.2, 0.4]]).unwrap();
        let r = validate(&PuncturedPlanner::new(obs, Tolerances::default()), &small());
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn fixtures_fail_the_right_audit() {
        let r = validate(&Overlap::new(), &small());
        assert!(r.audit("partition").unwrap().failed > 0);
        assert_eq!(r.audit("partition").unwrap().first_failure.as_ref().unwrap().index, 0);

        let r = validate(&EndpointOffset::new(), &small());
        assert!(r.audit("endpoint").unwrap().failed > 0);

        let (a, b) = oversized_epsilon_pair();
        let cfg = ValidateConfig { extra: vec![(a.clone(), b.clone())], ..small() };
        let r = validate(&oversized_epsilon(), &cfg);
        let v = r.audit("validity").unwrap().first_failure.clone().unwrap();
        assert_eq!((v.index, v.a, v.b), (0, a, b));

        let r = validate(&NotNested::new(), &small());
        assert!(r.audit("nested-closure").unwrap().failed > 0);
    }
}
