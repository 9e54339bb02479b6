//! Planner on a geometric simplicial complex of dimension `n` with `2n + 1`
//! rules. Rule `i + 1` holds the pairs whose carriers have dimensions
//! summing to `i`. The path runs straight to the center of the carrier of
//! `A`, along the precomputed center route, then straight to `B`.
//!
//! The closure of the open `k`-simplices is the union of closed
//! `k`-simplices, so a point with carrier of dimension `d` lies in it iff
//! `d <= k <= max_star`. Rule closures therefore only reach lower indices.

use rand::{Rng, RngCore};

use super::{Path, Planner};
use crate::spaces::{ConfigSpace, Point, SimplicialComplex, Tolerances};

#[derive(Debug, Clone)]
pub struct PolyhedralPlanner {
    space: ConfigSpace,
    complex: SimplicialComplex,
    tol: Tolerances,
}

impl PolyhedralPlanner {
    pub fn new(complex: SimplicialComplex, tol: Tolerances) -> Self {
        PolyhedralPlanner { space: ConfigSpace::Complex(complex.clone()), complex, tol }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    fn carrier(&self, x: &[f64]) -> Option<usize> {
        self.complex.carrier(x).ok()
    }

    fn carrier_dim(&self, x: &[f64]) -> Option<usize> {
        self.carrier(x).map(|c| self.complex.simplex(c).dim())
    }

    /// Polyline through the carrier centers along the center route.
    pub fn waypoints(&self, a: &[f64], b: &[f64]) -> Vec<Point> {
        let (Some(ca), Some(cb)) = (self.carrier(a), self.carrier(b)) else {
            return vec![a.to_vec(), b.to_vec()];
        };
        let mut pts = vec![a.to_vec()];
        pts.extend(self.complex.route(ca, cb).into_iter().map(|s| self.complex.simplex(s).center.clone()));
        pts.push(b.to_vec());
        pts
    }

    fn nudge(&self, x: &[f64], delta: f64, rng: &mut dyn RngCore) -> Point {
        match self.carrier(x) {
            Some(c) if self.complex.simplex(c).dim() > 0 => self.complex.nudge_into(x, c, delta, rng),
            _ => x.to_vec(),
        }
    }

    fn first_of_dim(&self, d: usize) -> Option<usize> {
        self.complex.simplices().iter().position(|s| s.dim() == d)
    }
}

impl Planner for PolyhedralPlanner {
    fn name(&self) -> String {
        "polyhedral".into()
    }

    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn rule_count(&self) -> usize {
        2 * self.complex.dim() + 1
    }

    fn nested_closure(&self) -> bool {
        true
    }

    fn member(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        match (self.carrier_dim(a), self.carrier_dim(b)) {
            (Some(k), Some(l)) => k + l + 1 == rule,
            _ => false,
        }
    }

    fn in_closure(&self, rule: usize, a: &[f64], b: &[f64]) -> bool {
        let (Some(ca), Some(cb)) = (self.carrier(a), self.carrier(b)) else { return false };
        let (sa, sb) = (self.complex.simplex(ca), self.complex.simplex(cb));
        let i = rule.wrapping_sub(1);
        sa.dim() + sb.dim() <= i && i <= sa.max_star + sb.max_star
    }

    fn path(&self, _rule: usize, a: &[f64], b: &[f64]) -> Path {
        Path::polyline(self.waypoints(a, b))
    }

    fn continuity_constant(&self, _rule: usize, _a: &[f64], _b: &[f64]) -> f64 {
        8.0
    }

    /// Moves each endpoint within its own carrier.
    fn perturb_within(&self, _rule: usize, a: &[f64], b: &[f64], delta: f64, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        Some((self.nudge(a, delta, rng), self.nudge(b, delta, rng)))
    }

    fn degenerate_pairs(&self) -> Vec<(Point, Point)> {
        let reps: Vec<Point> = (0..=self.complex.dim())
            .filter_map(|d| self.first_of_dim(d))
            .map(|id| self.complex.simplex(id).center.clone())
            .collect();
        let mut out = Vec::new();
        for x in &reps {
            for y in &reps {
                out.push((x.clone(), y.clone()));
            }
        }
        let verts = self.complex.vertices();
        out.push((verts[0].clone(), verts[verts.len() - 1].clone()));
        out
    }

    fn sample_in_rule(&self, rule: usize, rng: &mut dyn RngCore) -> Option<(Point, Point)> {
        let n = self.complex.dim();
        let i = rule.checked_sub(1)?;
        let splits: Vec<(usize, usize)> = (0..=n).filter(|k| i >= *k && i - k <= n).map(|k| (k, i - k)).collect();
        let (k, l) = *splits.get(rng.gen_range(0..splits.len().max(1)))?;
        let pick = |d: usize, rng: &mut dyn RngCore| {
            let ids: Vec<usize> = (0..self.complex.simplices().len()).filter(|&s| self.complex.simplex(s).dim() == d).collect();
            let id = ids[rng.gen_range(0..ids.len())];
            self.complex.interior_point(id, rng)
        };
        Some((pick(k, rng), pick(l, rng)))
    }

    fn tolerances(&self) -> Tolerances {
        self.tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planners::query;

    fn triangle_circle() -> PolyhedralPlanner {
        let c = SimplicialComplex::new(
            vec![vec![1.0, 0.0], vec![-0.5, 0.8], vec![-0.5, -0.8]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap();
        PolyhedralPlanner::new(c, Tolerances::default())
    }

    #[test]
    fn graph_has_three_rules() {
        let p = triangle_circle();
        assert_eq!(p.rule_count(), 3);
        let q = query(&p, &[1.0, 0.0], &[-0.5, 0.8]).unwrap();
        assert_eq!(q.rule, 1);
        // Vertex 0 -> edge {0,1} center -> vertex 1.
        let w = p.waypoints(&[1.0, 0.0], &[-0.5, 0.8]);
        assert_eq!(w.len(), 5);
        assert_eq!(w[2], vec![0.25, 0.4]);
        assert!((q.path.at(0.5)[0] - 0.25).abs() < 1e-12);
        let mid = [0.25, 0.4];
        assert_eq!(query(&p, &mid, &mid).unwrap().rule, 3);
    }

    #[test]
    fn closure_counts_at_vertices() {
        let p = triangle_circle();
        let v = [1.0, 0.0];
        assert_eq!((1..=3).filter(|&r| p.in_closure(r, &v, &v)).count(), 3);
        let e = [0.25, 0.4];
        assert_eq!((1..=3).filter(|&r| p.in_closure(r, &v, &e)).count(), 2);
        assert_eq!((1..=3).filter(|&r| p.in_closure(r, &e, &e)).count(), 1);
    }

    #[test]
    fn triangle_interior_pair() {
        let c = SimplicialComplex::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            vec![vec![0, 1, 2], vec![1, 2, 3]],
        )
        .unwrap();
        let p = PolyhedralPlanner::new(c, Tolerances::default());
        assert_eq!(p.rule_count(), 5);
        let q = query(&p, &[0.2, 0.2], &[0.3, 0.1]).unwrap();
        assert_eq!(q.rule, 5);
        let q = query(&p, &[0.2, 0.2], &[0.8, 0.8]).unwrap();
        assert_eq!(q.rule, 5);
        assert!(q.path.sample(101).points.iter().all(|x| p.space().contains(x)));
    }
}
