use serde::Serialize;

use super::{norm, sub, Point, SpaceError};

/// Finitely many distinct point obstacles in 3-space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstacleSet {
    points: Vec<[f64; 3]>,
    min_gap: f64,
}

impl ObstacleSet {
    pub fn new(points: Vec<[f64; 3]>) -> Result<Self, SpaceError> {
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(SpaceError::Invalid("obstacle coordinates must be finite".into()));
        }
        let mut min_gap = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let d = norm(&sub(&points[i], &points[j]));
                if d == 0.0 {
                    return Err(SpaceError::Invalid(format!("obstacles {i} and {j} coincide")));
                }
                min_gap = min_gap.min(d);
            }
        }
        Ok(ObstacleSet { points, min_gap })
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Minimum pairwise distance; infinite for fewer than two obstacles.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Distance from `x` to the nearest obstacle (infinite when there are none).
    pub fn clearance(&self, x: &[f64]) -> f64 {
        self.points.iter().map(|p| norm(&sub(x, p))).fold(f64::INFINITY, f64::min)
    }

    /// Indices of obstacles within `tol` of the closed segment `[a, b]`,
    /// ordered by their parameter along the segment from `a`.
    pub fn segment_hits(&self, a: &[f64], b: &[f64], tol: f64) -> Vec<usize> {
        let mut hits: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let (t, d) = project_to_segment(a, b, p);
                (d <= tol).then_some((t, i))
            })
            .collect();
        hits.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        hits.into_iter().map(|(_, i)| i).collect()
    }

    /// Minimum distance from the segment to the obstacles not listed in `skip`.
    pub fn segment_clearance(&self, a: &[f64], b: &[f64], skip: &[usize]) -> f64 {
        self.points
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, p)| project_to_segment(a, b, p).1)
            .fold(f64::INFINITY, f64::min)
    }

    /// Axis-aligned box containing all obstacles, padded for sampling.
    pub fn sampling_box(&self) -> (Point, Point) {
        if self.points.is_empty() {
            return (vec![-1.0; 3], vec![1.0; 3]);
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.points {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let extent = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
        let pad = (0.5 * extent).max(1.0);
        (lo.iter().map(|x| x - pad).collect(), hi.iter().map(|x| x + pad).collect())
    }
}

/// Parameter of the closest point on `[a, b]` to `p`, and the distance.
/// Computed symmetrically in `a` and `b` so that reversing the segment
/// reverses the parameters.
pub fn project_to_segment(a: &[f64], b: &[f64], p: &[f64]) -> (f64, f64) {
    let ab = sub(b, a);
    let len2: f64 = ab.iter().map(|x| x * x).sum();
    if len2 == 0.0 {
        return (0.0, norm(&sub(p, a)));
    }
    let t = (sub(p, a).iter().zip(&ab).map(|(x, y)| x * y).sum::<f64>() / len2).clamp(0.0, 1.0);
    let closest: Vec<f64> = if t <= 0.5 {
        a.iter().zip(&ab).map(|(x, d)| x + t * d).collect()
    } else {
        b.iter().zip(&ab).map(|(x, d)| x - (1.0 - t) * d).collect()
    };
    (t, norm(&sub(p, &closest)))
}
