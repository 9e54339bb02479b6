use std::fmt;
use std::sync::Arc;

use crate::spaces::{euclidean, Point};

/// Default number of samples on the uniform parameter grid.
pub const DEFAULT_SAMPLES: usize = 257;

type Eval = Arc<dyn Fn(f64) -> Point + Send + Sync>;

/// A parametric path on `[0, 1]`. The endpoints are stored and returned
/// verbatim, so `at(0) == start` and `at(1) == end` bitwise.
#[derive(Clone)]
pub struct Path {
    start: Point,
    end: Point,
    eval: Eval,
    /// Detour radius used by the rule, when it has one.
    pub epsilon: Option<f64>,
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Path").field("start", &self.start).field("end", &self.end).field("epsilon", &self.epsilon).finish()
    }
}

/// A path evaluated on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    pub ts: Vec<f64>,
    pub points: Vec<Point>,
}

impl Path {
    pub fn new(start: Point, end: Point, eval: impl Fn(f64) -> Point + Send + Sync + 'static) -> Self {
        Path { start, end, eval: Arc::new(eval), epsilon: None }
    }

    pub fn constant(p: Point) -> Self {
        let q = p.clone();
        Path::new(p.clone(), p, move |_| q.clone())
    }

    /// Constant-speed straight segment.
    pub fn segment(a: &[f64], b: &[f64]) -> Self {
        let (a0, b0) = (a.to_vec(), b.to_vec());
        Path::new(a.to_vec(), b.to_vec(), move |t| a0.iter().zip(&b0).map(|(x, y)| (1.0 - t) * x + t * y).collect())
    }

    /// Constant-speed walk along a Euclidean polyline.
    pub fn polyline(points: Vec<Point>) -> Self {
        let start = points[0].clone();
        let end = points[points.len() - 1].clone();
        let mut pts: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        if pts.len() == 1 {
            return Path::constant(start);
        }
        let lengths: Vec<f64> = pts.windows(2).map(|w| euclidean(&w[0], &w[1])).collect();
        let total: f64 = lengths.iter().sum();
        Path::new(start, end, move |t| {
            let mut s = t * total;
            for (k, len) in lengths.iter().enumerate() {
                if s <= *len || k == lengths.len() - 1 {
                    let u = if *len > 0.0 { (s / len).min(1.0) } else { 0.0 };
                    return pts[k].iter().zip(&pts[k + 1]).map(|(x, y)| x + u * (y - x)).collect();
                }
                s -= len;
            }
            unreachable!()
        })
    }

    /// Componentwise pair of two paths on the product space.
    pub fn concat(left: &Path, right: &Path) -> Self {
        let (l, r) = (left.clone(), right.clone());
        let mut start = left.start.clone();
        start.extend(&right.start);
        let mut end = left.end.clone();
        end.extend(&right.end);
        let epsilon = match (left.epsilon, right.epsilon) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        let mut p = Path::new(start, end, move |t| {
            let mut x = l.at(t);
            x.extend(r.at(t));
            x
        });
        p.epsilon = epsilon;
        p
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn end(&self) -> &[f64] {
        &self.end
    }

    pub fn at(&self, t: f64) -> Point {
        if t <= 0.0 {
            self.start.clone()
        } else if t >= 1.0 {
            self.end.clone()
        } else {
            (self.eval)(t)
        }
    }

    /// Samples at `t = k / (n - 1)`, `k = 0 .. n`. `n` is raised to at least 2.
    pub fn sample(&self, n: usize) -> SampledPath {
        let n = n.max(2);
        let ts: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
        let points = ts.iter().map(|&t| self.at(t)).collect();
        SampledPath { ts, points }
    }
}

impl SampledPath {
    /// Splits product-space samples into factor samples.
    pub fn split(&self, k: usize) -> (SampledPath, SampledPath) {
        let (l, r) = self.points.iter().map(|p| (p[..k].to_vec(), p[k..].to_vec())).unzip();
        (SampledPath { ts: self.ts.clone(), points: l }, SampledPath { ts: self.ts.clone(), points: r })
    }
}
