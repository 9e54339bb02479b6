//! Geometric configuration spaces.
//!
//! Geometry is double precision with explicit tolerances collected in
//! [`Tolerances`]. Points are plain coordinate vectors: angles for circles and
//! tori, ambient coordinates otherwise, and concatenated factor coordinates
//! for products.

mod complex;
mod obstacles;

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use complex::{Simplex, SimplicialComplex};
pub use obstacles::{project_to_segment, ObstacleSet};

pub type Point = Vec<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("point has {got} coordinates, space expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point {0:?} is not in the space")]
    OutsideSpace(Point),
    #[error("invalid space: {0}")]
    Invalid(String),
}

/// Numerical tolerances shared by predicates and planners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Distance below which an obstacle counts as lying on a segment, and
    /// below which a direction counts as parallel to an axis.
    pub collinear: f64,
    /// Samplers reject punctured-space points closer than this to an obstacle.
    pub clearance_floor: f64,
    /// Circle pairs whose arc distance is within this of `pi` are antipodal.
    pub antipodal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { collinear: 1e-9, clearance_floor: 1e-6, antipodal: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ConfigSpace {
    /// An axis-aligned box, the convex region used by the straight-line planner.
    Convex { lo: Point, hi: Point },
    Circle,
    Torus { n: usize },
    /// 3-space minus finitely many points.
    Punctured(ObstacleSet),
    Complex(SimplicialComplex),
    Product(Box<ConfigSpace>, Box<ConfigSpace>),
}

/// Wraps an angle into `[0, 2pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Shorter arc length between two angles.
pub fn arc_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(b - a);
    d.min(TAU - d)
}

/// Signed shorter-arc displacement from `a` to `b`, in `(-pi, pi]`.
pub fn signed_arc(a: f64, b: f64) -> f64 {
    let d = wrap_angle(b - a);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

impl ConfigSpace {
    pub fn convex(lo: Point, hi: Point) -> Result<Self, SpaceError> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(SpaceError::Invalid("box bounds must be nonempty and of equal length".into()));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l.is_finite() && h.is_finite() && l <= h)) {
            return Err(SpaceError::Invalid("box bounds must be finite with lo <= hi".into()));
        }
        Ok(ConfigSpace::Convex { lo, hi })
    }

    pub fn torus(n: usize) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::Invalid("torus needs at least one circle".into()));
        }
        Ok(ConfigSpace::Torus { n })
    }

    pub fn product(left: ConfigSpace, right: ConfigSpace) -> Self {
        ConfigSpace::Product(Box::new(left), Box::new(right))
    }

    /// Number of coordinates of a point.
    pub fn dim(&self) -> usize {
        match self {
            ConfigSpace::Convex { lo, .. } => lo.len(),
            ConfigSpace::Circle => 1,
            ConfigSpace::Torus { n } => *n,
            ConfigSpace::Punctured(_) => 3,
            ConfigSpace::Complex(c) => c.ambient_dim(),
            ConfigSpace::Product(l, r) => l.dim() + r.dim(),
        }
    }

    /// Short name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigSpace::Convex { .. } => "convex",
            ConfigSpace::Circle => "circle",
            ConfigSpace::Torus { .. } => "torus",
            ConfigSpace::Punctured(_) => "punctured_r3",
            ConfigSpace::Complex(_) => "complex",
            ConfigSpace::Product(..) => "product",
        }
    }

    /// Splits a product point into its factor coordinates.
    pub fn split<'a>(&self, x: &'a [f64]) -> Option<(&'a [f64], &'a [f64])> {
        match self {
            ConfigSpace::Product(l, _) if x.len() == self.dim() => Some(x.split_at(l.dim())),
            _ => None,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() || x.iter().any(|c| !c.is_finite()) {
            return false;
        }
        match self {
            ConfigSpace::Convex { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(c, (l, h))| l <= c && c <= h),
            ConfigSpace::Circle | ConfigSpace::Torus { .. } => true,
            ConfigSpace::Punctured(obs) => obs.clearance(x) > 0.0,
            ConfigSpace::Complex(c) => c.carrier(x).is_ok(),
            ConfigSpace::Product(l, r) => {
                let (a, b) = x.split_at(l.dim());
                l.contains(a) && r.contains(b)
            }
        }
    }

    pub fn check(&self, x: &[f64]) -> Result<(), SpaceError> {
        if x.len() != self.dim() {
            return Err(SpaceError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if !self.contains(x) {
            return Err(SpaceError::OutsideSpace(x.to_vec()));
        }
        Ok(())
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64, SpaceError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.distance_unchecked(x, y))
    }

    /// Metric without membership checks; both points must have the right length.
    pub fn distance_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            ConfigSpace::Circle => arc_distance(x[0], y[0]),
            ConfigSpace::Torus { .. } => x.iter().zip(y).map(|(a, b)| arc_distance(*a, *b)).fold(0.0, f64::max),
            ConfigSpace::Convex { .. } | ConfigSpace::Punctured(_) | ConfigSpace::Complex(_) => euclidean(x, y),
            ConfigSpace::Product(l, r) => {
                let k = l.dim();
                l.distance_unchecked(&x[..k], &y[..k]).max(r.distance_unchecked(&x[k..], &y[k..]))
            }
        }
    }

    /// Pseudo-random point of the space. Punctured-space samples stay in a
    /// padded box around the obstacles and respect the clearance floor.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, tol: &Tolerances) -> Point {
        match self {
            ConfigSpace::Convex { lo, hi } => lo.iter().zip(hi).map(|(l, h)| l + (h - l) * rng.gen::<f64>()).collect(),
            ConfigSpace::Circle => vec![rng.gen_range(0.0..TAU)],
            ConfigSpace::Torus { n } => (0..*n).map(|_| rng.gen_range(0.0..TAU)).collect(),
            ConfigSpace::Punctured(obs) => {
                let (lo, hi) = obs.sampling_box();
                loop {
                    let x: Point = lo.iter().zip(&hi).map(|(l, h)| l + (h - l) * rng.gen::<f64>()).collect();
                    if obs.clearance(&x) >= tol.clearance_floor {
                        return x;
                    }
                }
            }
            ConfigSpace::Complex(c) => c.sample(rng),
            ConfigSpace::Product(l, r) => {
                let mut x = l.sample(rng, tol);
                x.extend(r.sample(rng, tol));
                x
            }
        }
    }

    /// A point at distance at most `radius` from `x`, drawn from the metric
    /// ball and pulled back into the space. Falls back to `x` itself when
    /// repeated draws leave the space.
    pub fn perturb<R: Rng + ?Sized>(&self, x: &[f64], radius: f64, rng: &mut R, tol: &Tolerances) -> Point {
        match self {
            ConfigSpace::Convex { lo, hi } => {
                let mut y = ball_point(x, radius, rng);
                for ((c, l), h) in y.iter_mut().zip(lo).zip(hi) {
                    *c = c.clamp(*l, *h);
                }
                y
            }
            ConfigSpace::Circle | ConfigSpace::Torus { .. } => {
                x.iter().map(|a| wrap_angle(a + rng.gen_range(-radius..=radius))).collect()
            }
            ConfigSpace::Punctured(obs) => {
                for _ in 0..64 {
                    let y = ball_point(x, radius, rng);
                    if obs.clearance(&y) >= tol.clearance_floor.min(obs.clearance(x)) {
                        return y;
                    }
                }
                x.to_vec()
            }
            ConfigSpace::Complex(c) => c.perturb_in_star(x, radius, rng).unwrap_or_else(|| x.to_vec()),
            ConfigSpace::Product(l, r) => {
                let k = l.dim();
                let mut y = l.perturb(&x[..k], radius, rng, tol);
                y.extend(r.perturb(&x[k..], radius, rng, tol));
                y
            }
        }
    }
}

/// Uniform point in the Euclidean ball of the given radius around `x`.
pub fn ball_point<R: Rng + ?Sized>(x: &[f64], radius: f64, rng: &mut R) -> Point {
    let d = x.len();
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let n = norm(&v);
        if n <= 1.0 {
            return x.iter().zip(&v).map(|(c, e)| c + radius * e).collect();
        }
    }
}

/// JSON form of a space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Convex {
        dim: usize,
        #[serde(rename = "box")]
        bounds: Vec<[f64; 2]>,
    },
    Circle,
    Torus {
        n: usize,
    },
    PuncturedR3 {
        obstacles: Vec<[f64; 3]>,
    },
    Complex {
        vertices: Vec<Vec<f64>>,
        simplices: Vec<Vec<usize>>,
    },
    Product {
        left: Box<SpaceSpec>,
        right: Box<SpaceSpec>,
    },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<ConfigSpace, SpaceError> {
        Ok(match self {
            SpaceSpec::Convex { dim, bounds } => {
                if bounds.len() != *dim {
                    return Err(SpaceError::Invalid(format!("box has {} intervals, dim is {dim}", bounds.len())));
                }
                ConfigSpace::convex(bounds.iter().map(|b| b[0]).collect(), bounds.iter().map(|b| b[1]).collect())?
            }
            SpaceSpec::Circle => ConfigSpace::Circle,
            SpaceSpec::Torus { n } => ConfigSpace::torus(*n)?,
            SpaceSpec::PuncturedR3 { obstacles } => ConfigSpace::Punctured(ObstacleSet::new(obstacles.clone())?),
            SpaceSpec::Complex { vertices, simplices } => {
                ConfigSpace::Complex(SimplicialComplex::new(vertices.clone(), simplices.clone())?)
            }
            SpaceSpec::Product { left, right } => ConfigSpace::product(left.build()?, right.build()?),
        })
    }

    pub fn from_json(s: &str) -> Result<ConfigSpace, SpaceError> {
        let spec: SpaceSpec = serde_json::from_str(s).map_err(|e| SpaceError::Invalid(e.to_string()))?;
        spec.build()
    }
}

impl From<&ConfigSpace> for SpaceSpec {
    fn from(space: &ConfigSpace) -> Self {
        match space {
            ConfigSpace::Convex { lo, hi } => SpaceSpec::Convex {
                dim: lo.len(),
                bounds: lo.iter().zip(hi).map(|(l, h)| [*l, *h]).collect(),
            },
            ConfigSpace::Circle => SpaceSpec::Circle,
            ConfigSpace::Torus { n } => SpaceSpec::Torus { n: *n },
            ConfigSpace::Punctured(obs) => SpaceSpec::PuncturedR3 { obstacles: obs.points().to_vec() },
            ConfigSpace::Complex(c) => SpaceSpec::Complex {
                vertices: c.vertices().to_vec(),
                simplices: c.maximal_simplices(),
            },
            ConfigSpace::Product(l, r) => SpaceSpec::Product {
                left: Box::new(SpaceSpec::from(&**l)),
                right: Box::new(SpaceSpec::from(&**r)),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distance_examples() {
        assert_eq!(ConfigSpace::Circle.distance(&[0.0], &[PI]).unwrap(), PI);
        let p = ConfigSpace::Punctured(ObstacleSet::new(vec![[0.0; 3]]).unwrap());
        assert_eq!(p.distance(&[1.0, 0.0, 0.0], &[1.0, 0.0, 2.0]).unwrap(), 2.0);
        assert!(p.distance(&[0.0; 3], &[1.0, 0.0, 0.0]).is_err());
        let t2 = ConfigSpace::product(ConfigSpace::Circle, ConfigSpace::Circle);
        assert_eq!(t2.distance(&[0.0, 0.0], &[0.3, 0.5]).unwrap(), 0.5);
    }

    #[test]
    fn arcs() {
        assert!((arc_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert!((signed_arc(0.1, TAU - 0.1) + 0.2).abs() < 1e-15);
        assert_eq!(signed_arc(0.0, PI), PI);
        assert_eq!(wrap_angle(-0.0), 0.0);
        assert!(wrap_angle(-1e-20) < TAU);
    }

    #[test]
    fn samples_lie_in_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tol = Tolerances::default();
        let spaces = [
            ConfigSpace::Circle,
            ConfigSpace::torus(3).unwrap(),
            ConfigSpace::convex(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap(),
            ConfigSpace::Punctured(ObstacleSet::new(vec![[0.0; 3], [1.0, 1.0, 1.0]]).unwrap()),
        ];
        for s in &spaces {
            for _ in 0..200 {
                let x = s.sample(&mut rng, &tol);
                assert!(s.contains(&x), "{x:?}");
                if matches!(s, ConfigSpace::Circle) {
                    assert!((0.0..TAU).contains(&x[0]));
                }
                let y = s.perturb(&x, 0.01, &mut rng, &tol);
                assert!(s.contains(&y));
                assert!(s.distance_unchecked(&x, &y) <= 0.01 + 1e-12);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"type":"product","left":{"type":"circle"},
            "right":{"type":"punctured_r3","obstacles":[[0,0,0],[1,2,3]]}}"#;
        let space = SpaceSpec::from_json(text).unwrap();
        assert_eq!(space.dim(), 4);
        let again = SpaceSpec::from(&space).build().unwrap();
        assert_eq!(again, space);
        assert!(SpaceSpec::from_json(r#"{"type":"convex","dim":2,"box":[[0,1]]}"#).is_err());
        assert!(SpaceSpec::from_json(r#"{"type":"sphere"}"#).is_err());
    }
}
