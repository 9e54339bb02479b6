use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::BoundsError;
use crate::algebra::{FieldSpec, Preset};

/// What kind of space a descriptor names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    Point,
    Sphere { m: u32 },
    WedgeSpheres { n: u32, m: u32 },
    Surface { g: u32 },
    Torus { n: u32 },
    /// The rigid-motion group of 3-space.
    Se3,
    /// Real projective space `RP^n`.
    Projective { n: u32 },
    /// A connected graph with first Betti number `b1`.
    Graph { b1: u32 },
    Product { factors: Vec<SpaceDescriptor> },
    /// A space known only through user-supplied dimension, connectivity
    /// and (optionally) cohomology.
    Custom { dim: u32, connectivity: u32 },
}

/// A space described by its kind, dimension and connectivity. The
/// connectivity is an input (from the preset or the user), never inferred
/// from cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceDescriptor {
    #[serde(flatten)]
    pub kind: SpaceKind,
    pub dim: u32,
    /// The space is `connectivity`-connected.
    pub connectivity: u32,
    pub b1: Option<u32>,
}

impl SpaceDescriptor {
    /// Descriptor with the preset dimension and connectivity.
    pub fn new(kind: SpaceKind) -> Self {
        let (dim, connectivity, b1) = match &kind {
            SpaceKind::Point => (0, 0, Some(0)),
            SpaceKind::Sphere { m } => (*m, m.saturating_sub(1), Some(u32::from(*m == 1))),
            SpaceKind::WedgeSpheres { n, m } => (*m, m.saturating_sub(1), Some(if *m == 1 { *n } else { 0 })),
            SpaceKind::Surface { g: 0 } => (2, 1, Some(0)),
            SpaceKind::Surface { g } => (2, 0, Some(2 * g)),
            SpaceKind::Torus { n } => (*n, 0, Some(*n)),
            SpaceKind::Se3 => (6, 0, Some(0)),
            SpaceKind::Projective { n } => (*n, 0, Some(0)),
            SpaceKind::Graph { b1 } => (1, 0, Some(*b1)),
            SpaceKind::Custom { dim, connectivity } => (*dim, *connectivity, None),
            SpaceKind::Product { factors } => (
                factors.iter().map(|f| f.dim).sum(),
                factors.iter().map(|f| f.connectivity).min().unwrap_or(0),
                factors.iter().map(|f| f.b1).sum(),
            ),
        };
        SpaceDescriptor { kind, dim, connectivity, b1 }
    }

    pub fn product(factors: Vec<SpaceDescriptor>) -> Self {
        Self::new(SpaceKind::Product { factors })
    }

    pub fn with_dim(mut self, dim: u32) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_connectivity(mut self, r: u32) -> Self {
        self.connectivity = r;
        self
    }

    /// First Betti number when the space is a graph (dimension at most 1).
    pub fn graph_b1(&self) -> Option<u32> {
        let graph_like = match &self.kind {
            SpaceKind::Point | SpaceKind::Graph { .. } => true,
            SpaceKind::Sphere { m } | SpaceKind::WedgeSpheres { m, .. } => *m == 1,
            SpaceKind::Torus { n } => *n == 1,
            _ => false,
        };
        if graph_like && self.dim <= 1 {
            self.b1
        } else {
            None
        }
    }

    pub(crate) fn check(&self) -> Result<(), BoundsError> {
        if let SpaceKind::Product { factors } = &self.kind {
            if factors.is_empty() {
                return Err(BoundsError::InvalidDescriptor("product without factors".into()));
            }
            for f in factors {
                f.check()?;
            }
        }
        Ok(())
    }

    /// Cohomology preset of the space. Products fall back to F2 when any
    /// factor needs it.
    pub fn default_algebra(&self) -> Option<Preset> {
        Some(match &self.kind {
            SpaceKind::Custom { .. } => return None,
            SpaceKind::Point | SpaceKind::Graph { b1: 0 } => Preset::Point,
            SpaceKind::Sphere { m } => Preset::Sphere(*m),
            SpaceKind::WedgeSpheres { n, m } => Preset::WedgeSpheres { n: *n, m: *m },
            SpaceKind::Surface { g } => Preset::Surface(*g),
            SpaceKind::Torus { n } => Preset::Torus(*n),
            SpaceKind::Se3 => Preset::ProjectiveMod2(3),
            SpaceKind::Projective { n } => Preset::ProjectiveMod2(*n),
            SpaceKind::Graph { b1 } => Preset::WedgeSpheres { n: *b1, m: 1 },
            SpaceKind::Product { factors } => {
                let parts: Vec<Preset> = factors.iter().map(|f| f.default_algebra()).collect::<Option<_>>()?;
                let mod2 = parts.iter().any(|p| p.default_field() == FieldSpec::Prime(2));
                parts
                    .into_iter()
                    .map(|p| {
                        if mod2 && p.default_field() != FieldSpec::Prime(2) {
                            Preset::Over(FieldSpec::Prime(2), Box::new(p))
                        } else {
                            p
                        }
                    })
                    .reduce(|a, b| Preset::Product(Box::new(a), Box::new(b)))?
            }
        })
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Point => write!(f, "point"),
            SpaceKind::Sphere { m } => write!(f, "sphere:{m}"),
            SpaceKind::WedgeSpheres { n, m } => write!(f, "wedge_spheres:{n},{m}"),
            SpaceKind::Surface { g } => write!(f, "surface:{g}"),
            SpaceKind::Torus { n } => write!(f, "torus:{n}"),
            SpaceKind::Se3 => write!(f, "se3"),
            SpaceKind::Projective { n } => write!(f, "projective:{n}"),
            SpaceKind::Graph { b1 } => write!(f, "graph:{b1}"),
            SpaceKind::Custom { dim, connectivity } => write!(f, "custom:{dim},{connectivity}"),
            SpaceKind::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|x| x.kind.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, {}-connected)", self.kind, self.dim, self.connectivity)
    }
}

impl FromStr for SpaceDescriptor {
    type Err = BoundsError;

    /// Same expression syntax as algebra presets, plus `se3`,
    /// `projective:n` and `graph:b1`.
    fn from_str(s: &str) -> Result<Self, BoundsError> {
        let invalid = |m: String| BoundsError::InvalidDescriptor(m);
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let (atom, power) = match part.split_once('^') {
                Some((a, p)) => {
                    let p: u32 = p.trim().parse().map_err(|_| invalid(format!("bad exponent in {part:?}")))?;
                    if p == 0 {
                        return Err(invalid(format!("exponent must be positive in {part:?}")));
                    }
                    (a.trim(), p)
                }
                None => (part, 1),
            };
            let d = parse_atom(atom)?;
            factors.extend(std::iter::repeat_n(d, power as usize));
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { SpaceDescriptor::product(factors) })
    }
}

fn parse_atom(atom: &str) -> Result<SpaceDescriptor, BoundsError> {
    let invalid = |m: String| BoundsError::InvalidDescriptor(m);
    let (name, params) = atom.split_once(':').map(|(n, p)| (n.trim(), p.trim())).unwrap_or((atom.trim(), ""));
    let nums: Vec<u32> = if params.is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| invalid(format!("bad parameter {x:?} in {atom:?}"))))
            .collect::<Result<_, _>>()?
    };
    let need = |k: usize| {
        if nums.len() == k {
            Ok(())
        } else {
            Err(invalid(format!("{name} takes {k} parameter(s), got {}", nums.len())))
        }
    };
    let positive = |v: u32, what: &str| {
        if v >= 1 {
            Ok(v)
        } else {
            Err(invalid(format!("{name}: {what} must be positive")))
        }
    };
    let kind = match name {
        "point" => {
            need(0)?;
            SpaceKind::Point
        }
        "se3" => {
            need(0)?;
            SpaceKind::Se3
        }
        "sphere" => {
            need(1)?;
            SpaceKind::Sphere { m: positive(nums[0], "m")? }
        }
        "wedge_spheres" => {
            need(2)?;
            SpaceKind::WedgeSpheres { n: positive(nums[0], "n")?, m: positive(nums[1], "m")? }
        }
        "surface" => {
            need(1)?;
            SpaceKind::Surface { g: nums[0] }
        }
        "torus" => {
            need(1)?;
            SpaceKind::Torus { n: positive(nums[0], "n")? }
        }
        "projective" | "projective_mod2" => {
            need(1)?;
            SpaceKind::Projective { n: positive(nums[0], "n")? }
        }
        "graph" => {
            need(1)?;
            SpaceKind::Graph { b1: nums[0] }
        }
        "custom" => {
            need(2)?;
            SpaceKind::Custom { dim: nums[0], connectivity: nums[1] }
        }
        other => return Err(invalid(format!("unknown space {other:?}"))),
    };
    Ok(SpaceDescriptor::new(kind))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_defaults() {
        let s: SpaceDescriptor = "sphere:3".parse().unwrap();
        assert_eq!((s.dim, s.connectivity), (3, 2));
        let se3: SpaceDescriptor = "se3".parse().unwrap();
        assert_eq!((se3.dim, se3.connectivity), (6, 0));
        assert_eq!(se3.default_algebra(), Some(Preset::ProjectiveMod2(3)));
        let p: SpaceDescriptor = "sphere:2^3".parse().unwrap();
        assert_eq!((p.dim, p.connectivity), (6, 1));
        let g: SpaceDescriptor = "graph:5".parse().unwrap();
        assert_eq!(g.graph_b1(), Some(5));
        assert_eq!("surface:3".parse::<SpaceDescriptor>().unwrap().graph_b1(), None);
        let c: SpaceDescriptor = "custom:4,1".parse().unwrap();
        assert_eq!((c.dim, c.connectivity, c.default_algebra()), (4, 1, None));
        assert_eq!(c.kind.to_string().parse::<SpaceDescriptor>().unwrap(), c);
    }

    #[test]
    fn mixed_field_products_use_f2() {
        let d: SpaceDescriptor = "se3*sphere:2".parse().unwrap();
        let alg = d.default_algebra().unwrap().build().unwrap();
        assert_eq!(alg.field_name(), "F2");
        assert_eq!(alg.dim(), 8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!("sphere:0".parse::<SpaceDescriptor>().is_err());
        assert!("klein".parse::<SpaceDescriptor>().is_err());
        assert!("torus:2^0".parse::<SpaceDescriptor>().is_err());
    }
}
