use std::fmt;

use super::{tensor_algebra, AlgebraError, AnyAlgebra, BasisElement, FieldSpec, GradedAlgebra, Presentation};
use crate::field::{Field, PrimeField, Rationals};

/// Presets above this dimension are trusted without the cubic axiom check.
const VALIDATE_UP_TO: usize = 128;

/// Standard cohomology presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    Point,
    /// `k[u]/(u^2)`, `|u| = m`.
    Sphere(u32),
    /// `n` generators in degree `m`, all products zero.
    WedgeSpheres { n: u32, m: u32 },
    /// Closed orientable surface of genus `g` with symplectic basis
    /// `a_i, b_i` and `a_i b_i = A`.
    Surface(u32),
    /// Exterior algebra on `n` degree-one generators.
    Torus(u32),
    /// `F_2[a]/(a^{n+1})`, `|a| = 1`.
    ProjectiveMod2(u32),
    Product(Box<Preset>, Box<Preset>),
    /// A preset over a field other than its default.
    Over(FieldSpec, Box<Preset>),
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Point => write!(f, "point"),
            Preset::Sphere(m) => write!(f, "sphere:{m}"),
            Preset::WedgeSpheres { n, m } => write!(f, "wedge_spheres:{n},{m}"),
            Preset::Surface(g) => write!(f, "surface:{g}"),
            Preset::Torus(n) => write!(f, "torus:{n}"),
            Preset::ProjectiveMod2(n) => write!(f, "projective_mod2:{n}"),
            Preset::Product(a, b) => write!(f, "{a}*{b}"),
            Preset::Over(field, p) => write!(f, "{p}@{field}"),
        }
    }
}

/// Parses a preset expression such as `surface:3`, `wedge_spheres:2,1`,
/// `sphere:2^3`, `surface:3*torus:2` or `sphere:2@F3`.
pub fn preset(expr: &str) -> Result<Preset, AlgebraError> {
    let invalid = |msg: String| AlgebraError::InvalidPreset(msg);
    let expr = expr.trim();
    if expr.is_empty() {
        return Err(invalid("empty preset".into()));
    }
    let mut factors = expr.split('*').map(|part| {
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
        let base = parse_atom(atom)?;
        Ok((1..power).fold(base.clone(), |acc, _| Preset::Product(Box::new(acc), Box::new(base.clone()))))
    });
    let first = factors.next().unwrap()?;
    factors.try_fold(first, |acc, next| Ok(Preset::Product(Box::new(acc), Box::new(next?))))
}

fn parse_atom(atom: &str) -> Result<Preset, AlgebraError> {
    let invalid = |msg: String| AlgebraError::InvalidPreset(msg);
    let (body, field) = match atom.split_once('@') {
        Some((b, f)) => (b.trim(), Some(f.trim().parse::<FieldSpec>().map_err(invalid)?)),
        None => (atom, None),
    };
    let (name, params) = match body.split_once(':') {
        Some((n, p)) => (n.trim(), p.trim()),
        None => (body, ""),
    };
    let nums: Vec<i64> = if params.is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|_| invalid(format!("bad parameter {s:?} in {atom:?}"))))
            .collect::<Result<_, _>>()?
    };
    let arity = |k: usize| {
        if nums.len() == k {
            Ok(())
        } else {
            Err(invalid(format!("{name} takes {k} parameter(s), got {}", nums.len())))
        }
    };
    let at_least = |v: i64, min: i64, what: &str| {
        if v >= min {
            Ok(v as u32)
        } else {
            Err(invalid(format!("{name}: {what} must be >= {min}, got {v}")))
        }
    };
    let base = match name {
        "point" => {
            arity(0)?;
            Preset::Point
        }
        "sphere" => {
            arity(1)?;
            Preset::Sphere(at_least(nums[0], 1, "m")?)
        }
        "wedge_spheres" => {
            arity(2)?;
            Preset::WedgeSpheres { n: at_least(nums[0], 1, "n")?, m: at_least(nums[1], 1, "m")? }
        }
        "surface" => {
            arity(1)?;
            Preset::Surface(at_least(nums[0], 0, "g")?)
        }
        "torus" => {
            arity(1)?;
            Preset::Torus(at_least(nums[0], 1, "n")?)
        }
        "projective_mod2" => {
            arity(1)?;
            Preset::ProjectiveMod2(at_least(nums[0], 1, "n")?)
        }
        other => return Err(invalid(format!("unknown preset {other:?}"))),
    };
    match field {
        None => Ok(base),
        Some(f) => {
            if matches!(base, Preset::ProjectiveMod2(_)) && f != FieldSpec::Prime(2) {
                return Err(invalid("projective_mod2 is only defined over F2".into()));
            }
            Ok(Preset::Over(f, Box::new(base)))
        }
    }
}

/// Basis and integer structure constants of a non-product preset.
struct IntTable {
    basis: Vec<BasisElement>,
    products: Vec<Vec<(usize, i64)>>,
}

impl IntTable {
    fn new(basis: Vec<BasisElement>) -> Self {
        let n = basis.len();
        let mut products = vec![Vec::new(); n * n];
        for i in 0..n {
            products[i] = vec![(i, 1)];
            products[i * n] = vec![(i, 1)];
        }
        IntTable { basis, products }
    }

    fn set(&mut self, i: usize, j: usize, k: usize, c: i64) {
        let n = self.basis.len();
        self.products[i * n + j] = vec![(k, c)];
    }

    fn build<F: Field>(self, field: F) -> Result<GradedAlgebra<F>, AlgebraError> {
        let table = self
            .products
            .into_iter()
            .map(|e| e.into_iter().map(|(k, c)| (k, field.from_i64(c))).collect())
            .collect();
        if self.basis.len() <= VALIDATE_UP_TO {
            GradedAlgebra::new(field, self.basis, table)
        } else {
            GradedAlgebra::new_unchecked(field, self.basis, table)
        }
    }
}

impl Preset {
    pub fn default_field(&self) -> FieldSpec {
        match self {
            Preset::ProjectiveMod2(_) => FieldSpec::Prime(2),
            Preset::Over(f, _) => *f,
            Preset::Product(a, _) => a.default_field(),
            _ => FieldSpec::Rationals,
        }
    }

    fn int_table(&self) -> IntTable {
        let gen = |name: String, d: u32| BasisElement::new(name, d);
        match self {
            Preset::Point => IntTable::new(vec![gen("1".into(), 0)]),
            Preset::Sphere(m) => IntTable::new(vec![gen("1".into(), 0), gen("u".into(), *m)]),
            Preset::WedgeSpheres { n, m } => {
                let mut basis = vec![gen("1".into(), 0)];
                basis.extend((1..=*n).map(|i| gen(format!("u{i}"), *m)));
                IntTable::new(basis)
            }
            Preset::Surface(0) => IntTable::new(vec![gen("1".into(), 0), gen("A".into(), 2)]),
            Preset::Surface(g) => {
                let mut basis = vec![gen("1".into(), 0)];
                for i in 1..=*g {
                    basis.push(gen(format!("a{i}"), 1));
                    basis.push(gen(format!("b{i}"), 1));
                }
                basis.push(gen("A".into(), 2));
                let top = basis.len() - 1;
                let mut t = IntTable::new(basis);
                for i in 0..*g as usize {
                    let (a, b) = (1 + 2 * i, 2 + 2 * i);
                    t.set(a, b, top, 1);
                    t.set(b, a, top, -1);
                }
                t
            }
            Preset::Torus(n) => {
                let n = *n as usize;
                let mut subsets: Vec<u32> = (0..(1u32 << n)).collect();
                subsets.sort_by_key(|s| (s.count_ones(), (0..n).map(|b| (s >> b) & 1 == 0).collect::<Vec<_>>()));
                let basis = subsets
                    .iter()
                    .map(|s| {
                        let name = if *s == 0 {
                            "1".to_string()
                        } else {
                            (0..n).filter(|b| (s >> b) & 1 == 1).map(|b| format!("e{}", b + 1)).collect()
                        };
                        BasisElement::with_multidegree(name, (0..n).map(|b| (s >> b) & 1).collect())
                    })
                    .collect();
                let mut t = IntTable::new(basis);
                let index: std::collections::HashMap<u32, usize> =
                    subsets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
                for (i, s) in subsets.iter().enumerate().skip(1) {
                    for (j, r) in subsets.iter().enumerate().skip(1) {
                        if s & r != 0 {
                            continue;
                        }
                        // sign of merging the sorted generators of s before those of r
                        let inversions: u32 = (0..n).filter(|b| (s >> b) & 1 == 1).map(|b| (r & ((1 << b) - 1)).count_ones()).sum();
                        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
                        t.set(i, j, index[&(s | r)], sign);
                    }
                }
                t
            }
            Preset::ProjectiveMod2(n) => {
                let n = *n as usize;
                let mut basis = vec![gen("1".into(), 0), gen("a".into(), 1)];
                basis.extend((2..=n).map(|k| gen(format!("a{k}"), k as u32)));
                let mut t = IntTable::new(basis);
                for i in 1..=n {
                    for j in 1..=n {
                        if i + j <= n {
                            t.set(i, j, i + j, 1);
                        }
                    }
                }
                t
            }
            Preset::Product(..) | Preset::Over(..) => unreachable!("composite presets have no flat table"),
        }
    }

    fn build_over<F: Field>(&self, field: &F) -> Result<GradedAlgebra<F>, AlgebraError> {
        match self {
            Preset::Product(a, b) => tensor_algebra(&a.build_over(field)?, &b.build_over(field)?),
            Preset::Over(_, p) => p.build_over(field),
            p => p.int_table().build(field.clone()),
        }
    }

    /// Builds the algebra over the preset's field.
    pub fn build(&self) -> Result<AnyAlgebra, AlgebraError> {
        self.check_fields()?;
        match self.default_field() {
            FieldSpec::Rationals => Ok(AnyAlgebra::Rational(self.build_over(&Rationals)?)),
            FieldSpec::Prime(p) => {
                let f = PrimeField::new(p).ok_or_else(|| AlgebraError::InvalidPreset(format!("{p} is not prime")))?;
                Ok(AnyAlgebra::Prime(self.build_over(&f)?))
            }
        }
    }

    fn check_fields(&self) -> Result<(), AlgebraError> {
        if let Preset::Product(a, b) = self {
            a.check_fields()?;
            b.check_fields()?;
            if a.default_field() != b.default_field() {
                return Err(AlgebraError::FieldMismatch {
                    left: a.default_field().to_string(),
                    right: b.default_field().to_string(),
                });
            }
        }
        if let FieldSpec::Prime(p) = self.default_field() {
            if PrimeField::new(p).is_none() {
                return Err(AlgebraError::InvalidPreset(format!("{p} is not prime")));
            }
        }
        Ok(())
    }

    /// The text presentation of this preset.
    pub fn presentation(&self) -> Result<Presentation, AlgebraError> {
        Ok(Presentation::from_any(&self.build()?))
    }
}
