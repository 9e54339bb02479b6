//! Line-oriented text presentations.
//!
//! ```text
//! # genus-one surface
//! field Q
//! basis 1 0
//! basis a 1
//! basis b 1
//! basis A 2
//! prod a b = 1*A
//! ```
//!
//! Omitted pairs are zero. Only one orientation of each pair is needed; the
//! other is filled in by graded commutativity. Products with the unit may be
//! omitted and default to the identity.

use std::fmt;
use std::str::FromStr;

use super::{AlgebraError, AnyAlgebra, BasisElement, GradedAlgebra};
use crate::field::{Field, PrimeField, Rationals};
use crate::with_algebra;

/// Coefficient field of a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = String;

    /// Accepts `Q`, `F3` or `F 3`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|p| p.trim().parse::<u64>().ok())
            .ok_or_else(|| format!("unknown field {s:?}; expected Q or F<p>"))?;
        if PrimeField::new(p).is_none() {
            return Err(format!("F{p}: {p} is not a prime below 2^31"));
        }
        Ok(FieldSpec::Prime(p))
    }
}

/// One `prod` line: `left * right = sum of coeff*name`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLine {
    pub left: String,
    pub right: String,
    /// `(coefficient literal, basis name)` pairs.
    pub terms: Vec<(String, String)>,
}

/// A parsed presentation, not yet validated as an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub field: FieldSpec,
    pub basis: Vec<(String, u32)>,
    pub products: Vec<ProductLine>,
}

/// Expansion of one product `b_i b_j` in the basis.
type Terms<F> = Vec<(usize, <F as Field>::Elem)>;

fn parse_err(line: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse { line, message: message.into() }
}

/// Splits `2*A - b + 1/2*c` into signed `(coeff, name)` terms.
fn parse_terms(rhs: &str, line: usize) -> Result<Vec<(String, String)>, AlgebraError> {
    let rhs = rhs.trim();
    if rhs == "0" {
        return Ok(Vec::new());
    }
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    for ch in rhs.chars() {
        match ch {
            '+' | '-' if !current.trim().is_empty() && !current.trim_end().ends_with(['*', '/']) => {
                chunks.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            }
            '-' if current.trim().is_empty() => negative = !negative,
            '+' if current.trim().is_empty() => {}
            _ => current.push(ch),
        }
    }
    chunks.push((negative, current));
    chunks
        .into_iter()
        .map(|(neg, chunk)| {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(parse_err(line, "empty term"));
            }
            let (coeff, name) = match chunk.split_once('*') {
                Some((c, n)) => (c.trim().to_string(), n.trim().to_string()),
                None => ("1".to_string(), chunk.to_string()),
            };
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(parse_err(line, format!("bad term {chunk:?}")));
            }
            let coeff = if neg { format!("-{coeff}") } else { coeff };
            Ok((coeff, name))
        })
        .collect()
}

impl FromStr for Presentation {
    type Err = AlgebraError;

    fn from_str(text: &str) -> Result<Self, AlgebraError> {
        let mut field = None;
        let mut basis = Vec::new();
        let mut products = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let rest = rest.trim();
            match keyword {
                "field" => {
                    if field.is_some() {
                        return Err(parse_err(line, "field declared twice"));
                    }
                    field = Some(rest.parse::<FieldSpec>().map_err(|m| parse_err(line, m))?);
                }
                "basis" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [name, degree] = parts[..] else {
                        return Err(parse_err(line, "expected `basis <name> <degree>`"));
                    };
                    let degree: u32 =
                        degree.parse().map_err(|_| parse_err(line, format!("bad degree {degree:?}")))?;
                    basis.push((name.to_string(), degree));
                }
                "prod" => {
                    let (lhs, rhs) =
                        rest.split_once('=').ok_or_else(|| parse_err(line, "expected `prod a b = ...`"))?;
                    let names: Vec<&str> = lhs.split_whitespace().collect();
                    let [left, right] = names[..] else {
                        return Err(parse_err(line, "expected two factors before `=`"));
                    };
                    products.push(ProductLine {
                        left: left.to_string(),
                        right: right.to_string(),
                        terms: parse_terms(rhs, line)?,
                    });
                }
                other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
            }
        }
        let field = field.ok_or_else(|| parse_err(0, "missing `field` line"))?;
        Ok(Presentation { field, basis, products })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            FieldSpec::Rationals => writeln!(f, "field Q")?,
            FieldSpec::Prime(p) => writeln!(f, "field F {p}")?,
        }
        for (name, degree) in &self.basis {
            writeln!(f, "basis {name} {degree}")?;
        }
        for p in &self.products {
            let rhs = if p.terms.is_empty() {
                "0".to_string()
            } else {
                p.terms.iter().map(|(c, n)| format!("{c}*{n}")).collect::<Vec<_>>().join(" + ")
            };
            writeln!(f, "prod {} {} = {}", p.left, p.right, rhs)?;
        }
        Ok(())
    }
}

impl Presentation {
    /// Presentation listing every nonzero product `b_i b_j` with
    /// `0 < i <= j`.
    pub fn from_algebra<F: Field>(alg: &GradedAlgebra<F>) -> Self {
        let field = match alg.field().characteristic() {
            0 => FieldSpec::Rationals,
            p => FieldSpec::Prime(p),
        };
        let names: Vec<&str> = alg.basis().iter().map(|b| b.name.as_str()).collect();
        let mut products = Vec::new();
        for i in 1..alg.dim() {
            for j in i..alg.dim() {
                let entry = alg.product(i, j);
                if entry.is_empty() {
                    continue;
                }
                products.push(ProductLine {
                    left: names[i].to_string(),
                    right: names[j].to_string(),
                    terms: entry.iter().map(|(k, c)| (alg.field().format(c), names[*k].to_string())).collect(),
                });
            }
        }
        Presentation {
            field,
            basis: alg.basis().iter().map(|b| (b.name.clone(), b.degree)).collect(),
            products,
        }
    }

    pub fn from_any(alg: &AnyAlgebra) -> Self {
        with_algebra!(alg, a => Self::from_algebra(a))
    }

    fn build<F: Field>(&self, field: F) -> Result<GradedAlgebra<F>, AlgebraError> {
        let basis: Vec<BasisElement> = self.basis.iter().map(|(n, d)| BasisElement::new(n.clone(), *d)).collect();
        if basis.is_empty() {
            return Err(AlgebraError::EmptyBasis);
        }
        let n = basis.len();
        let index = |name: &str| {
            basis.iter().position(|b| b.name == name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
        };
        let mut given: Vec<Option<Terms<F>>> = vec![None; n * n];
        for p in &self.products {
            let (i, j) = (index(&p.left)?, index(&p.right)?);
            if given[i * n + j].is_some() {
                return Err(AlgebraError::Parse {
                    line: 0,
                    message: format!("product {} {} given twice", p.left, p.right),
                });
            }
            let mut entry = Vec::with_capacity(p.terms.len());
            for (c, name) in &p.terms {
                let coeff = field.parse(c).ok_or_else(|| AlgebraError::Parse {
                    line: 0,
                    message: format!("bad coefficient {c:?} over {}", field.name()),
                })?;
                entry.push((index(name)?, coeff));
            }
            given[i * n + j] = Some(entry);
        }
        let one = field.one();
        let minus_one = field.neg(&one);
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let entry = if let Some(e) = &given[i * n + j] {
                    e.clone()
                } else if let Some(e) = &given[j * n + i] {
                    let odd = basis[i].degree % 2 == 1 && basis[j].degree % 2 == 1;
                    let sign = if odd { &minus_one } else { &one };
                    e.iter().map(|(k, c)| (*k, field.mul(c, sign))).collect()
                } else if i == 0 {
                    vec![(j, one.clone())]
                } else if j == 0 {
                    vec![(i, one.clone())]
                } else {
                    Vec::new()
                };
                table.push(entry);
            }
        }
        GradedAlgebra::new(field, basis, table)
    }
}

/// Validates a presentation and builds the algebra over its field.
pub fn make_algebra(p: &Presentation) -> Result<AnyAlgebra, AlgebraError> {
    match p.field {
        FieldSpec::Rationals => Ok(AnyAlgebra::Rational(p.build(Rationals)?)),
        FieldSpec::Prime(q) => {
            let field = PrimeField::new(q).ok_or_else(|| AlgebraError::InvalidPreset(format!("{q} is not prime")))?;
            Ok(AnyAlgebra::Prime(p.build(field)?))
        }
    }
}
