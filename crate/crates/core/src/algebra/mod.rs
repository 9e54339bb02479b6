//! Finite-dimensional graded-commutative algebras given by structure
//! constants, their tensor squares, and the cup-product kernel.
//!
//! An algebra is stored as a basis (each element carries a degree and a
//! multidegree) together with the full multiplication table: for every
//! ordered pair of basis elements, the sparse coefficient vector of their
//! product. Elements are sparse maps from basis index to scalar.
//!
//! The multidegree refines the degree. Algebras read from a presentation
//! have the one-component multidegree `[degree]`; Künneth products
//! concatenate the multidegrees of their factors. Linear algebra over the
//! tensor square is blocked by multidegree, which keeps blocks small for
//! product spaces.

mod linalg;
mod presentation;
mod presets;
mod tensor;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{Field, PrimeField, Rationals};

pub use linalg::ReducedBasis;
pub use presentation::{make_algebra, FieldSpec, Presentation, ProductLine};
pub use presets::{preset, Preset};
pub use tensor::{cup_kernel_basis, tensor_algebra, TensorElement, TensorSquare};

/// Violations reported when building or using an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("algebra needs at least the unit basis element")]
    EmptyBasis,
    #[error("unit {name:?} must have degree 0")]
    UnitDegree { name: String },
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("unknown basis name {0:?}")]
    UnknownName(String),
    #[error("basis index {index} outside algebra of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("multidegree of basis element {index} does not sum to its degree")]
    BadMultidegree { index: usize },
    #[error("algebra is not connected: basis element {index} has degree 0")]
    Disconnected { index: usize },
    #[error("degree additivity violated: b{i}*b{j} has a component on b{k}")]
    DegreeAdditivity { i: usize, j: usize, k: usize },
    #[error("graded commutativity violated for basis pair ({i}, {j})")]
    GradedCommutativity { i: usize, j: usize },
    #[error("associativity violated on basis triple ({i}, {j}, {k})")]
    Associativity { i: usize, j: usize, k: usize },
    #[error("unit axiom violated on basis element {i}")]
    Unit { i: usize },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("homogeneous element of positive degree required")]
    DegreeZero,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid preset: {0}")]
    InvalidPreset(String),
}

/// A basis element of a graded algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: u32,
    pub multidegree: Vec<u32>,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        BasisElement { name: name.into(), degree, multidegree: vec![degree] }
    }

    pub fn with_multidegree(name: impl Into<String>, multidegree: Vec<u32>) -> Self {
        let degree = multidegree.iter().sum();
        BasisElement { name: name.into(), degree, multidegree }
    }
}

/// A sparse coefficient vector over the basis of an algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Element<F: Field> {
    coeffs: BTreeMap<usize, F::Elem>,
}

impl<F: Field> Default for Element<F> {
    fn default() -> Self {
        Element { coeffs: BTreeMap::new() }
    }
}

impl<F: Field> Element<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (usize, F::Elem)>) -> Self {
        let mut e = Self::zero();
        for (i, c) in terms {
            e.add_term(field, i, &c);
        }
        e
    }

    pub fn basis(field: &F, index: usize) -> Self {
        Self::from_terms(field, [(index, field.one())])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, field: &F, index: usize) -> F::Elem {
        self.coeffs.get(&index).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &F::Elem)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, field: &F, index: usize, c: &F::Elem) {
        if field.is_zero(c) {
            return;
        }
        match self.coeffs.get_mut(&index) {
            Some(v) => {
                *v = field.add(v, c);
                if field.is_zero(v) {
                    self.coeffs.remove(&index);
                }
            }
            None => {
                self.coeffs.insert(index, c.clone());
            }
        }
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(field, i, c);
        }
        out
    }

    pub fn scale(&self, field: &F, s: &F::Elem) -> Self {
        Self::from_terms(field, self.terms().map(|(i, c)| (i, field.mul(c, s))))
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        self.add(field, &other.scale(field, &field.neg(&field.one())))
    }
}

/// A validated graded-commutative algebra over `F`.
#[derive(Debug, Clone)]
pub struct GradedAlgebra<F: Field> {
    field: F,
    basis: Vec<BasisElement>,
    /// `table[i * dim + j]` is the product `b_i * b_j`.
    table: Vec<Vec<(usize, F::Elem)>>,
}

impl<F: Field> GradedAlgebra<F> {
    /// Builds and validates an algebra. The unit is basis element 0.
    pub fn new(
        field: F,
        basis: Vec<BasisElement>,
        table: Vec<Vec<(usize, F::Elem)>>,
    ) -> Result<Self, AlgebraError> {
        let alg = Self::new_unchecked(field, basis, table)?;
        alg.validate()?;
        Ok(alg)
    }

    /// Builds an algebra checking only shape (indices, names, degrees), not
    /// the algebra axioms. Used for tables that are correct by construction.
    pub(crate) fn new_unchecked(
        field: F,
        basis: Vec<BasisElement>,
        table: Vec<Vec<(usize, F::Elem)>>,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        if n == 0 {
            return Err(AlgebraError::EmptyBasis);
        }
        if basis[0].degree != 0 {
            return Err(AlgebraError::UnitDegree { name: basis[0].name.clone() });
        }
        let mut seen = std::collections::HashSet::new();
        for (index, b) in basis.iter().enumerate() {
            if !seen.insert(b.name.as_str()) {
                return Err(AlgebraError::DuplicateName(b.name.clone()));
            }
            if b.multidegree.iter().sum::<u32>() != b.degree {
                return Err(AlgebraError::BadMultidegree { index });
            }
            if index > 0 && b.degree == 0 {
                return Err(AlgebraError::Disconnected { index });
            }
        }
        let width = basis[0].multidegree.len();
        if let Some(index) = basis.iter().position(|b| b.multidegree.len() != width) {
            return Err(AlgebraError::BadMultidegree { index });
        }
        assert_eq!(table.len(), n * n, "multiplication table must have dim^2 entries");
        let mut clean = Vec::with_capacity(table.len());
        for entry in table {
            let mut e = Element::<F>::zero();
            for (k, c) in entry {
                if k >= n {
                    return Err(AlgebraError::IndexOutOfRange { index: k, dim: n });
                }
                e.add_term(&field, k, &c);
            }
            clean.push(e.coeffs.into_iter().collect());
        }
        Ok(GradedAlgebra { field, basis, table: clean })
    }

    /// Checks degree additivity, unit, graded commutativity and
    /// associativity, reporting the first violation found.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for (k, _) in self.product(i, j) {
                    if self.basis[*k].multidegree != self.add_multidegrees(i, j) {
                        return Err(AlgebraError::DegreeAdditivity { i, j, k: *k });
                    }
                }
            }
        }
        let one = self.field.one();
        for i in 0..n {
            let expected = [(i, one.clone())];
            if self.product(0, i) != expected || self.product(i, 0) != expected {
                return Err(AlgebraError::Unit { i });
            }
        }
        for i in 0..n {
            for j in i..n {
                let lhs = self.basis_product(i, j);
                let rhs = self.basis_product(j, i).scale(&self.field, &self.koszul(i, j));
                if lhs != rhs {
                    return Err(AlgebraError::GradedCommutativity { i, j });
                }
            }
        }
        for i in 1..n {
            for j in 1..n {
                let ij = self.basis_product(i, j);
                for k in 1..n {
                    let left = self.multiply_unchecked(&ij, &Element::basis(&self.field, k));
                    let jk = self.basis_product(j, k);
                    let right = self.multiply_unchecked(&Element::basis(&self.field, i), &jk);
                    if left != right {
                        return Err(AlgebraError::Associativity { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        0
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn multidegree(&self, i: usize) -> &[u32] {
        &self.basis[i].multidegree
    }

    pub fn top_degree(&self) -> u32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Dimension of the degree-`d` part.
    pub fn dim_in_degree(&self, d: u32) -> usize {
        self.basis.iter().filter(|b| b.degree == d).count()
    }

    /// Structure constants of `b_i * b_j`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, F::Elem)] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Element<F> {
        Element::from_terms(&self.field, self.product(i, j).iter().cloned())
    }

    pub fn element(&self, name: &str) -> Result<Element<F>, AlgebraError> {
        let i = self.index_of(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))?;
        Ok(Element::basis(&self.field, i))
    }

    /// `(-1)^(deg i * deg j)` as a field element.
    pub fn koszul(&self, i: usize, j: usize) -> F::Elem {
        if self.degree(i) % 2 == 1 && self.degree(j) % 2 == 1 {
            self.field.neg(&self.field.one())
        } else {
            self.field.one()
        }
    }

    fn add_multidegrees(&self, i: usize, j: usize) -> Vec<u32> {
        self.basis[i]
            .multidegree
            .iter()
            .zip(&self.basis[j].multidegree)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// Homogeneous degree of `x`; `None` for mixed degrees. Zero has no
    /// degree and also yields `None`.
    pub fn homogeneous_degree(&self, x: &Element<F>) -> Option<u32> {
        let mut degs = x.terms().map(|(i, _)| self.degree(i));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub(crate) fn check_indices(&self, x: &Element<F>) -> Result<(), AlgebraError> {
        match x.terms().map(|(i, _)| i).find(|i| *i >= self.dim()) {
            Some(index) => Err(AlgebraError::IndexOutOfRange { index, dim: self.dim() }),
            None => Ok(()),
        }
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, x: &Element<F>, y: &Element<F>) -> Result<Element<F>, AlgebraError> {
        self.check_indices(x)?;
        self.check_indices(y)?;
        Ok(self.multiply_unchecked(x, y))
    }

    pub(crate) fn multiply_unchecked(&self, x: &Element<F>, y: &Element<F>) -> Element<F> {
        let f = &self.field;
        let mut out = Element::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let ab = f.mul(a, b);
                for (k, c) in self.product(i, j) {
                    out.add_term(f, *k, &f.mul(&ab, c));
                }
            }
        }
        out
    }

    /// Renders an element as `c*name + ...`.
    pub fn format_element(&self, x: &Element<F>) -> String {
        format_terms(&self.field, x.terms().map(|(i, c)| (self.basis[i].name.clone(), c)))
    }
}

pub(crate) fn format_terms<'a, F: Field>(
    field: &F,
    terms: impl Iterator<Item = (String, &'a F::Elem)>,
) -> String {
    let parts: Vec<String> = terms
        .map(|(name, c)| {
            if field.is_one(c) {
                name
            } else {
                format!("{}*{}", field.format(c), name)
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// An algebra over a field chosen at runtime.
#[derive(Debug, Clone)]
pub enum AnyAlgebra {
    Rational(GradedAlgebra<Rationals>),
    Prime(GradedAlgebra<PrimeField>),
}

/// Evaluates an expression against the concrete algebra inside an
/// [`AnyAlgebra`].
#[macro_export]
macro_rules! with_algebra {
    ($any:expr, $alg:ident => $body:expr) => {
        match $any {
            $crate::algebra::AnyAlgebra::Rational($alg) => $body,
            $crate::algebra::AnyAlgebra::Prime($alg) => $body,
        }
    };
}

impl AnyAlgebra {
    pub fn dim(&self) -> usize {
        with_algebra!(self, a => a.dim())
    }

    pub fn field_name(&self) -> String {
        with_algebra!(self, a => a.field().name())
    }

    pub fn basis(&self) -> &[BasisElement] {
        with_algebra!(self, a => a.basis())
    }

    pub fn top_degree(&self) -> u32 {
        with_algebra!(self, a => a.top_degree())
    }

    /// Künneth product of two algebras over the same field.
    pub fn tensor(&self, other: &AnyAlgebra) -> Result<AnyAlgebra, AlgebraError> {
        match (self, other) {
            (AnyAlgebra::Rational(a), AnyAlgebra::Rational(b)) => {
                Ok(AnyAlgebra::Rational(tensor_algebra(a, b)?))
            }
            (AnyAlgebra::Prime(a), AnyAlgebra::Prime(b)) => Ok(AnyAlgebra::Prime(tensor_algebra(a, b)?)),
            _ => Err(AlgebraError::FieldMismatch { left: self.field_name(), right: other.field_name() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(m: u32) -> GradedAlgebra<Rationals> {
        let q = Rationals;
        GradedAlgebra::new(
            q,
            vec![BasisElement::new("1", 0), BasisElement::new("u", m)],
            vec![vec![(0, q.one())], vec![(1, q.one())], vec![(1, q.one())], vec![]],
        )
        .unwrap()
    }

    #[test]
    fn sphere_square_vanishes() {
        let s = sphere(2);
        let u = s.element("u").unwrap();
        assert!(s.multiply(&u, &u).unwrap().is_zero());
    }

    #[test]
    fn unit_violation_detected() {
        let q = Rationals;
        let err = GradedAlgebra::new(
            q,
            vec![BasisElement::new("1", 0), BasisElement::new("u", 2)],
            vec![vec![(0, q.one())], vec![], vec![(1, q.one())], vec![]],
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::Unit { i: 1 });
    }

    #[test]
    fn degree_additivity_detected() {
        let q = Rationals;
        // u*u = u lands in the wrong degree.
        let err = GradedAlgebra::new(
            q,
            vec![BasisElement::new("1", 0), BasisElement::new("u", 2)],
            vec![vec![(0, q.one())], vec![(1, q.one())], vec![(1, q.one())], vec![(1, q.one())]],
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::DegreeAdditivity { i: 1, j: 1, k: 1 });
    }

    #[test]
    fn disconnected_rejected() {
        let q = Rationals;
        let err = GradedAlgebra::new(
            q,
            vec![BasisElement::new("1", 0), BasisElement::new("e", 0)],
            vec![vec![(0, q.one())], vec![(1, q.one())], vec![(1, q.one())], vec![(1, q.one())]],
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::Disconnected { index: 1 });
    }

    #[test]
    fn multiply_rejects_foreign_index() {
        let s = sphere(2);
        let bad = Element::basis(s.field(), 5);
        assert_eq!(
            s.multiply(&bad, &bad).unwrap_err(),
            AlgebraError::IndexOutOfRange { index: 5, dim: 2 }
        );
    }

    #[test]
    fn homogeneous_degree() {
        let s = sphere(3);
        let q = Rationals;
        let u = s.element("u").unwrap();
        assert_eq!(s.homogeneous_degree(&u), Some(3));
        assert_eq!(s.homogeneous_degree(&u.add(&q, &Element::basis(&q, 0))), None);
        assert_eq!(s.homogeneous_degree(&Element::zero()), None);
    }
}
