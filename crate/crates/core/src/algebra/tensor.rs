use std::collections::BTreeMap;

use super::{AlgebraError, BasisElement, Element, GradedAlgebra, ReducedBasis};
use crate::field::Field;

/// An element of `A ⊗ A`, sparse over basis pairs `(left, right)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement<F: Field> {
    coeffs: BTreeMap<(usize, usize), F::Elem>,
}

impl<F: Field> Default for TensorElement<F> {
    fn default() -> Self {
        TensorElement { coeffs: BTreeMap::new() }
    }
}

impl<F: Field> TensorElement<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = ((usize, usize), F::Elem)>) -> Self {
        let mut t = Self::zero();
        for (k, c) in terms {
            t.add_term(field, k, &c);
        }
        t
    }

    /// The pure tensor `b_i ⊗ b_j`.
    pub fn pure(field: &F, i: usize, j: usize) -> Self {
        Self::from_terms(field, [((i, j), field.one())])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &F::Elem)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, field: &F, i: usize, j: usize) -> F::Elem {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn add_term(&mut self, field: &F, key: (usize, usize), c: &F::Elem) {
        if field.is_zero(c) {
            return;
        }
        match self.coeffs.get_mut(&key) {
            Some(v) => {
                *v = field.add(v, c);
                if field.is_zero(v) {
                    self.coeffs.remove(&key);
                }
            }
            None => {
                self.coeffs.insert(key, c.clone());
            }
        }
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(field, k, c);
        }
        out
    }

    pub fn scale(&self, field: &F, s: &F::Elem) -> Self {
        Self::from_terms(field, self.terms().map(|(k, c)| (k, field.mul(c, s))))
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        self.add(field, &other.scale(field, &field.neg(&field.one())))
    }
}

impl<F: Field> GradedAlgebra<F> {
    /// `x ⊗ y` for elements of `A`.
    pub fn pure_tensor(&self, x: &Element<F>, y: &Element<F>) -> TensorElement<F> {
        let f = self.field();
        let mut out = TensorElement::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                out.add_term(f, (i, j), &f.mul(a, b));
            }
        }
        out
    }

    /// Multiplication in `A ⊗ A` with the Koszul sign
    /// `(u1 ⊗ v1)(u2 ⊗ v2) = (-1)^{|v1||u2|} u1u2 ⊗ v1v2`.
    pub fn tensor_mul(&self, x: &TensorElement<F>, y: &TensorElement<F>) -> TensorElement<F> {
        let f = self.field();
        let mut out = TensorElement::zero();
        for ((i1, j1), a) in x.terms() {
            for ((i2, j2), b) in y.terms() {
                let left = self.product(i1, i2);
                if left.is_empty() {
                    continue;
                }
                let right = self.product(j1, j2);
                if right.is_empty() {
                    continue;
                }
                let ab = f.mul(&f.mul(a, b), &self.koszul(j1, i2));
                for (k, c) in left {
                    let abc = f.mul(&ab, c);
                    for (l, d) in right {
                        out.add_term(f, (*k, *l), &f.mul(&abc, d));
                    }
                }
            }
        }
        out
    }

    /// The cup map `A ⊗ A -> A`, `x ⊗ y ↦ xy`.
    pub fn cup(&self, x: &TensorElement<F>) -> Element<F> {
        let f = self.field();
        let mut out = Element::zero();
        for ((i, j), a) in x.terms() {
            for (k, c) in self.product(i, j) {
                out.add_term(f, *k, &f.mul(a, c));
            }
        }
        out
    }

    /// The canonical zero-divisor `1 ⊗ u - u ⊗ 1` without degree checks.
    pub(crate) fn bar_unchecked(&self, u: &Element<F>) -> TensorElement<F> {
        let f = self.field();
        let one = Element::basis(f, self.unit());
        self.pure_tensor(&one, u).sub(f, &self.pure_tensor(u, &one))
    }

    pub fn format_tensor(&self, x: &TensorElement<F>) -> String {
        super::format_terms(
            self.field(),
            x.terms().map(|((i, j), c)| (format!("{}⊗{}", self.basis()[i].name, self.basis()[j].name), c)),
        )
    }
}

/// Künneth product `A ⊗ B`: basis pairs ordered left-major, Koszul-signed
/// multiplication, multidegrees concatenated.
pub fn tensor_algebra<F: Field>(
    a: &GradedAlgebra<F>,
    b: &GradedAlgebra<F>,
) -> Result<GradedAlgebra<F>, AlgebraError> {
    if a.field() != b.field() {
        return Err(AlgebraError::FieldMismatch { left: a.field().name(), right: b.field().name() });
    }
    let f = a.field();
    let (na, nb) = (a.dim(), b.dim());
    let mut basis = Vec::with_capacity(na * nb);
    for x in a.basis() {
        for y in b.basis() {
            let mut md = x.multidegree.clone();
            md.extend_from_slice(&y.multidegree);
            basis.push(BasisElement::with_multidegree(format!("{}.{}", x.name, y.name), md));
        }
    }
    let n = na * nb;
    let mut table = Vec::with_capacity(n * n);
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let sign = if b.degree(j1) % 2 == 1 && a.degree(i2) % 2 == 1 {
                        f.neg(&f.one())
                    } else {
                        f.one()
                    };
                    let mut entry = Vec::new();
                    for (k, c) in a.product(i1, i2) {
                        let sc = f.mul(&sign, c);
                        for (l, d) in b.product(j1, j2) {
                            entry.push((k * nb + l, f.mul(&sc, d)));
                        }
                    }
                    table.push(entry);
                }
            }
        }
    }
    GradedAlgebra::new_unchecked(f.clone(), basis, table)
}

/// One multidegree block of `A ⊗ A`.
#[derive(Debug, Clone)]
pub struct Block {
    pub key: Vec<u32>,
    /// Basis pairs in this block, sorted.
    pub pairs: Vec<(usize, usize)>,
}

/// The tensor square `A ⊗ A` decomposed into blocks by total multidegree
/// `md(i) + md(j)`. Both the Koszul multiplication and the cup map respect
/// this decomposition.
#[derive(Debug)]
pub struct TensorSquare<'a, F: Field> {
    alg: &'a GradedAlgebra<F>,
    blocks: Vec<Block>,
    by_key: BTreeMap<Vec<u32>, usize>,
    /// `(block, local index)` of each pair, indexed by `i * dim + j`.
    location: Vec<(usize, usize)>,
}

impl<'a, F: Field> TensorSquare<'a, F> {
    pub fn new(alg: &'a GradedAlgebra<F>) -> Self {
        let n = alg.dim();
        let mut grouped: BTreeMap<Vec<u32>, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                grouped.entry(pair_key(alg, i, j)).or_default().push((i, j));
            }
        }
        let mut blocks = Vec::new();
        let mut by_key = BTreeMap::new();
        let mut location = vec![(0, 0); n * n];
        for (b, (key, pairs)) in grouped.into_iter().enumerate() {
            for (local, (i, j)) in pairs.iter().enumerate() {
                location[i * n + j] = (b, local);
            }
            by_key.insert(key.clone(), b);
            blocks.push(Block { key, pairs });
        }
        TensorSquare { alg, blocks, by_key, location }
    }

    pub fn algebra(&self) -> &'a GradedAlgebra<F> {
        self.alg
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_of_key(&self, key: &[u32]) -> Option<usize> {
        self.by_key.get(key).copied()
    }

    pub fn locate(&self, i: usize, j: usize) -> (usize, usize) {
        self.location[i * self.alg.dim() + j]
    }

    pub fn dim(&self) -> usize {
        self.alg.dim() * self.alg.dim()
    }

    /// Converts a block-local sparse vector into a tensor element.
    pub fn to_element(&self, block: usize, v: &[(usize, F::Elem)]) -> TensorElement<F> {
        let pairs = &self.blocks[block].pairs;
        TensorElement::from_terms(self.alg.field(), v.iter().map(|(c, x)| (pairs[*c], x.clone())))
    }

    /// Block key of a homogeneous tensor element, `None` for zero or mixed.
    pub fn key_of(&self, x: &TensorElement<F>) -> Option<usize> {
        let mut blocks = x.terms().map(|((i, j), _)| self.locate(i, j).0);
        let first = blocks.next()?;
        blocks.all(|b| b == first).then_some(first)
    }

    /// Basis of the kernel of the cup map restricted to one block.
    pub fn kernel_block(&self, block: usize) -> Vec<Vec<(usize, F::Elem)>> {
        let alg = self.alg;
        let f = alg.field();
        let Block { key, pairs } = &self.blocks[block];
        let targets: Vec<usize> = (0..alg.dim()).filter(|k| alg.multidegree(*k) == key.as_slice()).collect();
        let mut rows = ReducedBasis::<F>::new(pairs.len());
        for t in &targets {
            let row: Vec<F::Elem> = pairs
                .iter()
                .map(|(i, j)| {
                    alg.product(*i, *j)
                        .iter()
                        .find(|(k, _)| k == t)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(|| f.zero())
                })
                .collect();
            rows.insert(f, row);
        }
        rows.null_space(f)
    }
}

fn pair_key<F: Field>(alg: &GradedAlgebra<F>, i: usize, j: usize) -> Vec<u32> {
    alg.multidegree(i).iter().zip(alg.multidegree(j)).map(|(a, b)| a + b).collect()
}

/// Exact basis of the ideal of zero-divisors `ker(∪ : A ⊗ A -> A)`,
/// computed block by block and concatenated in block order.
pub fn cup_kernel_basis<F: Field>(alg: &GradedAlgebra<F>) -> Vec<TensorElement<F>> {
    let sq = TensorSquare::new(alg);
    (0..sq.blocks().len())
        .flat_map(|b| sq.kernel_block(b).into_iter().map(move |v| (b, v)))
        .map(|(b, v)| sq.to_element(b, &v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::field::Rationals;

    fn q_alg(p: Preset) -> GradedAlgebra<Rationals> {
        match p.build().unwrap() {
            crate::algebra::AnyAlgebra::Rational(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn unit_factors_carry_no_sign() {
        let s = q_alg(Preset::Torus(2));
        let f = Rationals;
        let (u, v) = (s.index_of("e1").unwrap(), s.index_of("e2").unwrap());
        let x = TensorElement::pure(&f, u, 0);
        let y = TensorElement::pure(&f, 0, v);
        assert_eq!(s.tensor_mul(&x, &y), TensorElement::pure(&f, u, v));
    }

    #[test]
    fn odd_classes_pick_up_koszul_sign() {
        // Hand computation: (1⊗u)(v⊗1) = (-1)^{1·1} v⊗u.
        let s = q_alg(Preset::Torus(2));
        let f = Rationals;
        let (u, v) = (s.index_of("e1").unwrap(), s.index_of("e2").unwrap());
        let x = TensorElement::pure(&f, 0, u);
        let y = TensorElement::pure(&f, v, 0);
        assert_eq!(s.tensor_mul(&x, &y), TensorElement::pure(&f, v, u).scale(&f, &f.from_i64(-1)));
    }

    #[test]
    fn even_sphere_barred_square() {
        let s = q_alg(Preset::Sphere(2));
        let f = Rationals;
        let u = s.element("u").unwrap();
        let bar = s.bar_unchecked(&u);
        let sq = s.tensor_mul(&bar, &bar);
        assert_eq!(sq, TensorElement::pure(&f, 1, 1).scale(&f, &f.from_i64(-2)));
    }

    #[test]
    fn sphere_kernel_contains_expected_vectors() {
        let s = q_alg(Preset::Sphere(2));
        let kernel = cup_kernel_basis(&s);
        assert_eq!(kernel.len(), 2);
        // The kernel is spanned by 1⊗u - u⊗1 and u⊗u; check membership by rank.
        let f = Rationals;
        let u = s.element("u").unwrap();
        let candidates = [s.bar_unchecked(&u), TensorElement::pure(&f, 1, 1)];
        let mut span = ReducedBasis::<Rationals>::new(4);
        let dense = |t: &TensorElement<Rationals>| -> Vec<_> {
            (0..4).map(|k| t.coeff(&f, k / 2, k % 2)).collect()
        };
        for k in &kernel {
            span.insert(&f, dense(k));
        }
        for c in &candidates {
            assert!(!span.clone().insert(&f, dense(c)));
        }
    }

    #[test]
    fn point_kernel_is_zero() {
        let p = q_alg(Preset::Point);
        assert!(cup_kernel_basis(&p).is_empty());
    }

    #[test]
    fn wedge_kernel_contains_bidegree_one_one() {
        let w = q_alg(preset("wedge_spheres:2,1").unwrap());
        let kernel = cup_kernel_basis(&w);
        let f = Rationals;
        // All four pure tensors u_i ⊗ u_j must lie in the span.
        let n = w.dim();
        let mut span = ReducedBasis::<Rationals>::new(n * n);
        let dense = |t: &TensorElement<Rationals>| -> Vec<_> {
            (0..n * n).map(|k| t.coeff(&f, k / n, k % n)).collect()
        };
        for k in &kernel {
            span.insert(&f, dense(k));
        }
        for i in 1..n {
            for j in 1..n {
                assert!(!span.clone().insert(&f, dense(&TensorElement::pure(&f, i, j))));
            }
        }
    }

    #[test]
    fn field_mismatch_rejected() {
        let a = preset("sphere:2@F3").unwrap().build().unwrap();
        let b = preset("sphere:2@F5").unwrap().build().unwrap();
        assert!(matches!(a.tensor(&b), Err(AlgebraError::FieldMismatch { .. })));
        let c = preset("sphere:2").unwrap().build().unwrap();
        assert!(matches!(a.tensor(&c), Err(AlgebraError::FieldMismatch { .. })));
    }
}
