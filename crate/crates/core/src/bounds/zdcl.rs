//! Exact zero-divisor cup-length by iterated ideal powers.
//!
//! With `ȳ = 1 ⊗ y - y ⊗ 1`, the kernel `I` of the cup map is the left ideal
//! generated by the `ȳ` (because `x ⊗ y - xy ⊗ 1 = (x ⊗ 1) ȳ`). Since `I^m`
//! is an ideal, `I^{m+1} = span{ z ȳ : z ∈ basis(I^m), y ∈ basis(A) }`, so
//! each power only needs products with two-term generators. Powers are
//! kept block by block in reduced row echelon form and the blocks of the
//! next power are filled in parallel.

use rayon::prelude::*;

use crate::algebra::{cup_kernel_basis, ReducedBasis, TensorElement, TensorSquare};
use crate::algebra::GradedAlgebra;
use crate::field::Field;

/// One factor of a witness product.
#[derive(Debug, Clone)]
pub struct WitnessFactor<F: Field> {
    /// `bar(y)` for a barred generator, otherwise the expanded element.
    pub label: String,
    pub element: TensorElement<F>,
}

/// Evidence that `I^{length+1} = 0`: every product of a basis vector of
/// `I^length` with a kernel basis vector was multiplied out and found zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub power: usize,
    pub rank: usize,
    pub products_checked: usize,
}

#[derive(Debug, Clone)]
pub struct ZdclResult<F: Field> {
    pub length: usize,
    pub witness: Vec<WitnessFactor<F>>,
    /// Product of the witness factors, nonzero when `length > 0`.
    pub product: TensorElement<F>,
    /// `power_dims[m - 1] = dim I^m` for `m = 1..=length + 1`.
    pub power_dims: Vec<usize>,
    pub certificate: Certificate,
}

/// `I^m` stored per block of the tensor square.
struct Power<F: Field> {
    blocks: Vec<ReducedBasis<F>>,
}

impl<F: Field> Power<F> {
    fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank()).sum()
    }

    fn elements<'s>(&'s self, sq: &'s TensorSquare<'_, F>) -> impl Iterator<Item = (usize, TensorElement<F>)> + 's {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(move |(b, basis)| basis.rows().iter().map(move |row| (b, sq.to_element(b, row))))
    }
}

fn add_keys(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Computes the zero-divisor cup-length with a witness and certificate.
pub fn zdcl<F: Field>(alg: &GradedAlgebra<F>) -> ZdclResult<F> {
    let f = alg.field();
    let sq = TensorSquare::new(alg);
    let nblocks = sq.blocks().len();
    let gens: Vec<usize> = (1..alg.dim()).collect();

    // sources[t] lists (source block, generator) whose products land in block t.
    let mut sources: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nblocks];
    for (s, block) in sq.blocks().iter().enumerate() {
        for &y in &gens {
            if let Some(t) = sq.block_of_key(&add_keys(&block.key, alg.multidegree(y))) {
                sources[t].push((s, y));
            }
        }
    }

    let first = Power {
        blocks: (0..nblocks)
            .into_par_iter()
            .map(|b| {
                let size = sq.blocks()[b].pairs.len();
                let mut basis = ReducedBasis::new(size);
                for v in sq.kernel_block(b) {
                    let mut dense = vec![f.zero(); size];
                    for (c, x) in v {
                        dense[c] = x;
                    }
                    basis.insert(f, dense);
                }
                basis
            })
            .collect(),
    };

    let mut powers = vec![first];
    while powers.last().unwrap().rank() > 0 {
        let next = next_power(alg, &sq, &sources, powers.last().unwrap());
        powers.push(next);
    }
    // powers[m - 1] = I^m; the last one is zero.
    let length = powers.len() - 1;
    let power_dims: Vec<usize> = powers.iter().map(|p| p.rank()).collect();

    let kernel = cup_kernel_basis(alg);
    let certificate = certify(alg, &sq, &powers, &kernel, length);
    let (witness, product) = extract_witness(alg, &sq, &powers, &kernel, &gens, length);
    debug_assert!(length == 0 || !product.is_zero());

    ZdclResult { length, witness, product, power_dims, certificate }
}

fn next_power<F: Field>(
    alg: &GradedAlgebra<F>,
    sq: &TensorSquare<'_, F>,
    sources: &[Vec<(usize, usize)>],
    current: &Power<F>,
) -> Power<F> {
    let f = alg.field();
    let blocks = (0..sq.blocks().len())
        .into_par_iter()
        .map(|t| {
            let size = sq.blocks()[t].pairs.len();
            let mut basis = ReducedBasis::new(size);
            'outer: for &(s, y) in &sources[t] {
                let pairs = &sq.blocks()[s].pairs;
                for row in current.blocks[s].rows() {
                    if basis.is_full() {
                        break 'outer;
                    }
                    let mut dense = vec![f.zero(); size];
                    let mut nonzero = false;
                    for (c, x) in row {
                        let (i, j) = pairs[*c];
                        // (b_i ⊗ b_j)(1 ⊗ b_y) = b_i ⊗ b_j b_y
                        for (k, d) in alg.product(j, y) {
                            let (tb, local) = sq.locate(i, *k);
                            debug_assert_eq!(tb, t);
                            dense[local] = f.add(&dense[local], &f.mul(x, d));
                            nonzero = true;
                        }
                        // (b_i ⊗ b_j)(b_y ⊗ 1) = ± b_i b_y ⊗ b_j
                        let sign = f.neg(&alg.koszul(j, y));
                        for (k, d) in alg.product(i, y) {
                            let (tb, local) = sq.locate(*k, j);
                            debug_assert_eq!(tb, t);
                            dense[local] = f.add(&dense[local], &f.mul(&f.mul(x, d), &sign));
                            nonzero = true;
                        }
                    }
                    if nonzero {
                        basis.insert(f, dense);
                    }
                }
            }
            basis
        })
        .collect();
    Power { blocks }
}

fn certify<F: Field>(
    alg: &GradedAlgebra<F>,
    sq: &TensorSquare<'_, F>,
    powers: &[Power<F>],
    kernel: &[TensorElement<F>],
    length: usize,
) -> Certificate {
    let power = length + 1;
    if length == 0 {
        return Certificate { power, rank: kernel.len(), products_checked: 0 };
    }
    let top: Vec<TensorElement<F>> = powers[length - 1].elements(sq).map(|(_, e)| e).collect();
    let products: Vec<TensorElement<F>> = top
        .par_iter()
        .flat_map_iter(|z| kernel.iter().map(move |k| alg.tensor_mul(z, k)))
        .collect();
    let mut span = ReducedBasis::<F>::new(sq.dim());
    let n = alg.dim();
    for p in products.iter().filter(|p| !p.is_zero()) {
        let mut dense = vec![alg.field().zero(); sq.dim()];
        for ((i, j), c) in p.terms() {
            dense[i * n + j] = c.clone();
        }
        span.insert(alg.field(), dense);
    }
    Certificate { power, rank: span.rank(), products_checked: products.len() }
}

/// Greedy chain `p_0 = 1 ⊗ 1`, `p_k = p_{k-1} z_k`, keeping the invariant
/// `p_k I^{L-k} ≠ 0`. Barred generators are tried first, then kernel basis
/// vectors; the invariant guarantees some kernel vector always extends the
/// chain, so no backtracking is needed.
fn extract_witness<F: Field>(
    alg: &GradedAlgebra<F>,
    sq: &TensorSquare<'_, F>,
    powers: &[Power<F>],
    kernel: &[TensorElement<F>],
    gens: &[usize],
    length: usize,
) -> (Vec<WitnessFactor<F>>, TensorElement<F>) {
    let f = alg.field();
    let mut candidates: Vec<WitnessFactor<F>> = gens
        .iter()
        .map(|&y| WitnessFactor {
            label: format!("bar({})", alg.basis()[y].name),
            element: alg.bar_unchecked(&crate::algebra::Element::basis(f, y)),
        })
        .collect();
    candidates.extend(kernel.iter().map(|k| WitnessFactor { label: alg.format_tensor(k), element: k.clone() }));

    let power_elements: Vec<Vec<(usize, TensorElement<F>)>> =
        powers.iter().take(length.saturating_sub(1)).map(|p| p.elements(sq).collect()).collect();

    let mut product = TensorElement::pure(f, alg.unit(), alg.unit());
    let mut witness = Vec::with_capacity(length);
    for step in 0..length {
        let remaining = length - step - 1;
        let chosen = candidates.iter().find_map(|c| {
            let q = alg.tensor_mul(&product, &c.element);
            if q.is_zero() {
                return None;
            }
            if remaining == 0 {
                return Some((c.clone(), q));
            }
            let qb = sq.key_of(&q);
            let extends = power_elements[remaining - 1].iter().any(|(b, w)| {
                let reachable = match qb {
                    Some(qb) => {
                        sq.block_of_key(&add_keys(&sq.blocks()[qb].key, &sq.blocks()[*b].key)).is_some()
                    }
                    None => true,
                };
                reachable && !alg.tensor_mul(&q, w).is_zero()
            });
            extends.then_some((c.clone(), q))
        });
        let (factor, q) = chosen.expect("ideal power chain always extends");
        witness.push(factor);
        product = q;
    }
    if length == 0 {
        product = TensorElement::zero();
    }
    (witness, product)
}

/// Checks witness soundness independently: each factor is a zero-divisor
/// and the product of the factors equals the recorded nonzero product.
pub fn witness_is_sound<F: Field>(alg: &GradedAlgebra<F>, result: &ZdclResult<F>) -> bool {
    let f = alg.field();
    if result.witness.len() != result.length {
        return false;
    }
    if result.length == 0 {
        return true;
    }
    if result.witness.iter().any(|w| !alg.cup(&w.element).is_zero()) {
        return false;
    }
    let product = result
        .witness
        .iter()
        .fold(TensorElement::pure(f, alg.unit(), alg.unit()), |acc, w| alg.tensor_mul(&acc, &w.element));
    !product.is_zero() && product == result.product
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, AnyAlgebra, Preset};
    use crate::field::Rationals;

    fn q_alg(p: Preset) -> GradedAlgebra<Rationals> {
        match p.build().unwrap() {
            AnyAlgebra::Rational(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn point_has_length_zero() {
        let r = zdcl(&q_alg(Preset::Point));
        assert_eq!(r.length, 0);
        assert!(r.witness.is_empty());
        assert_eq!(r.power_dims, vec![0]);
    }

    #[test]
    fn wedge_of_two_circles() {
        let w = q_alg(preset("wedge_spheres:2,1").unwrap());
        let r = zdcl(&w);
        assert_eq!(r.length, 2);
        assert!(witness_is_sound(&w, &r));
        let f = Rationals;
        // bar(u1) bar(u2) = u2⊗u1 - u1⊗u2
        assert_eq!(r.witness[0].label, "bar(u1)");
        assert_eq!(r.witness[1].label, "bar(u2)");
        let expected = TensorElement::from_terms(&f, [((2, 1), f.one()), ((1, 2), f.from_i64(-1))]);
        assert_eq!(r.product, expected);
        assert_eq!(r.certificate.rank, 0);
    }

    #[test]
    fn circle_has_length_one() {
        let r = zdcl(&q_alg(Preset::Torus(1)));
        assert_eq!(r.length, 1);
        assert_eq!(r.certificate, Certificate { power: 2, rank: 0, products_checked: 4 });
    }

    #[test]
    fn even_sphere_witness() {
        let s = q_alg(Preset::Sphere(2));
        let r = zdcl(&s);
        assert_eq!(r.length, 2);
        let f = Rationals;
        assert_eq!(r.product, TensorElement::pure(&f, 1, 1).scale(&f, &f.from_i64(-2)));
    }

    #[test]
    fn projective_space_mod_two() {
        let AnyAlgebra::Prime(rp) = Preset::ProjectiveMod2(3).build().unwrap() else { panic!() };
        let r = zdcl(&rp);
        assert_eq!(r.length, 3);
        assert!(witness_is_sound(&rp, &r));
        // bar(a)^3 = 1⊗a3 + a⊗a2 + a2⊗a + a3⊗1 over F2.
        let expected = TensorElement::from_terms(rp.field(), [((0, 3), 1), ((1, 2), 1), ((2, 1), 1), ((3, 0), 1)]);
        assert_eq!(r.product, expected);
        assert!(r.witness.iter().all(|w| w.label == "bar(a)"));
    }

    #[test]
    fn surface_chain_signs() {
        let s = q_alg(Preset::Surface(3));
        let f = Rationals;
        let bar = |n: &str| s.bar_unchecked(&s.element(n).unwrap());
        let top = s.index_of("A").unwrap();
        let abcd = [bar("a1"), bar("b1"), bar("a2"), bar("b2")]
            .iter()
            .fold(TensorElement::pure(&f, 0, 0), |acc, x| s.tensor_mul(&acc, x));
        assert_eq!(abcd, TensorElement::pure(&f, top, top).scale(&f, &f.from_i64(2)));
        let bacd = [bar("b1"), bar("a1"), bar("a2"), bar("b2")]
            .iter()
            .fold(TensorElement::pure(&f, 0, 0), |acc, x| s.tensor_mul(&acc, x));
        assert_eq!(bacd, TensorElement::pure(&f, top, top).scale(&f, &f.from_i64(-2)));
        // bar(a) bar(b) = 1⊗A + b⊗a - a⊗b + A⊗1
        let (a, b) = (s.index_of("a1").unwrap(), s.index_of("b1").unwrap());
        let ab = s.tensor_mul(&bar("a1"), &bar("b1"));
        let expected = TensorElement::from_terms(
            &f,
            [((0, top), f.one()), ((b, a), f.one()), ((a, b), f.from_i64(-1)), ((top, 0), f.one())],
        );
        assert_eq!(ab, expected);
    }

    #[test]
    fn surface_genus_three() {
        let s = q_alg(Preset::Surface(3));
        let r = zdcl(&s);
        assert_eq!(r.length, 4);
        assert!(witness_is_sound(&s, &r));
        let top = s.index_of("A").unwrap();
        assert_eq!(r.product.len(), 1);
        assert_eq!(r.product.coeff(&Rationals, top, top).signum().abs(), 1);
    }
}
