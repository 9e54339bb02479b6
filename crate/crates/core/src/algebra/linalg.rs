use crate::field::Field;

/// An incrementally built subspace of `F^dim` kept in reduced row echelon
/// form.
///
/// Every row has a leading 1 in its pivot column and zeros in every other
/// pivot column, so a row is supported on its pivot plus free columns only.
/// Reducing a vector therefore costs one sparse row operation per pivot
/// column in its support, which stays cheap when the subspace is close to
/// the whole space.
#[derive(Debug, Clone)]
pub struct ReducedBasis<F: Field> {
    dim: usize,
    rows: Vec<Vec<(usize, F::Elem)>>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> ReducedBasis<F> {
    pub fn new(dim: usize) -> Self {
        ReducedBasis { dim, rows: Vec::new(), pivot_row: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn rows(&self) -> &[Vec<(usize, F::Elem)>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.first().map(|(c, _)| *c).unwrap()).collect()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Reduces a dense vector in place against the basis.
    pub fn reduce(&self, field: &F, v: &mut [F::Elem]) {
        debug_assert_eq!(v.len(), self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            let pivot = row[0].0;
            debug_assert_eq!(self.pivot_row[pivot], Some(r));
            if field.is_zero(&v[pivot]) {
                continue;
            }
            let factor = v[pivot].clone();
            for (c, x) in row {
                v[*c] = field.sub(&v[*c], &field.mul(&factor, x));
            }
        }
    }

    /// Adds a dense vector to the span. Returns `true` when it was
    /// independent of the current rows.
    pub fn insert(&mut self, field: &F, mut v: Vec<F::Elem>) -> bool {
        if self.is_full() {
            return false;
        }
        self.reduce(field, &mut v);
        let Some(pivot) = v.iter().position(|x| !field.is_zero(x)) else {
            return false;
        };
        let inv = field.inv(&v[pivot]).expect("nonzero pivot");
        let new_row: Vec<(usize, F::Elem)> = v
            .iter()
            .enumerate()
            .skip(pivot)
            .filter(|(_, x)| !field.is_zero(x))
            .map(|(c, x)| (c, field.mul(x, &inv)))
            .collect();
        for row in &mut self.rows {
            let Ok(pos) = row.binary_search_by_key(&pivot, |(c, _)| *c) else {
                continue;
            };
            let factor = row[pos].1.clone();
            *row = axpy_sparse(field, row, &new_row, &field.neg(&factor));
        }
        self.pivot_row[pivot] = Some(self.rows.len());
        self.rows.push(new_row);
        true
    }

    /// Basis of the null space of the matrix whose rows span this subspace.
    pub fn null_space(&self, field: &F) -> Vec<Vec<(usize, F::Elem)>> {
        let mut out = Vec::new();
        for free in (0..self.dim).filter(|c| self.pivot_row[*c].is_none()) {
            let mut v = vec![(free, field.one())];
            for row in &self.rows {
                if let Ok(pos) = row.binary_search_by_key(&free, |(c, _)| *c) {
                    v.push((row[0].0, field.neg(&row[pos].1)));
                }
            }
            v.sort_by_key(|(c, _)| *c);
            out.push(v);
        }
        out
    }
}

/// `a + s * b` for sorted sparse vectors.
fn axpy_sparse<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    b: &[(usize, F::Elem)],
    s: &F::Elem,
) -> Vec<(usize, F::Elem)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.mul(s, &b[j].1)));
            j += 1;
        } else {
            let x = field.add(&a[i].1, &field.mul(s, &b[j].1));
            if !field.is_zero(&x) {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(v: &[i64]) -> Vec<crate::field::Rational> {
        v.iter().map(|x| Rationals.from_i64(*x)).collect()
    }

    #[test]
    fn rank_and_null_space() {
        let f = Rationals;
        let mut b = ReducedBasis::<Rationals>::new(4);
        assert!(b.insert(&f, q(&[1, 2, 0, 1])));
        assert!(b.insert(&f, q(&[0, 1, 1, 0])));
        assert!(!b.insert(&f, q(&[1, 3, 1, 1])));
        assert_eq!(b.rank(), 2);
        let ns = b.null_space(&f);
        assert_eq!(ns.len(), 2);
        // Each null vector is orthogonal to the original rows.
        for v in &ns {
            for row in [q(&[1, 2, 0, 1]), q(&[0, 1, 1, 0])] {
                let dot = v.iter().fold(f.zero(), |acc, (c, x)| f.add(&acc, &f.mul(x, &row[*c])));
                assert!(f.is_zero(&dot));
            }
        }
    }

    #[test]
    fn rows_stay_reduced() {
        let f = PrimeField::new(5).unwrap();
        let mut b = ReducedBasis::<PrimeField>::new(3);
        b.insert(&f, vec![0, 1, 1]);
        b.insert(&f, vec![1, 1, 0]);
        for row in b.rows() {
            for p in b.pivot_columns() {
                let entry = row.iter().find(|(c, _)| *c == p).map(|(_, x)| *x).unwrap_or(0);
                let own = row[0].0 == p;
                assert_eq!(entry, if own { 1 } else { 0 });
            }
        }
        assert!(b.insert(&f, vec![0, 0, 1]));
        assert!(b.is_full());
        assert!(!b.insert(&f, vec![1, 2, 3]));
    }
}
