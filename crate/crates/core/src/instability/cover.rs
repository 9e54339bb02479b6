//! Combinatorics of reducing a cover using weights `f_1 .. f_k` summing to 1.
//!
//! A nonempty index set `S` is admissible for a weight vector when every
//! member has positive weight and strictly exceeds every non-member. These
//! are exactly the top-`j` sets with a strict gap below them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::InstabilityError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self, InstabilityError> {
        if w.is_empty() {
            return Err(InstabilityError::InvalidWeights("empty".into()));
        }
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(InstabilityError::InvalidWeights(format!("entries must be finite and non-negative: {w:?}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(InstabilityError::InvalidWeights(format!("entries sum to {sum}, not 1")));
        }
        Ok(WeightVector(w))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based indices attaining the maximum weight.
    pub fn argmax(&self) -> BTreeSet<usize> {
        let m = self.0.iter().copied().fold(f64::MIN, f64::max);
        (1..=self.0.len()).filter(|&i| self.0[i - 1] == m).collect()
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = InstabilityError;
    fn try_from(w: Vec<f64>) -> Result<Self, Self::Error> {
        WeightVector::new(w)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// All admissible sets (1-based indices), smallest first.
pub fn cover_reduce_classify(w: &WeightVector) -> Vec<BTreeSet<usize>> {
    let v = w.weights();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
    let mut out = Vec::new();
    for j in 1..=v.len() {
        let last = v[order[j - 1]];
        if last <= 0.0 {
            break;
        }
        if j == v.len() || last > v[order[j]] {
            out.push(order[..j].iter().map(|i| i + 1).collect());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    /// `W_j` index for each vector: the size of its argmax set.
    pub assignment: Vec<usize>,
    /// No vector satisfies the conditions of two distinct admissible sets
    /// of equal size.
    pub equal_size_exclusive: bool,
}

/// Assigns each vector to `W_j`, `j = |argmax|`, and rechecks on the sample
/// that equal-size admissible sets never share a vector.
pub fn cover_reduce_partition(vectors: &[WeightVector], r: usize) -> Result<PartitionReport, InstabilityError> {
    let mut assignment = Vec::with_capacity(vectors.len());
    for (index, w) in vectors.iter().enumerate() {
        let size = w.argmax().len();
        if size >= r {
            return Err(InstabilityError::ArgmaxTooLarge { index, size, r });
        }
        assignment.push(size);
    }
    let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for w in vectors {
        sets.extend(cover_reduce_classify(w));
    }
    let exclusive = vectors.iter().all(|w| {
        let admissible: Vec<&BTreeSet<usize>> = sets.iter().filter(|s| is_admissible(w, s)).collect();
        let sizes: BTreeSet<usize> = admissible.iter().map(|s| s.len()).collect();
        sizes.len() == admissible.len()
    });
    Ok(PartitionReport { assignment, equal_size_exclusive: exclusive })
}

fn is_admissible(w: &WeightVector, s: &BTreeSet<usize>) -> bool {
    let v = w.weights();
    if s.iter().any(|&i| i > v.len()) {
        return false;
    }
    let inside = s.iter().map(|&i| v[i - 1]);
    let min_in = inside.clone().fold(f64::INFINITY, f64::min);
    let max_out = (1..=v.len()).filter(|i| !s.contains(i)).map(|i| v[i - 1]).fold(f64::NEG_INFINITY, f64::max);
    min_in > 0.0 && min_in > max_out
}
