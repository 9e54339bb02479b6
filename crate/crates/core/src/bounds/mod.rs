//! Two-sided brackets for topological complexity.
//!
//! Counting convention: TC counts the sets of a cover, so a contractible
//! space has TC = 1. Lower bounds come from the zero-divisor cup-length,
//! upper bounds from dimension, connectivity, product composition and a
//! small table of known values.

mod descriptor;
mod known;
mod zdcl;

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, AnyAlgebra, Element, GradedAlgebra, TensorElement};
use crate::field::Field;
use crate::with_algebra;

pub use descriptor::{SpaceDescriptor, SpaceKind};
pub use known::{known_value, KnownValue, KNOWN_VALUES};
pub use zdcl::{witness_is_sound, zdcl, Certificate, WitnessFactor, ZdclResult};

pub const CONVENTION: &str = "TC counts covering sets; TC(point)=1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("contradiction: lower bound {lower} ({lower_tag}) exceeds upper bound {upper} ({upper_tag})")]
    Contradiction { lower: u32, lower_tag: Provenance, upper: u32, upper_tag: Provenance },
    #[error("known value {value} lies outside the computed bracket [{lower}, {upper}]")]
    KnownValueOutside { value: u32, lower: u32, upper: u32 },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The rule a bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Zdcl,
    Dimension,
    Connectivity,
    KnownValue,
    ProductComposition,
    GraphFormula,
    /// TC >= 1 for every nonempty space.
    Baseline,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Zdcl => "zdcl",
            Provenance::Dimension => "dimension",
            Provenance::Connectivity => "connectivity",
            Provenance::KnownValue => "known-value",
            Provenance::ProductComposition => "product-composition",
            Provenance::GraphFormula => "graph-formula",
            Provenance::Baseline => "baseline",
        };
        f.write_str(s)
    }
}

/// A single bound with the rule that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: u32,
    pub provenance: Provenance,
    pub detail: String,
}

/// `1 ⊗ u - u ⊗ 1` for `u` homogeneous of positive degree; zero maps to zero.
pub fn barred<F: Field>(alg: &GradedAlgebra<F>, u: &Element<F>) -> Result<TensorElement<F>, AlgebraError> {
    if u.is_zero() {
        return Ok(TensorElement::zero());
    }
    alg.check_indices(u)?;
    match alg.homogeneous_degree(u) {
        None => Err(AlgebraError::NotHomogeneous),
        Some(0) => Err(AlgebraError::DegreeZero),
        Some(_) => Ok(alg.bar_unchecked(u)),
    }
}

/// TC > zdcl, so TC >= L + 1.
pub fn tc_lower_from_zdcl(l: u32) -> u32 {
    l + 1
}

/// TC <= 2 dim + 1.
pub fn tc_upper_dim(d: u32) -> u32 {
    2 * d + 1
}

/// Largest integer strictly below `(2d + 1) / (r + 1) + 1`.
pub fn tc_upper_conn(d: u32, r: u32) -> u32 {
    let v = Ratio::new(2 * d as u64 + 1, r as u64 + 1) + 1u64;
    let floor = v.floor().to_integer() as u32;
    if v.is_integer() {
        floor - 1
    } else {
        floor
    }
}

/// TC of a connected graph with first Betti number `b1`.
pub fn graph_tc(b1: u32) -> u32 {
    match b1 {
        0 => 1,
        1 => 2,
        _ => 3,
    }
}

/// TC(X × Y) <= TC(X) + TC(Y) - 1.
pub fn product_upper(tc_x: u32, tc_y: u32) -> u32 {
    assert!(tc_x >= 1 && tc_y >= 1, "TC values are at least 1");
    tc_x + tc_y - 1
}

/// Field-erased summary of a zdcl computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZdclSummary {
    pub length: u32,
    pub witness: Vec<String>,
    pub product: String,
    pub power_dims: Vec<usize>,
    pub certificate_power: usize,
    pub certificate_rank: usize,
    pub certificate_products: usize,
    pub witness_sound: bool,
}

impl ZdclSummary {
    pub fn from_result<F: Field>(alg: &GradedAlgebra<F>, r: &ZdclResult<F>) -> Self {
        ZdclSummary {
            length: r.length as u32,
            witness: r.witness.iter().map(|w| w.label.clone()).collect(),
            product: alg.format_tensor(&r.product),
            power_dims: r.power_dims.clone(),
            certificate_power: r.certificate.power,
            certificate_rank: r.certificate.rank,
            certificate_products: r.certificate.products_checked,
            witness_sound: witness_is_sound(alg, r),
        }
    }

    pub fn compute(alg: &AnyAlgebra) -> Self {
        with_algebra!(alg, a => Self::from_result(a, &zdcl(a)))
    }
}

/// Lower and upper bounds with provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub lower: Bound,
    pub upper: Bound,
    pub exact: Option<u32>,
    /// Every bound that was considered, lower bounds first.
    pub lower_candidates: Vec<Bound>,
    pub upper_candidates: Vec<Bound>,
    pub known: Option<KnownValue>,
    pub zdcl: Option<ZdclSummary>,
    pub convention: &'static str,
}

/// First candidate attaining the extreme value; ties go to the earlier one.
fn pick(cands: &[Bound], max: bool) -> Bound {
    let best = if max {
        cands.iter().map(|b| b.value).max()
    } else {
        cands.iter().map(|b| b.value).min()
    }
    .expect("at least one candidate");
    cands.iter().find(|b| b.value == best).unwrap().clone()
}

/// Upper bounds from rules that need no algebra.
fn upper_rules(desc: &SpaceDescriptor) -> Vec<Bound> {
    let mut out = vec![
        Bound {
            value: tc_upper_conn(desc.dim, desc.connectivity),
            provenance: Provenance::Connectivity,
            detail: format!("d={}, r={}", desc.dim, desc.connectivity),
        },
        Bound { value: tc_upper_dim(desc.dim), provenance: Provenance::Dimension, detail: format!("d={}", desc.dim) },
    ];
    if let SpaceKind::Product { factors } = &desc.kind {
        let uppers: Vec<u32> = factors.iter().map(factor_upper).collect();
        let value = uppers.iter().copied().reduce(product_upper).unwrap_or(1);
        out.push(Bound {
            value,
            provenance: Provenance::ProductComposition,
            detail: format!(
                "factors {}",
                uppers.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(" + ")
            ),
        });
    }
    if let Some(b1) = desc.graph_b1() {
        out.push(Bound { value: graph_tc(b1), provenance: Provenance::GraphFormula, detail: format!("b1={b1}") });
    }
    out
}

/// Best upper bound for a product factor, known values included.
fn factor_upper(desc: &SpaceDescriptor) -> u32 {
    let mut best = upper_rules(desc).iter().map(|b| b.value).min().unwrap();
    if let Some(k) = known_value(desc) {
        best = best.min(k.value);
    }
    best
}

/// Combines every applicable rule into a bracket. A known value must lie in
/// the bracket computed from the other rules; it then closes the bracket.
pub fn bracket(desc: &SpaceDescriptor, alg: Option<&AnyAlgebra>) -> Result<BoundReport, BoundsError> {
    desc.check()?;
    let mut lower_candidates = Vec::new();
    let zdcl = alg.map(ZdclSummary::compute);
    if let Some(z) = &zdcl {
        lower_candidates.push(Bound {
            value: tc_lower_from_zdcl(z.length),
            provenance: Provenance::Zdcl,
            detail: format!("zdcl={} over {}", z.length, alg.unwrap().field_name()),
        });
    }
    if let Some(b1) = desc.graph_b1() {
        lower_candidates.push(Bound {
            value: graph_tc(b1),
            provenance: Provenance::GraphFormula,
            detail: format!("b1={b1}"),
        });
    }
    lower_candidates.push(Bound { value: 1, provenance: Provenance::Baseline, detail: "nonempty space".into() });
    let mut upper_candidates = upper_rules(desc);

    let lower = pick(&lower_candidates, true);
    let upper = pick(&upper_candidates, false);
    if lower.value > upper.value {
        return Err(BoundsError::Contradiction {
            lower: lower.value,
            lower_tag: lower.provenance,
            upper: upper.value,
            upper_tag: upper.provenance,
        });
    }
    let known = known_value(desc);
    if let Some(k) = &known {
        if k.value < lower.value || k.value > upper.value {
            return Err(BoundsError::KnownValueOutside { value: k.value, lower: lower.value, upper: upper.value });
        }
        let bound = Bound { value: k.value, provenance: Provenance::KnownValue, detail: k.claim.to_string() };
        lower_candidates.insert(lower_candidates.len() - 1, bound.clone());
        upper_candidates.push(bound);
    }
    let lower = pick(&lower_candidates, true);
    let upper = pick(&upper_candidates, false);
    let exact = (lower.value == upper.value).then_some(lower.value);
    Ok(BoundReport {
        lower,
        upper,
        exact,
        lower_candidates,
        upper_candidates,
        known,
        zdcl,
        convention: CONVENTION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::field::Rationals;

    #[test]
    fn connectivity_rule() {
        assert_eq!(tc_upper_conn(7, 1), 8);
        assert_eq!(tc_upper_conn(3, 2), 3);
        assert_eq!(tc_upper_conn(0, 0), 1);
        for m in 2..10 {
            assert_eq!(tc_upper_conn(m, m - 1), 3);
        }
        // integral value 4 for the circle: strictly below means 3
        assert_eq!(tc_upper_conn(1, 0), 3);
    }

    #[test]
    fn simple_rules() {
        assert_eq!(tc_upper_dim(1), 3);
        assert_eq!(tc_upper_dim(0), 1);
        assert_eq!(tc_upper_dim(2), 5);
        assert_eq!(tc_lower_from_zdcl(2), 3);
        assert_eq!(tc_lower_from_zdcl(0), 1);
        assert_eq!(tc_lower_from_zdcl(4), 5);
        assert_eq!([0, 1, 7].map(graph_tc), [1, 2, 3]);
        assert_eq!(product_upper(5, 5), 9);
        assert_eq!(product_upper(1, 4), 4);
        assert_eq!(product_upper(2, 2), 3);
    }

    #[test]
    fn barred_checks_degree() {
        let AnyAlgebra::Rational(s) = Preset::Surface(3).build().unwrap() else { panic!() };
        let f = Rationals;
        let a = s.element("a1").unwrap();
        let abar = barred(&s, &a).unwrap();
        assert!(s.cup(&abar).is_zero());
        assert_eq!(abar.len(), 2);
        assert!(barred(&s, &Element::zero()).unwrap().is_zero());
        let mixed = a.add(&f, &s.element("A").unwrap());
        assert_eq!(barred(&s, &mixed).unwrap_err(), AlgebraError::NotHomogeneous);
        let one = s.element("1").unwrap();
        assert_eq!(barred(&s, &one).unwrap_err(), AlgebraError::DegreeZero);
    }

    fn report(space: &str) -> BoundReport {
        let d: SpaceDescriptor = space.parse().unwrap();
        let alg = d.default_algebra().map(|p| p.build().unwrap());
        bracket(&d, alg.as_ref()).unwrap()
    }

    #[test]
    fn even_sphere_bracket() {
        let r = report("sphere:2");
        assert_eq!((r.lower.value, r.upper.value, r.exact), (3, 3, Some(3)));
        assert_eq!(r.lower.provenance, Provenance::Zdcl);
        assert_eq!(r.upper.provenance, Provenance::Connectivity);
    }

    #[test]
    fn surface_bracket() {
        let r = report("surface:3");
        assert_eq!((r.lower.value, r.upper.value), (5, 5));
        assert_eq!(r.lower.provenance, Provenance::Zdcl);
    }

    #[test]
    fn sphere_cube_bracket() {
        let r = report("sphere:2^3");
        assert_eq!((r.lower.value, r.upper.value, r.exact), (7, 7, Some(7)));
    }

    #[test]
    fn odd_sphere_closed_by_known_value() {
        let r = report("wedge_spheres:1,3");
        assert_eq!(r.exact, Some(2));
        assert_eq!(r.lower.provenance, Provenance::Zdcl);
        assert_eq!(r.upper.provenance, Provenance::KnownValue);
        assert!(r.upper_candidates.iter().any(|b| b.provenance == Provenance::Connectivity && b.value == 3));
    }

    #[test]
    fn mismatched_algebra_is_a_contradiction() {
        let d: SpaceDescriptor = "sphere:2".parse().unwrap();
        let alg = preset("surface:3").unwrap().build().unwrap();
        assert!(matches!(bracket(&d, Some(&alg)), Err(BoundsError::Contradiction { lower: 5, upper: 3, .. })));
    }

    #[test]
    fn no_algebra_uses_baseline() {
        let d: SpaceDescriptor = "torus:5".parse().unwrap();
        let r = bracket(&d, None).unwrap();
        assert_eq!(r.exact, Some(6));
        assert_eq!(r.lower.provenance, Provenance::KnownValue);
        assert_eq!(r.lower_candidates.last().unwrap().provenance, Provenance::Baseline);
    }
}
