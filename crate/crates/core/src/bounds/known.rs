//! Table of known TC values. Each row states the claim it encodes so an
//! exact value in a report can always be traced to a statement.

use serde::Serialize;

use super::{SpaceDescriptor, SpaceKind};

/// A row of the table that matched a space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnownValue {
    pub value: u32,
    pub family: &'static str,
    pub formula: &'static str,
    pub claim: &'static str,
}

pub struct KnownRow {
    pub family: &'static str,
    pub formula: &'static str,
    pub claim: &'static str,
    eval: fn(&SpaceKind) -> Option<u32>,
}

impl KnownRow {
    pub fn eval(&self, kind: &SpaceKind) -> Option<u32> {
        (self.eval)(kind)
    }
}

/// Number of circle factors when the space is a torus `T^n`.
fn torus_rank(kind: &SpaceKind) -> Option<u32> {
    match kind {
        SpaceKind::Torus { n } => Some(*n),
        SpaceKind::Sphere { m: 1 } | SpaceKind::WedgeSpheres { n: 1, m: 1 } | SpaceKind::Graph { b1: 1 } => Some(1),
        SpaceKind::Product { factors } => factors.iter().map(|f| torus_rank(&f.kind)).sum(),
        _ => None,
    }
}

/// `n` when the space is `(S^2)^n`.
fn sphere2_power(kind: &SpaceKind) -> Option<u32> {
    match kind {
        SpaceKind::Sphere { m: 2 } | SpaceKind::Surface { g: 0 } | SpaceKind::WedgeSpheres { n: 1, m: 2 } => Some(1),
        SpaceKind::Product { factors } => factors.iter().map(|f| sphere2_power(&f.kind)).sum(),
        _ => None,
    }
}

/// `n` when the space is the `n`-fold power of a genus-3 surface.
fn genus3_power(kind: &SpaceKind) -> Option<u32> {
    match kind {
        SpaceKind::Surface { g: 3 } => Some(1),
        SpaceKind::Product { factors } => factors.iter().map(|f| genus3_power(&f.kind)).sum(),
        _ => None,
    }
}

fn contractible(kind: &SpaceKind) -> bool {
    match kind {
        SpaceKind::Point | SpaceKind::Graph { b1: 0 } => true,
        SpaceKind::Product { factors } => factors.iter().all(|f| contractible(&f.kind)),
        _ => false,
    }
}

pub static KNOWN_VALUES: &[KnownRow] = &[
    KnownRow {
        family: "contractible",
        formula: "1",
        claim: "a contractible space admits a single global continuous motion planning rule",
        eval: |k| contractible(k).then_some(1),
    },
    KnownRow {
        family: "SE(3)",
        formula: "4",
        claim: "TC(SE(3)) = cat(SE(3)) = cat(RP^3) = 4: TC equals LS category for connected Lie groups and cat(RP^n) = n + 1",
        eval: |k| matches!(k, SpaceKind::Se3).then_some(4),
    },
    KnownRow {
        family: "torus T^n",
        formula: "n + 1",
        claim: "TC(T^n) = n + 1",
        eval: |k| torus_rank(k).map(|n| n + 1),
    },
    KnownRow {
        family: "(S^2)^n",
        formula: "2n + 1",
        claim: "TC((S^2)^n) = 2n + 1 (spatial robot arm with n links)",
        eval: |k| sphere2_power(k).map(|n| 2 * n + 1),
    },
    KnownRow {
        family: "wedge of n m-spheres",
        formula: "2 if n = 1 and m odd, else 3",
        claim: "TC of a wedge of n m-spheres is 2 if n = 1 and m is odd, and 3 otherwise",
        eval: |k| match k {
            SpaceKind::WedgeSpheres { n, m } => Some(if *n == 1 && m % 2 == 1 { 2 } else { 3 }),
            SpaceKind::Sphere { m } => Some(if m % 2 == 1 { 2 } else { 3 }),
            _ => None,
        },
    },
    KnownRow {
        family: "genus-3 surface",
        formula: "5",
        claim: "TC of the closed orientable surface of genus 3 is 5",
        eval: |k| matches!(k, SpaceKind::Surface { g: 3 }).then_some(5),
    },
    KnownRow {
        family: "power of the genus-3 surface",
        formula: "4n + 1",
        claim: "TC(S^n) = 4n + 1 for the n-fold power of the genus-3 surface S",
        eval: |k| match k {
            SpaceKind::Product { .. } => genus3_power(k).map(|n| 4 * n + 1),
            _ => None,
        },
    },
];

/// First table row matching the space, if any.
pub fn known_value(desc: &SpaceDescriptor) -> Option<KnownValue> {
    KNOWN_VALUES.iter().find_map(|row| {
        row.eval(&desc.kind).map(|value| KnownValue {
            value,
            family: row.family,
            formula: row.formula,
            claim: row.claim,
        })
    })
}
