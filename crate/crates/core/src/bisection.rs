//! Bisections and the topological full group `F(G)` of a finite discrete
//! groupoid.
//!
//! A full bisection picks exactly one arrow out of each source fiber, with
//! the ranges again covering every unit. Such a choice is the same thing as a
//! permutation `σ` of the units that preserves orbits together with an arrow
//! in `G^{σ(u)}_u` for each `u`, and enumeration runs orbit by orbit on that
//! description.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid};

/// Default cap on `|F(G)|` for enumeration.
pub const DEFAULT_FULL_GROUP_CAP: usize = 5000;
/// Default cap on `|G|` for exhaustive enumeration of all bisections.
pub const DEFAULT_BISECTION_ARROW_CAP: usize = 16;

/// A set of arrows on which range and source are both injective, stored
/// as a sorted arrow list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Bisection(Vec<ArrowId>);

impl Bisection {
    pub fn new(g: &FiniteGroupoid, arrows: impl IntoIterator<Item = ArrowId>) -> Result<Self> {
        let mut arrows: Vec<ArrowId> = arrows.into_iter().collect();
        arrows.sort_unstable();
        arrows.dedup();
        if let Some(a) = arrows.iter().find(|a| a.0 >= g.len()) {
            return Err(Error::UnknownArrow(a.to_string()));
        }
        let ranges = arrows.iter().map(|&a| g.range(a)).unique().count();
        let sources = arrows.iter().map(|&a| g.source(a)).unique().count();
        if ranges != arrows.len() || sources != arrows.len() {
            return Err(Error::Precondition(format!(
                "{} is not a bisection",
                describe_arrows(g, &arrows)
            )));
        }
        Ok(Bisection(arrows))
    }

    pub fn empty() -> Self {
        Bisection(Vec::new())
    }

    /// Wraps an already sorted arrow list known to be a bisection.
    fn from_sorted(arrows: Vec<ArrowId>) -> Self {
        debug_assert!(arrows.windows(2).all(|w| w[0] < w[1]));
        Bisection(arrows)
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    /// `r(B)` as a sorted unit list.
    pub fn range_set(&self, g: &FiniteGroupoid) -> Vec<ArrowId> {
        self.0.iter().map(|&a| g.range(a)).sorted().collect()
    }

    /// `s(B)` as a sorted unit list.
    pub fn source_set(&self, g: &FiniteGroupoid) -> Vec<ArrowId> {
        self.0.iter().map(|&a| g.source(a)).sorted().collect()
    }

    pub fn is_full(&self, g: &FiniteGroupoid) -> bool {
        self.len() == g.unit_count()
    }

    /// `AB = {αβ : (α, β) ∈ (A × B) ∩ G⁽²⁾}`.
    pub fn product(&self, g: &FiniteGroupoid, other: &Bisection) -> Bisection {
        let mut out: Vec<ArrowId> = self
            .0
            .iter()
            .cartesian_product(&other.0)
            .filter_map(|(&a, &b)| g.compose(a, b))
            .collect();
        out.sort_unstable();
        Bisection::from_sorted(out)
    }

    pub fn inverse(&self, g: &FiniteGroupoid) -> Bisection {
        let mut out: Vec<ArrowId> = self.0.iter().map(|&a| g.inverse(a)).collect();
        out.sort_unstable();
        Bisection::from_sorted(out)
    }

    pub fn describe(&self, g: &FiniteGroupoid) -> String {
        describe_arrows(g, &self.0)
    }
}

pub(crate) fn describe_arrows(g: &FiniteGroupoid, arrows: &[ArrowId]) -> String {
    format!("{{{}}}", arrows.iter().map(|&a| g.label(a)).join(", "))
}

/// An element of `F(G)`: a bisection with `r(B) = s(B) = G⁰`.
///
/// Ordered lexicographically on the sorted arrow list; `G⁰` is always the
/// least element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FullBisection(Bisection);

impl FullBisection {
    pub fn new(g: &FiniteGroupoid, arrows: impl IntoIterator<Item = ArrowId>) -> Result<Self> {
        let b = Bisection::new(g, arrows)?;
        Self::try_from_bisection(g, b)
    }

    pub fn try_from_bisection(g: &FiniteGroupoid, b: Bisection) -> Result<Self> {
        if b.is_full(g) {
            Ok(FullBisection(b))
        } else {
            Err(Error::NotFullBisection(b.describe(g)))
        }
    }

    /// The unit space `G⁰`, identity of `F(G)`.
    pub fn identity(g: &FiniteGroupoid) -> Self {
        FullBisection(Bisection::from_sorted(g.units().collect()))
    }

    pub fn as_bisection(&self) -> &Bisection {
        &self.0
    }

    pub fn arrows(&self) -> &[ArrowId] {
        self.0.arrows()
    }

    pub fn is_identity(&self, g: &FiniteGroupoid) -> bool {
        self.arrows().iter().all(|&a| g.is_unit(a))
    }

    fn belongs_to(&self, g: &FiniteGroupoid) -> bool {
        self.arrows().len() == g.unit_count()
            && self.arrows().iter().all(|a| a.0 < g.len())
            && self.arrows().iter().map(|&a| g.source(a)).all_unique()
            && self.arrows().iter().map(|&a| g.range(a)).all_unique()
    }

    /// The set product; `O(|G⁰|)` using the source lookup of `self`.
    pub fn multiply(&self, g: &FiniteGroupoid, other: &FullBisection) -> Result<FullBisection> {
        if !self.belongs_to(g) || !other.belongs_to(g) {
            return Err(Error::Precondition("full bisections of a different groupoid".into()));
        }
        Ok(self.multiply_unchecked(g, other))
    }

    pub(crate) fn multiply_unchecked(&self, g: &FiniteGroupoid, other: &FullBisection) -> FullBisection {
        let mut by_source = vec![ArrowId(usize::MAX); g.unit_count()];
        for &a in self.arrows() {
            by_source[g.source(a).0] = a;
        }
        let mut out: Vec<ArrowId> = other
            .arrows()
            .iter()
            .map(|&b| {
                let a = by_source[g.range(b).0];
                g.compose(a, b).expect("full bisections compose")
            })
            .collect();
        out.sort_unstable();
        FullBisection(Bisection::from_sorted(out))
    }

    pub fn inverse(&self, g: &FiniteGroupoid) -> FullBisection {
        FullBisection(self.0.inverse(g))
    }

    pub fn describe(&self, g: &FiniteGroupoid) -> String {
        self.0.describe(g)
    }
}

impl fmt::Display for FullBisection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.arrows().iter().map(|a| a.0).join(" "))
    }
}

/// `|F(G)| = Π_O k_O! · h_O^{k_O}` over orbits of size `k_O` with isotropy
/// order `h_O`.
pub fn full_group_order(g: &FiniteGroupoid) -> BigUint {
    g.orbits().orbits.iter().fold(BigUint::one(), |acc, orbit| {
        let k = orbit.units.len();
        let factorial: BigUint = (1..=k).map(BigUint::from).product();
        acc * factorial * BigUint::from(orbit.isotropy_order).pow(k as u32)
    })
}

/// Every full bisection of `g`, once each, in canonical order. Fails with
/// [`Error::EnumerationTooLarge`] when `|F(G)|` exceeds `cap`.
pub fn enumerate_full_bisections(g: &FiniteGroupoid, cap: usize) -> Result<Vec<FullBisection>> {
    let order = full_group_order(g);
    if order.to_usize().is_none_or(|n| n > cap) {
        return Err(Error::EnumerationTooLarge { what: "F(G)", size: order.to_string(), cap });
    }
    let per_orbit: Vec<Vec<Vec<ArrowId>>> =
        g.orbits().orbits.iter().map(|orbit| orbit_choices(g, &orbit.units)).collect();
    let mut out: Vec<FullBisection> = per_orbit
        .iter()
        .map(|choices| choices.iter())
        .multi_cartesian_product()
        .map(|parts| {
            let mut arrows: Vec<ArrowId> = parts.into_iter().flatten().copied().collect();
            arrows.sort_unstable();
            FullBisection(Bisection::from_sorted(arrows))
        })
        .collect();
    // multi_cartesian_product of zero iterators yields nothing, but orbits
    // are never empty for a nonempty groupoid
    out.sort_unstable();
    Ok(out)
}

/// All arrow sets `{γ_u ∈ G^{σ(u)}_u : u ∈ O}` for permutations `σ` of one
/// orbit `O`.
fn orbit_choices(g: &FiniteGroupoid, units: &[ArrowId]) -> Vec<Vec<ArrowId>> {
    let mut out = Vec::new();
    for sigma in units.iter().copied().permutations(units.len()) {
        let fibers: Vec<&[ArrowId]> = units.iter().zip(&sigma).map(|(&u, &v)| g.fiber(v, u)).collect();
        if fibers.iter().any(|f| f.is_empty()) {
            continue;
        }
        for choice in fibers.iter().map(|f| f.iter().copied()).multi_cartesian_product() {
            out.push(choice);
        }
    }
    out
}

/// Every bisection of `g` (including the empty one), in canonical order.
/// Exhaustive, so `|G|` must be at most `arrow_cap`.
pub fn enumerate_bisections(g: &FiniteGroupoid, arrow_cap: usize) -> Result<Vec<Bisection>> {
    if g.len() > arrow_cap {
        return Err(Error::EnumerationTooLarge { what: "G (for bisection enumeration)", size: g.len().to_string(), cap: arrow_cap });
    }
    fn walk(g: &FiniteGroupoid, unit: usize, used: &mut [bool], current: &mut Vec<ArrowId>, out: &mut Vec<Bisection>) {
        if unit == g.unit_count() {
            let mut arrows = current.clone();
            arrows.sort_unstable();
            out.push(Bisection::from_sorted(arrows));
            return;
        }
        walk(g, unit + 1, used, current, out);
        for &a in g.source_fiber(ArrowId(unit)) {
            let r = g.range(a).0;
            if !used[r] {
                used[r] = true;
                current.push(a);
                walk(g, unit + 1, used, current, out);
                current.pop();
                used[r] = false;
            }
        }
    }
    let mut out = Vec::new();
    walk(g, 0, &mut vec![false; g.unit_count()], &mut Vec::new(), &mut out);
    out.sort_unstable();
    Ok(out)
}

/// `F(G)` with its elements indexed in canonical order (index 0 is `G⁰`).
#[derive(Clone, Debug)]
pub struct FullGroup {
    elements: Vec<FullBisection>,
    index: HashMap<FullBisection, usize>,
}

impl FullGroup {
    pub fn new(g: &FiniteGroupoid, cap: usize) -> Result<Self> {
        let elements = enumerate_full_bisections(g, cap)?;
        let index = elements.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        Ok(FullGroup { elements, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[FullBisection] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> Option<&FullBisection> {
        self.elements.get(i)
    }

    pub fn index_of(&self, b: &FullBisection) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// Multiplication table by index, `table[i][j] = index(Uᵢ·Uⱼ)`.
    pub fn cayley_table(&self, g: &FiniteGroupoid) -> Vec<Vec<usize>> {
        self.elements
            .iter()
            .map(|a| self.elements.iter().map(|b| self.index[&a.multiply_unchecked(g, b)]).collect())
            .collect()
    }
}
