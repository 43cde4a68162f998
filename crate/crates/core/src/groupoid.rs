//! Finite discrete groupoids: storage, constructors, validation, isotropy
//! and orbit structure.
//!
//! Arrows are indexed `0..len()`, and the units always occupy the first
//! `unit_count()` indices, so unit `u` and arrow `ArrowId(u)` coincide. That
//! order is also the order `a₁, …, aₙ` used for trace-fiber matrices.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an arrow in a [`FiniteGroupoid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArrowId(pub usize);

impl ArrowId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ArrowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Largest degree accepted by [`FiniteGroupoid::symmetric`].
pub const MAX_SYMMETRIC_DEGREE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    labels: Vec<String>,
    unit_count: usize,
    range: Vec<ArrowId>,
    source: Vec<ArrowId>,
    inverse: Vec<ArrowId>,
    /// Row-major `len() × len()` composition table.
    compose: Vec<Option<ArrowId>>,
    by_range: Vec<Vec<ArrowId>>,
    by_source: Vec<Vec<ArrowId>>,
    /// `fibers[u * n + v]` is `Gᵘ_v`.
    fibers: Vec<Vec<ArrowId>>,
    label_index: HashMap<String, ArrowId>,
}

/// One arrow of a groupoid under construction, in "natural" order.
struct Draft {
    label: String,
    unit: bool,
    range: usize,
    source: usize,
    inverse: usize,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw tables. Only the shape is checked here
    /// (sizes, indices in range, endpoints are units, unique labels); the
    /// groupoid axioms are checked by [`FiniteGroupoid::validate`].
    pub fn from_parts(
        labels: Vec<String>,
        unit_count: usize,
        range: Vec<usize>,
        source: Vec<usize>,
        inverse: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 || unit_count == 0 {
            return Err(Error::EmptyGroupoid);
        }
        if unit_count > n {
            return Err(Error::Malformed(format!("{unit_count} units but only {n} arrows")));
        }
        if range.len() != n || source.len() != n || inverse.len() != n || compose.len() != n * n {
            return Err(Error::Malformed("table sizes do not match the arrow count".into()));
        }
        for (a, (&r, &s)) in range.iter().zip(&source).enumerate() {
            if r >= unit_count || s >= unit_count {
                return Err(Error::Malformed(format!(
                    "range or source of {} is not a unit",
                    labels[a]
                )));
            }
        }
        if inverse.iter().any(|&i| i >= n) || compose.iter().flatten().any(|&c| c >= n) {
            return Err(Error::Malformed("arrow index out of range".into()));
        }
        let mut label_index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), ArrowId(i)).is_some() {
                return Err(Error::Malformed(format!("duplicate arrow label {l:?}")));
            }
        }

        let mut by_range = vec![Vec::new(); unit_count];
        let mut by_source = vec![Vec::new(); unit_count];
        let mut fibers = vec![Vec::new(); unit_count * unit_count];
        for a in 0..n {
            by_range[range[a]].push(ArrowId(a));
            by_source[source[a]].push(ArrowId(a));
            fibers[range[a] * unit_count + source[a]].push(ArrowId(a));
        }

        Ok(FiniteGroupoid {
            labels,
            unit_count,
            range: range.into_iter().map(ArrowId).collect(),
            source: source.into_iter().map(ArrowId).collect(),
            inverse: inverse.into_iter().map(ArrowId).collect(),
            compose: compose.into_iter().map(|c| c.map(ArrowId)).collect(),
            by_range,
            by_source,
            fibers,
            label_index,
        })
    }

    /// Builds from drafts listed in any order, moving units to the front
    /// (stably) and filling the composition table from `compose`, which
    /// works on draft indices.
    fn assemble(drafts: Vec<Draft>, compose: impl Fn(usize, usize) -> Option<usize>) -> Self {
        let order: Vec<usize> = (0..drafts.len())
            .filter(|&i| drafts[i].unit)
            .chain((0..drafts.len()).filter(|&i| !drafts[i].unit))
            .collect();
        let mut position = vec![0; drafts.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let n = drafts.len();
        let unit_count = drafts.iter().filter(|d| d.unit).count();
        let mut table = vec![None; n * n];
        for (na, &a) in order.iter().enumerate() {
            for (nb, &b) in order.iter().enumerate() {
                if drafts[a].source == drafts[b].range {
                    table[na * n + nb] = compose(a, b).map(|c| position[c]);
                }
            }
        }
        let pick = |f: fn(&Draft) -> usize| order.iter().map(|&i| position[f(&drafts[i])]).collect();
        let range = pick(|d| d.range);
        let source = pick(|d| d.source);
        let inverse = pick(|d| d.inverse);
        let labels = order.iter().map(|&i| drafts[i].label.clone()).collect();
        FiniteGroupoid::from_parts(labels, unit_count, range, source, inverse, table)
            .expect("constructor produced a malformed groupoid")
    }

    /// The one-unit groupoid of a finite group given by its multiplication
    /// table `table[a][b] = a·b`. Element labels are the row indices.
    pub fn make_group(table: &[Vec<usize>]) -> Result<Self> {
        let labels = (0..table.len()).map(|i| i.to_string()).collect();
        Self::group_from_table(table, labels)
    }

    fn group_from_table(table: &[Vec<usize>], labels: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::EmptyGroupoid);
        }
        let bad = |msg: String| Err(Error::InvalidGroupTable(msg));
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("table must be square with entries in range".into());
        }
        let Some(e) = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
        else {
            return bad("no identity element".into());
        };
        for (a, b, c) in (0..n).cartesian_product(0..n).cartesian_product(0..n).map(|((a, b), c)| (a, b, c)) {
            if table[table[a][b]][c] != table[a][table[b][c]] {
                return bad(format!("not associative at ({a}, {b}, {c})"));
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == e && table[b][a] == e) {
                Some(b) => inverse[a] = b,
                None => return bad(format!("element {a} has no inverse")),
            }
        }
        let drafts = (0..n)
            .map(|a| Draft { label: labels[a].clone(), unit: a == e, range: e, source: e, inverse: inverse[a] })
            .collect();
        Ok(Self::assemble(drafts, |a, b| Some(table[a][b])))
    }

    /// The cyclic group of order `n`, labelled `e, g1, …, g{n-1}`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroupoid);
        }
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g{k}") }).collect();
        Self::group_from_table(&table, labels)
    }

    /// The symmetric group on `degree` letters. Elements are labelled by
    /// one-line notation (`s213`), composition is `(στ)(x) = σ(τ(x))`.
    pub fn symmetric(degree: usize) -> Result<Self> {
        if degree == 0 || degree > MAX_SYMMETRIC_DEGREE {
            return Err(Error::SymmetricDegree { degree, max: MAX_SYMMETRIC_DEGREE });
        }
        let perms: Vec<Vec<usize>> = (0..degree).permutations(degree).collect();
        let index: HashMap<&Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = t.iter().map(|&x| s[x]).collect();
                        index[&st]
                    })
                    .collect()
            })
            .collect();
        let labels = perms
            .iter()
            .map(|p| format!("s{}", p.iter().map(|x| (x + 1).to_string()).join("")))
            .collect();
        Self::group_from_table(&table, labels)
    }

    /// The pair groupoid `{0..k} × {0..k}`: one arrow `p{i}_{j}` from `j` to
    /// `i` for every ordered pair.
    pub fn pair(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyPairGroupoid);
        }
        let id = |i: usize, j: usize| i * k + j;
        let drafts = (0..k)
            .cartesian_product(0..k)
            .map(|(i, j)| Draft {
                label: format!("p{i}_{j}"),
                unit: i == j,
                range: id(i, i),
                source: id(j, j),
                inverse: id(j, i),
            })
            .collect();
        Ok(Self::assemble(drafts, |a, b| Some(id(a / k, b % k))))
    }

    /// Disjoint union; arrows of `g1` are prefixed `1.`, those of `g2` `2.`.
    pub fn disjoint_union(g1: &Self, g2: &Self) -> Self {
        let n1 = g1.len();
        let mut drafts = Vec::with_capacity(n1 + g2.len());
        for (g, offset, tag) in [(g1, 0, 1), (g2, n1, 2)] {
            for a in g.arrows() {
                drafts.push(Draft {
                    label: format!("{tag}.{}", g.label(a)),
                    unit: g.is_unit(a),
                    range: g.range(a).0 + offset,
                    source: g.source(a).0 + offset,
                    inverse: g.inverse(a).0 + offset,
                });
            }
        }
        Self::assemble(drafts, |a, b| match (a < n1, b < n1) {
            (true, true) => g1.compose(ArrowId(a), ArrowId(b)).map(|c| c.0),
            (false, false) => g2.compose(ArrowId(a - n1), ArrowId(b - n1)).map(|c| c.0 + n1),
            _ => None,
        })
    }

    /// Cartesian product; arrows are labelled `(x,y)`.
    pub fn product(g1: &Self, g2: &Self) -> Self {
        let n2 = g2.len();
        let id = |a: ArrowId, b: ArrowId| a.0 * n2 + b.0;
        let drafts = g1
            .arrows()
            .cartesian_product(g2.arrows())
            .map(|(a, b)| Draft {
                label: format!("({},{})", g1.label(a), g2.label(b)),
                unit: g1.is_unit(a) && g2.is_unit(b),
                range: id(g1.range(a), g2.range(b)),
                source: id(g1.source(a), g2.source(b)),
                inverse: id(g1.inverse(a), g2.inverse(b)),
            })
            .collect();
        Self::assemble(drafts, |x, y| {
            let a = g1.compose(ArrowId(x / n2), ArrowId(y / n2))?;
            let b = g2.compose(ArrowId(x % n2), ArrowId(y % n2))?;
            Some(id(a, b))
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: empty groupoids cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn unit_count(&self) -> usize {
        self.unit_count
    }

    pub fn non_unit_count(&self) -> usize {
        self.len() - self.unit_count
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + Clone {
        (0..self.len()).map(ArrowId)
    }

    pub fn units(&self) -> impl Iterator<Item = ArrowId> + Clone {
        (0..self.unit_count).map(ArrowId)
    }

    pub fn non_units(&self) -> impl Iterator<Item = ArrowId> + Clone {
        (self.unit_count..self.len()).map(ArrowId)
    }

    #[inline]
    pub fn is_unit(&self, a: ArrowId) -> bool {
        a.0 < self.unit_count
    }

    #[inline]
    pub fn range(&self, a: ArrowId) -> ArrowId {
        self.range[a.0]
    }

    #[inline]
    pub fn source(&self, a: ArrowId) -> ArrowId {
        self.source[a.0]
    }

    #[inline]
    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        self.inverse[a.0]
    }

    /// `a·b`, defined when `s(a) = r(b)` (and the table has an entry).
    #[inline]
    pub fn compose(&self, a: ArrowId, b: ArrowId) -> Option<ArrowId> {
        self.compose[a.0 * self.len() + b.0]
    }

    pub fn label(&self, a: ArrowId) -> &str {
        &self.labels[a.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<ArrowId> {
        self.label_index.get(label).copied()
    }

    /// `Gᵘ`: arrows with range `u`.
    pub fn range_fiber(&self, u: ArrowId) -> &[ArrowId] {
        &self.by_range[u.0]
    }

    /// `G_v`: arrows with source `v`.
    pub fn source_fiber(&self, v: ArrowId) -> &[ArrowId] {
        &self.by_source[v.0]
    }

    /// `Gᵘ_v`: arrows from `v` to `u`.
    pub fn fiber(&self, u: ArrowId, v: ArrowId) -> &[ArrowId] {
        &self.fibers[u.0 * self.unit_count + v.0]
    }

    /// Pairs `(α, β)` with `s(α) = r(β)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (ArrowId, ArrowId)> + '_ {
        self.arrows()
            .flat_map(move |a| self.range_fiber(self.source(a)).iter().map(move |&b| (a, b)))
    }

    pub fn is_isotropy(&self, a: ArrowId) -> bool {
        self.range(a) == self.source(a)
    }

    /// `Iso(G) = {γ : r(γ) = s(γ)}`.
    pub fn isotropy(&self) -> Vec<ArrowId> {
        self.arrows().filter(|&a| self.is_isotropy(a)).collect()
    }

    pub fn is_all_isotropy(&self) -> bool {
        self.arrows().all(|a| self.is_isotropy(a))
    }

    /// Number of units `u` with `|Gᵘ_u| > 1`.
    pub fn nontrivial_isotropy_count(&self) -> usize {
        self.units().filter(|&u| self.fiber(u, u).len() > 1).count()
    }

    pub fn is_group(&self) -> bool {
        self.unit_count == 1
    }

    /// Partition of the units by `u ~ v ⟺ Gᵘ_v ≠ ∅`, ordered by least unit.
    pub fn orbits(&self) -> OrbitDecomposition {
        let mut parent: Vec<usize> = (0..self.unit_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for a in self.non_units() {
            let (r, s) = (find(&mut parent, self.range(a).0), find(&mut parent, self.source(a).0));
            if r != s {
                let (lo, hi) = (r.min(s), r.max(s));
                parent[hi] = lo;
            }
        }
        let mut groups: Vec<Vec<ArrowId>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for u in 0..self.unit_count {
            let root = find(&mut parent, u);
            let i = *slot.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[i].push(ArrowId(u));
        }
        OrbitDecomposition {
            orbits: groups
                .into_iter()
                .map(|units| Orbit { isotropy_order: self.fiber(units[0], units[0]).len(), units })
                .collect(),
        }
    }

    /// Checks the groupoid axioms, reporting the first violation found.
    pub fn validate(&self) -> Validation {
        let fail = |kind, arrows: Vec<ArrowId>, message: String| {
            Validation::Fail(Violation { kind, arrows, message })
        };
        let l = |a: ArrowId| self.label(a).to_string();

        for u in self.units() {
            if self.range(u) != u || self.source(u) != u || self.inverse(u) != u {
                return fail(
                    ViolationKind::UnitNotFixed,
                    vec![u],
                    format!("unit {} is not its own range, source and inverse", l(u)),
                );
            }
        }
        for a in self.arrows() {
            if self.inverse(self.inverse(a)) != a {
                return fail(ViolationKind::InverseNotInvolutive, vec![a], format!("inverse is not involutive at {}", l(a)));
            }
            let inv = self.inverse(a);
            if self.range(inv) != self.source(a) || self.source(inv) != self.range(a) {
                return fail(
                    ViolationKind::InverseEndpoints,
                    vec![a],
                    format!("inverse of {} does not swap range and source", l(a)),
                );
            }
        }
        for a in self.arrows() {
            if self.compose(a, self.inverse(a)) != Some(self.range(a)) {
                return fail(ViolationKind::RangeIdentity, vec![a], format!("range identity violated at {}", l(a)));
            }
            if self.compose(self.inverse(a), a) != Some(self.source(a)) {
                return fail(ViolationKind::SourceIdentity, vec![a], format!("source identity violated at {}", l(a)));
            }
        }
        for a in self.arrows() {
            let (r, s) = (self.range(a), self.source(a));
            if self.compose(r, a) != Some(a) || self.compose(a, s) != Some(a) {
                return fail(
                    ViolationKind::UnitNotIdentity,
                    vec![a],
                    format!("units do not act as identities on {}", l(a)),
                );
            }
        }
        for (a, b) in self.arrows().cartesian_product(self.arrows()) {
            let composable = self.source(a) == self.range(b);
            match self.compose(a, b) {
                Some(_) if !composable => {
                    return fail(
                        ViolationKind::CompositionDomain,
                        vec![a, b],
                        format!("composition {}·{} is defined but s({0}) ≠ r({1})", l(a), l(b)),
                    )
                }
                None if composable => {
                    return fail(
                        ViolationKind::CompositionDomain,
                        vec![a, b],
                        format!("composition {}·{} is undefined but s({0}) = r({1})", l(a), l(b)),
                    )
                }
                Some(c) if self.range(c) != self.range(a) || self.source(c) != self.source(b) => {
                    return fail(
                        ViolationKind::CompositionEndpoints,
                        vec![a, b],
                        format!("composition {}·{} has the wrong range or source", l(a), l(b)),
                    )
                }
                _ => {}
            }
        }
        for (a, b) in self.composable_pairs() {
            let ab = self.compose(a, b).expect("checked above");
            for &c in self.range_fiber(self.source(b)) {
                let bc = self.compose(b, c).expect("checked above");
                if self.compose(ab, c) != self.compose(a, bc) {
                    return fail(
                        ViolationKind::Associativity,
                        vec![a, b, c],
                        format!("associativity violated at ({}, {}, {})", l(a), l(b), l(c)),
                    );
                }
            }
        }
        for a in self.non_units() {
            if self.compose(a, a) == Some(a) {
                return fail(ViolationKind::IdempotentNonUnit, vec![a], format!("non-unit arrow {} is idempotent", l(a)));
            }
        }
        Validation::Pass
    }

    pub fn to_json(&self) -> GroupoidJson {
        GroupoidJson {
            units: self.units().map(|u| self.label(u).to_string()).collect(),
            arrows: self
                .non_units()
                .map(|a| ArrowJson {
                    id: self.label(a).to_string(),
                    range: self.label(self.range(a)).to_string(),
                    source: self.label(self.source(a)).to_string(),
                    inverse: self.label(self.inverse(a)).to_string(),
                })
                .collect(),
            compose: self
                .composable_pairs()
                .filter_map(|(a, b)| {
                    let c = self.compose(a, b)?;
                    Some([self.label(a), self.label(b), self.label(c)].map(str::to_string))
                })
                .collect(),
        }
    }

    /// Reads the JSON description. Units may be omitted from `arrows`, in
    /// which case they are their own range, source and inverse.
    pub fn from_json(desc: &GroupoidJson) -> Result<Self> {
        if desc.units.is_empty() {
            return Err(Error::EmptyGroupoid);
        }
        let mut labels: Vec<String> = desc.units.clone();
        let unit_count = labels.len();
        let mut entries: HashMap<&str, &ArrowJson> = HashMap::new();
        for arrow in &desc.arrows {
            if entries.insert(&arrow.id, arrow).is_some() {
                return Err(Error::Malformed(format!("arrow {:?} listed twice", arrow.id)));
            }
            if !desc.units.contains(&arrow.id) {
                labels.push(arrow.id.clone());
            }
        }
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| Error::UnknownArrow(name.to_string()))
        };
        let n = labels.len();
        let (mut range, mut source, mut inverse) = ((0..n).collect::<Vec<_>>(), (0..n).collect::<Vec<_>>(), (0..n).collect::<Vec<_>>());
        for (i, label) in labels.iter().enumerate() {
            match entries.get(label.as_str()) {
                Some(arrow) => {
                    range[i] = lookup(&arrow.range)?;
                    source[i] = lookup(&arrow.source)?;
                    inverse[i] = lookup(&arrow.inverse)?;
                }
                None if i < unit_count => {}
                None => unreachable!("non-unit labels come from the arrow list"),
            }
        }
        let mut compose = vec![None; n * n];
        for [a, b, c] in &desc.compose {
            let slot = &mut compose[lookup(a)? * n + lookup(b)?];
            if slot.is_some() {
                return Err(Error::Malformed(format!("composition {a}·{b} listed twice")));
            }
            *slot = Some(lookup(c)?);
        }
        Self::from_parts(labels, unit_count, range, source, inverse, compose)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let desc: GroupoidJson = serde_json::from_str(text)?;
        Self::from_json(&desc)
    }
}

/// JSON description of a groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidJson {
    pub units: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: String,
    pub range: String,
    pub source: String,
    pub inverse: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub units: Vec<ArrowId>,
    pub isotropy_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    UnitNotFixed,
    InverseNotInvolutive,
    InverseEndpoints,
    RangeIdentity,
    SourceIdentity,
    UnitNotIdentity,
    CompositionDomain,
    CompositionEndpoints,
    Associativity,
    IdempotentNonUnit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub arrows: Vec<ArrowId>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Pass,
    Fail(Violation),
}

impl Validation {
    pub fn is_pass(&self) -> bool {
        matches!(self, Validation::Pass)
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validation::Pass => write!(f, "pass"),
            Validation::Fail(v) => write!(f, "fail: {}", v.message),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2z2() -> FiniteGroupoid {
        let z2 = FiniteGroupoid::cyclic(2).unwrap();
        FiniteGroupoid::disjoint_union(&z2, &z2)
    }

    #[test]
    fn pair_two_passes_validation() {
        let g = FiniteGroupoid::pair(2).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.unit_count(), 2);
        assert_eq!(g.validate(), Validation::Pass);
    }

    #[test]
    fn rewired_inverse_composition_is_reported() {
        let g = FiniteGroupoid::pair(2).unwrap();
        let gamma = g.arrow_by_label("p0_1").unwrap();
        let mut desc = g.to_json();
        for triple in desc.compose.iter_mut() {
            if triple[0] == "p0_1" && triple[1] == "p1_0" {
                triple[2] = "p1_1".into();
            }
        }
        let broken = FiniteGroupoid::from_json(&desc).unwrap();
        match broken.validate() {
            Validation::Fail(v) => {
                assert_eq!(v.kind, ViolationKind::RangeIdentity);
                assert_eq!(v.arrows, vec![gamma]);
                assert_eq!(v.message, "range identity violated at p0_1");
            }
            Validation::Pass => panic!("broken groupoid passed"),
        }
    }

    #[test]
    fn z2_union_z2_shape() {
        let g = z2z2();
        assert!(g.validate().is_pass());
        assert_eq!((g.len(), g.unit_count()), (4, 2));
        assert!(g.is_all_isotropy());
        assert_eq!(g.nontrivial_isotropy_count(), 2);
    }

    #[test]
    fn group_constructors() {
        let z3 = FiniteGroupoid::cyclic(3).unwrap();
        assert_eq!((z3.len(), z3.unit_count()), (3, 1));
        let trivial = FiniteGroupoid::cyclic(1).unwrap();
        assert_eq!((trivial.len(), trivial.unit_count()), (1, 1));
        let s3 = FiniteGroupoid::symmetric(3).unwrap();
        assert_eq!((s3.len(), s3.unit_count()), (6, 1));
        assert!(s3.validate().is_pass());
        assert!(matches!(FiniteGroupoid::symmetric(0), Err(Error::SymmetricDegree { .. })));
    }

    #[test]
    fn make_group_rejects_bad_tables() {
        let z3: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        let g = FiniteGroupoid::make_group(&z3).unwrap();
        assert_eq!((g.len(), g.unit_count()), (3, 1));
        assert!(g.validate().is_pass());

        // a·b = a is associative but has no two-sided identity
        let left_zero = vec![vec![0, 0], vec![1, 1]];
        assert!(matches!(FiniteGroupoid::make_group(&left_zero), Err(Error::InvalidGroupTable(_))));
        // a·b = a - b mod 3: identity fails on the left
        let minus: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + 3 - b) % 3).collect()).collect();
        assert!(FiniteGroupoid::make_group(&minus).is_err());
        // {0, 1} with 1·1 = 1: monoid without inverse
        let monoid = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(FiniteGroupoid::make_group(&monoid), Err(Error::InvalidGroupTable(m)) if m.contains("inverse")));
        // Latin square with identity 0 but not associative
        let latin = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroupoid::make_group(&latin), Err(Error::InvalidGroupTable(m)) if m.contains("associative")));
        assert!(matches!(FiniteGroupoid::make_group(&[]), Err(Error::EmptyGroupoid)));
    }

    #[test]
    fn pair_counts() {
        assert!(matches!(FiniteGroupoid::pair(0), Err(Error::EmptyPairGroupoid)));
        let p1 = FiniteGroupoid::pair(1).unwrap();
        assert_eq!((p1.len(), p1.unit_count()), (1, 1));
        for k in 2..=4 {
            let g = FiniteGroupoid::pair(k).unwrap();
            assert_eq!(g.len(), k * k);
            assert_eq!(g.non_unit_count(), k * k - k);
            for u in g.units() {
                for v in g.units() {
                    assert_eq!(g.fiber(u, v).len(), 1);
                }
            }
        }
    }

    #[test]
    fn union_and_product_counts() {
        let t = FiniteGroupoid::cyclic(1).unwrap();
        let tt = FiniteGroupoid::disjoint_union(&t, &t);
        assert_eq!((tt.len(), tt.unit_count()), (2, 2));
        assert_eq!(tt.non_unit_count(), 0);

        let p = FiniteGroupoid::product(&FiniteGroupoid::pair(2).unwrap(), &FiniteGroupoid::cyclic(2).unwrap());
        assert!(p.validate().is_pass());
        assert_eq!((p.len(), p.unit_count()), (8, 2));
        assert_eq!(p.orbits().orbits.len(), 1);
    }

    #[test]
    fn isotropy_examples() {
        let p2 = FiniteGroupoid::pair(2).unwrap();
        assert_eq!(p2.isotropy(), p2.units().collect::<Vec<_>>());
        assert_eq!(p2.nontrivial_isotropy_count(), 0);
        let z2 = FiniteGroupoid::cyclic(2).unwrap();
        let g = FiniteGroupoid::disjoint_union(&z2, &FiniteGroupoid::cyclic(1).unwrap());
        assert!(g.is_all_isotropy());
        assert_eq!(g.nontrivial_isotropy_count(), 1);
    }

    // brute force: u ~ v iff some arrow joins them, closed transitively
    fn orbit_oracle(g: &FiniteGroupoid) -> Vec<(Vec<usize>, usize)> {
        let n = g.unit_count();
        let mut reach = vec![vec![false; n]; n];
        for (u, row) in reach.iter_mut().enumerate() {
            for (v, cell) in row.iter_mut().enumerate() {
                *cell = !g.fiber(ArrowId(u), ArrowId(v)).is_empty();
            }
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for u in 0..n {
            if seen[u] {
                continue;
            }
            let class: Vec<usize> = (0..n).filter(|&v| reach[u][v]).collect();
            for &v in &class {
                seen[v] = true;
            }
            out.push((class, g.fiber(ArrowId(u), ArrowId(u)).len()));
        }
        out
    }

    #[test]
    fn orbit_examples() {
        let cases = [
            (FiniteGroupoid::pair(3).unwrap(), vec![(vec![0, 1, 2], 1)]),
            (z2z2(), vec![(vec![0], 2), (vec![1], 2)]),
            (
                FiniteGroupoid::product(&FiniteGroupoid::pair(2).unwrap(), &FiniteGroupoid::cyclic(2).unwrap()),
                vec![(vec![0, 1], 2)],
            ),
        ];
        for (g, expected) in cases {
            assert_eq!(orbit_oracle(&g), expected);
            let got: Vec<(Vec<usize>, usize)> = g
                .orbits()
                .orbits
                .into_iter()
                .map(|o| (o.units.into_iter().map(|u| u.0).collect(), o.isotropy_order))
                .collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroupoid::product(&FiniteGroupoid::pair(2).unwrap(), &FiniteGroupoid::cyclic(3).unwrap());
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = FiniteGroupoid::from_json_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_rejects_structural_errors() {
        let bad = r#"{"units": ["u"], "arrows": [{"id": "x", "range": "u", "source": "nope", "inverse": "x"}], "compose": []}"#;
        assert!(matches!(FiniteGroupoid::from_json_str(bad), Err(Error::UnknownArrow(_))));
        let empty = r#"{"units": [], "arrows": [], "compose": []}"#;
        assert!(matches!(FiniteGroupoid::from_json_str(empty), Err(Error::EmptyGroupoid)));
        let non_unit_range = r#"{"units": ["u"], "arrows": [{"id": "x", "range": "x", "source": "u", "inverse": "x"}], "compose": []}"#;
        assert!(matches!(FiniteGroupoid::from_json_str(non_unit_range), Err(Error::Malformed(_))));
    }

    #[test]
    fn missing_unit_compositions_fail_validation() {
        let text = r#"{"units": ["u"], "arrows": [], "compose": []}"#;
        let g = FiniteGroupoid::from_json_str(text).unwrap();
        assert!(!g.validate().is_pass());
    }
}
