//! The group ring `ℂF(G)`, the Steinberg algebra `A(G) = C_c(G)`, the
//! representation `π: δ_U ↦ 1_U`, the pushforwards `r_*`, `s_*`, `δ₁`, and
//! the trace-fiber representation `T: A(G) → M_n`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::bisection::{Bisection, FullBisection};
use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid};
use crate::scalar::Scalar;

/// A function `G → ℂ`, stored densely by arrow index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SteinbergElement {
    values: Vec<Scalar>,
}

impl SteinbergElement {
    pub fn zero(g: &FiniteGroupoid) -> Self {
        SteinbergElement { values: vec![Scalar::ZERO; g.len()] }
    }

    pub fn from_values(values: Vec<Scalar>) -> Self {
        SteinbergElement { values }
    }

    /// `1_γ`.
    pub fn point(g: &FiniteGroupoid, a: ArrowId) -> Self {
        let mut f = Self::zero(g);
        f.values[a.0] = Scalar::ONE;
        f
    }

    /// `1_B` for an arbitrary arrow set.
    pub fn indicator(g: &FiniteGroupoid, arrows: &[ArrowId]) -> Self {
        let mut f = Self::zero(g);
        for &a in arrows {
            f.values[a.0] = Scalar::ONE;
        }
        f
    }

    pub fn of_bisection(g: &FiniteGroupoid, b: &Bisection) -> Self {
        Self::indicator(g, b.arrows())
    }

    /// `1_{G⁰}`, the unit of `A(G)`.
    pub fn unit(g: &FiniteGroupoid) -> Self {
        Self::indicator(g, &g.units().collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn get(&self, a: ArrowId) -> &Scalar {
        &self.values[a.0]
    }

    pub fn set(&mut self, a: ArrowId, value: Scalar) {
        self.values[a.0] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// `supp(f)`.
    pub fn support(&self) -> Vec<ArrowId> {
        (0..self.len()).filter(|&i| !self.values[i].is_zero()).map(ArrowId).collect()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SteinbergElement { values: self.values.iter().map(|v| v * c).collect() }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::GroupoidMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }

    fn check_for(&self, g: &FiniteGroupoid) -> Result<()> {
        if self.len() != g.len() {
            return Err(Error::GroupoidMismatch { left: self.len(), right: g.len() });
        }
        Ok(())
    }

    pub fn describe(&self, g: &FiniteGroupoid) -> String {
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .map(|a| format!("({})·1_{}", self.values[a.0], g.label(a)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl Add for &SteinbergElement {
    type Output = SteinbergElement;
    fn add(self, rhs: &SteinbergElement) -> SteinbergElement {
        assert_eq!(self.len(), rhs.len(), "elements of different groupoids");
        SteinbergElement { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &SteinbergElement {
    type Output = SteinbergElement;
    fn sub(self, rhs: &SteinbergElement) -> SteinbergElement {
        assert_eq!(self.len(), rhs.len(), "elements of different groupoids");
        SteinbergElement { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &SteinbergElement {
    type Output = SteinbergElement;
    fn neg(self) -> SteinbergElement {
        SteinbergElement { values: self.values.iter().map(|v| -v).collect() }
    }
}

/// `(f ∗ h)(γ) = Σ_{αβ = γ} f(α) h(β)`, summed over the composable pairs in
/// `supp f × supp h`.
pub fn convolve(g: &FiniteGroupoid, f: &SteinbergElement, h: &SteinbergElement) -> Result<SteinbergElement> {
    f.check_same(h)?;
    f.check_for(g)?;
    let mut out = SteinbergElement::zero(g);
    for a in f.support() {
        let fa = &f.values[a.0];
        for &b in g.range_fiber(g.source(a)) {
            let hb = &h.values[b.0];
            if hb.is_zero() {
                continue;
            }
            let ab = g.compose(a, b).expect("composable pair");
            out.values[ab.0].add_product(fa, hb);
        }
    }
    Ok(out)
}

/// `f*(γ) = conj(f(γ⁻¹))`.
pub fn involute(g: &FiniteGroupoid, f: &SteinbergElement) -> Result<SteinbergElement> {
    f.check_for(g)?;
    Ok(SteinbergElement { values: g.arrows().map(|a| f.values[g.inverse(a).0].conj()).collect() })
}

/// `r_*f(u) = Σ_{γ ∈ Gᵘ} f(γ)`, as a function supported on units.
pub fn r_star(g: &FiniteGroupoid, f: &SteinbergElement) -> Result<SteinbergElement> {
    f.check_for(g)?;
    let mut out = SteinbergElement::zero(g);
    for u in g.units() {
        out.values[u.0] = g.range_fiber(u).iter().map(|&a| &f.values[a.0]).sum();
    }
    Ok(out)
}

/// `s_*f(u) = Σ_{γ ∈ G_u} f(γ)`, as a function supported on units.
pub fn s_star(g: &FiniteGroupoid, f: &SteinbergElement) -> Result<SteinbergElement> {
    f.check_for(g)?;
    let mut out = SteinbergElement::zero(g);
    for u in g.units() {
        out.values[u.0] = g.source_fiber(u).iter().map(|&a| &f.values[a.0]).sum();
    }
    Ok(out)
}

/// `δ₁ = s_* − r_*`.
pub fn delta1(g: &FiniteGroupoid, f: &SteinbergElement) -> Result<SteinbergElement> {
    Ok(&s_star(g, f)? - &r_star(g, f)?)
}

/// The components `f_{i,j} = f · 1_{G^{a_i}_{a_j}}`, indexed `[i][j]`.
pub fn decompose_fij(g: &FiniteGroupoid, f: &SteinbergElement) -> Result<Vec<Vec<SteinbergElement>>> {
    f.check_for(g)?;
    Ok(g.units()
        .map(|u| {
            g.units()
                .map(|v| {
                    let mut part = SteinbergElement::zero(g);
                    for &a in g.fiber(u, v) {
                        part.values[a.0] = f.values[a.0].clone();
                    }
                    part
                })
                .collect()
        })
        .collect())
}

/// An element of `ℂF(G)`: finitely many nonzero coefficients on full
/// bisections. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    terms: BTreeMap<FullBisection, Scalar>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The point mass `δ_U`.
    pub fn delta(u: FullBisection) -> Self {
        let mut x = Self::zero();
        x.add_term(u, Scalar::ONE);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (FullBisection, Scalar)>) -> Self {
        let mut x = Self::zero();
        for (u, c) in terms {
            x.add_term(u, c);
        }
        x
    }

    pub fn add_term(&mut self, u: FullBisection, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(u) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FullBisection, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, u: &FullBisection) -> Scalar {
        self.terms.get(u).cloned().unwrap_or(Scalar::ZERO)
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(u, v)| (u.clone(), v * c)))
    }

    /// Product in `ℂF(G)`: `δ_U δ_V = δ_{UV}`.
    pub fn mul(&self, g: &FiniteGroupoid, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.multiply(g, v)?, a * b);
            }
        }
        Ok(out)
    }

    /// `(Σ c_U δ_U)* = Σ conj(c_U) δ_{U⁻¹}`.
    pub fn star(&self, g: &FiniteGroupoid) -> Self {
        Self::from_terms(self.terms.iter().map(|(u, c)| (u.inverse(g), c.conj())))
    }

    pub fn describe(&self, g: &FiniteGroupoid) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(u, c)| format!("({c})·δ{}", u.describe(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (u, c) in &rhs.terms {
            out.add_term(u.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (u, c) in &rhs.terms {
            out.add_term(u.clone(), -c);
        }
        out
    }
}

/// `π(Σ c_U δ_U) = Σ c_U 1_U`.
pub fn pi(g: &FiniteGroupoid, x: &GroupRingElement) -> Result<SteinbergElement> {
    let mut out = SteinbergElement::zero(g);
    for (u, c) in x.terms() {
        for &a in u.arrows() {
            if a.0 >= g.len() {
                return Err(Error::UnknownArrow(a.to_string()));
            }
            out.values[a.0] += c;
        }
    }
    Ok(out)
}

/// Square matrix over Gaussian rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl ComplexMatrix {
    pub fn zero(n: usize) -> Self {
        ComplexMatrix { n, entries: vec![Scalar::ZERO; n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        ComplexMatrix { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn row_sums(&self) -> Vec<Scalar> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<Scalar> {
        (0..self.n).map(|j| (0..self.n).map(|i| self.get(i, j)).sum()).collect()
    }

    /// The common value of every row and column sum, if there is one.
    pub fn common_line_sum(&self) -> Option<Scalar> {
        let rows = self.row_sums();
        let cols = self.column_sums();
        let first = rows.first()?.clone();
        rows.iter().chain(&cols).all(|s| *s == first).then_some(first)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = ComplexMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j].add_product(a, rhs.get(k, j));
                }
            }
        }
        out
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// `T(f)_{ij} = Σ_{γ ∈ G^{a_i}_{a_j}} f(γ)`, with `a_i` the `i`-th unit.
pub fn t_matrix(g: &FiniteGroupoid, f: &SteinbergElement) -> Result<ComplexMatrix> {
    f.check_for(g)?;
    let n = g.unit_count();
    let mut m = ComplexMatrix::zero(n);
    for a in f.support() {
        let (i, j) = (g.range(a).0, g.source(a).0);
        m.entries[i * n + j] += &f.values[a.0];
    }
    Ok(m)
}
