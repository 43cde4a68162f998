//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's algorithms; only its data types and accessors.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use fullgroup::steinberg::GroupRingElement;
use fullgroup::{ArrowId, FiniteGroupoid, Scalar};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `(f ∗ h)(c) = Σ_{ab = c} f(a) h(b)` straight from the composition table.
pub fn convolve(g: &FiniteGroupoid, f: &[Scalar], h: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::ZERO; g.len()];
    for a in g.arrows().filter(|a| !f[a.0].is_zero()) {
        for b in g.arrows() {
            if let Some(c) = g.compose(a, b) {
                out[c.0] += &(&f[a.0] * &h[b.0]);
            }
        }
    }
    out
}

/// `π(x)(γ) = Σ_{U ∋ γ} x_U`.
pub fn pi(g: &FiniteGroupoid, x: &GroupRingElement) -> Vec<Scalar> {
    let mut out = vec![Scalar::ZERO; g.len()];
    for (u, c) in x.terms() {
        for a in u.arrows() {
            out[a.0] += c;
        }
    }
    out
}

/// Unit-indexed matrix of fiber sums.
pub fn t_matrix(g: &FiniteGroupoid, f: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = g.unit_count();
    let mut m = vec![vec![Scalar::ZERO; n]; n];
    for a in g.arrows() {
        m[g.range(a).0][g.source(a).0] += &f[a.0];
    }
    m
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

pub fn adjoint(a: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

/// Incrementally built basis of a subspace of `Qᵈ`, kept in echelon form.
pub struct Span {
    basis: Vec<(usize, Vec<BigRational>)>,
}

impl Span {
    pub fn new() -> Self {
        Span { basis: Vec::new() }
    }

    fn reduce(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut v = v.to_vec();
        for (p, b) in &self.basis {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &c * y;
                }
            }
        }
        v
    }

    /// Adds `v`; true when it was independent.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let lead = r[p].clone();
                self.basis.push((p, r.into_iter().map(|x| x / &lead).collect()));
                true
            }
        }
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn indicator(len: usize, arrows: &[ArrowId]) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); len];
    for a in arrows {
        v[a.0] = BigRational::one();
    }
    v
}

/// Span of the indicators of the given arrow sets.
pub fn image_span<'a>(g: &FiniteGroupoid, sets: impl IntoIterator<Item = &'a [ArrowId]>) -> Span {
    let mut seen = BTreeSet::new();
    let mut span = Span::new();
    for s in sets {
        if span.dim() == g.len() {
            break;
        }
        if seen.insert(s.to_vec()) {
            span.insert(&indicator(g.len(), s));
        }
    }
    span
}

/// Every arrow subset of size `|G⁰|` on which `r` and `s` are bijections
/// onto the units, as sorted index lists.
pub fn naive_full_bisections(g: &FiniteGroupoid) -> BTreeSet<Vec<usize>> {
    let n = g.len();
    let units = g.unit_count();
    assert!(n <= 20, "subset filter is exponential");
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != units {
            continue;
        }
        let arrows: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let ranges: BTreeSet<usize> = arrows.iter().map(|&a| g.range(ArrowId(a)).0).collect();
        let sources: BTreeSet<usize> = arrows.iter().map(|&a| g.source(ArrowId(a)).0).collect();
        if ranges.len() == units && sources.len() == units {
            out.insert(arrows);
        }
    }
    out
}

/// `Π k! h^k` over orbits, with orbits found by a breadth-first search.
pub fn order_formula(g: &FiniteGroupoid) -> BigUint {
    let units = g.unit_count();
    let mut orbit_of: HashMap<usize, usize> = HashMap::new();
    let mut order = BigUint::one();
    for start in 0..units {
        if orbit_of.contains_key(&start) {
            continue;
        }
        let mut members = vec![start];
        orbit_of.insert(start, start);
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            for a in g.arrows().filter(|&a| g.source(a).0 == u) {
                let v = g.range(a).0;
                if let std::collections::hash_map::Entry::Vacant(e) = orbit_of.entry(v) {
                    e.insert(start);
                    members.push(v);
                }
            }
            i += 1;
        }
        let k = members.len();
        let h = g.arrows().filter(|&a| g.range(a).0 == start && g.source(a).0 == start).count();
        let factorial: BigUint = (1..=k).map(BigUint::from).product();
        order *= factorial * BigUint::from(h).pow(k as u32);
    }
    order
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with zero diagonal
/// and the given off-diagonal, by Sturm-sequence bisection.
pub fn tridiagonal_max_eigenvalue(off: &[f64]) -> f64 {
    let n = off.len() + 1;
    let count_below = |x: f64| {
        let mut count = 0;
        let mut d = -x;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let prev = if d == 0.0 { f64::EPSILON } else { d };
            d = -x - off[i - 1] * off[i - 1] / prev;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bound: f64 = 2.0 * off.iter().fold(0.0f64, |m, &x| m.max(x.abs())) + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Norm of `(δ_e + χ_{S₁})/5` compressed to the radial functions on Ball(R).
pub fn radial_psi5_norm(radius: usize) -> f64 {
    let off: Vec<f64> = (0..radius).map(|m| if m == 0 { 2.0 } else { 3f64.sqrt() }).collect();
    (1.0 + tridiagonal_max_eigenvalue(&off)) / 5.0
}
