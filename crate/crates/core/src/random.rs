//! Seeded random elements for property checks.

use rand::Rng;

use crate::bisection::FullGroup;
use crate::groupoid::{ArrowId, FiniteGroupoid};
use crate::scalar::{Rational, Scalar};
use crate::steinberg::{GroupRingElement, SteinbergElement};

/// Gaussian rational with numerators in `-4..=4` and denominators in `1..=3`;
/// purely real half of the time.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let part = |rng: &mut R| Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    let re = part(rng);
    let im = if rng.gen_bool(0.5) { Rational::ZERO } else { part(rng) };
    Scalar::new(re, im)
}

/// A function on `G` with at most `max_terms` random nonzero values.
pub fn random_steinberg<R: Rng + ?Sized>(g: &FiniteGroupoid, rng: &mut R, max_terms: usize) -> SteinbergElement {
    let mut f = SteinbergElement::zero(g);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let a = ArrowId(rng.gen_range(0..g.len()));
        f.set(a, f.get(a) + &random_scalar(rng));
    }
    f
}

/// An element of `ℂF(G)` with at most `max_terms` terms.
pub fn random_group_ring<R: Rng + ?Sized>(group: &FullGroup, rng: &mut R, max_terms: usize) -> GroupRingElement {
    let mut x = GroupRingElement::zero();
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let u = group.get(rng.gen_range(0..group.len())).expect("in range").clone();
        x.add_term(u, random_scalar(rng));
    }
    x
}
