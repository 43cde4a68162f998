//! The free group `F₂ = ⟨a, b⟩`: reduced words, spheres, the averages
//! `ψ_n`, the Haagerup-type bound chain, and truncated regular
//! representation norms.
//!
//! Words print as strings over `a`, `A = a⁻¹`, `b`, `B = b⁻¹`, with `e` for
//! the identity.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A = 0,
    AInv = 1,
    B = 2,
    BInv = 3,
}

impl Letter {
    /// In canonical order `a < a⁻¹ < b < b⁻¹`.
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn inverse(self) -> Letter {
        Letter::ALL[self.index() ^ 1]
    }

    pub fn symbol(self) -> char {
        ['a', 'A', 'b', 'B'][self.index()]
    }

    pub fn from_symbol(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }

    /// Rank among the three letters allowed after `prev`.
    fn rank_after(self, prev: Letter) -> usize {
        let i = self.index();
        if i > prev.inverse().index() {
            i - 1
        } else {
            i
        }
    }

    fn from_rank_after(rank: usize, prev: Letter) -> Letter {
        let skip = prev.inverse().index();
        Letter::ALL[if rank >= skip { rank + 1 } else { rank }]
    }
}

/// A reduced word in `F₂`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct F2Word(Vec<Letter>);

impl F2Word {
    pub fn identity() -> Self {
        F2Word(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for x in letters {
            if out.last() == Some(&x.inverse()) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        F2Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// `|s|`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Same as [`F2Word::is_identity`].
    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn inverse(&self) -> Self {
        F2Word(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    pub fn mul(&self, other: &F2Word) -> Self {
        F2Word::from_letters(self.0.iter().chain(&other.0).copied())
    }

    /// `x·self`, or `None` when the product is longer than `max_len`.
    fn left_letter(&self, x: Letter, max_len: usize) -> Option<F2Word> {
        if self.0.first() == Some(&x.inverse()) {
            Some(F2Word(self.0[1..].to_vec()))
        } else if self.len() < max_len {
            let mut v = Vec::with_capacity(self.len() + 1);
            v.push(x);
            v.extend_from_slice(&self.0);
            Some(F2Word(v))
        } else {
            None
        }
    }

    /// Position in the canonical enumeration (0 for `e`).
    pub fn shortlex_index(&self) -> u64 {
        let m = self.len();
        if m == 0 {
            return 0;
        }
        let mut rank = self.0[0].index() as u64;
        for w in self.0.windows(2) {
            rank = rank * 3 + w[1].rank_after(w[0]) as u64;
        }
        ball_size(m as u32 - 1) + rank
    }

    /// Inverse of [`F2Word::shortlex_index`].
    pub fn from_shortlex_index(index: u64) -> Self {
        if index == 0 {
            return F2Word::identity();
        }
        let mut m = 1u32;
        while ball_size(m) <= index {
            m += 1;
        }
        let mut rank = index - ball_size(m - 1);
        let mut digits = Vec::with_capacity(m as usize);
        for _ in 1..m {
            digits.push((rank % 3) as usize);
            rank /= 3;
        }
        let mut letters = vec![Letter::ALL[rank as usize]];
        for &d in digits.iter().rev() {
            let prev = *letters.last().expect("nonempty");
            letters.push(Letter::from_rank_after(d, prev));
        }
        F2Word(letters)
    }
}

/// Shortlex: by length, then letter by letter.
impl Ord for F2Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for F2Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for F2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        self.0.iter().try_for_each(|x| write!(f, "{}", x.symbol()))
    }
}

impl FromStr for F2Word {
    type Err = ParseError;

    /// Accepts `e` or a string over `aAbB`; the result is reduced.
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let s = s.trim();
        if s == "e" {
            return Ok(F2Word::identity());
        }
        if s.is_empty() {
            return Err(ParseError::new(0, "empty word"));
        }
        let letters = s
            .char_indices()
            .map(|(i, c)| Letter::from_symbol(c).ok_or_else(|| ParseError::new(i, format!("unexpected {c:?} in word"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(F2Word::from_letters(letters))
    }
}

impl Serialize for F2Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The first `n` words in canonical order.
pub fn canonical_enumeration(n: usize) -> Vec<F2Word> {
    (0..n as u64).map(F2Word::from_shortlex_index).collect()
}

/// Largest sphere radius whose size fits in `u128`.
pub const MAX_SPHERE_RADIUS: u32 = 80;

/// `|E_m|`: 1 for `m = 0`, else `4·3^{m−1}`.
pub fn sphere_size(m: u32) -> u128 {
    assert!(m <= MAX_SPHERE_RADIUS, "sphere radius {m} too large");
    if m == 0 {
        1
    } else {
        4 * 3u128.pow(m - 1)
    }
}

/// `|Ball(R)| = 2·3^R − 1`.
pub fn ball_size(r: u32) -> u64 {
    2 * 3u64.pow(r) - 1
}

/// `⌈log₃ n⌉` for `n ≥ 1`.
pub fn ceil_log3(n: u64) -> u32 {
    assert!(n >= 1, "ceil_log3 needs n >= 1");
    let mut k = 0;
    let mut p: u128 = 1;
    while p < n as u128 {
        p *= 3;
        k += 1;
    }
    k
}

/// `Σ_{m=0}^{⌈log₃ n⌉} |E_m| ≥ n`, in integers.
pub fn cumulative_sphere_bound(n: u64) -> bool {
    let k = ceil_log3(n.max(1));
    (0..=k).map(sphere_size).sum::<u128>() >= n as u128
}

/// A finitely supported real function on `F₂`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct F2Function {
    values: BTreeMap<F2Word, f64>,
}

impl F2Function {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(word: F2Word) -> Self {
        let mut f = Self::new();
        f.set(word, 1.0);
        f
    }

    pub fn set(&mut self, word: F2Word, value: f64) {
        if value == 0.0 {
            self.values.remove(&word);
        } else {
            self.values.insert(word, value);
        }
    }

    pub fn get(&self, word: &F2Word) -> f64 {
        self.values.get(word).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&F2Word, f64)> {
        self.values.iter().map(|(w, &v)| (w, v))
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Longest word in the support (0 for the zero function).
    pub fn max_length(&self) -> usize {
        self.values.keys().map(F2Word::len).max().unwrap_or(0)
    }
}

/// `ψ_n = (1/n) Σ_{i ≤ n} 1_{g_i}`.
pub fn psi(n: usize) -> F2Function {
    assert!(n >= 1, "psi needs n >= 1");
    let mut f = F2Function::new();
    for w in canonical_enumeration(n) {
        f.set(w, 1.0 / n as f64);
    }
    f
}

/// `2 (Σ_s |f(s)|² (1 + |s|⁴))^{1/2}`.
pub fn haagerup_rhs(f: &F2Function) -> f64 {
    let sum: f64 = f.support().map(|(w, v)| v * v * (1.0 + (w.len() as f64).powi(4))).sum();
    2.0 * sum.sqrt()
}

/// Number of the first `n` words that lie in each sphere `E_0, …, E_K`.
pub fn sphere_fill(n: u64) -> Vec<u64> {
    let k = ceil_log3(n.max(1));
    let mut left = n;
    (0..=k)
        .map(|m| {
            let take = (sphere_size(m) as u64).min(left);
            left -= take;
            take
        })
        .collect()
}

/// `haagerup_rhs(ψ_n)` from sphere counts alone.
pub fn psi_haagerup_rhs(n: u64) -> f64 {
    assert!(n >= 1, "psi needs n >= 1");
    let sum: f64 = sphere_fill(n).iter().enumerate().map(|(m, &c)| c as f64 * (1.0 + (m as f64).powi(4))).sum();
    2.0 * sum.sqrt() / n as f64
}

/// `12 ⌈log₃ n⌉² / √n`.
pub fn paper_bound(n: u64) -> f64 {
    assert!(n >= 1, "bound needs n >= 1");
    let k = ceil_log3(n) as f64;
    12.0 * k * k / (n as f64).sqrt()
}

/// [`paper_bound`] as an exact rational, when `n` is a perfect square.
pub fn paper_bound_exact(n: u64) -> Option<Rational> {
    let root = n.isqrt();
    if n == 0 || root * root != n {
        return None;
    }
    let k = ceil_log3(n) as i64;
    Some(Rational::new(12 * k * k, root as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Le,
    Eq,
}

/// Relative tolerance for every link of the bound chain.
pub const CHAIN_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainLink {
    pub from: &'static str,
    pub to: &'static str,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundChain {
    pub n: u64,
    pub k: u32,
    pub links: Vec<ChainLink>,
    pub all_hold: bool,
}

impl BoundChain {
    pub fn failing(&self) -> impl Iterator<Item = &ChainLink> {
        self.links.iter().filter(|l| !l.holds)
    }
}

/// Evaluates each stage of the chain bounding `haagerup_rhs(ψ_n)` by
/// `12⌈log₃ n⌉²/√n` and checks every link with relative tolerance
/// [`CHAIN_TOLERANCE`]. Stages, with `K = ⌈log₃ n⌉`:
///
/// - `rhs`: `2 (Σ_m c_m (1+m⁴))^{1/2} / n`, `c_m` the sphere fill of `ψ_n`
/// - `spheres`: `2 (Σ_{m≤K} |E_m| (1+m⁴) / n²)^{1/2}`
/// - `double-quartic`: `2 (Σ_{m≤K} 4·3^{m−1}·2m⁴ / n²)^{1/2}`
/// - `max-quartic`: `2 (8K⁴/n² · Σ_{m≤K} 3^{m−1})^{1/2}`
/// - `closed-form`: `2 (8K⁴ (3^{1+K} − 1/3) / (2n²))^{1/2}`
/// - `log-power`: `(4K²/n) (3^{2 + log₃ n})^{1/2}`
/// - `bound`: `12K²/√n`
pub fn bound_chain_check(n: u64) -> Result<BoundChain> {
    if n < 2 {
        return Err(Error::Precondition(format!("bound chain needs n >= 2, got {n}")));
    }
    let k = ceil_log3(n);
    let (nf, kf) = (n as f64, k as f64);
    let k4 = kf.powi(4);
    let spheres: f64 = (0..=k).map(|m| sphere_size(m) as f64 * (1.0 + (m as f64).powi(4))).sum();
    let double_quartic: f64 = (0..=k).map(|m| 4.0 * 3f64.powi(m as i32 - 1) * 2.0 * (m as f64).powi(4)).sum();
    let geometric: f64 = (0..=k).map(|m| 3f64.powi(m as i32 - 1)).sum();
    let stages = [
        ("rhs", psi_haagerup_rhs(n)),
        ("spheres", 2.0 * (spheres / (nf * nf)).sqrt()),
        ("double-quartic", 2.0 * (double_quartic / (nf * nf)).sqrt()),
        ("max-quartic", 2.0 * (8.0 * k4 / (nf * nf) * geometric).sqrt()),
        ("closed-form", 2.0 * (8.0 * k4 * (3f64.powi(k as i32 + 1) - 1.0 / 3.0) / (2.0 * nf * nf)).sqrt()),
        ("log-power", 4.0 * kf * kf / nf * 3f64.powf(2.0 + nf.ln() / 3f64.ln()).sqrt()),
        ("bound", paper_bound(n)),
    ];
    let links: Vec<ChainLink> = stages
        .windows(2)
        .map(|w| {
            let ((from, lhs), (to, rhs)) = (w[0], w[1]);
            let relation = if to == "bound" { Relation::Eq } else { Relation::Le };
            let holds = match relation {
                Relation::Le => lhs <= rhs * (1.0 + CHAIN_TOLERANCE),
                Relation::Eq => (lhs - rhs).abs() <= CHAIN_TOLERANCE * lhs.abs().max(rhs.abs()),
            };
            ChainLink { from, to, relation, lhs, rhs, holds }
        })
        .collect();
    let all_hold = links.iter().all(|l| l.holds);
    Ok(BoundChain { n, k, links, all_hold })
}

/// Largest radius accepted by [`truncated_norm`] by default.
pub const DEFAULT_MAX_RADIUS: u32 = 9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormOptions {
    pub max_radius: u32,
    /// Relative change of successive estimates at which iteration stops.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions { max_radius: DEFAULT_MAX_RADIUS, tolerance: 1e-10, max_iterations: 100_000 }
    }
}

const OUTSIDE: u32 = u32::MAX;

/// Left convolution by `f` on `ℓ²(Ball(R))`, with products leaving the ball
/// discarded.
#[derive(Clone, Debug)]
pub struct BallOperator {
    radius: u32,
    size: usize,
    /// Per support word `s`: its value and the pairs `(v, index(s·v))` with
    /// `s·v` inside the ball.
    shifts: Vec<(f64, Vec<(u32, u32)>)>,
}

impl BallOperator {
    pub fn new(f: &F2Function, radius: u32, max_radius: u32) -> Result<Self> {
        if radius > max_radius {
            return Err(Error::EnumerationTooLarge {
                what: "Ball(R)",
                size: ball_size(radius.min(40)).to_string(),
                cap: ball_size(max_radius) as usize,
            });
        }
        if f.max_length() > radius as usize {
            return Err(Error::Precondition(format!(
                "radius {radius} is smaller than the longest support word ({})",
                f.max_length()
            )));
        }
        let size = ball_size(radius) as usize;
        let max_len = radius as usize;
        let words: Vec<F2Word> = (0..size as u64).map(F2Word::from_shortlex_index).collect();
        let letter_tables: Vec<Vec<u32>> = Letter::ALL
            .iter()
            .map(|&x| {
                words
                    .iter()
                    .map(|w| w.left_letter(x, max_len).map_or(OUTSIDE, |p| p.shortlex_index() as u32))
                    .collect()
            })
            .collect();
        // While `s·v` is built letter by letter from the right, intermediate
        // lengths never exceed max(|v|, |s·v|), so a product that leaves the
        // ball stays outside.
        let shifts = f
            .support()
            .map(|(s, value)| {
                let mut table: Vec<u32> = (0..size as u32).collect();
                for &x in s.letters().iter().rev() {
                    let lt = &letter_tables[x.index()];
                    for t in table.iter_mut() {
                        if *t != OUTSIDE {
                            *t = lt[*t as usize];
                        }
                    }
                }
                let pairs = (0..size as u32).zip(table).filter(|&(_, t)| t != OUTSIDE).collect();
                (value, pairs)
            })
            .collect();
        Ok(BallOperator { radius, size, shifts })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.size
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (c, pairs) in &self.shifts {
            for &(v, t) in pairs {
                y[t as usize] += c * x[v as usize];
            }
        }
    }

    /// `y = Aᵀ x`.
    pub fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (c, pairs) in &self.shifts {
            for &(v, t) in pairs {
                y[v as usize] += c * x[t as usize];
            }
        }
    }

    /// Largest singular value, by power iteration on `AᵀA`.
    pub fn norm(&self, options: &NormOptions) -> Result<f64> {
        if self.shifts.is_empty() {
            return Ok(0.0);
        }
        let n = self.size;
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut ax = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut previous = 0.0;
        for _ in 0..options.max_iterations {
            self.apply(&x, &mut ax);
            self.apply_transpose(&ax, &mut y);
            // Rayleigh quotient of AᵀA at the unit vector x
            let estimate = dot(&x, &y).max(0.0);
            let norm_y = dot(&y, &y).sqrt();
            if norm_y == 0.0 {
                return Ok(0.0);
            }
            if (estimate - previous).abs() <= options.tolerance * estimate {
                return Ok(estimate.sqrt());
            }
            previous = estimate;
            x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / norm_y);
        }
        Err(Error::NoConvergence(options.max_iterations))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Norm of left convolution by `f` restricted to `ℓ²(Ball(R))`: a lower
/// bound for the reduced norm of `f`, nondecreasing in `R`.
pub fn truncated_norm(f: &F2Function, radius: u32) -> Result<f64> {
    truncated_norm_with(f, radius, &NormOptions::default())
}

pub fn truncated_norm_with(f: &F2Function, radius: u32, options: &NormOptions) -> Result<f64> {
    BallOperator::new(f, radius, options.max_radius)?.norm(options)
}

/// An element of `F₂ ⊔ F₂`: a word with its copy tag 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TaggedWord {
    pub word: F2Word,
    pub copy: u8,
}

impl fmt::Display for TaggedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.word, self.copy)
    }
}

/// `(1/n) Σ_{i ≤ n} δ_{U_i}` in `ℂF(F₂ ⊔ F₂)`, `U_i = {(t,1), (g_i,2)}`,
/// whose image under `π` is `φ_n = 1_{(t,1)} + (1/n) Σ 1_{(g_i,2)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPreimage {
    pub n: usize,
    pub t: F2Word,
    pub terms: Vec<(Rational, [TaggedWord; 2])>,
}

pub fn phi_n_preimage(n: usize, t: &F2Word) -> PhiPreimage {
    assert!(n >= 1, "phi needs n >= 1");
    let coefficient = Rational::new(1, n as i64);
    let terms = canonical_enumeration(n)
        .into_iter()
        .map(|g| {
            (coefficient.clone(), [TaggedWord { word: t.clone(), copy: 1 }, TaggedWord { word: g, copy: 2 }])
        })
        .collect();
    PhiPreimage { n, t: t.clone(), terms }
}

impl PhiPreimage {
    /// `π` of the element: summed indicator coefficients per arrow.
    pub fn pi_image(&self) -> BTreeMap<TaggedWord, Rational> {
        let mut out: BTreeMap<TaggedWord, Rational> = BTreeMap::new();
        for (c, bisection) in &self.terms {
            for arrow in bisection {
                let entry = out.entry(arrow.clone()).or_insert(Rational::ZERO);
                *entry = &*entry + c;
            }
        }
        out
    }

    /// The part of `π`-image in the second copy, i.e. `φ_n − 1_{(t,1)}`.
    pub fn second_copy(&self) -> F2Function {
        let mut f = F2Function::new();
        for (arrow, value) in self.pi_image() {
            if arrow.copy == 2 {
                f.set(arrow.word, value.to_f64());
            }
        }
        f
    }

    pub fn describe(&self) -> String {
        self.terms
            .iter()
            .map(|(c, [x, y])| format!("({c})·δ{{{x},{y}}}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> F2Word {
        s.parse().unwrap()
    }

    /// Breadth-first shortlex enumeration, independent of the index formula.
    fn bfs_words(max_len: usize) -> Vec<F2Word> {
        let mut out = vec![F2Word::identity()];
        let mut layer = vec![F2Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for word in &layer {
                for x in Letter::ALL {
                    if word.letters().last() != Some(&x.inverse()) {
                        let mut v = word.letters().to_vec();
                        v.push(x);
                        next.push(F2Word(v));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn reduction_and_inverse() {
        assert_eq!(w("aAb"), w("b"));
        assert_eq!(w("abBA"), F2Word::identity());
        assert_eq!(w("ab").mul(&w("Ba")), w("aa"));
        assert_eq!(w("abA").inverse(), w("aBA"));
        assert_eq!(w("abA").mul(&w("abA").inverse()), F2Word::identity());
        assert!("abx".parse::<F2Word>().is_err());
        assert_eq!(F2Word::identity().to_string(), "e");
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(canonical_enumeration(1), vec![F2Word::identity()]);
        let five: Vec<String> = canonical_enumeration(5).iter().map(|x| x.to_string()).collect();
        assert_eq!(five, ["e", "a", "A", "b", "B"]);
        assert_eq!(canonical_enumeration(6)[5].len(), 2);
    }

    #[test]
    fn shortlex_index_matches_bfs() {
        let words = bfs_words(6);
        assert_eq!(words.len() as u64, ball_size(6));
        for (i, word) in words.iter().enumerate() {
            assert_eq!(word.shortlex_index(), i as u64);
            assert_eq!(&F2Word::from_shortlex_index(i as u64), word);
        }
        assert!(words.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn sphere_sizes() {
        assert_eq!(sphere_size(0), 1);
        assert_eq!(sphere_size(1), 4);
        assert_eq!(sphere_size(3), 36);
        let words = bfs_words(5);
        for m in 0..=5u32 {
            assert_eq!(words.iter().filter(|x| x.len() == m as usize).count() as u128, sphere_size(m));
        }
    }

    #[test]
    fn ceil_log3_values() {
        assert_eq!(ceil_log3(1), 0);
        assert_eq!(ceil_log3(2), 1);
        assert_eq!(ceil_log3(3), 1);
        assert_eq!(ceil_log3(4), 2);
        assert_eq!(ceil_log3(9), 2);
        assert_eq!(ceil_log3(10), 3);
        assert_eq!(ceil_log3(3u64.pow(10)), 10);
    }

    #[test]
    fn cumulative_bound_examples() {
        assert!(cumulative_sphere_bound(1));
        assert!(cumulative_sphere_bound(5));
        assert!(cumulative_sphere_bound(1000));
    }

    #[test]
    fn haagerup_examples() {
        assert_eq!(haagerup_rhs(&psi(1)), 2.0);
        assert!((haagerup_rhs(&psi(5)) - 1.2).abs() < 1e-12);
        assert!((haagerup_rhs(&F2Function::point(w("ab"))) - 2.0 * 17f64.sqrt()).abs() < 1e-12);
        for n in 1..300 {
            assert!((haagerup_rhs(&psi(n)) - psi_haagerup_rhs(n as u64)).abs() < 1e-12);
        }
    }

    #[test]
    fn paper_bound_examples() {
        assert_eq!(paper_bound(9), 16.0);
        assert!((paper_bound(3) - 12.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((paper_bound(3u64.pow(10)) - 1200.0 / 243.0).abs() < 1e-12);
        assert_eq!(paper_bound(1), 0.0);
        assert_eq!(paper_bound_exact(9), Some(Rational::from_integer(16)));
        assert_eq!(paper_bound_exact(10), None);
    }

    #[test]
    fn chain_examples() {
        for n in [5, 100, 3u64.pow(8)] {
            let chain = bound_chain_check(n).unwrap();
            assert!(chain.all_hold, "n = {n}: {:?}", chain.failing().collect::<Vec<_>>());
        }
        assert!(bound_chain_check(1).is_err());
    }

    #[test]
    fn truncated_norm_examples() {
        let e = F2Function::point(F2Word::identity());
        for r in [0, 1, 3] {
            assert!((truncated_norm(&e, r).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(truncated_norm(&psi(5), 0).is_err());
        assert!(truncated_norm(&psi(5), 10).is_err());
        let r5 = truncated_norm(&psi(5), 5).unwrap();
        assert!(r5 <= haagerup_rhs(&psi(5)));
        assert!(r5 > 0.8 && r5 < (1.0 + 2.0 * 3f64.sqrt()) / 5.0);
    }

    #[test]
    fn truncated_operator_is_left_convolution() {
        let mut f = F2Function::new();
        f.set(w("a"), 0.5);
        f.set(w("bA"), -2.0);
        let op = BallOperator::new(&f, 3, 9).unwrap();
        let size = op.dim();
        for v in 0..size {
            let mut x = vec![0.0; size];
            x[v] = 1.0;
            let mut y = vec![0.0; size];
            op.apply(&x, &mut y);
            let word = F2Word::from_shortlex_index(v as u64);
            let mut expected = vec![0.0; size];
            for (s, c) in f.support() {
                let p = s.mul(&word);
                if p.len() <= 3 {
                    expected[p.shortlex_index() as usize] += c;
                }
            }
            assert_eq!(y, expected);
        }
    }

    #[test]
    fn phi_examples() {
        let p = phi_n_preimage(1, &F2Word::identity());
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms[0].1[0], TaggedWord { word: F2Word::identity(), copy: 1 });
        assert_eq!(p.terms[0].1[1], TaggedWord { word: F2Word::identity(), copy: 2 });

        let p = phi_n_preimage(2, &w("a"));
        assert_eq!(p.describe(), "(1/2)·δ{(a,1),(e,2)} + (1/2)·δ{(a,1),(a,2)}");
        let image = p.pi_image();
        assert_eq!(image[&TaggedWord { word: w("a"), copy: 1 }], Rational::ONE);
        assert_eq!(image[&TaggedWord { word: w("a"), copy: 2 }], Rational::new(1, 2));
        assert!((haagerup_rhs(&p.second_copy()) - haagerup_rhs(&psi(2))).abs() < 1e-15);
    }
}
