//! Fraction-free Gauss–Jordan elimination over the integers.
//!
//! Each pivot step replaces row `i` by `(p·rowᵢ − aᵢ·row_piv) / p_prev`,
//! where `p` is the new pivot and `p_prev` the previous one. The division
//! is exact (every entry stays a minor of the input), and once elimination
//! finishes every pivot equals the last one, `d`. A reduced system
//! `d·x_{pivot(i)} + Σ_free a_{ij} x_j = bᵢ` then reads off kernels and
//! particular solutions with a single division by `d`.
//!
//! Elimination runs in checked `i128` first; on overflow it restarts with
//! [`BigInt`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Integer arithmetic as needed by the elimination; `None` on overflow.
pub trait ExactInt: Clone + PartialEq + Sized {
    fn int_zero() -> Self;
    fn int_one() -> Self;
    fn int_is_zero(&self) -> bool;
    fn from_bigint(n: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    /// `(a·b − c·d) / e`, exact.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
}

impl ExactInt for i128 {
    fn int_zero() -> Self {
        0
    }
    fn int_one() -> Self {
        1
    }
    fn int_is_zero(&self) -> bool {
        *self == 0
    }
    fn from_bigint(n: &BigInt) -> Option<Self> {
        i128::try_from(n).ok()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        let x = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        debug_assert_eq!(x % e, 0);
        Some(x / e)
    }
}

impl ExactInt for BigInt {
    fn int_zero() -> Self {
        Zero::zero()
    }
    fn int_one() -> Self {
        One::one()
    }
    fn int_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_bigint(n: &BigInt) -> Option<Self> {
        Some(n.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        let x = a * b - c * d;
        debug_assert!(Zero::is_zero(&(&x % e)));
        Some(x / e)
    }
}

/// Result of reducing a `rows × (pivot_cols + extra)` integer matrix, with
/// pivots searched only among the first `pivot_cols` columns.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub rows: Vec<Vec<BigInt>>,
    pub pivot_cols: usize,
    /// Pivot column of row `i`, for `i < rank`.
    pub pivots: Vec<usize>,
    /// Common value of every pivot entry (1 when the rank is 0).
    pub denominator: BigInt,
}

impl Reduced {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Non-pivot columns among the first `pivot_cols`.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.pivot_cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.pivot_cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Integer kernel basis of the pivot block: one primitive vector per free
    /// column `j`, with `+1` scaled coordinate at `j`, sorted by `j`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let d = &self.denominator;
        self.free_columns()
            .into_iter()
            .map(|j| {
                let mut v = vec![BigInt::from(0); self.pivot_cols];
                v[j] = d.clone();
                for (i, &p) in self.pivots.iter().enumerate() {
                    v[p] = -&self.rows[i][j];
                }
                let g = v.iter().fold(BigInt::from(0), |acc, x| acc.gcd(x));
                let sign = BigInt::from(if v[j].is_negative() { -1 } else { 1 });
                v.into_iter().map(|x| &x / &g * &sign).collect()
            })
            .collect()
    }

    /// For augmented column `col >= pivot_cols`: the particular solution with
    /// all free variables zero, or `None` when the system is inconsistent.
    pub fn solve_column(&self, col: usize) -> Option<Vec<Rational>> {
        assert!(col >= self.pivot_cols);
        if self.rows[self.rank()..].iter().any(|row| !Zero::is_zero(&row[col])) {
            return None;
        }
        let mut x = vec![Rational::ZERO; self.pivot_cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = Rational::from_big_ratio(self.rows[i][col].clone(), self.denominator.clone());
        }
        Some(x)
    }
}

/// Fraction-free Gauss–Jordan with first-nonzero pivoting.
pub fn reduce(matrix: &[Vec<BigInt>], pivot_cols: usize) -> Reduced {
    if let Some(r) = reduce_in::<i128>(matrix, pivot_cols) {
        return r;
    }
    reduce_in::<BigInt>(matrix, pivot_cols).expect("bigint elimination cannot overflow")
}

fn reduce_in<T: ExactInt>(matrix: &[Vec<BigInt>], pivot_cols: usize) -> Option<Reduced> {
    let mut a: Vec<Vec<T>> = matrix
        .iter()
        .map(|row| row.iter().map(T::from_bigint).collect::<Option<Vec<T>>>())
        .collect::<Option<_>>()?;
    let m = a.len();
    let width = a.first().map_or(0, |r| r.len());
    assert!(pivot_cols <= width);
    let mut prev = T::int_one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][col].int_is_zero()) else { continue };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let piv = pivot_row[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col].clone();
            if factor.int_is_zero() {
                // row·p / prev still has to be applied to keep the invariant
                for x in row.iter_mut() {
                    if !x.int_is_zero() {
                        *x = T::cross_div(&piv, x, &T::int_zero(), &T::int_zero(), &prev)?;
                    }
                }
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = T::cross_div(&piv, x, &factor, y, &prev)?;
            }
        }
        prev = piv;
        pivots.push(col);
        r += 1;
    }
    let rows = a.iter().map(|row| row.iter().map(T::to_bigint).collect()).collect();
    let mut denominator = prev.to_bigint();
    let mut rows: Vec<Vec<BigInt>> = rows;
    if denominator.is_negative() {
        denominator = -denominator;
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
    }
    Some(Reduced { rows, pivot_cols, pivots, denominator })
}
