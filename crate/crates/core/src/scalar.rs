//! Exact Gaussian-rational scalars.
//!
//! [`Rational`] keeps small values in machine words and promotes to a
//! [`BigRational`] only when an intermediate result overflows; values are
//! always stored in canonical form (reduced, positive denominator, small
//! whenever they fit), so structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// An exact rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small { num: i64, den: i64 },
    Big(BigRational),
}

impl Rational {
    pub const ZERO: Rational = Rational::Small { num: 0, den: 1 };
    pub const ONE: Rational = Rational::Small { num: 1, den: 1 };

    pub fn from_integer(n: i64) -> Self {
        Rational::Small { num: n, den: 1 }
    }

    /// `num / den`; panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    pub fn from_big_ratio(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(mut num: i128, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::ZERO;
        }
        let g = num.gcd(&den);
        num /= g;
        den /= g;
        if den < 0 {
            num = -num;
            den = -den;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Rational::Small { num, den },
            _ => Rational::Big(BigRational::new_raw(num.into(), den.into())),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Rational::Small { num, den },
            _ => Rational::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small { num, den } => BigRational::new_raw((*num).into(), (*den).into()),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small { num, .. } => (*num).into(),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small { den, .. } => (*den).into(),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small { num: 0, .. })
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small { den, .. } => *den == 1,
            Rational::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rational::Small { num, .. } => num.signum() as i32,
            Rational::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn recip(&self) -> Self {
        match self {
            Rational::Small { num, den } => {
                assert!(*num != 0, "reciprocal of zero");
                Self::from_i128(*den as i128, *num as i128)
            }
            Rational::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small { num, den } => *num as f64 / *den as f64,
            Rational::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small { num: 0, .. }, _) => rhs.clone(),
            (_, Rational::Small { num: 0, .. }) => self.clone(),
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    return Rational::from_i128(a + c, b);
                }
                match (a * d).checked_add(c * b) {
                    Some(n) => Rational::from_i128(n, b * d),
                    None => Rational::from_big(self.to_big() + rhs.to_big()),
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small { num, den } => match num.checked_neg() {
                Some(n) => Rational::Small { num: n, den: *den },
                None => Rational::from_big(-self.to_big()),
            },
            Rational::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small { num: 0, .. }, _) | (_, Rational::Small { num: 0, .. }) => {
                Rational::ZERO
            }
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for &Rational {
    type Output = Rational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Rational) -> Rational {
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $method:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Rational, Add add, Sub sub, Mul mul, Div div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small { num, den: 1 } => write!(f, "{num}"),
            Rational::Small { num, den } => write!(f, "{num}/{den}"),
            Rational::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { re: Rational::ZERO, im: Rational::ZERO };
    pub const ONE: Scalar = Scalar { re: Rational::ONE, im: Rational::ZERO };
    pub const I: Scalar = Scalar { re: Rational::ZERO, im: Rational::ONE };

    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Scalar { re, im: Rational::ZERO }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::real(Rational::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(Rational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Scalar { re: &self.re / &n, im: &(-&self.im) / &n }
    }

    /// `self += a * b` without materialising the product separately.
    pub fn add_product(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a * b;
        *self += &p;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::real(r)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re * &rhs.re);
        }
        Scalar {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.recip()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

forward_owned!(Scalar, Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if rhs.is_zero() {
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if rhs.is_zero() {
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::ZERO;
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl Sum<Scalar> for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::ZERO;
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::ZERO
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::ONE
    }
}

impl fmt::Display for Scalar {
    /// Prints in the literal grammar accepted by [`FromStr`]: `3/2`, `-i`,
    /// `2-3i/5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = &self.im;
        let neg = im.signum() < 0;
        let mag = if neg { -im } else { im.clone() };
        let num = mag.numer();
        let den = mag.denom();
        let mut imag = String::new();
        if !num.is_one() {
            imag.push_str(&num.to_string());
        }
        imag.push('i');
        if !den.is_one() {
            imag.push('/');
            imag.push_str(&den.to_string());
        }
        if self.re.is_zero() {
            if neg {
                write!(f, "-")?;
            }
            write!(f, "{imag}")
        } else {
            write!(f, "{}{}{imag}", self.re, if neg { '-' } else { '+' })
        }
    }
}

impl FromStr for Scalar {
    type Err = ParseError;

    /// Grammar (whitespace allowed around signs):
    ///
    /// ```text
    /// scalar := [sign] term (sign term)*
    /// term   := digits ['i'] ['/' digits] | 'i' ['/' digits]
    /// ```
    ///
    /// A term with `i` is imaginary; `3i/5` is `(3/5)·i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.is_empty() {
            return Err(ParseError::new(0, "empty scalar literal"));
        }
        let mut pos = 0;
        let mut acc = Scalar::ZERO;
        let mut first = true;
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        while pos < chars.len() {
            let mut negative = false;
            match chars[pos] {
                '+' | '-' => {
                    negative = chars[pos] == '-';
                    pos += 1;
                    skip_ws(&mut pos);
                }
                _ if !first => return Err(ParseError::new(pos, "expected '+' or '-'")),
                _ => {}
            }
            first = false;
            let start = pos;
            let num = read_digits(&chars, &mut pos);
            let imaginary = pos < chars.len() && chars[pos] == 'i';
            if imaginary {
                pos += 1;
            }
            if num.is_none() && !imaginary {
                return Err(ParseError::new(start, "expected a number or 'i'"));
            }
            let mut value = Rational::from_bigint(num.unwrap_or_else(BigInt::one));
            if pos < chars.len() && chars[pos] == '/' {
                pos += 1;
                let at = pos;
                let den = read_digits(&chars, &mut pos)
                    .ok_or_else(|| ParseError::new(at, "expected denominator"))?;
                if den.is_zero() {
                    return Err(ParseError::new(at, "zero denominator"));
                }
                value = &value / &Rational::from_bigint(den);
            }
            if negative {
                value = -value;
            }
            if imaginary {
                acc.im = &acc.im + &value;
            } else {
                acc.re = &acc.re + &value;
            }
            skip_ws(&mut pos);
        }
        Ok(acc)
    }
}

fn read_digits(chars: &[char], pos: &mut usize) -> Option<BigInt> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return None;
    }
    let text: String = chars[start..*pos].iter().collect();
    text.parse().ok()
}
