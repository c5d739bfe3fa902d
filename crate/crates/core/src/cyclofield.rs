//! Exact arithmetic in Q and in the cyclotomic field Q(w) = Q[x]/(x^2 + x + 1).
//!
//! Every element is stored as `p + q w` with `p, q` reduced rationals. The
//! relation `w^2 = -1 - w` is applied inside every product, so values are
//! always in canonical form and equality is componentwise.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Abs, Lcm};
use malachite_base::num::basic::traits::{NegativeOne as _, One as _, Zero as _};
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::num::logic::traits::SignificantBits;
use malachite_base::rounding_modes::RoundingMode;
use malachite_nz::natural::Natural;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError};

/// Reduced arbitrary-precision rational; GCD-heavy, so backed by malachite.
pub type Rational = malachite_q::Rational;

const SQRT3_OVER_2: f64 = 0.866_025_403_784_438_6;

/// Build a rational from machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from_signeds(n, d)
}

/// Render a rational as `n` or `n/d`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    f64::rounding_from(r, RoundingMode::Nearest).0
}

/// Element `p + q w` of Q(w), `w` a primitive cube root of unity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CycloNumber {
    p: Rational,
    q: Rational,
}

impl CycloNumber {
    pub fn new(p: Rational, q: Rational) -> Self {
        CycloNumber { p, q }
    }

    pub fn from_rational(p: Rational) -> Self {
        CycloNumber { p, q: Rational::ZERO }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// The primitive cube root of unity `w = exp(2 pi i / 3)`.
    pub fn omega() -> Self {
        CycloNumber { p: Rational::ZERO, q: Rational::ONE }
    }

    /// `w^2 = -1 - w`.
    pub fn omega_squared() -> Self {
        CycloNumber { p: Rational::NEGATIVE_ONE, q: Rational::NEGATIVE_ONE }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.p
    }

    pub fn omega_part(&self) -> &Rational {
        &self.q
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0u32
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.p)
    }

    /// Galois conjugate `p + q w^2 = (p - q) - q w`.
    pub fn conj(&self) -> Self {
        CycloNumber { p: &self.p - &self.q, q: -&self.q }
    }

    /// Field norm `N(p + q w) = p^2 - p q + q^2`, zero only for zero.
    pub fn norm(&self) -> Rational {
        &self.p * &self.p - &self.p * &self.q + &self.q * &self.q
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        let n = self.norm();
        if n == 0u32 {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(CycloNumber { p: c.p / &n, q: c.q / n })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = CycloNumber::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloNumber { p: &self.p * r, q: &self.q * r }
    }

    /// Image under the embedding `w -> -1/2 + i sqrt(3)/2`.
    pub fn embed_complex(&self) -> Complex64 {
        let p = rational_to_f64(&self.p);
        let q = rational_to_f64(&self.q);
        Complex64::new(p - 0.5 * q, SQRT3_OVER_2 * q)
    }

    /// Rough bit size of the representation; used to pick small pivots.
    pub fn height(&self) -> u64 {
        if self.is_zero() {
            return 0;
        }
        [&self.p, &self.q]
            .iter()
            .map(|r| r.numerator_ref().significant_bits() + r.denominator_ref().significant_bits())
            .sum()
    }

    /// Least common denominator of both components.
    pub fn denominator_lcm(&self) -> Natural {
        self.p.denominator_ref().lcm(self.q.denominator_ref())
    }
}

/// The three cube roots `{a, w a, w^2 a}` of `a^3`.
pub fn cube_roots_of(a: &CycloNumber) -> [CycloNumber; 3] {
    let w = CycloNumber::omega();
    let wa = &w * a;
    let w2a = &w * &wa;
    [a.clone(), wa, w2a]
}

impl Zero for CycloNumber {
    fn zero() -> Self {
        CycloNumber { p: Rational::ZERO, q: Rational::ZERO }
    }

    fn is_zero(&self) -> bool {
        self.p == 0u32 && self.q == 0u32
    }
}

impl One for CycloNumber {
    fn one() -> Self {
        CycloNumber { p: Rational::ONE, q: Rational::ZERO }
    }
}

impl From<i64> for CycloNumber {
    fn from(n: i64) -> Self {
        CycloNumber::from_int(n)
    }
}

impl From<Rational> for CycloNumber {
    fn from(r: Rational) -> Self {
        CycloNumber::from_rational(r)
    }
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber { p: &self.p + &rhs.p, q: &self.q + &rhs.q }
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber { p: &self.p - &rhs.p, q: &self.q - &rhs.q }
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        // (p1 + q1 w)(p2 + q2 w) = p1 p2 + (p1 q2 + q1 p2) w + q1 q2 w^2
        let pp = &self.p * &rhs.p;
        let qq = &self.q * &rhs.q;
        let cross = &self.p * &rhs.q + &self.q * &rhs.p;
        CycloNumber { p: pp - &qq, q: cross - qq }
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { p: -&self.p, q: -&self.q }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { p: -self.p, q: -self.q }
    }
}

macro_rules! forward_owned {
    ($imp:ident, $method:ident) => {
        impl $imp<CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &CycloNumber) -> CycloNumber {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<CycloNumber> for &'a CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: CycloNumber) -> CycloNumber {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Panics on division by zero; use [`CycloNumber::checked_div`] when the
/// divisor may vanish.
impl<'a> Div<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn div(self, rhs: &CycloNumber) -> CycloNumber {
        self.checked_div(rhs).expect("division by zero in Q(w)")
    }
}

impl Div<CycloNumber> for CycloNumber {
    type Output = CycloNumber;
    fn div(self, rhs: CycloNumber) -> CycloNumber {
        &self / &rhs
    }
}

impl AddAssign<&CycloNumber> for CycloNumber {
    fn add_assign(&mut self, rhs: &CycloNumber) {
        self.p += &rhs.p;
        self.q += &rhs.q;
    }
}

impl SubAssign<&CycloNumber> for CycloNumber {
    fn sub_assign(&mut self, rhs: &CycloNumber) {
        self.p -= &rhs.p;
        self.q -= &rhs.q;
    }
}

impl MulAssign<&CycloNumber> for CycloNumber {
    fn mul_assign(&mut self, rhs: &CycloNumber) {
        *self = &*self * rhs;
    }
}

impl Sum for CycloNumber {
    fn sum<I: Iterator<Item = CycloNumber>>(iter: I) -> Self {
        iter.fold(CycloNumber::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl Product for CycloNumber {
    fn product<I: Iterator<Item = CycloNumber>>(iter: I) -> Self {
        iter.fold(CycloNumber::one(), |acc, x| &acc * &x)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let omega_term = |q: &Rational| -> String {
            if *q == 1u32 {
                "w".to_string()
            } else {
                format!("{} w", format_rational(q))
            }
        };
        match (self.p == 0u32, self.q == 0u32) {
            (_, true) => write!(f, "{}", format_rational(&self.p)),
            (true, false) => {
                if self.q < 0u32 {
                    write!(f, "-{}", omega_term(&-&self.q))
                } else {
                    write!(f, "{}", omega_term(&self.q))
                }
            }
            (false, false) => {
                let sign = if self.q < 0u32 { '-' } else { '+' };
                write!(f, "{} {} {}", format_rational(&self.p), sign, omega_term(&(&self.q).abs()))
            }
        }
    }
}

struct Cursor<'s> {
    src: &'s str,
    bytes: &'s [u8],
    pos: usize,
}

impl<'s> Cursor<'s> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { input: self.src.to_string(), position: self.pos, message: message.into() }
    }

    fn digits(&mut self) -> Option<Natural> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            self.src[start..self.pos].parse().ok()
        }
    }

    /// `[rational] ['*'] ['w']`, at least one of the two present.
    fn term(&mut self) -> Result<CycloNumber, ParseError> {
        let coeff = match self.digits() {
            Some(n) => {
                let mut r = Rational::from(&n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                    if d == 0u32 {
                        return Err(self.err("zero denominator"));
                    }
                    r = Rational::from_naturals(n, d);
                }
                Some(r)
            }
            None => None,
        };
        if self.peek() == Some(b'*') {
            self.pos += 1;
            if self.peek() != Some(b'w') {
                return Err(self.err("expected 'w' after '*'"));
            }
        }
        if self.peek() == Some(b'w') {
            self.pos += 1;
            let q = coeff.unwrap_or(Rational::ONE);
            return Ok(CycloNumber::new(Rational::ZERO, q));
        }
        match coeff {
            Some(r) => Ok(CycloNumber::from_rational(r)),
            None => Err(self.err("expected a number or 'w'")),
        }
    }
}

impl FromStr for CycloNumber {
    type Err = ParseError;

    /// Accepts `"3"`, `"-1/4"`, `"w"`, `"2/3 w"`, `"-1/4 + 1/2 w"`, `"1 - w"`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor { src: s, bytes: s.as_bytes(), pos: 0 };
        let mut total = CycloNumber::zero();
        let mut first = true;
        loop {
            let mut negative = false;
            match cur.peek() {
                None if first => return Err(cur.err("empty input")),
                None => break,
                Some(b'+') if !first => cur.pos += 1,
                Some(b'-') => {
                    cur.pos += 1;
                    negative = true;
                }
                Some(_) if first => {}
                Some(c) => return Err(cur.err(format!("unexpected character '{}'", c as char))),
            }
            if !first && !negative {
                // allow "p + -q w"
                if cur.peek() == Some(b'-') {
                    cur.pos += 1;
                    negative = true;
                }
            }
            let t = cur.term()?;
            if negative {
                total -= &t;
            } else {
                total += &t;
            }
            first = false;
        }
        Ok(total)
    }
}

impl Serialize for CycloNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
