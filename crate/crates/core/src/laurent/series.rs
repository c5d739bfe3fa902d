//! Truncated Laurent series with exact coefficients in Q(w).
//!
//! A series is stored as `sum_i coeffs[i] z^(lead + i) + O(z^order)` with
//! `order = lead + coeffs.len()`. The first stored coefficient is always
//! nonzero; a series that vanishes to its guaranteed order keeps no
//! coefficients and has `lead == order`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct LaurentSeries {
    lead: i64,
    coeffs: Vec<CycloNumber>,
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    lead: i64,
    coeffs: Vec<CycloNumber>,
}

impl From<LaurentSeries> for RawSeries {
    fn from(s: LaurentSeries) -> Self {
        RawSeries { lead: s.lead, coeffs: s.coeffs }
    }
}

impl TryFrom<RawSeries> for LaurentSeries {
    type Error = Error;
    fn try_from(raw: RawSeries) -> Result<Self> {
        Ok(LaurentSeries::new(raw.lead, raw.coeffs))
    }
}

impl LaurentSeries {
    /// Series `sum_i coeffs[i] z^(lead+i) + O(z^(lead + coeffs.len()))`.
    pub fn new(lead: i64, coeffs: Vec<CycloNumber>) -> Self {
        let mut s = LaurentSeries { lead, coeffs };
        s.normalize();
        s
    }

    /// `O(z^order)`.
    pub fn zero(order: i64) -> Self {
        LaurentSeries { lead: order, coeffs: Vec::new() }
    }

    /// `c z^power + O(z^order)`.
    pub fn monomial(c: CycloNumber, power: i64, order: i64) -> Self {
        if order <= power {
            return Self::zero(order);
        }
        let mut coeffs = vec![CycloNumber::zero(); (order - power) as usize];
        coeffs[0] = c;
        Self::new(power, coeffs)
    }

    fn normalize(&mut self) {
        let nz = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if nz > 0 {
            self.coeffs.drain(..nz);
            self.lead += nz as i64;
        }
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.coeffs
    }

    /// Number of stored (guaranteed) coefficients.
    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// First exponent whose coefficient is not known.
    pub fn order(&self) -> i64 {
        self.lead + self.coeffs.len() as i64
    }

    /// True when every guaranteed coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, power: i64) -> Result<CycloNumber> {
        if power >= self.order() {
            return Err(Error::DepthExhausted { requested: power, order: self.order() });
        }
        if power < self.lead {
            return Ok(CycloNumber::zero());
        }
        Ok(self.coeffs[(power - self.lead) as usize].clone())
    }

    fn coeff_or_zero(&self, power: i64) -> CycloNumber {
        if power < self.lead || power >= self.order() {
            CycloNumber::zero()
        } else {
            self.coeffs[(power - self.lead) as usize].clone()
        }
    }

    /// Drop everything from `z^order` on.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        if order <= self.lead {
            return Self::zero(order);
        }
        Self::new(self.lead, self.coeffs[..(order - self.lead) as usize].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let lead = self.lead.min(other.lead).min(order);
        let coeffs = (lead..order).map(|k| self.coeff_or_zero(k) + other.coeff_or_zero(k)).collect();
        Self::new(lead, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries { lead: self.lead, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        if c.is_zero() {
            return Self::zero(self.order());
        }
        LaurentSeries { lead: self.lead, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Add an exact constant; it only shows up if `z^0` is within the known order.
    pub fn add_constant(&self, c: &CycloNumber) -> Self {
        if c.is_zero() || self.order() <= 0 {
            return self.clone();
        }
        self.add(&Self::monomial(c.clone(), 0, self.order()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_to(other, i64::MAX)
    }

    /// Product, computing no coefficient at or beyond `z^max_order`.
    pub fn mul_to(&self, other: &Self, max_order: i64) -> Result<Self> {
        let lead = self.lead + other.lead;
        let order = (self.lead + other.order()).min(other.lead + self.order()).min(max_order);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(order));
        }
        if order <= lead {
            return Err(Error::DepthExhausted { requested: lead, order });
        }
        let n = (order - lead) as usize;
        let mut coeffs = vec![CycloNumber::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate().take(n - i) {
                if !y.is_zero() {
                    coeffs[i + j] += &(x * y);
                }
            }
        }
        Ok(Self::new(lead, coeffs))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        self.pow_to(n, i64::MAX)
    }

    pub fn pow_to(&self, n: u32, max_order: i64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::monomial(CycloNumber::one(), 0, max_order));
        }
        let mut acc = self.truncate(max_order.saturating_sub(self.lead * (n as i64 - 1)));
        for _ in 1..n {
            acc = acc.mul_to(self, max_order)?;
        }
        Ok(acc)
    }

    /// Term-wise derivative: `c z^k -> k c z^(k-1)`.
    pub fn diff(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * &CycloNumber::from_int(self.lead + i as i64))
            .collect();
        Self::new(self.lead - 1, coeffs)
    }

    pub fn diff_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |s, _| s.diff())
    }

    /// Coefficient of `z^-1`.
    pub fn residue(&self) -> Result<CycloNumber> {
        self.coeff(-1)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write!(f, "({})*z^{} + ", c, self.lead + i as i64)?;
        }
        write!(f, "O(z^{})", self.order())
    }
}
