//! Truncated Taylor expansions `f(z + h) = sum c_k h^k` in complex floating
//! point, used to differentiate closed forms exactly up to rounding.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Denominators below this magnitude are treated as poles.
const POLE_GUARD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet(pub Vec<Complex64>);

impl Jet {
    pub fn constant(c: Complex64, len: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        v[0] = c;
        Jet(v)
    }

    /// The independent variable at `z`.
    pub fn variable(z: Complex64, len: usize) -> Self {
        let mut j = Self::constant(z, len);
        if len > 1 {
            j.0[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    /// `n`-th derivative at the expansion point.
    pub fn derivative(&self, n: usize) -> Complex64 {
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        self.0[n] * fact
    }

    /// Jet of `f'`, one coefficient shorter.
    pub fn diff(&self) -> Self {
        Jet(self.0.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Jet(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add_constant(&self, s: Complex64) -> Self {
        let mut j = self.clone();
        j.0[0] += s;
        j
    }

    pub fn powu(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Complex64::new(1.0, 0.0), self.len()), |acc, _| &acc * self)
    }

    pub fn recip(&self) -> Result<Self> {
        let b0 = self.0[0];
        if b0.norm() < POLE_GUARD {
            return Err(Error::NearSingularity);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        out[0] = b0.inv();
        for k in 1..self.len() {
            let s: Complex64 = (1..=k).map(|i| self.0[i] * out[k - i]).sum();
            out[k] = -s / b0;
        }
        Ok(Jet(out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn exp(&self) -> Self {
        // f' = g' f
        let n = self.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = self.0[0].exp();
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|i| self.0[i] * i as f64 * out[k - i]).sum();
            out[k] = s / k as f64;
        }
        Jet(out)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.len().min(rhs.len());
        Jet((0..n).map(|k| (0..=k).map(|i| self.0[i] * rhs.0[k - i]).sum()).collect())
    }
}
