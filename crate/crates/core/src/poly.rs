//! Dense univariate polynomials over Q(w), ascending coefficient order.

use std::fmt;

use malachite_base::num::arithmetic::traits::{Abs, Lcm};
use malachite_base::num::basic::traits::One as _;
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclofield::{CycloNumber, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<CycloNumber>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<CycloNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| CycloNumber::from_int(c)).collect())
    }

    pub fn constant(c: CycloNumber) -> Self {
        Self::new(vec![c])
    }

    /// `x - root`.
    pub fn linear_root(root: &CycloNumber) -> Self {
        Self::new(vec![-root, CycloNumber::one()])
    }

    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&CycloNumber> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &CycloNumber) -> CycloNumber {
        self.coeffs.iter().rev().fold(CycloNumber::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.embed_complex())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(CycloNumber::zero);
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![CycloNumber::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.inverse().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &CycloNumber::from_int(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.leading().unwrap().inverse().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::new(Vec::new()), self.clone());
        }
        let mut quot = vec![CycloNumber::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Number of distinct complex roots (degree of the squarefree part).
    pub fn distinct_root_count(&self) -> usize {
        match self.degree() {
            None | Some(0) => 0,
            Some(d) => d - self.gcd(&self.derivative()).degree().unwrap_or(0),
        }
    }

    /// All distinct integer roots, ascending.
    pub fn integer_roots(&self) -> Vec<Integer> {
        if self.is_zero() {
            return Vec::new();
        }
        // Integer roots of p are common roots of its rational and w components.
        let comp: Vec<Rational> = {
            let re: Vec<Rational> = self.coeffs.iter().map(|c| c.rational_part().clone()).collect();
            if re.iter().any(|c| *c != 0u32) {
                re
            } else {
                self.coeffs.iter().map(|c| c.omega_part().clone()).collect()
            }
        };
        let lcm = comp.iter().fold(Natural::ONE, |acc, c| acc.lcm(c.denominator_ref()));
        let lcm = Rational::from(lcm);
        let ints: Vec<Integer> = comp.iter().map(|c| Integer::try_from(c * &lcm).expect("cleared denominators")).collect();
        let shift = ints.iter().take_while(|c| **c == 0u32).count();
        let mut roots = Vec::new();
        if shift > 0 && self.coeffs[0].is_zero() {
            roots.push(Integer::from(0u32));
        }
        let constant = (&ints[shift]).abs();
        for d in divisors(&constant) {
            for cand in [d.clone(), -d] {
                if self.eval(&CycloNumber::from_rational(Rational::from(&cand))).is_zero() {
                    roots.push(cand);
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

impl Poly {
    /// All complex roots with multiplicity: Durand-Kerner iteration on the
    /// embedded coefficients, polished by Newton steps.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let Some(deg) = self.degree() else { return Vec::new() };
        if deg == 0 {
            return Vec::new();
        }
        let lc = self.leading().unwrap().embed_complex();
        let c: Vec<Complex64> = self.coeffs.iter().map(|x| x.embed_complex() / lc).collect();
        let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k);
        let bound = 1.0 + c[..deg].iter().map(|k| k.norm()).fold(0.0, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..deg).map(|i| seed.powu(i as u32) * bound.min(2.0)).collect();
        for _ in 0..500 {
            let mut delta: f64 = 0.0;
            for i in 0..deg {
                let mut den = Complex64::new(1.0, 0.0);
                for k in 0..deg {
                    if k != i {
                        den *= z[i] - z[k];
                    }
                }
                if den.norm() == 0.0 {
                    den = Complex64::new(1e-12, 0.0);
                }
                let step = eval(z[i]) / den;
                z[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-15 * bound {
                break;
            }
        }
        let dc: Vec<Complex64> = c.iter().enumerate().skip(1).map(|(i, &k)| k * i as f64).collect();
        let deval = |z: Complex64| dc.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k);
        for r in z.iter_mut() {
            for _ in 0..3 {
                let d = deval(*r);
                if d.norm() > 1e-300 {
                    *r -= eval(*r) / d;
                }
            }
        }
        z
    }

    /// Distinct roots lying in Q(w), found numerically, snapped by rational
    /// reconstruction and confirmed by exact evaluation.
    pub fn exact_roots(&self) -> Vec<CycloNumber> {
        let mut out: Vec<CycloNumber> = Vec::new();
        for z in self.complex_roots() {
            if let Some(r) = snap_to_field(z) {
                if self.eval(&r).is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    }
}

/// Nearest element of Q(w) with small denominators, if `z` is within
/// rounding of one.
pub fn snap_to_field(z: Complex64) -> Option<CycloNumber> {
    let q = z.im / (3f64.sqrt() / 2.0);
    let p = z.re + q / 2.0;
    Some(CycloNumber::new(snap_rational(p)?, snap_rational(q)?))
}

/// Continued-fraction reconstruction with denominator at most 10^6.
fn snap_rational(x: f64) -> Option<Rational> {
    const MAX_DEN: i64 = 1_000_000;
    let tol = 1e-9 * (1.0 + x.abs());
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > MAX_DEN {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x).abs() <= tol {
            return Some(Rational::from_signeds(h1, k1));
        }
        let frac = y - a as f64;
        if frac == 0.0 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

fn divisors(n: &Integer) -> Vec<Integer> {
    let Ok(n) = u64::try_from(n) else {
        log::warn!("constant term {n} too large for divisor enumeration");
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(Integer::from(d));
            if d != n / d {
                out.push(Integer::from(n / d));
            }
        }
        d += 1;
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*r")?,
                _ => write!(f, "({c})*r^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roots_of_products() {
        let p = Poly::from_ints(&[1, 1]).mul(&Poly::from_ints(&[18, -7, 1]));
        assert_eq!(p.integer_roots(), vec![Integer::from(-1)]);
        let q = Poly::from_ints(&[1, 1]).mul(&Poly::from_ints(&[-2, 1])).mul(&Poly::from_ints(&[-3, 1]));
        assert_eq!(q.integer_roots(), vec![Integer::from(-1), Integer::from(2), Integer::from(3)]);
        let r = Poly::from_ints(&[0, 0, 1, 1]);
        assert_eq!(r.integer_roots(), vec![Integer::from(-1), Integer::from(0)]);
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b);
        let sq = a.mul(&b);
        assert_eq!(sq.distinct_root_count(), 2);
    }

    #[test]
    fn exact_roots_in_the_field() {
        let w = CycloNumber::omega();
        let half: CycloNumber = "1/2".parse().unwrap();
        let r2: CycloNumber = "-3/7 + 2/5 w".parse().unwrap();
        let p = Poly::linear_root(&w).mul(&Poly::linear_root(&half)).mul(&Poly::linear_root(&r2));
        let roots = p.exact_roots();
        assert_eq!(roots.len(), 3);
        for r in [w, half, r2] {
            assert!(roots.contains(&r));
        }
        // x^2 - 2 has no root in Q(w)
        assert!(Poly::from_ints(&[-2, 0, 1]).exact_roots().is_empty());
        assert_eq!(Poly::from_ints(&[-2, 0, 1]).complex_roots().len(), 2);
    }
}
