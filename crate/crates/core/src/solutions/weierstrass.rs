//! Weierstrass `p(z; g2, g3)` from its Laurent series at the origin.

use num_complex::Complex64;

use super::jet::Jet;
use crate::error::{Error, Result};

/// Number of series coefficients `c_2 ... c_61` kept.
pub const WP_TERMS: usize = 60;

/// Truncation error target that defines the usable radius.
const TAIL_TOLERANCE: f64 = 1e-14;

/// `p(z) = z^-2 + sum_{k>=2} c_k z^(2k-2)`.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    pub g2: Complex64,
    pub g3: Complex64,
    /// `coeffs[i]` is `c_{i+2}`.
    coeffs: Vec<Complex64>,
    r_conv: f64,
}

impl Weierstrass {
    pub fn new(g2: Complex64, g3: Complex64) -> Self {
        let mut c: Vec<Complex64> = Vec::with_capacity(WP_TERMS);
        c.push(g2 / 20.0);
        c.push(g3 / 28.0);
        for k in 4..WP_TERMS + 2 {
            let s: Complex64 = (2..=k - 2).map(|m| c[m - 2] * c[k - m - 2]).sum();
            c.push(s * (3.0 / ((2 * k + 1) as f64 * (k - 3) as f64)));
        }
        // the last few terms, weighted for the second derivative, must stay
        // below the tolerance
        let r_conv = (WP_TERMS - 4..WP_TERMS + 2)
            .filter(|&k| c[k - 2].norm() > 0.0)
            .map(|k| {
                let w = c[k - 2].norm() * (2 * k) as f64 * (2 * k) as f64;
                (TAIL_TOLERANCE / w).powf(1.0 / (2 * k) as f64)
            })
            .fold(f64::INFINITY, f64::min);
        Weierstrass { g2, g3, coeffs: c, r_conv }
    }

    /// Radius within which the truncated series is trusted; infinite when
    /// `g2 = g3 = 0` and `p = z^-2`.
    pub fn r_conv(&self) -> f64 {
        self.r_conv
    }

    /// Series coefficient `c_k`, `k >= 2`.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k - 2]
    }

    fn check(&self, z: Complex64) -> Result<()> {
        if z.norm() == 0.0 {
            return Err(Error::NearSingularity);
        }
        if z.norm() > self.r_conv {
            return Err(Error::OutOfRadius { re: z.re, im: z.im, radius: self.r_conv });
        }
        Ok(())
    }

    /// `(p(z), p'(z))` for `0 < |z| <= r_conv`.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check(z)?;
        let z2 = z * z;
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        // Horner in z^2 from the top term down
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let k = (i + 2) as f64;
            p = p * z2 + c;
            dp = dp * z2 + c * (2.0 * k - 2.0);
        }
        let p = p * z2 + 1.0 / z2;
        let dp = dp * z2 / z - 2.0 / (z2 * z);
        Ok((p, dp))
    }

    /// `p''(z)` summed directly from the series.
    pub fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        let z2 = z * z;
        let mut s = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let k = (i + 2) as f64;
            s = s * z2 + c * ((2.0 * k - 2.0) * (2.0 * k - 3.0));
        }
        Ok(s + 6.0 / (z2 * z2))
    }

    /// Taylor jet of `p` at `z` with `len` coefficients, continued from
    /// `p'' = 6 p^2 - g2/2`.
    pub fn jet(&self, z: Complex64, len: usize) -> Result<Jet> {
        let (p, dp) = self.eval(z)?;
        let mut c = vec![p, dp];
        c.truncate(len);
        for k in 0..len.saturating_sub(2) {
            let sq: Complex64 = (0..=k).map(|i| c[i] * c[k - i]).sum();
            let rhs = 6.0 * sq - if k == 0 { self.g2 / 2.0 } else { Complex64::new(0.0, 0.0) };
            c.push(rhs / ((k + 2) * (k + 1)) as f64);
        }
        Ok(Jet(c))
    }
}

/// `(p(z), p'(z))` for the given invariants.
pub fn wp_eval(g2: Complex64, g3: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
    Weierstrass::new(g2, g3).eval(z)
}
