//! Simple-pole branches admitted by a subequation.

use num_traits::{One, Zero};

use super::polynomial::Subequation;
use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;
use crate::poly::Poly;

/// Orders beyond the leading balance a branch must extend through.
const EXTENSION_ORDERS: i64 = 8;

/// `T(r)/r^m` where `T(r) z^(-2m)` is the top term of `F(r/z, -r/z^2)`;
/// its roots are the admissible residues.
pub fn leading_balance(s: &Subequation) -> Poly {
    let m = s.degree();
    let mut c = vec![CycloNumber::zero(); m as usize + 1];
    for k in 0..=m {
        let j = 2 * m - 2 * k;
        let mut a = s.coeff(j, k);
        if k % 2 == 1 {
            a = -a;
        }
        // r^j (-r)^k = (-1)^k r^(j+k), and j + k - m = m - k
        c[(m - k) as usize] = a;
    }
    Poly::new(c)
}

/// Number of distinct Laurent series `u = r/z + ...` solving `F = 0`: one
/// per distinct root of the leading balance, provided the series can be
/// continued order by order. Roots outside Q(w) are counted without the
/// continuation check.
pub fn distinct_series_count(s: &Subequation) -> Result<usize> {
    let balance = leading_balance(s);
    if balance.degree().unwrap_or(0) == 0 {
        return Err(Error::NonSimpleBalance(format!("no simple-pole balance in {s}")));
    }
    let squarefree = balance.div_rem(&balance.gcd(&balance.derivative())).0;
    let distinct = squarefree.degree().unwrap_or(0);
    let exact = squarefree.exact_roots();
    if exact.len() < distinct {
        log::debug!("{} residues of {s} lie outside Q(w)", distinct - exact.len());
    }
    let mut count = distinct - exact.len();
    for r in &exact {
        if extends(s, r)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Whether `u = r/z + u_0 + u_1 z + ...` can be continued through
/// `EXTENSION_ORDERS` orders. A resonance with a vanishing right-hand side
/// leaves a free coefficient, set to 0.
fn extends(s: &Subequation, r: &CycloNumber) -> Result<bool> {
    let m = s.degree() as i64;
    let mut coeffs = vec![r.clone()];
    for n in 1..=EXTENSION_ORDERS {
        let power = n - 2 * m;
        let mut at = |v: CycloNumber| -> Result<CycloNumber> {
            coeffs.push(v);
            let u = LaurentSeries::new(-1, coeffs.clone());
            coeffs.pop();
            s.residual(&u)?.coeff(power)
        };
        let r0 = at(CycloNumber::zero())?;
        let pivot = &at(CycloNumber::one())? - &r0;
        if pivot.is_zero() {
            if !r0.is_zero() {
                return Ok(false);
            }
            coeffs.push(CycloNumber::zero());
        } else {
            coeffs.push(-&r0.checked_div(&pivot)?);
        }
    }
    Ok(true)
}

/// If `F` is divisible by the Riccati factor `r u' + u^2 + b1 u + b0` whose
/// Laurent series starts like `u` (`r` the residue of `u`), return
/// `[b0, b1, 1]`.
pub fn riccati_factor(s: &Subequation, u: &LaurentSeries) -> Result<Option<Vec<CycloNumber>>> {
    let r = u.coeff(-1)?;
    let base = u.diff().scale(&r).add(&u.mul(u)?);
    let b1 = -&base.coeff(-1)?.checked_div(&r)?;
    let b0 = -&base.add(&u.scale(&b1)).coeff(0)?;
    let q = vec![b0, b1, CycloNumber::one()];
    Ok(s.vanishes_on(&r, &q).then_some(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn int(n: i64) -> CycloNumber {
        CycloNumber::from_int(n)
    }

    fn sub(m: u32, terms: &[((u32, u32), CycloNumber)]) -> Subequation {
        Subequation::new(m, terms.iter().cloned().collect::<BTreeMap<_, _>>()).unwrap()
    }

    #[test]
    fn riccati_has_one_series() {
        assert_eq!(distinct_series_count(&sub(1, &[((0, 1), int(1)), ((2, 0), int(1))])).unwrap(), 1);
    }

    #[test]
    fn binomial_has_three() {
        // -(u')^3 - (u^3 - 3u)^2
        let s = sub(3, &[((0, 3), int(-1)), ((6, 0), int(-1)), ((4, 0), int(6)), ((2, 0), int(-9))]);
        assert_eq!(distinct_series_count(&s).unwrap(), 3);
    }

    #[test]
    fn degree_two_canonical_has_two() {
        // a^2 u'^2 - a u^2 u' + u^4 with a = 1, plus lower terms
        let w = CycloNumber::omega();
        let s = sub(2, &[((0, 2), int(1)), ((2, 1), int(-1)), ((4, 0), int(1)), ((1, 0), int(3))]);
        let bal = leading_balance(&s);
        let roots = bal.exact_roots();
        assert!(roots.contains(&w) && roots.contains(&w.pow(2)));
        assert_eq!(distinct_series_count(&s).unwrap(), 2);
    }

    #[test]
    fn repeated_balance_counts_once() {
        // (u' + u^2)^2
        let s = sub(2, &[((0, 2), int(1)), ((2, 1), int(2)), ((4, 0), int(1))]);
        assert_eq!(distinct_series_count(&s).unwrap(), 1);
    }

    #[test]
    fn detects_riccati_factor() {
        // (u' + u^2 - 1)(2u' + u^2)
        let s = sub(2, &[((0, 2), int(2)), ((2, 1), int(3)), ((0, 1), int(-2)), ((4, 0), int(1)), ((2, 0), int(-1))]);
        // series of u' = 1 - u^2 at a pole: u = coth z = 1/z + z/3 - ...
        let u = LaurentSeries::new(-1, vec![int(1), int(0), "1/3".parse().unwrap(), int(0)]);
        let q = riccati_factor(&s, &u).unwrap().unwrap();
        assert_eq!(q, vec![int(-1), int(0), int(1)]);
        let v = LaurentSeries::new(-1, vec![int(2), int(1), int(0), int(0)]);
        assert!(riccati_factor(&s, &v).unwrap().is_none());
    }
}
