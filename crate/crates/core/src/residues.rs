//! Residue-sum conditions: an elliptic solution has zero total residue in a
//! period parallelogram for every `(u^(k))^n`, and the three Laurent
//! branches are the three poles there.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};
use crate::laurent::{expand_branches, LaurentSeries, OdeInstance};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCondition {
    pub k: u32,
    pub n: u32,
    pub value: CycloNumber,
}

/// Series depth that keeps the `z^-1` coefficient of `(u^(k))^n` guaranteed.
pub fn required_depth(k: u32, n: u32) -> usize {
    (n * (k + 1) + 6) as usize
}

/// Residue of `(u^(k))^1 ... (u^(k))^nmax` on one branch. Intermediate powers
/// are only carried as far as the final `z^-1` coefficient needs.
fn branch_power_residues(u: &LaurentSeries, k: u32, nmax: u32) -> Result<Vec<CycloNumber>> {
    let d = u.diff_n(k as usize);
    let step = (k + 1) as i64;
    let mut out = Vec::with_capacity(nmax as usize);
    let mut p = d.truncate(step * (nmax as i64 - 1));
    out.push(p.residue()?);
    for j in 2..=nmax {
        p = p.mul_to(&d, step * (nmax - j) as i64)?;
        out.push(p.residue()?);
    }
    Ok(out)
}

fn power_sums(branches: &[LaurentSeries; 3], k: u32, nmax: u32) -> Result<Vec<CycloNumber>> {
    let mut sums = vec![CycloNumber::zero(); nmax as usize];
    for u in branches {
        for (s, r) in sums.iter_mut().zip(branch_power_residues(u, k, nmax)?) {
            *s += &r;
        }
    }
    Ok(sums)
}

fn with_depth_retry<T>(depth: usize, f: impl Fn(usize) -> Result<T>) -> Result<T> {
    match f(depth) {
        Err(Error::DepthExhausted { .. }) => {
            log::debug!("residue extraction exhausted depth {depth}, retrying at {}", 2 * depth);
            f(2 * depth)
        }
        r => r,
    }
}

/// Sum over the three branches of `res (u^(k))^n`.
pub fn residue_power_sum(ode: &OdeInstance, k: u32, n: u32) -> Result<CycloNumber> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    with_depth_retry(required_depth(k, n), |depth| {
        let branches = expand_branches(ode, depth)?;
        Ok(power_sums(&branches, k, n)?.pop().expect("n >= 1"))
    })
}

/// Every `(k, n)` with `k <= kmax`, `1 <= n <= nmax` whose residue sum does
/// not vanish, in `(k, n)` order.
pub fn enumerate_conditions(ode: &OdeInstance, kmax: u32, nmax: u32) -> Result<Vec<ResidueCondition>> {
    if kmax < 1 || nmax < 1 {
        return Err(Error::InvalidArgument("kmax and nmax must be at least 1".into()));
    }
    with_depth_retry(required_depth(kmax, nmax), |depth| {
        let branches = expand_branches(ode, depth)?;
        let mut out = Vec::new();
        for k in 0..=kmax {
            for (i, value) in power_sums(&branches, k, nmax)?.into_iter().enumerate() {
                if !value.is_zero() {
                    out.push(ResidueCondition { k, n: i as u32 + 1, value });
                }
            }
        }
        Ok(out)
    })
}

/// Coefficient families on which every residue condition holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EllipticFamily {
    /// `c1 = c2 = c4 = 0`, `c6 != 0`, `c7 = c5^2/128`.
    A,
    /// `c1 = c2 = c4 = c6 = 0`, `c5 (c5^2 - 128 c7) = 0`.
    B,
    /// `c2 = c5 = c7 = 0`, `c1 != 0`, `c4 = c1^2/(12 a^3)`.
    C,
    None,
}

pub fn match_elliptic_families(ode: &OdeInstance) -> EllipticFamily {
    let int = CycloNumber::from_int;
    let binomial = ode.c1.is_zero() && ode.c2.is_zero() && ode.c4.is_zero();
    let c7_balanced = &ode.c7 * &int(128) == ode.c5.pow(2);
    if binomial && !ode.c6.is_zero() && c7_balanced {
        return EllipticFamily::A;
    }
    if binomial && ode.c6.is_zero() && (ode.c5.is_zero() || c7_balanced) {
        return EllipticFamily::B;
    }
    if ode.c2.is_zero()
        && ode.c5.is_zero()
        && ode.c7.is_zero()
        && !ode.c1.is_zero()
        && &ode.c4 * &(&int(12) * &ode.c0()) == ode.c1.pow(2)
    {
        return EllipticFamily::C;
    }
    EllipticFamily::None
}
