//! Local analysis at a movable simple pole: indicial polynomial, Fuchs
//! indices, the Laurent recurrence and the ODE residual.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::instance::OdeInstance;
use super::series::LaurentSeries;
use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};
use crate::poly::Poly;

pub const DEFAULT_DEPTH: usize = 24;

fn check_residue(ode: &OdeInstance, residue: &CycloNumber) -> Result<()> {
    if residue.pow(3) != ode.c0() {
        return Err(Error::InvalidResidue { residue: residue.to_string(), c0: ode.c0().to_string() });
    }
    Ok(())
}

/// Monic indicial polynomial in `r` of the ODE linearized around
/// `u ~ residue / (z - z0)`.
///
/// A perturbation `z^(r-1)` is acted on only by the dominant part
/// `c0 u''' + 6 u^4`; that gives `c0 (r-1)(r-2)(r-3) + 24 residue^3`.
pub fn indicial_polynomial(ode: &OdeInstance, residue: &CycloNumber) -> Result<Poly> {
    check_residue(ode, residue)?;
    let c0 = ode.c0();
    let falling = Poly::from_ints(&[-1, 1]).mul(&Poly::from_ints(&[-2, 1])).mul(&Poly::from_ints(&[-3, 1]));
    let quartic = Poly::constant(&CycloNumber::from_int(24) * &residue.pow(3));
    Ok(falling.scale(&c0).add(&quartic).monic())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuchsReport {
    pub integer_roots: Vec<i64>,
    pub has_nonneg_integer: bool,
}

pub fn check_fuchs_indices(p: &Poly) -> FuchsReport {
    let integer_roots: Vec<i64> = p
        .integer_roots()
        .into_iter()
        .map(|r| i64::try_from(&r).expect("integer root fits in i64"))
        .collect();
    let has_nonneg_integer = integer_roots.iter().any(|&r| r >= 0);
    FuchsReport { integer_roots, has_nonneg_integer }
}

/// `c0 u''' + 6 u^4 + c1 u'' + c2 u u' + c4 u' + c5 u^2 + c6 u + c7` as a
/// truncated series.
pub fn ode_residual(u: &LaurentSeries, ode: &OdeInstance) -> Result<LaurentSeries> {
    ode_residual_to(u, ode, i64::MAX)
}

pub(crate) fn ode_residual_to(u: &LaurentSeries, ode: &OdeInstance, max_order: i64) -> Result<LaurentSeries> {
    let u1 = u.diff();
    let u2 = u1.diff();
    let u3 = u2.diff();
    let sq = u.mul(u)?;
    let quart = sq.mul_to(&sq, max_order)?;
    let uu1 = u.mul_to(&u1, max_order)?;
    let r = u3
        .scale(&ode.c0())
        .add(&quart.scale(&CycloNumber::from_int(6)))
        .add(&u2.scale(&ode.c1))
        .add(&uu1.scale(&ode.c2))
        .add(&u1.scale(&ode.c4))
        .add(&sq.scale(&ode.c5))
        .add(&u.scale(&ode.c6))
        .add_constant(&ode.c7);
    Ok(r.truncate(max_order))
}

/// Coefficient of `z^t` in the ODE residual, from the coefficients of `u`
/// (`u[i]` at `z^(i-1)`) and of `u^2` (`sq[i]` at `z^(i-2)`); missing entries
/// count as zero.
fn residual_coeff(ode: &OdeInstance, u: &[CycloNumber], sq: &[CycloNumber], t: i64) -> CycloNumber {
    let zero = CycloNumber::zero();
    let at = |v: &[CycloNumber], shift: i64, p: i64| -> CycloNumber {
        usize::try_from(p + shift).ok().and_then(|i| v.get(i)).cloned().unwrap_or_else(|| zero.clone())
    };
    let u_at = |p| at(u, 1, p);
    let sq_at = |p| at(sq, 2, p);
    let int = CycloNumber::from_int;
    let mut r = &ode.c0() * &(&int((t + 3) * (t + 2) * (t + 1)) * &u_at(t + 3));
    r += &(&ode.c1 * &(&int((t + 2) * (t + 1)) * &u_at(t + 2)));
    r += &(&ode.c4 * &(&int(t + 1) * &u_at(t + 1)));
    r += &(&ode.c6 * &u_at(t));
    r += &(&ode.c5 * &sq_at(t));
    if t == 0 {
        r += &ode.c7;
    }
    if !ode.c2.is_zero() {
        let mut uu1 = CycloNumber::zero();
        for p in -1..=t + 2 {
            let q = t - p + 1;
            uu1 += &(&u_at(p) * &(&int(q) * &u_at(q)));
        }
        r += &(&ode.c2 * &uu1);
    }
    r += &(&int(6) * &symmetric_convolution(t, -2, t + 2, sq_at));
    r
}

/// `sum_{p+q=t, lo<=p,q<=hi} f(p) f(q)`, visiting each unordered pair once.
fn symmetric_convolution(t: i64, lo: i64, hi: i64, f: impl Fn(i64) -> CycloNumber) -> CycloNumber {
    let mut cross = CycloNumber::zero();
    let mut p = lo.max(t - hi);
    while 2 * p < t {
        cross += &(&f(p) * &f(t - p));
        p += 1;
    }
    let mut s = &cross + &cross;
    if t % 2 == 0 && t / 2 >= lo && t / 2 <= hi {
        let m = f(t / 2);
        s += &(&m * &m);
    }
    s
}

/// Coefficient of `z^power` in `u^2`.
fn square_coeff(u: &[CycloNumber], power: i64) -> CycloNumber {
    let hi = u.len() as i64 - 2;
    symmetric_convolution(power, -1, hi, |p| u[(p + 1) as usize].clone())
}

/// Laurent series of the solution with leading coefficient `residue`, with
/// `depth` coefficients `u_{-1}, u_0, ..., u_{depth-2}`.
///
/// Each `u_j` is found by substituting the partial series into the full ODE
/// and solving the single linear equation at `z^(j-3)`. Its coefficient must
/// equal `c0 P(j+1)`, `P` the indicial polynomial; a mismatch is an error.
pub fn expand_laurent(ode: &OdeInstance, residue: &CycloNumber, depth: usize) -> Result<LaurentSeries> {
    if depth < 2 {
        return Err(Error::InvalidArgument(format!("Laurent depth must be at least 2, got {depth}")));
    }
    let indicial = indicial_polynomial(ode, residue)?;
    if check_fuchs_indices(&indicial).has_nonneg_integer {
        return Err(Error::InvalidArgument("nonnegative integer Fuchs index: series is not unique".into()));
    }
    let c0 = ode.c0();
    let mut coeffs = vec![residue.clone()];
    // u^2 coefficients that no longer depend on unknown u_j
    let mut sq: Vec<CycloNumber> = Vec::new();
    for j in 0..(depth as i64 - 1) {
        while (sq.len() as i64) < j {
            sq.push(square_coeff(&coeffs, sq.len() as i64 - 2));
        }
        // power j-2 involves u_{j-1} at most; power j-1 involves the unknown
        let target = j - 3;
        sq.push(square_coeff(&coeffs, j - 2));
        let mut at = |value: CycloNumber| {
            coeffs.push(value);
            let mut trial_sq = sq.clone();
            trial_sq.push(square_coeff(&coeffs, j - 1));
            let r = residual_coeff(ode, &coeffs, &trial_sq, target);
            coeffs.pop();
            r
        };
        let r0 = at(CycloNumber::zero());
        let pivot = &at(CycloNumber::one()) - &r0;
        let expected = &c0 * &indicial.eval(&CycloNumber::from_int(j + 1));
        if pivot.is_zero() {
            return Err(Error::ZeroPivot { index: j });
        }
        if pivot != expected {
            return Err(Error::PivotMismatch { index: j, found: pivot.to_string(), expected: expected.to_string() });
        }
        coeffs.push(-&r0.checked_div(&pivot)?);
    }
    Ok(LaurentSeries::new(-1, coeffs))
}

/// All three branch series, in the order `a, w a, w^2 a`.
///
/// With rational coefficients the ODE is fixed by `w -> w^2`, so the third
/// series is the conjugate of the second.
pub fn expand_branches(ode: &OdeInstance, depth: usize) -> Result<[LaurentSeries; 3]> {
    let [r0, r1, r2] = ode.residues();
    let u0 = expand_laurent(ode, &r0, depth)?;
    let u1 = expand_laurent(ode, &r1, depth)?;
    let rational = ode.a.is_rational() && ode.coefficients().iter().all(|(_, c)| c.is_rational());
    let u2 = if rational {
        LaurentSeries::new(u1.lead(), u1.coeffs().iter().map(CycloNumber::conj).collect())
    } else {
        expand_laurent(ode, &r2, depth)?
    };
    Ok([u0, u1, u2])
}

/// `u^alpha (u')^beta (u'')^gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub u: u32,
    pub du: u32,
    pub d2u: u32,
}

impl Monomial {
    /// Pole order of the monomial when `u` has a simple pole.
    pub fn singularity_degree(&self) -> u32 {
        self.u + 2 * self.du + 3 * self.d2u
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("u", self.u), ("u'", self.du), ("u''", self.d2u)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Monomials in `u, u', u''` of singularity degree `0..=max_degree`, grouped
/// by degree (the coefficients of `1 / ((1 - t u)(1 - t^2 u')(1 - t^3 u''))`).
pub fn dominant_monomials(max_degree: u32) -> Vec<Vec<Monomial>> {
    (0..=max_degree)
        .map(|d| {
            let mut group = Vec::new();
            for d2u in 0..=d / 3 {
                for du in 0..=(d - 3 * d2u) / 2 {
                    group.push(Monomial { u: d - 3 * d2u - 2 * du, du, d2u });
                }
            }
            group
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> CycloNumber {
        CycloNumber::from_int(n)
    }

    #[test]
    fn indicial_is_branch_independent() {
        let ode = OdeInstance::from_ints(1, [3, -2, 5, 1, 7, -4]).unwrap();
        let expected = Poly::from_ints(&[1, 1]).mul(&Poly::from_ints(&[18, -7, 1]));
        for r in ode.residues() {
            assert_eq!(indicial_polynomial(&ode, &r).unwrap(), expected);
        }
        assert!(matches!(indicial_polynomial(&ode, &int(2)), Err(Error::InvalidResidue { .. })));
    }

    #[test]
    fn fuchs_reports() {
        let p = Poly::from_ints(&[1, 1]).mul(&Poly::from_ints(&[18, -7, 1]));
        assert_eq!(check_fuchs_indices(&p), FuchsReport { integer_roots: vec![-1], has_nonneg_integer: false });
        let q = Poly::from_ints(&[1, 1]).mul(&Poly::from_ints(&[-2, 1])).mul(&Poly::from_ints(&[-3, 1]));
        assert_eq!(check_fuchs_indices(&q), FuchsReport { integer_roots: vec![-1, 2, 3], has_nonneg_integer: true });
        let cube = Poly::from_ints(&[1, 0, 0, 1]);
        assert_eq!(check_fuchs_indices(&cube), FuchsReport { integer_roots: vec![-1], has_nonneg_integer: false });
    }

    #[test]
    fn leading_coefficients() {
        let ode = OdeInstance::from_ints(1, [0; 6]).unwrap();
        let u = expand_laurent(&ode, &int(1), 4).unwrap();
        assert_eq!(u.coeff(-1).unwrap(), int(1));
        assert_eq!(u.coeff(0).unwrap(), int(0));

        let ode = OdeInstance::from_ints(1, [12, 0, 0, 0, 0, 0]).unwrap();
        let u = expand_laurent(&ode, &int(1), 4).unwrap();
        assert_eq!(u.coeff(0).unwrap(), int(-1));
    }

    #[test]
    fn pure_equation_has_exact_pole() {
        let ode = OdeInstance::from_ints(1, [0; 6]).unwrap();
        let u = expand_laurent(&ode, &int(1), 10).unwrap();
        assert_eq!(u.depth(), 10);
        assert!(u.coeffs()[1..].iter().all(|c| c.is_zero()));
        let r = ode_residual(&u, &ode).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn residual_of_wrong_pole() {
        let ode = OdeInstance::from_ints(1, [0; 6]).unwrap();
        let u = LaurentSeries::monomial(int(2), -1, 8);
        let r = ode_residual(&u, &ode).unwrap();
        assert_eq!(r.lead(), -4);
        assert_eq!(r.coeff(-4).unwrap(), int(84));
    }

    #[test]
    fn expanded_series_solves_the_ode() {
        let ode = OdeInstance::new(
            "1/2".parse().unwrap(),
            ["3", "-1/3", "2", "5/7", "-1", "4"].map(|s| s.parse().unwrap()),
        )
        .unwrap();
        for r in ode.residues() {
            let u = expand_laurent(&ode, &r, 20).unwrap();
            let res = ode_residual(&u, &ode).unwrap();
            assert!(res.is_zero(), "residual {res}");
            assert_eq!(res.order(), 20 - 4);
        }
    }

    #[test]
    fn rejects_short_depth() {
        let ode = OdeInstance::from_ints(1, [0; 6]).unwrap();
        assert!(expand_laurent(&ode, &int(1), 1).is_err());
    }

    #[test]
    fn monomial_groups() {
        let groups = dominant_monomials(4);
        let names = |d: usize| groups[d].iter().map(|m| m.to_string()).collect::<Vec<_>>();
        assert_eq!(names(0), ["1"]);
        assert_eq!(names(1), ["u"]);
        assert_eq!(names(2), ["u^2", "u'"]);
        assert_eq!(names(3), ["u^3", "u u'", "u''"]);
        assert_eq!(names(4), ["u^4", "u^2 u'", "u'^2", "u u''"]);
    }

    #[test]
    fn monomial_counts_match_partitions() {
        // brute force: count (alpha, beta, gamma) in a box
        let groups = dominant_monomials(15);
        for (d, g) in groups.iter().enumerate() {
            let mut count = 0;
            for alpha in 0..=15 {
                for beta in 0..=15 {
                    for gamma in 0..=15 {
                        if alpha + 2 * beta + 3 * gamma == d {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(g.len(), count);
            assert!(g.iter().all(|m| m.singularity_degree() as usize == d));
        }
    }
}
